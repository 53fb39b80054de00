#include "doctest.h"
#include "oracles.hpp"
#include "sphere_hofa/quadform.hpp"
#include "util.hpp"

#include <random>

using namespace shofa;

namespace {

QuadForm diag(i64 p, const Vec& dvals, i64 v = 0) {
  int d = int(dvals.size());
  FpMatrix A(p, d, d);
  for (int i = 0; i < d; ++i) A(i, i) = modp(dvals[i], p);
  return QuadForm(A, Vec(d, 0), modp(v, p));
}

}  // namespace

TEST_SUITE("quadform") {

TEST_CASE("evaluation matches the definition") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    auto M = testutil::random_form(7, 3, 0, rng);
    oracle::for_all(7, 3, [&](const Vec& x) {
      CHECK(M.eval(x) == oracle::qf_eval(M.A.to_rows(), M.u, M.v, x, 7));
      CHECK(M.to_poly().eval(x) == M.eval(x));
    });
    CHECK(QuadForm::from_poly(M.to_poly()).A == M.A);
  }
}

TEST_CASE("rank") {
  CHECK(qf_rank(diag(5, {1, 1, 1})) == 3);
  CHECK(qf_rank(diag(5, {0, 0, 0})) == 0);
  CHECK(qf_rank(diag(5, {1, 1, 0})) == 2);
}

TEST_CASE("normalize") {
  auto S = QuadForm::sphere(5, 4, 0);
  auto c = normalize(S);
  CHECK(c.c == 1);
  CHECK(c.dprime == 4);
  CHECK(c.cprime == 0);
  CHECK(c.lambda == 0);
  CHECK(verify_normalization(S, c));

  auto H = QuadForm(FpMatrix::from_rows(5, {{0, 3}, {3, 0}}), {0, 0}, 0);  // n1 n2
  auto ch = normalize(H);
  CHECK(ch.dprime == 2);
  CHECK(verify_normalization(H, ch));

  auto K = QuadForm(FpMatrix(5, 3, 3), {0, 0, 0}, 2);
  auto ck = normalize(K);
  CHECK(ck.dprime == 0);
  CHECK(ck.lambda == 3);
  CHECK(verify_normalization(K, ck));
}

TEST_CASE("normalize random forms") {
  std::mt19937_64 rng(2);
  for (i64 p : {5, 7, 11, 13})
    for (int d = 1; d <= 6; ++d)
      for (int t = 0; t < 20; ++t) {
        auto M = testutil::random_form(p, d, 0, rng);
        if (t % 4 == 0) M.u.assign(d, 0);
        auto c = normalize(M);
        CHECK(c.dprime == qf_rank(M));
        CHECK(verify_normalization(M, c));
        if (M.is_homogeneous()) CHECK((c.cprime == 0 && c.lambda == 0));
      }
}

TEST_CASE("perp") {
  auto S = QuadForm::sphere(5, 3, 1);
  CHECK(perp(S, {}).size() == 3);
  CHECK(perp(S, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).empty());
  auto P = perp(S, {{1, 2, 0}});
  REQUIRE(P.size() == 2);
  for (auto& w : P) CHECK(oracle::md(w[0] + 2 * w[1], 5) == 0);
  // double perp for non-degenerate forms
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto M = testutil::random_form(7, 4, 4, rng);
    std::vector<Vec> V = {{1, 2, 3, 4}, {0, 1, 5, 6}};
    auto PP = perp(M, perp(M, V));
    auto both = V;
    for (auto& x : PP) both.push_back(x);
    CHECK(PP.size() == 2);
    CHECK(oracle::rank(both, 7) == 2);
  }
}

TEST_CASE("isotropic_test") {
  auto M = diag(5, {1, 1});
  CHECK(isotropic_test(M, {{1, 2}}));
  CHECK_FALSE(isotropic_test(M, {{1, 0}}));
  CHECK(isotropic_test(M, {{1, 0}, {0, 0}}));
}

TEST_CASE("restricted rank") {
  auto M = QuadForm::sphere(5, 3, 0);
  CHECK(restricted_rank(M, AffineSubspace::full(5, 3)) == 3);
  AffineSubspace S;
  S.p = 5;
  S.d = 3;
  S.basis = perp(M, {{1, 2, 0}});
  S.offset = {0, 0, 0};
  // (1,2,0) is isotropic, so it lies in its own perp and drops the rank to 1
  CHECK(restricted_rank(M, S) == 1);
  // oracle: rank of the Gram matrix of the basis
  oracle::Mat G(2, oracle::Vec(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) G[i][j] = dot(mul(S.basis[i], M.A), S.basis[j], 5);
  CHECK(oracle::rank(G, 5) == 1);
  S.basis = perp(M, {{1, 1, 0}});
  CHECK(restricted_rank(M, S) == 2);
  // non-isotropic codim-r subspaces have restricted rank d-r
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto N = testutil::random_form(7, 5, 5, rng);
    auto W = find_nonisotropic(N, 2);
    AffineSubspace T;
    T.p = 7;
    T.d = 5;
    T.basis = perp(N, W);
    T.offset = Vec(5, 0);
    CHECK(restricted_rank(N, T) == 3);
    int rr = restricted_rank(N, T);
    CHECK(rr >= qf_rank(N) - 2 * 2);
    CHECK(rr <= 5 - 2);
  }
}

TEST_CASE("find_nonisotropic") {
  auto M = diag(7, {1, 2, 3});
  CHECK(find_nonisotropic(M, 0).empty());
  auto W = find_nonisotropic(M, 2);
  REQUIRE(W.size() == 2);
  CHECK_FALSE(isotropic_test(M, W));
  CHECK_THROWS_AS(find_nonisotropic(diag(7, {1, 0, 0}), 2), Error);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto N = testutil::random_form(7, 5, 5, rng);
    auto V = find_nonisotropic(N, 3);
    REQUIRE(V.size() == 3);
    CHECK_FALSE(isotropic_test(N, V));
  }
}

TEST_CASE("cube closure on quadrics") {
  // M(x)=M(x+y)=M(x+z)=0 implies (M(x+y+z)=0 iff (yA).z=0)
  for (int d : {3, 4}) {
    auto M = QuadForm::sphere(5, d, 1);
    std::vector<Vec> Z;
    oracle::for_all(5, d, [&](const Vec& x) {
      if (M.eval(x) == 0) Z.push_back(x);
    });
    int checked = 0;
    for (std::size_t a = 0; a < Z.size(); a += (d == 4 ? 7 : 1))
      for (auto& b : Z)
        for (auto& c : Z) {
          const Vec& x = Z[a];
          Vec y(d), z(d), s(d);
          for (int i = 0; i < d; ++i) {
            y[i] = modp(b[i] - x[i], 5);
            z[i] = modp(c[i] - x[i], 5);
            s[i] = modp(x[i] + y[i] + z[i], 5);
          }
          bool lhs = M.eval(s) == 0;
          bool rhs = dot(mul(y, M.A), z, 5) == 0;
          if (lhs != rhs) FAIL("cube closure failed");
          ++checked;
        }
    CHECK(checked > 0);
  }
}

TEST_CASE("parallel certificate") {
  auto A = FpMatrix::from_rows(5, {{1, 0, 0}, {0, 2, 0}, {0, 0, 1}});
  std::vector<Vec> W;
  oracle::for_all(5, 3, [&](const Vec& x) { W.push_back(x); });
  FpMatrix B3(5, 3, 3);
  for (int i = 0; i < 3; ++i) B3(i, i) = modp(3 * A(i, i), 5);
  auto c = parallel_certificate(A, B3, {0, 0, 0}, W);
  CHECK(c.status == ParallelCertificate::Status::Parallel);
  CHECK(c.c == 3);

  auto B = A;
  B(0, 0) = modp(B(0, 0) + 1, 5);
  auto w = parallel_certificate(A, B, {0, 0, 0}, W);
  REQUIRE(w.status == ParallelCertificate::Status::HypothesisFailed);
  CHECK(dot(mul(w.witness_n, A), w.witness_w, 5) == 0);
  CHECK(dot(mul(w.witness_n, B), w.witness_w, 5) != 0);

  auto v = parallel_certificate(A, A, {1, 0, 0}, W);
  REQUIRE(v.status == ParallelCertificate::Status::HypothesisFailed);
  CHECK(dot(mul(v.witness_n, A), v.witness_w, 5) == 0);
  Vec nb = mul(v.witness_n, A);
  nb[0] = modp(nb[0] + 1, 5);
  CHECK(dot(nb, v.witness_w, 5) != 0);
}

}
