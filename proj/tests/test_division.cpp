#include "doctest.h"
#include "oracles.hpp"
#include "sphere_hofa/division.hpp"
#include "sphere_hofa/msets.hpp"
#include "util.hpp"

#include <random>

using namespace shofa;

namespace {

FpMultiPoly V(i64 p, int d, int i) { return FpMultiPoly::var(p, d, i); }

// Pointwise check of P(nB) = M(nB) Q(n) + n1 R1(n') + R0(n') on all of F_p^d.
bool pointwise_ok(const FpMultiPoly& P, const QuadForm& M, const DivisionCert& c) {
  bool ok = true;
  oracle::for_all(M.p, M.d, [&](const Vec& n) {
    Vec nb = mul(n, c.B);
    i64 rhs = M.eval(nb) * c.Q.eval(n) + n[0] * c.R1.eval(n) + c.R0.eval(n);
    if (modp(rhs, M.p) != P.eval(nb)) ok = false;
  });
  return ok;
}

bool r_ignores_n1(const FpMultiPoly& f) {
  for (auto& [e, c] : f.terms)
    if (e[0] != 0) return false;
  return true;
}

}  // namespace

TEST_SUITE("division") {

TEST_CASE("standard division examples") {
  QuadForm M(FpMatrix::from_rows(5, {{1, 0}, {0, 1}}), {0, 0}, 0);
  auto m = M.to_poly();
  auto P = m * (V(5, 2, 0) + FpMultiPoly::constant(5, 2, 1));
  auto c = standard_division(P, M);
  CHECK(c.Q == V(5, 2, 0) + FpMultiPoly::constant(5, 2, 1));
  CHECK(c.exact());

  auto l = standard_division(V(5, 2, 0), M);
  CHECK(l.Q.is_zero());
  CHECK(l.R1 == FpMultiPoly::constant(5, 2, 1));
  CHECK(l.R0.is_zero());

  auto x3 = pow(V(5, 2, 0), 3);
  auto c3 = standard_division(x3, M);
  CHECK(verify_division(x3, M, c3));
  CHECK(pointwise_ok(x3, M, c3));
  CHECK(r_ignores_n1(c3.R1));
  CHECK(r_ignores_n1(c3.R0));
  // x^3 = x (x^2 + y^2) - x y^2
  CHECK(c3.Q == V(5, 2, 0));
  CHECK(c3.R1 == -(V(5, 2, 1) * V(5, 2, 1)));

  QuadForm Z(FpMatrix::from_rows(5, {{0, 1}, {1, 0}}), {0, 0}, 0);
  CHECK_THROWS_AS(standard_division(x3, Z), Error);
}

TEST_CASE("pivot change") {
  auto id = pivot_change(FpMatrix::from_rows(5, {{2, 1}, {1, 0}}));
  CHECK(id.i == 0);
  CHECK(id.j == 0);
  CHECK(id.B == FpMatrix::identity(5, 2));

  auto A = FpMatrix::from_rows(5, {{0, 1}, {1, 0}});
  auto pc = pivot_change(A);
  CHECK(pc.i == 0);
  CHECK(pc.j == 1);
  auto BAB = mul(mul(pc.B, A), transpose(pc.B));
  CHECK(BAB(0, 0) != 0);
  CHECK(BAB(0, 0) == 2);  // (e1 + e2) A (e1 + e2)^T = 2 a12

  auto D = FpMatrix::from_rows(5, {{0, 0}, {0, 3}});
  auto sw = pivot_change(D);
  CHECK(sw.i == 1);
  CHECK(sw.j == 1);
  CHECK(mul(mul(sw.B, D), transpose(sw.B))(0, 0) == 3);
  CHECK_THROWS_AS(pivot_change(FpMatrix(5, 2, 2)), Error);
}

TEST_CASE("division round trips") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    i64 p = t % 2 ? 7 : 5;
    auto M = testutil::random_form(p, 3, 1, rng);
    if (t % 3 == 0) M.A(0, 0) = 0, M.A(1, 1) = 0;  // force some pivot changes
    if (qf_rank(M) == 0) continue;
    auto R = random_poly(p, 3, 2, rng);
    auto P = M.to_poly() * R;
    auto c = divide(P, M);
    CHECK(verify_division(P, M, c));
    CHECK(pointwise_ok(P, M, c));
    CHECK(c.exact());
    CHECK(M.to_poly() * quotient_in_original(c) == P);

    auto G = random_poly(p, 3, 3, rng);
    auto g = divide(G, M);
    CHECK(verify_division(G, M, g));
    CHECK(pointwise_ok(G, M, g));
    CHECK(r_ignores_n1(g.R1));
    CHECK(r_ignores_n1(g.R0));
    CHECK(g.Q.degree() <= 1);
  }
}

TEST_CASE("nullstellensatz") {
  auto M = QuadForm::sphere(7, 4, 2);
  std::mt19937_64 rng(41);
  auto R = random_poly(7, 4, 2, rng);
  auto P = M.to_poly() * R;
  auto r = nullstellensatz(P, M);
  REQUIRE(r.status == NullstellensatzResult::Status::Certificate);
  CHECK(M.to_poly() * r.R == P);

  auto w = nullstellensatz(FpMultiPoly::constant(7, 4, 1), M);
  REQUIRE(w.status == NullstellensatzResult::Status::Witness);
  CHECK(M.eval(w.witness) == 0);

  // total and consistent with an exhaustive scan
  auto zs = enumerate_zeros(M).points();
  for (int t = 0; t < 30; ++t) {
    auto Q = M.to_poly() * random_poly(7, 4, 1, rng);
    if (t % 2) Q += V(7, 4, 0) * FpMultiPoly::constant(7, 4, 1 + t % 6);
    bool vanishes = true;
    for (auto& z : zs) vanishes &= Q.eval(z) == 0;
    auto res = nullstellensatz(Q, M);
    CHECK(res.status != NullstellensatzResult::Status::Violation);
    CHECK((res.status == NullstellensatzResult::Status::Certificate) == vanishes);
    if (res.status == NullstellensatzResult::Status::Witness) {
      CHECK(M.eval(res.witness) == 0);
      CHECK(Q.eval(res.witness) != 0);
    } else {
      CHECK(M.to_poly() * res.R == Q);
    }
  }
}

TEST_CASE("dichotomy") {
  auto M = QuadForm::sphere(5, 4, 1);
  std::mt19937_64 rng(43);
  auto c = dichotomy(M.to_poly() * random_poly(5, 4, 1, rng), M, 0.3);
  CHECK(c.kind == DichotomyVerdict::Kind::Contained);
  CHECK(c.certificate_exact);

  auto s = dichotomy(V(5, 4, 0), M, 0.3);
  CHECK(s.kind == DichotomyVerdict::Kind::SmallIntersection);
  i64 brute = 0;
  for (auto& z : enumerate_zeros(M).points()) brute += z[0] == 0;
  CHECK(s.count == brute);
  CHECK(s.count == oracle::sphere_fiber_count(5, 3, 1));
  CHECK(s.within_4p);

  auto k = dichotomy(FpMultiPoly::constant(5, 4, 3), M, 0.3);
  CHECK(k.kind == DichotomyVerdict::Kind::SmallIntersection);
  CHECK(k.count == 0);
}

TEST_CASE("antiderivative") {
  auto M = QuadForm::sphere(5, 3, 0);  // homogeneous so M(0) = 0
  std::mt19937_64 rng(47);
  auto W = random_poly(5, 3, 1, rng);
  auto Q = M.to_poly() * W;
  auto r = antiderivative(Q, M);
  REQUIRE(r.status == AntiderivativeResult::Status::Ok);
  CHECK(M.to_poly() * r.Qprime == Q);

  auto f = antiderivative(V(5, 3, 0), QuadForm::sphere(5, 3, 1));
  CHECK(f.status == AntiderivativeResult::Status::HypothesisFailed);
  CHECK(f.failed_index >= 1);

  auto z = antiderivative(FpMultiPoly(5, 3), M);
  CHECK(z.status == AntiderivativeResult::Status::Ok);
  CHECK(z.Qprime.is_zero());

  // the constant obstruction: Q = M - M(0) satisfies the hypothesis with Q(0)=0
  auto S = QuadForm::sphere(5, 3, 1);
  auto c = antiderivative(S.to_poly() + FpMultiPoly::constant(5, 3, 1), S);
  CHECK(c.status == AntiderivativeResult::Status::ConstantTerm);
  CHECK(c.constant == 1);
}

TEST_CASE("iterated delta matches the cube sum") {
  std::mt19937_64 rng(53);
  auto g = random_poly(5, 2, 3, rng);
  std::vector<Vec> hs = {{1, 2}, {3, 0}};
  Vec n = {4, 1};
  i64 s = 0;
  for (int mask = 0; mask < 4; ++mask) {
    Vec x = n;
    int sign = 1;
    for (int t = 0; t < 2; ++t)
      if (mask >> t & 1) x[0] += hs[t][0], x[1] += hs[t][1];
      else sign = -sign;
    s += sign * g.eval({modp(x[0], 5), modp(x[1], 5)});
  }
  CHECK(iterated_delta(g, n, hs) == modp(s, 5));
}

TEST_CASE("intrinsic decomposition") {
  auto M = QuadForm::sphere(5, 5, 1);
  std::mt19937_64 rng(59);
  auto g1 = random_poly(5, 5, 0, rng), g2 = random_poly(5, 5, 1, rng);
  auto g = M.to_poly() * g1 + g2;
  auto r = intrinsic_decompose(g, M, 2);
  REQUIRE(r.status == IntrinsicResult::Status::Decomposed);
  CHECK(M.to_poly() * r.g1 + r.g2 == g);
  CHECK(r.g1.degree() <= 0);
  CHECK(r.g2.degree() <= 1);

  auto x2 = pow(V(5, 5, 0), 2);
  auto w = intrinsic_decompose(x2, M, 2);
  REQUIRE(w.status == IntrinsicResult::Status::Witness);
  Vec n(w.witness.begin(), w.witness.begin() + 5);
  std::vector<Vec> hs = {Vec(w.witness.begin() + 5, w.witness.begin() + 10),
                         Vec(w.witness.begin() + 10, w.witness.end())};
  CHECK(iterated_delta(x2, n, hs) != 0);
  for (int mask = 0; mask < 4; ++mask) {
    Vec x = n;
    for (int t = 0; t < 2; ++t)
      if (mask >> t & 1)
        for (int i = 0; i < 5; ++i) x[i] = modp(x[i] + hs[t][i], 5);
    CHECK(M.eval(x) == 0);
  }

  auto low = intrinsic_decompose(V(5, 5, 2), M, 2);
  REQUIRE(low.status == IntrinsicResult::Status::Decomposed);
  CHECK(low.g1.is_zero());
  CHECK(low.g2 == V(5, 5, 2));
}

TEST_CASE("gowers equation") {
  auto M = QuadForm::sphere(5, 4, 1);
  std::mt19937_64 rng(61);
  // P = 0, Q = M g1 + g2 with s = 1: Q2 constant
  auto Q = M.to_poly() * random_poly(5, 4, 0, rng) + FpMultiPoly::constant(5, 4, 2);
  auto r = gowers_equation_solve(FpMultiPoly(5, 4), Q, M, 1, 2);
  REQUIRE(r.status == GowersEquationResult::Status::Solved);
  CHECK(M.to_poly() * r.Q1 + r.Q2 == Q);
  CHECK(M.to_poly() * r.P1 + r.P2 == FpMultiPoly(5, 4));
  CHECK(r.Q2.degree() <= 0);

  auto bad = gowers_equation_solve(FpMultiPoly(5, 4), V(5, 4, 0), M, 1, 2);
  CHECK(bad.status == GowersEquationResult::Status::HypothesisFailed);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("lift nullstellensatz") {
  const i64 p = 5;
  const int d = 3;
  // M = (n.n - 1)/p, Z/p valued
  RatMultiPoly S(d);
  for (int i = 0; i < d; ++i) S += RatMultiPoly::var(d, i) * RatMultiPoly::var(d, i);
  S -= RatMultiPoly::constant(d, 1);
  auto M = S.scaled(Rat(1, p));
  CHECK(reduce_form(M, p).v == 4);
  CHECK(reduce_form(lift_form(QuadForm::sphere(p, d, 1)), p).A == QuadForm::sphere(p, d, 1).A);

  auto R = RatMultiPoly::var(d, 0) + RatMultiPoly::constant(d, 2);
  auto I = (RatMultiPoly::var(d, 1) * (RatMultiPoly::var(d, 1) - RatMultiPoly::constant(d, 1))).scaled(Rat(1, 2));
  auto r = lift_nullstellensatz(M * R + I, M, p);
  REQUIRE(r.status == LiftNullResult::Status::Decomposed);
  CHECK(M * r.P1 + r.P0 == M * R + I);
  CHECK(has_integer_coeffs(r.P1));
  CHECK(is_integer_valued(r.P0));

  auto iv = lift_nullstellensatz(I, M, p);
  REQUIRE(iv.status == LiftNullResult::Status::Decomposed);
  CHECK(iv.P1.is_zero());
  CHECK(iv.P0 == I);

  auto F = FpMultiPoly::var(p, d, 0);
  auto w = lift_nullstellensatz(regular_lift(F), M, p);
  REQUIRE(w.status == LiftNullResult::Status::Witness);
  CHECK(M.eval(w.witness).get_den() == 1);
  CHECK(regular_lift(F).eval(w.witness).get_den() != 1);
}

TEST_CASE("sphere decompositions") {
  const i64 p = 5;
  const int d = 4;
  RatMultiPoly S(d);
  for (int i = 0; i < d; ++i) S += RatMultiPoly::var(d, i) * RatMultiPoly::var(d, i);
  S -= RatMultiPoly::constant(d, 1);
  auto M = S.scaled(Rat(1, p));

  auto R = RatMultiPoly::constant(d, 3);
  auto f = M * M * R;
  auto a = sphere_vanishing_decompose(f, M, p);
  REQUIRE(a.status == SphereDecomposition::Status::Decomposed);
  CHECK(a.Q0 == 1);
  CHECK(verify_sphere_decomposition(f, M, p, a, false));
  CHECK(a.pfloor_integer_valued);

  auto b = sphere_vanishing_decompose(M, M, p);
  REQUIRE(b.status == SphereDecomposition::Status::Decomposed);
  CHECK(verify_sphere_decomposition(M, M, p, b, false));

  auto bad = sphere_vanishing_decompose(RatMultiPoly::var(d, 0).scaled(Rat(1, p)), M, p);
  CHECK(bad.status == SphereDecomposition::Status::Witness);

  auto g = (RatMultiPoly::var(d, 0) * RatMultiPoly::var(d, 1)).scaled(Rat(3, 1));
  auto c = sphere_periodic_decompose(g.scaled(Rat(1, p)), M, p);
  REQUIRE(c.status == SphereDecomposition::Status::Decomposed);
  CHECK(c.C == 0);
  CHECK(verify_sphere_decomposition(g.scaled(Rat(1, p)), M, p, c, true));

  auto h = M * M + RatMultiPoly::constant(d, Rat(2, 3));
  auto e = sphere_periodic_decompose(h, M, p);
  REQUIRE(e.status == SphereDecomposition::Status::Decomposed);
  CHECK(verify_sphere_decomposition(h, M, p, e, true));
}

}
