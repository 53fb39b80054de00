#include "doctest.h"
#include "oracles.hpp"
#include "sphere_hofa/ffcore.hpp"

#include <random>
#include <set>

using namespace shofa;

TEST_SUITE("ffcore") {

TEST_CASE("legendre matches the square table") {
  for (i64 p : {5, 7, 11, 13, 101}) {
    PrimeField F(p);
    for (i64 a = 0; a < p; ++a) CHECK(F.legendre(a) == oracle::legendre(a, p));
  }
  PrimeField F5(5);
  CHECK(F5.legendre(0) == 0);
  CHECK(F5.legendre(1) == 1);
  CHECK(F5.legendre(2) == -1);
}

TEST_CASE("smallest nonresidue") {
  CHECK(PrimeField(5).smallest_nonresidue() == 2);
  CHECK(PrimeField(7).smallest_nonresidue() == 3);
  CHECK(PrimeField(13).smallest_nonresidue() == 2);
  for (i64 p : {11, 17, 23, 41, 71}) {
    i64 c = PrimeField(p).smallest_nonresidue();
    CHECK(oracle::legendre(c, p) == -1);
    for (i64 b = 1; b < c; ++b) CHECK(oracle::legendre(b, p) == 1);
  }
}

TEST_CASE("field arithmetic and sqrt") {
  PrimeField F(13);
  for (i64 a = 1; a < 13; ++a) {
    CHECK(F.mul(a, F.inv(a)) == 1);
    auto r = F.sqrt(a);
    CHECK(r.has_value() == (oracle::legendre(a, 13) == 1));
    if (r) CHECK(F.mul(*r, *r) == a);
  }
  CHECK(F.pow(2, 12) == 1);
  CHECK_THROWS_AS(F.inv(0), Error);
  CHECK_THROWS_AS(PrimeField(9), Error);
  CHECK_THROWS_AS(PrimeField(3), Error);
}

TEST_CASE("rref basics") {
  auto I = FpMatrix::identity(5, 3);
  auto r = rref(I);
  CHECK(r.rank == 3);
  CHECK(r.matrix == I);
  CHECK(r.pivots == std::vector<int>{0, 1, 2});
  FpMatrix Z(5, 2, 3);
  CHECK(rref(Z).rank == 0);
  CHECK(rref(Z).pivots.empty());
  CHECK(rank(FpMatrix::from_rows(5, {{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("rank and rref against the elimination oracle") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    i64 p = (t % 2) ? 7 : 5;
    int r = 1 + t % 4, c = 1 + (t / 4) % 5;
    std::uniform_int_distribution<i64> U(0, p - 1);
    oracle::Mat m(r, oracle::Vec(c));
    for (auto& row : m)
      for (auto& x : row) x = (t % 3 == 0 && U(rng) < p / 2) ? 0 : U(rng);
    auto M = FpMatrix::from_rows(p, m);
    auto R = rref(M);
    CHECK(R.rank == oracle::rank(m, p));
    // idempotent and row space preserved
    CHECK(rref(R.matrix).matrix == R.matrix);
    auto stacked = m;
    for (auto& row : R.matrix.to_rows()) stacked.push_back(row);
    CHECK(oracle::rank(stacked, p) == R.rank);
  }
}

TEST_CASE("solve_linear") {
  auto I = FpMatrix::identity(5, 3);
  auto s = solve_linear(I, {1, 2, 3});
  REQUIRE(s);
  CHECK(s->particular == Vec{1, 2, 3});
  CHECK(s->kernel.empty());
  FpMatrix Z(5, 2, 2);
  auto z = solve_linear(Z, {0, 0});
  REQUIRE(z);
  CHECK(z->kernel.size() == 2);
  CHECK_FALSE(solve_linear(Z, {1, 0}));

  auto L = FpMatrix::from_rows(5, {{1, 2}});
  auto l = solve_linear(L, {3});
  REQUIRE(l);
  REQUIRE(l->kernel.size() == 1);
  // the parametrized line equals the brute-force solution set
  std::set<Vec> line, brute;
  for (i64 t = 0; t < 5; ++t)
    line.insert({modp(l->particular[0] + t * l->kernel[0][0], 5), modp(l->particular[1] + t * l->kernel[0][1], 5)});
  oracle::for_all(5, 2, [&](const Vec& x) {
    if (modp(x[0] + 2 * x[1], 5) == 3) brute.insert(x);
  });
  CHECK(line == brute);
}

TEST_CASE("det, inverse, nullspace") {
  auto A = FpMatrix::from_rows(7, {{1, 2, 3}, {0, 1, 4}, {5, 6, 0}});
  auto inv = inverse(A);
  REQUIRE(inv);
  CHECK(mul(A, *inv) == FpMatrix::identity(7, 3));
  CHECK(det(A) != 0);
  auto S = FpMatrix::from_rows(7, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
  CHECK(det(S) == 0);
  CHECK_FALSE(inverse(S));
  auto ns = nullspace(S);
  REQUIRE(ns.size() == 1);
  for (int i = 0; i < 3; ++i) CHECK(dot(S.row(i), ns[0], 7) == 0);
}

}
