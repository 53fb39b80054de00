#include "doctest.h"
#include "oracles.hpp"
#include "sphere_hofa/equidist.hpp"

#include <random>

using namespace shofa;

namespace {

PointSet sphere_points(i64 p, int d, i64 r) { return enumerate_zeros(QuadForm::sphere(p, d, r)); }

RatMultiPoly sphere_poly(int d, i64 r) {
  RatMultiPoly s(d);
  for (int i = 0; i < d; ++i) s += RatMultiPoly::var(d, i) * RatMultiPoly::var(d, i);
  return s - RatMultiPoly::constant(d, r);
}

}  // namespace

TEST_SUITE("equidist") {

TEST_CASE("sequence evaluation reduces mod 1") {
  TorusPolySeq g;
  g.m = 1;
  g.d = 1;
  g.s = 2;
  g.coeffs[{2}] = {Rat(1, 5)};
  CHECK(seq_eval(g, {4})[0] == Rat(1, 5));  // C(4,2)/5 = 6/5
  CHECK(g.coordinate(0) == (RatMultiPoly::var(1, 0) * (RatMultiPoly::var(1, 0) - RatMultiPoly::constant(1, 1)))
                               .scaled(Rat(1, 10)));
  TorusPolySeq bad = g;
  bad.coeffs[{3}] = {Rat(1)};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("frequency order") {
  auto f = frequencies(2, 2);
  std::vector<Vec> expect = {{0, 1}, {1, 0}, {0, 2}, {1, -1}, {1, 1}, {2, 0}};
  CHECK(f == expect);
  for (int m = 1; m <= 3; ++m)
    for (int K = 1; K <= 4; ++K) {
      // half of the nonzero points of the l1 ball
      i64 ball = 0;
      oracle::for_all(2 * K + 1, m, [&](const Vec& x) {
        i64 s = 0;
        for (auto v : x) s += std::abs(v - K);
        ball += s <= K;
      });
      CHECK(i64(frequencies(m, K).size()) == (ball - 1) / 2);
    }
  CHECK(default_freq_budget(0.3) == 12);
}

TEST_CASE("n1/p on the sphere") {
  auto omega = sphere_points(5, 3, 1);
  auto g = TorusPolySeq::from_polys({RatMultiPoly::var(3, 0).scaled(Rat(1, 5))});
  auto r = equidist_test(g, omega, 0.3, 4);
  CHECK(r.verdict == EquidistReport::Verdict::Equidistributed);
  // fibers 4,9,4,4,9 give |sum e(2x/5)| = 5(sqrt5+1)/2 over 30 points
  CHECK(std::abs(r.max_fourier - 5 * (std::sqrt(5.0) + 1) / 2 / 30) < 1e-12);
  auto pts = omega.points();
  CHECK(std::abs(std::abs(oracle::exp_mean(pts, {1, 0, 0}, 5)) - 0.10300) < 1e-5);
  // k = 5 makes 5 * n1/5 an integer
  auto r5 = equidist_test(g, omega, 0.3, 5);
  CHECK(r5.verdict == EquidistReport::Verdict::Obstructed);
  REQUIRE(r5.witness);
  CHECK(r5.witness->k == Vec{5});
  CHECK(r5.witness->constant == 0);
}

TEST_CASE("constancy and character search") {
  auto omega = sphere_points(5, 3, 1);
  auto g = TorusPolySeq::from_polys({sphere_poly(3, 1).scaled(Rat(1, 5)) + RatMultiPoly::constant(3, Rat(2, 5))});
  auto c = constancy_check({1}, g, omega);
  CHECK(c.constant);
  CHECK(c.value == Rat(2, 5));
  auto h = character_search(g, omega, 3);
  REQUIRE(h);
  CHECK(h->k == Vec{1});
  auto n1 = TorusPolySeq::from_polys({RatMultiPoly::var(3, 0).scaled(Rat(1, 5))});
  CHECK_FALSE(constancy_check({1}, n1, omega).constant);
  CHECK_FALSE(character_search(n1, omega, 4));
}

TEST_CASE("character sums against direct summation") {
  auto omega = sphere_points(7, 3, 2);
  auto g = TorusPolySeq::from_polys(
      {(RatMultiPoly::var(3, 0) * RatMultiPoly::var(3, 1)).scaled(Rat(1, 7)), RatMultiPoly::var(3, 2).scaled(Rat(3, 7))});
  auto r = equidist_test(g, omega, 0.9, 3);
  const double tau = 2 * std::acos(-1.0);
  double best = 0;
  for (auto& k : frequencies(2, 3)) {
    std::complex<double> s = 0;
    for (auto& x : omega.points()) {
      auto v = seq_eval(g, x);
      Rat t = v[0] * k[0] + v[1] * k[1];
      s += std::polar(1.0, tau * t.get_d());
    }
    best = std::max(best, std::abs(s) / double(omega.size()));
  }
  CHECK(std::abs(r.max_fourier - best) < 1e-10);
}

TEST_CASE("weyl constant branch") {
  const i64 p = 5;
  auto S = sphere_poly(3, 1);
  auto g1 = RatMultiPoly::var(3, 0) + RatMultiPoly::constant(3, 2);
  auto g2 = RatMultiPoly::var(3, 1) * RatMultiPoly::var(3, 2);
  auto g = S * g1 + g2.scaled(p) + RatMultiPoly::constant(3, 3);
  auto w = weyl_dichotomy(g, p, 3, 1, 0.3);
  CHECK(w.branch == WeylResult::Branch::Constant);
  CHECK(w.unit_exact);
  CHECK(w.value == 1.0);
  CHECK(w.constant == 3);
  CHECK(w.certificate_verified);
  CHECK(S * w.g1 + w.g2.scaled(p) + RatMultiPoly::constant(3, 3) == g);
}

TEST_CASE("weyl small sum") {
  RatMultiPoly g = RatMultiPoly::var(4, 0) * RatMultiPoly::var(4, 1) + RatMultiPoly::var(4, 2);
  auto w = weyl_dichotomy(g, 7, 4, 1, 0.3);
  CHECK(w.branch == WeylResult::Branch::SumSmall);
  CHECK(w.value < 0.3);
  CHECK_FALSE(w.unit_exact);
}

TEST_CASE("leibman generator produces periodic sequences") {
  auto omega = sphere_points(5, 3, 1);
  std::mt19937_64 rng(83);
  for (int t = 0; t < 10; ++t) {
    auto g = random_periodic_seq(omega, 2, 2, rng);
    for (int c = 0; c < g.m; ++c) CHECK(is_partially_p_periodic_on(g.coordinate(c), 5, omega.points()));
  }
  auto st = leibman_probe(omega, 1, 2, 0.3, 10, 4, 1);
  CHECK(st.trials == 10);
  CHECK(st.equidistributed + st.obstructed + st.unresolved == 10);
  CHECK_FALSE(st.hypotheses_met);
  auto again = leibman_probe(omega, 1, 2, 0.3, 10, 4, 1);
  CHECK(again.obstructed == st.obstructed);
}

}
