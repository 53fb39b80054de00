#include "doctest.h"
#include "oracles.hpp"
#include "sphere_hofa/msets.hpp"
#include "util.hpp"

#include <random>

using namespace shofa;

namespace {

std::vector<oracle::BlockFn> to_oracle(const MFamily& fam) {
  std::vector<oracle::BlockFn> out;
  for (auto& F : fam.fns) {
    oracle::BlockFn g;
    for (auto& [ij, c] : F.b) g.b[ij] = c;
    g.v = F.v;
    g.u = F.u;
    out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_SUITE("msets") {

TEST_CASE("block evaluation and coefficient vectors") {
  std::mt19937_64 rng(71);
  auto M = testutil::random_form(5, 2, 2, rng);
  std::uniform_int_distribution<i64> U(0, 4);
  for (int t = 0; t < 20; ++t) {
    MQuadFn F(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) F.set_b(i, j, U(rng), 5);
    for (auto& v : F.v)
      for (auto& x : v) x = U(rng);
    F.u = U(rng);
    oracle::BlockFn g{{}, F.v, F.u};
    for (auto& [ij, c] : F.b) g.b[ij] = c;
    oracle::for_all(5, 6, [&](const Vec& x) {
      if ((x[0] + x[3]) % 3) return;  // thin the scan
      CHECK(F.eval(M.A, x) == oracle::block_eval(g, M.A.to_rows(), x, 2, 5));
      CHECK(F.to_poly(M.A).eval(x) == F.eval(M.A, x));
    });
    auto cv = coeff_vectors(F, 5);
    CHECK(cv.full.size() == 6 + 6 + 1);
    CHECK(cv.prime.size() == 12);
    auto G = from_coeff_vector(cv.full, 3, 2, 5);
    CHECK(G.b == F.b);
    CHECK(G.v == F.v);
    CHECK(G.u == F.u);
  }
}

TEST_CASE("coefficient vector ordering") {
  // k = 2, d = 1: [b22, b12, v2, b11, v1, u]
  MQuadFn F(2, 1);
  F.set_b(1, 1, 1, 5);
  F.set_b(0, 1, 2, 5);
  F.v[1] = {3};
  F.set_b(0, 0, 4, 5);
  F.v[0] = {1};
  F.u = 2;
  CHECK(coeff_vectors(F, 5).full == Vec{1, 2, 3, 4, 1, 2});
  CHECK(F.top_block() == 1);
}

TEST_CASE("gowers family enumerates Box_1") {
  auto M = QuadForm::sphere(5, 3, 1);
  auto fam = gowers_family(M, 1);
  auto pts = enumerate_mset(fam);
  CHECK(pts.size() == 900);
  auto brute = oracle::block_zeros(to_oracle(fam), M.A.to_rows(), 5, 3, 2);
  CHECK(pts == brute);
  for (std::size_t i = 0; i < pts.size(); i += 37) CHECK(in_mset(fam, pts[i]));
  EnumOptions one, many;
  one.threads = 1;
  many.threads = 8;
  CHECK(enumerate_mset(fam, one) == enumerate_mset(fam, many));
}

TEST_CASE("Box_2 family matches the cube oracle") {
  auto M = QuadForm::sphere(5, 2, 1);
  auto fam = gowers_family(M, 2);
  auto Z = enumerate_zeros(M);
  CHECK(i64(enumerate_mset(fam).size()) == oracle::box_count(Z.points(), 5, 2, 2));
}

TEST_CASE("standard representation of Gowers families") {
  auto M = QuadForm::sphere(7, 5, 1);
  for (int s = 0; s <= 3; ++s) {
    auto rep = standard_rep(gowers_family(M, s));
    std::vector<int> dv = {1};
    for (int i = 1; i <= s; ++i) dv.push_back(i);
    CHECK(rep.dimension_vector == dv);
    CHECK(rep.total_codim == (s * s + s + 2) / 2);
    CHECK(rep.flags.consistent);
    CHECK(rep.flags.independent);
  }
  CHECK(total_codim(gowers_family(M, 2)) == 4);
}

TEST_CASE("classify") {
  auto M = QuadForm::sphere(7, 5, 1);
  auto f = classify(gowers_family(M, 1));
  CHECK(f.pure);
  CHECK(f.consistent);
  CHECK(f.nice == Tri::Yes);

  MFamily bad;
  bad.p = 7;
  bad.d = 5;
  bad.k = 1;
  bad.A = M.A;
  MQuadFn c(1, 5);
  c.u = 3;
  bad.fns.push_back(c);
  CHECK_FALSE(classify(bad).consistent);
  CHECK_THROWS_AS(standard_rep(bad), Error);

  MFamily dep = gowers_family(M, 1);
  dep.fns.push_back(dep.fns[0]);
  CHECK_FALSE(classify(dep).independent);
}

TEST_CASE("I-projection") {
  auto M = QuadForm::sphere(5, 3, 1);
  auto fam = gowers_family(M, 2);
  for (bool alt : {false, true}) {
    auto pr = i_projection(fam, {0, 1}, alt);
    for (auto& F : pr.inside.fns) CHECK(F.top_block() <= 1);
    CHECK(pr.inside.fns.size() + pr.outside.fns.size() == fam.fns.size());
    // the projection's zero set is the image of the full set
    auto inner = restrict_blocks(pr.inside, {0, 1});
    auto img = enumerate_mset(inner);
    std::set<Vec> proj;
    for (auto& x : enumerate_mset(fam)) proj.insert(Vec(x.begin(), x.begin() + 6));
    CHECK(std::vector<Vec>(proj.begin(), proj.end()) == img);
  }
}

TEST_CASE("Fubini with the constant function is exact") {
  auto M = QuadForm::sphere(5, 5, 1);
  auto fam = gowers_family(M, 1);
  auto r = fubini_check(fam, 1, [](const Vec&) { return i64(1); });
  auto v = enumerate_zeros(M).size();
  CHECK(r.lhs == 1);
  CHECK(r.rhs == 1);
  CHECK(r.diff == 0);
  CHECK(r.pass);
  CHECK(r.omega_size == v * v);
  CHECK(r.projection_size == v);
  CHECK(r.empty_fibers == 0);
  CHECK_THROWS_AS(fubini_check(gowers_family(QuadForm::sphere(5, 3, 1), 1), 1, [](const Vec&) { return i64(1); }),
                  Error);
}

TEST_CASE("cardinality check") {
  auto M = QuadForm::sphere(5, 3, 1);
  auto e = mset_cardinality_check(gowers_family(M, 1));
  CHECK_FALSE(e.sampled);
  CHECK(e.report.exact == 900);
  CHECK(e.codim == 2);
  EnumOptions small;
  small.budget = 1000;
  auto s = mset_cardinality_check(gowers_family(M, 1), 3, small, 200000);
  CHECK(s.sampled);
  CHECK(std::abs(s.estimate - 900) < 6 * s.std_error + 1);
}

TEST_CASE("irreducibility probe exact mode") {
  auto M = QuadForm::sphere(5, 3, 1);
  auto fam = gowers_family(M, 0);
  std::mt19937_64 rng(77);
  std::vector<FpMultiPoly> trials = {M.to_poly() * random_poly(5, 3, 1, rng), FpMultiPoly::var(5, 3, 0),
                                     FpMultiPoly::constant(5, 3, 1)};
  auto r = irreducibility_probe(fam, M, trials);
  REQUIRE(r.verdicts.size() == 3);
  CHECK(r.verdicts[0].kind == ProbeVerdict::Kind::Contained);
  CHECK(r.verdicts[1].kind == ProbeVerdict::Kind::Small);
  CHECK(r.verdicts[1].hits == 4);
  CHECK(r.verdicts[2].hits == 0);
  CHECK(r.middle_ground == 0);
}

TEST_CASE("irreducibility probe sampled mode") {
  auto M = QuadForm::sphere(7, 5, 1);
  auto fam = gowers_family(M, 1);
  ProbeOptions opt;
  opt.enumeration.budget = 1e4;
  auto m2 = embed(M.to_poly(), 10, 5);  // M(h) as a polynomial in (n, h)
  auto shifted = compose(M.to_poly(), [&] {
    std::vector<FpMultiPoly> s;
    for (int i = 0; i < 5; ++i) s.push_back(FpMultiPoly::var(7, 10, i) + FpMultiPoly::var(7, 10, 5 + i));
    return s;
  }());
  std::vector<FpMultiPoly> trials = {shifted, FpMultiPoly::var(7, 10, 0), m2};
  auto r = irreducibility_probe(fam, M, trials, opt);
  CHECK(r.sampled);
  CHECK(r.verdicts[0].kind == ProbeVerdict::Kind::Contained);
  CHECK(r.verdicts[1].kind == ProbeVerdict::Kind::Small);
  CHECK(r.verdicts[2].kind == ProbeVerdict::Kind::Small);
}

}
