#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/fpoly.hpp"

namespace shofa {

// g: Z^d -> R^m / Z^m, g(n) = sum_i C(n, i) c_i with c_i in Q^m.
struct TorusPolySeq {
  int m = 1;
  int d = 1;
  int s = 1;
  // Per-coordinate filtration degree; empty means every coordinate has degree s.
  std::vector<int> filtration;
  std::map<Exp, std::vector<Rat>> coeffs;

  void validate() const;
  RatMultiPoly coordinate(int t) const;
  static TorusPolySeq from_polys(const std::vector<RatMultiPoly>& polys);
};

struct HorizontalCharacter {
  Vec k;
  i64 complexity = 0;  // |k|_1
  Rat constant;        // k.g mod Z on Omega, when constant
};

std::vector<Rat> seq_eval(const TorusPolySeq& g, const Vec& n);

// Nonzero k with |k|_1 <= K, first nonzero entry positive, graded then lexicographic.
std::vector<Vec> frequencies(int m, int K);

int default_freq_budget(double delta);  // ceil(delta^-2), capped at 1000

struct EquidistReport {
  enum class Verdict { Equidistributed, Obstructed, Unresolved };
  Verdict verdict = Verdict::Equidistributed;
  double max_fourier = 0;
  Vec max_k;  // frequency attaining max_fourier (first in order on ties)
  std::optional<HorizontalCharacter> witness;
  double delta = 0;
  int K = 0;
  std::uint64_t characters = 0;
  std::uint64_t points = 0;
};

constexpr double kTieTolerance = 1e-9;

EquidistReport equidist_test(const TorusPolySeq& g, const PointSet& omega, double delta, int K,
                             const EnumOptions& o = {});
std::optional<HorizontalCharacter> character_search(const TorusPolySeq& g, const PointSet& omega, int K);

struct Constancy {
  bool constant = true;
  Rat value;
};
Constancy constancy_check(const Vec& k, const TorusPolySeq& g, const PointSet& omega);

struct WeylResult {
  enum class Branch { SumSmall, Constant, Violation };
  Branch branch = Branch::SumSmall;
  double value = 0;  // |E exp(g(n)/p)| over the sphere
  std::complex<double> sum;
  bool unit_exact = false;  // all points in a single residue class
  i64 constant = 0;         // g(tau n) mod p on the sphere, Constant branch only
  RatMultiPoly g1, g2;      // g = (n.n - tau(r)) g1 + p g2 + constant
  bool certificate_verified = false;
  std::string note;
  std::uint64_t points = 0;
};

// g integer valued. Omega = {n in F_p^d : n.n = r}.
WeylResult weyl_dichotomy(const RatMultiPoly& g, i64 p, int d, i64 r, double delta, const EnumOptions& o = {});

struct LeibmanTrial {
  TorusPolySeq g;
  EquidistReport report;
  bool periodic_by_construction = false;
};

struct LeibmanStats {
  std::uint64_t trials = 0;
  std::uint64_t equidistributed = 0;
  std::uint64_t obstructed = 0;
  std::uint64_t unresolved = 0;
  bool hypotheses_met = false;  // d >= s + 13
  std::vector<LeibmanTrial> exceptions;
};

// Random degree <= s sequences with p-power denominators, kept only when partially
// p-periodic on omega.
TorusPolySeq random_periodic_seq(const PointSet& omega, int m, int s, std::mt19937_64& rng);

LeibmanStats leibman_probe(const PointSet& omega, int m, int s, double delta, int trials, int K,
                           std::uint64_t seed, const EnumOptions& o = {});

}  // namespace shofa
