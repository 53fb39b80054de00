#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "sphere_hofa/quadform.hpp"

namespace shofa {

constexpr double kDefaultBudget = 1e8;

struct EnumOptions {
  int threads = 0;  // 0 = hardware concurrency
  double budget = kDefaultBudget;
};

// Points of F_p^d, kept as lexicographic indices sum x_i p^(d-1-i).
struct PointSet {
  i64 p = 5;
  int d = 0;
  std::vector<std::uint64_t> idx;  // sorted

  std::size_t size() const { return idx.size(); }
  bool empty() const { return idx.empty(); }
  Vec point(std::size_t k) const;
  std::vector<Vec> points() const;
  static PointSet from_points(i64 p, int d, std::vector<Vec> pts);
};

std::uint64_t encode(const Vec& x, i64 p);
Vec decode(std::uint64_t idx, i64 p, int d);
double ipow(double base, int e);

// Dense membership table over F_p^d.
class Membership {
 public:
  explicit Membership(const PointSet& s);
  bool contains(std::uint64_t idx) const { return bits_[idx]; }
  bool contains(const Vec& x) const { return bits_[encode(x, p_)]; }

 private:
  i64 p_;
  std::vector<bool> bits_;
};

struct CountReport {
  i64 exact = 0;
  double main_term = 0;
  double error_bound = 0;
  double constant_used = 4;
  bool pass = false;
  double ratio = 0;  // |exact - main| / error_bound
};

CountReport make_report(i64 exact, double main_term, double error_bound, double constant = 4);

// V(M) (intersected with S when given), sorted lexicographically.
PointSet enumerate_zeros(const QuadForm& M, const AffineSubspace* S = nullptr, const EnumOptions& o = {});
CountReport zero_count_check(const QuadForm& M, const AffineSubspace* S = nullptr, const EnumOptions& o = {});

// Exact residue histogram of xi.n over the points, combined with compensated summation.
std::complex<double> exp_sum_on(const PointSet& pts, const Vec& xi);
std::complex<double> exp_sum(const QuadForm& M, const Vec& xi, const EnumOptions& o = {});
std::complex<double> gauss_sum(i64 p, i64 j);
// Sum of c_j e(j/p) with exact counts c_j.
std::complex<double> root_of_unity_sum(const std::vector<i64>& counts, i64 p);

CountReport quadratic_root_count(const QuadForm& M, const EnumOptions& o = {});

PointSet enumerate_vmh(const QuadForm& M, const std::vector<Vec>& hs, const EnumOptions& o = {});
CountReport vmh_count_check(const QuadForm& M, const std::vector<Vec>& hs, const EnumOptions& o = {});

// Box_s(Omega): tuples (n, h_1..h_s) with every cube vertex in Omega.
std::vector<Vec> enumerate_gowers(const PointSet& omega, int s, const EnumOptions& o = {});
std::uint64_t count_gowers(const PointSet& omega, int s, const EnumOptions& o = {});
// Sequential scan of Box_s(omega) in a fixed order; visit returns true to stop.
bool scan_gowers(const PointSet& omega, int s,
                 const std::function<bool(const Vec& n, const std::vector<Vec>& hs)>& visit);
double gowers_main_term(i64 p, int d, int codim, int s);

}  // namespace shofa
