#include "sphere_hofa/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphere_hofa/parallel.hpp"

namespace shofa {

std::uint64_t encode(const Vec& x, i64 p) {
  std::uint64_t k = 0;
  for (i64 xi : x) k = k * std::uint64_t(p) + std::uint64_t(modp(xi, p));
  return k;
}

Vec decode(std::uint64_t idx, i64 p, int d) {
  Vec x(d);
  for (int i = d - 1; i >= 0; --i) {
    x[i] = i64(idx % std::uint64_t(p));
    idx /= std::uint64_t(p);
  }
  return x;
}

double ipow(double base, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

Vec PointSet::point(std::size_t k) const { return decode(idx[k], p, d); }

std::vector<Vec> PointSet::points() const {
  std::vector<Vec> out;
  out.reserve(idx.size());
  for (auto k : idx) out.push_back(decode(k, p, d));
  return out;
}

PointSet PointSet::from_points(i64 p, int d, std::vector<Vec> pts) {
  PointSet s{p, d, {}};
  for (auto& x : pts) {
    require(int(x.size()) == d, "point arity mismatch");
    s.idx.push_back(encode(x, p));
  }
  std::sort(s.idx.begin(), s.idx.end());
  s.idx.erase(std::unique(s.idx.begin(), s.idx.end()), s.idx.end());
  return s;
}

Membership::Membership(const PointSet& s) : p_(s.p), bits_(std::size_t(ipow(double(s.p), s.d)), false) {
  for (auto k : s.idx) bits_[k] = true;
}

CountReport make_report(i64 exact, double main_term, double error_bound, double constant) {
  CountReport r;
  r.exact = exact;
  r.main_term = main_term;
  r.error_bound = error_bound;
  r.constant_used = constant;
  double dev = std::abs(double(exact) - main_term);
  r.ratio = error_bound > 0 ? dev / error_bound : (dev == 0 ? 0 : INFINITY);
  r.pass = dev <= constant * error_bound;
  return r;
}

namespace {

// Calls fn(x, M(x)) for every x in F_p^d with x_0 = first, in lexicographic order.
template <class Fn>
void scan_slab(const QuadForm& M, i64 first, Fn&& fn) {
  const int d = M.d;
  const i64 p = M.p;
  Vec x(d, 0);
  std::vector<Vec> lin(d + 1, Vec(d, 0));
  auto rec = [&](auto&& self, int k, i64 val) -> void {
    if (k == d) {
      fn(x, val);
      return;
    }
    i64 lo = k == 0 ? first : 0, hi = k == 0 ? first + 1 : p;
    for (i64 xk = lo; xk < hi; ++xk) {
      x[k] = xk;
      i64 nv = (val + (M.A(k, k) * xk % p + M.u[k] + lin[k][k]) % p * xk) % p;
      for (int i = k + 1; i < d; ++i) lin[k + 1][i] = (lin[k][i] + 2 * M.A(i, k) * xk) % p;
      self(self, k + 1, nv);
    }
  };
  if (d == 0) {
    fn(x, M.v);
    return;
  }
  rec(rec, 0, M.v);
}

void check_budget(double work, double budget, const char* what) {
  if (work > budget) fail(ErrorKind::BudgetExceeded, std::string(what) + " exceeds the enumeration budget");
}

// Zeros of M over the whole of F_p^d as sorted indices.
std::vector<std::uint64_t> zeros_full(const QuadForm& M, const EnumOptions& o) {
  check_budget(ipow(double(M.p), M.d), o.budget, "enumeration");
  if (M.d == 0) return M.v == 0 ? std::vector<std::uint64_t>{0} : std::vector<std::uint64_t>{};
  auto slabs = parallel_map<std::vector<std::uint64_t>>(std::size_t(M.p), o.threads, [&](std::size_t s) {
    std::vector<std::uint64_t> out;
    scan_slab(M, i64(s), [&](const Vec& x, i64 val) {
      if (val == 0) out.push_back(encode(x, M.p));
    });
    return out;
  });
  std::vector<std::uint64_t> all;
  for (auto& s : slabs) all.insert(all.end(), s.begin(), s.end());
  return all;
}

}  // namespace

PointSet enumerate_zeros(const QuadForm& M, const AffineSubspace* S, const EnumOptions& o) {
  PointSet out{M.p, M.d, {}};
  if (!S) {
    out.idx = zeros_full(M, o);
    return out;
  }
  require(S->d == M.d && int(S->offset.size()) == M.d, "subspace dimension mismatch");
  if (S->dim() > 0)
    require(rank(FpMatrix::from_rows(M.p, S->basis)) == S->dim(), "subspace basis must be independent");
  QuadForm R = restrict_to(M, *S);
  for (auto t : zeros_full(R, o)) out.idx.push_back(encode(S->point(decode(t, M.p, R.d)), M.p));
  std::sort(out.idx.begin(), out.idx.end());
  return out;
}

CountReport zero_count_check(const QuadForm& M, const AffineSubspace* S, const EnumOptions& o) {
  AffineSubspace full = AffineSubspace::full(M.p, M.d);
  const AffineSubspace& sub = S ? *S : full;
  int s = restricted_rank(M, sub);
  if (s < 3) fail(ErrorKind::RankHypothesis, "restricted rank below 3");
  int e = M.d - sub.codim() - 1;
  i64 exact = i64(enumerate_zeros(M, S, o).size());
  return make_report(exact, ipow(double(M.p), e), ipow(double(M.p), e) * std::pow(double(M.p), -(s - 2) / 2.0));
}

namespace {
struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};
}  // namespace

std::complex<double> root_of_unity_sum(const std::vector<i64>& counts, i64 p) {
  Neumaier re, im;
  for (i64 j = 0; j < p; ++j) {
    if (!counts[j]) continue;
    double ang = 2 * std::numbers::pi * double(j) / double(p);
    re.add(double(counts[j]) * std::cos(ang));
    im.add(double(counts[j]) * std::sin(ang));
  }
  return {re.value(), im.value()};
}

std::complex<double> exp_sum_on(const PointSet& pts, const Vec& xi) {
  require(!pts.empty(), "character sum over an empty set");
  require(int(xi.size()) == pts.d, "frequency arity mismatch");
  const i64 p = pts.p;
  Vec xr(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xr[i] = modp(xi[i], p);
  std::vector<i64> hist(p, 0);
  for (auto k : pts.idx) {
    i64 s = 0;
    for (int i = pts.d - 1; i >= 0; --i) {
      s += xr[i] * i64(k % std::uint64_t(p));
      k /= std::uint64_t(p);
    }
    hist[s % p]++;
  }
  return root_of_unity_sum(hist, p) / double(pts.size());
}

std::complex<double> exp_sum(const QuadForm& M, const Vec& xi, const EnumOptions& o) {
  return exp_sum_on(enumerate_zeros(M, nullptr, o), xi);
}

std::complex<double> gauss_sum(i64 p, i64 j) {
  require(modp(j, p) != 0, "gauss_sum needs j != 0");
  std::vector<i64> hist(p, 0);
  for (i64 n = 0; n < p; ++n) hist[modp(j * n % p * n, p)]++;
  return root_of_unity_sum(hist, p);
}

CountReport quadratic_root_count(const QuadForm& M, const EnumOptions& o) {
  int r = qf_rank(M);
  check_budget(ipow(double(M.p), M.d), o.budget, "enumeration");
  PrimeField F(M.p);
  std::vector<char> square(M.p, 0);
  for (i64 t = 0; t < M.p; ++t) square[t] = F.legendre(t) >= 0;
  auto slabs = parallel_map<i64>(std::size_t(M.p), o.threads, [&](std::size_t s) {
    i64 c = 0;
    scan_slab(M, i64(s), [&](const Vec&, i64 val) { c += square[val]; });
    return c;
  });
  i64 exact = 0;
  for (i64 c : slabs) exact += c;
  double main = ipow(double(M.p), M.d) / 2;
  double rel = r >= 3 ? std::pow(double(M.p), -(r - 2) / 2.0) : std::pow(double(M.p), -0.5);
  return make_report(exact, main, main * rel);
}

PointSet enumerate_vmh(const QuadForm& M, const std::vector<Vec>& hs, const EnumOptions& o) {
  if (!hs.empty() && rank(FpMatrix::from_rows(M.p, hs)) < int(hs.size()))
    fail(ErrorKind::DependentShifts, "shifts are linearly dependent");
  PointSet v = enumerate_zeros(M, nullptr, o);
  PointSet out{M.p, M.d, {}};
  for (auto k : v.idx) {
    Vec n = decode(k, M.p, M.d);
    bool ok = true;
    for (auto& h : hs) {
      Vec nh(M.d);
      for (int i = 0; i < M.d; ++i) nh[i] = modp(n[i] + h[i], M.p);
      if (M.eval(nh) != 0) { ok = false; break; }
    }
    if (ok) out.idx.push_back(k);
  }
  return out;
}

CountReport vmh_count_check(const QuadForm& M, const std::vector<Vec>& hs, const EnumOptions& o) {
  int r = int(hs.size());
  if (qf_rank(M) < M.d || M.d - 2 * r < 3) fail(ErrorKind::RankHypothesis, "needs non-degenerate M and d - 2r >= 3");
  i64 exact = i64(enumerate_vmh(M, hs, o).size());
  double main = ipow(double(M.p), M.d - r - 1);
  return make_report(exact, main, main * std::pow(double(M.p), -0.5));
}

namespace {

// Cubes rooted at omega[n_pos]; visit returns true to stop. Returns true if stopped.
template <class Visit>
bool gowers_from(const PointSet& omega, const Membership& mem, int s, std::size_t n_pos, Visit&& visit) {
  const i64 p = omega.p;
  const int d = omega.d;
  Vec n = omega.point(n_pos);
  std::vector<Vec> verts{n}, hs;
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == s) return visit(n, hs);
    std::size_t nv = verts.size();
    for (std::size_t xk = 0; xk < omega.size(); ++xk) {
      Vec x = omega.point(xk), h(d);
      for (int j = 0; j < d; ++j) h[j] = modp(x[j] - n[j], p);
      bool ok = true;
      for (std::size_t v = 1; v < nv && ok; ++v) {
        Vec y(d);
        for (int j = 0; j < d; ++j) y[j] = (verts[v][j] + h[j]) % p;
        ok = mem.contains(y);
      }
      if (!ok) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        Vec y(d);
        for (int j = 0; j < d; ++j) y[j] = (verts[v][j] + h[j]) % p;
        verts.push_back(std::move(y));
      }
      hs.push_back(h);
      bool stop = self(self, i + 1);
      hs.pop_back();
      verts.resize(nv);
      if (stop) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

std::vector<Vec> enumerate_gowers(const PointSet& omega, int s, const EnumOptions& o) {
  require(s >= 0, "s must be non-negative");
  check_budget(ipow(double(omega.size()), s + 1), o.budget, "Gowers set listing");
  if (omega.empty()) return {};
  Membership mem(omega);
  auto parts = parallel_map<std::vector<Vec>>(omega.size(), o.threads, [&](std::size_t k) {
    std::vector<Vec> out;
    gowers_from(omega, mem, s, k, [&](const Vec& n, const std::vector<Vec>& hs) {
      Vec t = n;
      for (auto& h : hs) t.insert(t.end(), h.begin(), h.end());
      out.push_back(std::move(t));
      return false;
    });
    return out;
  });
  std::vector<Vec> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

std::uint64_t count_gowers(const PointSet& omega, int s, const EnumOptions& o) {
  require(s >= 0, "s must be non-negative");
  if (omega.empty()) return 0;
  if (s == 0) return omega.size();
  check_budget(ipow(double(omega.size()), s + 1), o.budget, "Gowers set counting");
  Membership mem(omega);
  auto parts = parallel_map<std::uint64_t>(omega.size(), o.threads, [&](std::size_t k) {
    std::uint64_t c = 0;
    gowers_from(omega, mem, s, k, [&](const Vec&, const std::vector<Vec>&) {
      ++c;
      return false;
    });
    return c;
  });
  std::uint64_t total = 0;
  for (auto c : parts) total += c;
  return total;
}

bool scan_gowers(const PointSet& omega, int s,
                 const std::function<bool(const Vec&, const std::vector<Vec>&)>& visit) {
  if (omega.empty()) return false;
  Membership mem(omega);
  for (std::size_t k = 0; k < omega.size(); ++k)
    if (gowers_from(omega, mem, s, k, visit)) return true;
  return false;
}

double gowers_main_term(i64 p, int d, int codim, int s) {
  return std::pow(double(p), (s + 1) * (d - codim) - (s * (s + 1) / 2 + 1));
}

}  // namespace shofa
