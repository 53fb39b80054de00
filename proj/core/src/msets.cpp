#include "sphere_hofa/msets.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "sphere_hofa/division.hpp"
#include "sphere_hofa/parallel.hpp"

namespace shofa {

i64 MQuadFn::bij(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = b.find({i, j});
  return it == b.end() ? 0 : it->second;
}

void MQuadFn::set_b(int i, int j, i64 x, i64 p) {
  if (i > j) std::swap(i, j);
  x = modp(x, p);
  if (x) b[{i, j}] = x;
  else b.erase({i, j});
}

bool MQuadFn::is_pure() const {
  for (auto& vi : v)
    for (auto c : vi)
      if (c) return false;
  return true;
}

bool MQuadFn::is_nice_shape() const {
  if (!is_pure()) return false;
  if (b.empty()) return true;
  int top = -1;
  for (auto& [ij, x] : b) top = std::max(top, ij.second);
  for (auto& [ij, x] : b)
    if (ij.second != top) return false;
  return true;
}

int MQuadFn::top_block() const {
  int top = -1;
  for (auto& [ij, x] : b) top = std::max(top, ij.second);
  for (int i = 0; i < k; ++i)
    if (std::any_of(v[i].begin(), v[i].end(), [](i64 c) { return c != 0; })) top = std::max(top, i);
  return top;
}

i64 MQuadFn::eval(const FpMatrix& A, const Vec& x) const {
  const i64 p = A.p;
  i64 s = u;
  std::vector<Vec> xa(k);
  auto blk = [&](int i) { return Vec(x.begin() + std::ptrdiff_t(i) * d, x.begin() + std::ptrdiff_t(i + 1) * d); };
  for (auto& [ij, c] : b) {
    auto [i, j] = ij;
    if (xa[i].empty()) xa[i] = mul(blk(i), A);
    s = modp(s + c * dot(xa[i], blk(j), p), p);
  }
  for (int i = 0; i < k; ++i) s = modp(s + dot(v[i], blk(i), p), p);
  return s;
}

FpMultiPoly MQuadFn::to_poly(const FpMatrix& A) const {
  const i64 p = A.p;
  const int n = k * d;
  FpMultiPoly f = FpMultiPoly::constant(p, n, u);
  auto term = [&](int a, int bb, i64 c) {
    Exp e(n, 0);
    e[a] += 1;
    e[bb] += 1;
    f.add_term(e, c);
  };
  for (auto& [ij, c] : b) {
    auto [i, j] = ij;
    for (int s = 0; s < d; ++s)
      for (int t = 0; t < d; ++t)
        if (A(s, t)) term(i * d + s, j * d + t, c * A(s, t));
  }
  for (int i = 0; i < k; ++i)
    for (int s = 0; s < d; ++s)
      if (v[i][s]) {
        Exp e(n, 0);
        e[i * d + s] = 1;
        f.add_term(e, v[i][s]);
      }
  return f;
}

namespace {

int coeff_len(int k, int d) { return k * (k + 1) / 2 + k * d; }

// Offset of block i's segment (b_{i,i}, ..., b_{i,0}, v_i) in v'_M.
int block_offset(int i, int k, int d) {
  int off = 0;
  for (int t = k - 1; t > i; --t) off += (t + 1) + d;
  return off;
}

}  // namespace

CoeffVectors coeff_vectors(const MQuadFn& F, i64 p) {
  const int k = F.k, d = F.d;
  CoeffVectors cv;
  cv.prime.reserve(coeff_len(k, d));
  for (int i = k - 1; i >= 0; --i) {
    for (int j = i; j >= 0; --j) cv.prime.push_back(F.bij(j, i));
    for (auto c : F.v[i]) cv.prime.push_back(modp(c, p));
  }
  cv.full = cv.prime;
  cv.full.push_back(modp(F.u, p));
  return cv;
}

MQuadFn from_coeff_vector(const Vec& full, int k, int d, i64 p) {
  require(int(full.size()) == coeff_len(k, d) + 1, "coefficient vector length mismatch");
  MQuadFn F(k, d);
  for (int i = k - 1; i >= 0; --i) {
    int off = block_offset(i, k, d);
    for (int j = i; j >= 0; --j) F.set_b(j, i, full[off + (i - j)], p);
    for (int s = 0; s < d; ++s) F.v[i][s] = modp(full[off + i + 1 + s], p);
  }
  F.u = modp(full.back(), p);
  return F;
}

namespace {

FpMatrix stack(const MFamily& fam, bool full) {
  FpMatrix m(fam.p, int(fam.fns.size()), coeff_len(fam.k, fam.d) + (full ? 1 : 0));
  for (std::size_t r = 0; r < fam.fns.size(); ++r) {
    auto cv = coeff_vectors(fam.fns[r], fam.p);
    const Vec& row = full ? cv.full : cv.prime;
    for (std::size_t c = 0; c < row.size(); ++c) m(int(r), int(c)) = row[c];
  }
  return m;
}

void check_family(const MFamily& fam) {
  require(fam.A.rows == fam.d && fam.A.cols == fam.d && fam.A.is_symmetric(), "family matrix must be symmetric d x d");
  for (auto& F : fam.fns) require(F.k == fam.k && F.d == fam.d, "function shape differs from family");
}

// F(x + w) for a flat shift w.
MQuadFn translate(const MQuadFn& F, const FpMatrix& A, const Vec& w) {
  const i64 p = A.p;
  MQuadFn G = F;
  G.u = F.eval(A, w);
  std::vector<Vec> wa(F.k);
  for (int j = 0; j < F.k; ++j) wa[j] = mul(Vec(w.begin() + j * F.d, w.begin() + (j + 1) * F.d), A);
  for (int i = 0; i < F.k; ++i)
    for (int j = 0; j < F.k; ++j) {
      i64 c = F.bij(i, j) * (i == j ? 2 : 1);
      if (!c) continue;
      for (int s = 0; s < F.d; ++s) G.v[i][s] = modp(G.v[i][s] + c * wa[j][s], p);
    }
  return G;
}

// Shift w making every function pure, if one exists.
std::optional<Vec> purifying_shift(const MFamily& fam) {
  const int k = fam.k, d = fam.d;
  const i64 p = fam.p;
  int rows = int(fam.fns.size()) * k * d;
  FpMatrix L(p, rows, k * d);
  Vec rhs(rows, 0);
  int r = 0;
  for (auto& F : fam.fns)
    for (int i = 0; i < k; ++i)
      for (int t = 0; t < d; ++t, ++r) {
        rhs[r] = modp(-F.v[i][t], p);
        for (int j = 0; j < k; ++j) {
          i64 c = F.bij(i, j) * (i == j ? 2 : 1);
          if (!c) continue;
          for (int s = 0; s < d; ++s) L(r, j * d + s) = modp(L(r, j * d + s) + c * fam.A(s, t), p);
        }
      }
  auto sol = solve_linear(L, rhs);
  if (!sol) return std::nullopt;
  return sol->particular;
}

MQuadFn permute_blocks(const MQuadFn& F, const std::vector<int>& perm, i64 p) {
  // Old block i becomes new block perm[i].
  MQuadFn G(F.k, F.d);
  for (auto& [ij, c] : F.b) G.set_b(perm[ij.first], perm[ij.second], c, p);
  for (int i = 0; i < F.k; ++i) G.v[perm[i]] = F.v[i];
  G.u = F.u;
  return G;
}

MFamily permute_family(const MFamily& fam, const std::vector<int>& perm) {
  MFamily g = fam;
  for (auto& F : g.fns) F = permute_blocks(F, perm, fam.p);
  return g;
}

std::vector<MQuadFn> rref_functions(const MFamily& fam) {
  auto rr = rref(stack(fam, true));
  std::vector<MQuadFn> out;
  for (int r = 0; r < rr.rank; ++r) out.push_back(from_coeff_vector(rr.matrix.row(r), fam.k, fam.d, fam.p));
  return out;
}

bool all_nice(const std::vector<MQuadFn>& fs) {
  return std::all_of(fs.begin(), fs.end(), [](const MQuadFn& F) { return F.is_nice_shape(); });
}

bool same_prime_span(const MFamily& a, const MFamily& b) {
  auto ra = rref(stack(a, false)), rb = rref(stack(b, false));
  if (ra.rank != rb.rank) return false;
  for (int r = 0; r < ra.rank; ++r)
    if (ra.matrix.row(r) != rb.matrix.row(r)) return false;
  return true;
}

Tri detect_nice(const MFamily& fam, std::string& why) {
  if (fam.fns.empty()) {
    why = "empty family";
    return Tri::Yes;
  }
  auto w = purifying_shift(fam);
  if (!w) {
    why = "no translation makes the family pure";
    return Tri::Unknown;
  }
  MFamily pure = fam;
  for (auto& F : pure.fns) F = translate(F, fam.A, *w);
  if (fam.k <= 7) {
    std::vector<int> perm(fam.k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      MFamily g = permute_family(pure, perm);
      if (all_nice(g.fns) || all_nice(rref_functions(g))) {
        why = "single-pivot shape after translation and block permutation";
        return Tri::Yes;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  // Gowers families are nice when A is non-degenerate.
  if (rank(fam.A) == fam.d) {
    QuadForm M0(fam.A, Vec(fam.d, 0), 0);
    MFamily box = gowers_family(M0, fam.k - 1);
    if (same_prime_span(pure, box)) {
      why = "Gowers family shape";
      return Tri::Yes;
    }
  }
  why = "no constructive niceness pattern matched";
  return Tri::Unknown;
}

}  // namespace

FamilyFlags classify(const MFamily& fam) {
  check_family(fam);
  FamilyFlags fl;
  for (auto& F : fam.fns) fl.pure = fl.pure && F.is_pure();
  int rf = fam.fns.empty() ? 0 : rank(stack(fam, true));
  int rp = fam.fns.empty() ? 0 : rank(stack(fam, false));
  fl.consistent = rf == rp;
  fl.independent = rp == int(fam.fns.size());
  if (fl.consistent) fl.nice = detect_nice(fam, fl.nice_reason);
  else fl.nice_reason = "inconsistent family";
  return fl;
}

MRepresentation standard_rep(const MFamily& fam) {
  MRepresentation rep;
  rep.flags = classify(fam);
  if (!rep.flags.consistent) fail(ErrorKind::NotConsistent, "family spans a nonzero constant");
  rep.family = fam;
  rep.family.fns = fam.fns.empty() ? std::vector<MQuadFn>{} : rref_functions(fam);
  rep.dimension_vector.assign(fam.k, 0);
  for (auto& F : rep.family.fns) ++rep.dimension_vector[F.top_block()];
  rep.total_codim = int(rep.family.fns.size());
  rep.flags.independent = true;
  return rep;
}

int total_codim(const MFamily& fam) { return standard_rep(fam).total_codim; }

MFamily gowers_family(const QuadForm& M, int s) {
  require(s >= 0, "s must be non-negative");
  MFamily fam;
  fam.p = M.p;
  fam.d = M.d;
  fam.k = s + 1;
  fam.A = M.A;
  const i64 p = M.p;
  MQuadFn base(fam.k, fam.d);
  base.set_b(0, 0, 1, p);
  base.v[0] = M.u;
  base.u = M.v;
  fam.fns.push_back(base);
  for (int i = 1; i <= s; ++i) {
    MQuadFn F(fam.k, fam.d);
    F.set_b(0, i, 2, p);
    F.set_b(i, i, 1, p);
    F.v[i] = M.u;
    fam.fns.push_back(F);
  }
  for (int i = 1; i <= s; ++i)
    for (int j = i + 1; j <= s; ++j) {
      MQuadFn F(fam.k, fam.d);
      F.set_b(i, j, 1, p);
      fam.fns.push_back(F);
    }
  return fam;
}

Projection i_projection(const MFamily& fam, const std::vector<int>& I, bool alternative_order) {
  check_family(fam);
  if (!classify(fam).consistent) fail(ErrorKind::NotConsistent, "projection needs a consistent family");
  std::vector<char> in(fam.k, 0);
  for (int i : I) {
    require(i >= 0 && i < fam.k, "block index out of range");
    in[i] = 1;
  }
  FpMatrix full = stack(fam, true);
  const int ncols = full.cols;
  // Column classes in v_M order; the trailing u is always "inside".
  std::vector<int> outside_cols, inside_cols;
  for (int i = fam.k - 1; i >= 0; --i) {
    int off = block_offset(i, fam.k, fam.d);
    for (int j = i; j >= 0; --j) (in[i] && in[j] ? inside_cols : outside_cols).push_back(off + (i - j));
    for (int s = 0; s < fam.d; ++s) (in[i] ? inside_cols : outside_cols).push_back(off + i + 1 + s);
  }
  if (alternative_order) {
    std::reverse(outside_cols.begin(), outside_cols.end());
    std::reverse(inside_cols.begin(), inside_cols.end());
  }
  std::vector<int> order = outside_cols;
  order.insert(order.end(), inside_cols.begin(), inside_cols.end());
  order.push_back(ncols - 1);
  FpMatrix perm(fam.p, full.rows, ncols);
  for (int r = 0; r < full.rows; ++r)
    for (int c = 0; c < ncols; ++c) perm(r, c) = full(r, order[c]);
  Projection out;
  out.inside = out.outside = fam;
  out.inside.fns.clear();
  out.outside.fns.clear();
  if (fam.fns.empty()) return out;
  auto rr = rref(perm);
  for (int r = 0; r < rr.rank; ++r) {
    Vec row(ncols);
    for (int c = 0; c < ncols; ++c) row[order[c]] = rr.matrix(r, c);
    auto F = from_coeff_vector(row, fam.k, fam.d, fam.p);
    (rr.pivots[r] < int(outside_cols.size()) ? out.outside : out.inside).fns.push_back(F);
  }
  return out;
}

MFamily restrict_blocks(const MFamily& fam, const std::vector<int>& I) {
  std::vector<int> idx = I;
  std::sort(idx.begin(), idx.end());
  std::vector<int> pos(fam.k, -1);
  for (std::size_t t = 0; t < idx.size(); ++t) pos[idx[t]] = int(t);
  MFamily g = fam;
  g.k = int(idx.size());
  g.fns.clear();
  for (auto& F : fam.fns) {
    MQuadFn G(g.k, g.d);
    for (auto& [ij, c] : F.b) {
      if (pos[ij.first] < 0 || pos[ij.second] < 0)
        fail(ErrorKind::InvalidInput, "function depends on a dropped block");
      G.set_b(pos[ij.first], pos[ij.second], c, fam.p);
    }
    for (int i = 0; i < fam.k; ++i) {
      bool nz = std::any_of(F.v[i].begin(), F.v[i].end(), [](i64 c) { return c != 0; });
      if (pos[i] < 0) {
        if (nz) fail(ErrorKind::InvalidInput, "function depends on a dropped block");
      } else {
        G.v[pos[i]] = F.v[i];
      }
    }
    G.u = F.u;
    g.fns.push_back(G);
  }
  return g;
}

namespace {

// Block-recursive walker over V(rep). Block i is checked against the functions whose
// top block is i: each is b (xA).x + w.x + c in the free block x.
class Walker {
 public:
  Walker(const MFamily& rep, double budget) : rep_(rep), budget_(budget) {
    const i64 p = rep.p;
    const int d = rep.d;
    if (ipow(double(p), d) > budget) fail(ErrorKind::BudgetExceeded, "p^d exceeds the enumeration budget");
    std::size_t n = std::size_t(ipow(double(p), d));
    pts_.reserve(n);
    q_.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      Vec x = decode(t, p, d);
      q_.push_back(dot(mul(x, rep.A), x, p));
      pts_.push_back(std::move(x));
    }
    by_block_.assign(rep.k, {});
    for (auto& F : rep.fns) {
      int t = F.top_block();
      require(t >= 0, "constant function in a standard representation");
      by_block_[t].push_back(&F);
    }
  }

  // Visits all completions of prefix (blocks [0, from)) up to block `to` (exclusive).
  template <class Visit>
  void walk(Vec& x, int from, int to, Visit&& visit) const {
    if (from == to) {
      visit(x);
      return;
    }
    const i64 p = rep_.p;
    const int d = rep_.d;
    struct Lin {
      i64 b;
      Vec w;
      i64 c;
    };
    std::vector<Lin> lins;
    for (auto* F : by_block_[from]) {
      Lin L{F->bij(from, from), F->v[from], 0};
      for (int j = 0; j < from; ++j) {
        i64 c = F->bij(j, from);
        if (!c) continue;
        Vec xa = mul(Vec(x.begin() + j * d, x.begin() + (j + 1) * d), rep_.A);
        for (int s = 0; s < d; ++s) L.w[s] = modp(L.w[s] + c * xa[s], p);
      }
      std::fill(x.begin() + from * d, x.end(), 0);
      L.c = F->eval(rep_.A, x);
      lins.push_back(std::move(L));
    }
    evals_ += double(pts_.size());
    if (evals_ > budget_) fail(ErrorKind::BudgetExceeded, "M-set enumeration exceeds budget");
    for (std::size_t t = 0; t < pts_.size(); ++t) {
      const Vec& y = pts_[t];
      bool ok = true;
      for (auto& L : lins) {
        i64 val = L.b * q_[t] + L.c;
        for (int s = 0; s < d; ++s) val += L.w[s] * y[s];
        if (modp(val, p) != 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::copy(y.begin(), y.end(), x.begin() + from * d);
      walk(x, from + 1, to, visit);
    }
    std::fill(x.begin() + from * d, x.end(), 0);
  }

  const MFamily& rep() const { return rep_; }

 private:
  const MFamily& rep_;
  double budget_;
  std::vector<Vec> pts_;
  std::vector<i64> q_;
  std::vector<std::vector<const MQuadFn*>> by_block_;
  mutable std::atomic<double> evals_{0};
};

std::vector<Vec> prefix_points(const Walker& w, int kprime) {
  std::vector<Vec> out;
  Vec x(std::size_t(w.rep().k) * w.rep().d, 0);
  w.walk(x, 0, kprime, [&](const Vec& y) { out.push_back(y); });
  return out;
}

}  // namespace

std::vector<Vec> enumerate_mset(const MFamily& fam, const EnumOptions& o) {
  MRepresentation rep = standard_rep(fam);
  if (fam.k == 0) return {Vec{}};
  Walker w(rep.family, o.budget);
  auto heads = prefix_points(w, 1);
  auto parts = parallel_map<std::vector<Vec>>(heads.size(), o.threads, [&](std::size_t i) {
    std::vector<Vec> out;
    Vec x = heads[i];
    w.walk(x, 1, fam.k, [&](const Vec& y) { out.push_back(y); });
    return out;
  });
  std::vector<Vec> all;
  for (auto& part : parts) all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  return all;
}

bool in_mset(const MFamily& fam, const Vec& x) {
  return std::all_of(fam.fns.begin(), fam.fns.end(), [&](const MQuadFn& F) { return F.eval(fam.A, x) == 0; });
}

FubiniReport fubini_check(const MFamily& fam, int kprime, const std::function<i64(const Vec&)>& f,
                          const EnumOptions& o) {
  require(fam.k >= 2 && kprime >= 1 && kprime < fam.k, "Fubini needs 1 <= k' < k");
  MRepresentation rep = standard_rep(fam);
  if (rank(fam.A) < 2 * rep.total_codim + 1) fail(ErrorKind::RankHypothesis, "Fubini needs rank M >= 2r + 1");
  Walker w(rep.family, o.budget);
  auto heads = prefix_points(w, kprime);
  struct Fiber {
    i64 sum = 0;
    std::uint64_t count = 0;
  };
  auto fibers = parallel_map<Fiber>(heads.size(), o.threads, [&](std::size_t i) {
    Fiber fb;
    Vec x = heads[i];
    w.walk(x, kprime, fam.k, [&](const Vec& y) {
      fb.sum += f(y);
      ++fb.count;
    });
    return fb;
  });
  FubiniReport r;
  r.projection_size = heads.size();
  mpz_class total_sum = 0;
  Rat inner = 0;
  for (auto& fb : fibers) {
    r.omega_size += fb.count;
    total_sum += fb.sum;
    if (fb.count == 0) ++r.empty_fibers;  // contributes 0 to the iterated mean
    else inner += Rat(fb.sum, mpz_class(std::to_string(fb.count)));
  }
  require(r.omega_size > 0, "Fubini needs a nonempty M-set");
  r.lhs = Rat(total_sum, mpz_class(std::to_string(r.omega_size)));
  r.lhs.canonicalize();
  r.rhs = inner / Rat(mpz_class(std::to_string(r.projection_size)));
  r.diff = std::abs(Rat(r.lhs - r.rhs).get_d());
  r.bound = 4.0 / std::sqrt(double(fam.p));
  r.pass = r.diff <= r.bound;
  return r;
}

MsetCountReport mset_cardinality_check(const MFamily& fam, std::uint64_t seed, const EnumOptions& o,
                                       std::uint64_t samples) {
  MRepresentation rep = standard_rep(fam);
  MsetCountReport out;
  out.codim = rep.total_codim;
  const i64 p = fam.p;
  const int n = fam.d * fam.k;
  double main = ipow(double(p), n - rep.total_codim);
  double bound = 4.0 * main / std::sqrt(double(p));
  if (ipow(double(p), n) <= o.budget) {
    std::uint64_t count = 0;
    if (fam.k == 0) {
      count = 1;
    } else {
      Walker w(rep.family, o.budget);
      auto heads = prefix_points(w, 1);
      auto counts = parallel_map<std::uint64_t>(heads.size(), o.threads, [&](std::size_t i) {
        std::uint64_t c = 0;
        Vec x = heads[i];
        w.walk(x, 1, fam.k, [&](const Vec&) { ++c; });
        return c;
      });
      count = std::accumulate(counts.begin(), counts.end(), std::uint64_t(0));
    }
    out.report = make_report(i64(count), main, bound);
    out.estimate = double(count);
    return out;
  }
  // Stratified over the first coordinate of the first block.
  require(samples >= std::uint64_t(p), "too few samples");
  const std::uint64_t per = samples / std::uint64_t(p);
  auto hits = parallel_map<std::uint64_t>(std::size_t(p), o.threads, [&](std::size_t s) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + s);
    std::uniform_int_distribution<i64> U(0, p - 1);
    Vec x(n);
    std::uint64_t h = 0;
    for (std::uint64_t t = 0; t < per; ++t) {
      x[0] = i64(s);
      for (int c = 1; c < n; ++c) x[c] = U(rng);
      if (in_mset(rep.family, x)) ++h;
    }
    return h;
  });
  double scale = ipow(double(p), n - 1);
  double est = 0, var = 0;
  for (auto h : hits) {
    double pi = double(h) / double(per);
    est += scale * pi;
    var += scale * scale * pi * (1 - pi) / double(per);
  }
  out.sampled = true;
  out.samples = per * std::uint64_t(p);
  out.estimate = est;
  out.std_error = std::sqrt(var);
  CountReport& r = out.report;
  r.exact = -1;
  r.main_term = main;
  r.error_bound = bound + 3 * out.std_error;
  r.ratio = std::abs(est - main) / r.error_bound;
  r.pass = r.ratio <= 1.0;
  return out;
}

FpMultiPoly random_poly(i64 p, int nvars, int deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> U(0, p - 1);
  FpMultiPoly f(p, nvars);
  for (auto& e : monomials_upto(nvars, deg)) f.add_term(e, U(rng));
  return f;
}

namespace {

bool same_rows(const MFamily& a, const MFamily& b) {
  if (a.k != b.k || a.fns.size() != b.fns.size()) return false;
  for (std::size_t i = 0; i < a.fns.size(); ++i)
    if (coeff_vectors(a.fns[i], a.p).full != coeff_vectors(b.fns[i], b.p).full) return false;
  return true;
}

// P vanishes on V(M) x V(M) in coordinates (n, m): divide by M(m) with n as
// parameters, then every coefficient of the remainder must vanish on V(M).
bool product_contains(const FpMultiPoly& P2, const QuadForm& M) {
  const int d = M.d;
  const i64 p = M.p;
  FpMatrix A2(p, 2 * d, 2 * d);
  Vec u2(2 * d, 0);
  for (int s = 0; s < d; ++s) {
    for (int t = 0; t < d; ++t) A2(d + s, d + t) = M.A(s, t);
    u2[d + s] = M.u[s];
  }
  QuadForm Mm(A2, u2, M.v);
  DivisionCert c = divide(P2, Mm);
  const int off = c.pivot_i == c.pivot_j ? 1 : 2;
  for (const FpMultiPoly* R : {&c.R1, &c.R0}) {
    std::map<Exp, FpMultiPoly> coeffs;
    for (auto& [e, x] : R->terms) {
      Exp key = e;
      Exp ne(d, 0);
      for (int s = 0; s < d; ++s) {
        ne[s] = e[off + s];
        key[off + s] = 0;
      }
      auto it = coeffs.try_emplace(key, FpMultiPoly(p, d)).first;
      it->second.add_term(ne, x);
    }
    for (auto& [key, g] : coeffs)
      if (!divide(g, M).exact()) return false;
  }
  return true;
}

struct MonomialTable {
  std::vector<Exp> monos;
  std::vector<i64> vals;  // row-major points x monomials

  MonomialTable(const std::vector<Vec>& pts, int nvars, int deg, i64 p) : monos(monomials_upto(nvars, deg)) {
    vals.resize(pts.size() * monos.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t m = 0; m < monos.size(); ++m) {
        i64 v = 1;
        for (int j = 0; j < nvars; ++j)
          for (int e = 0; e < monos[m][j]; ++e) v = v * pts[i][j] % p;
        vals[i * monos.size() + m] = v;
      }
  }
};

}  // namespace

ProbeReport irreducibility_probe(const MFamily& fam, const QuadForm& M, const std::vector<FpMultiPoly>& trials,
                                 const ProbeOptions& opt) {
  MRepresentation rep = standard_rep(fam);
  ProbeReport out;
  out.codim = rep.total_codim;
  out.hypotheses_met = fam.d >= std::max(2 * rep.total_codim + 1, 4 * fam.k - 1);
  const i64 p = fam.p;
  const int n = fam.k * fam.d;
  int maxdeg = 0;
  for (auto& P : trials) {
    require(P.p == p && P.nvars == n, "trial polynomial lives in a different space");
    maxdeg = std::max(maxdeg, P.degree());
  }
  // Cost of the block-recursive walk, using the expected fiber sizes.
  double cost = 0, prefix = 1;
  for (int i = 0; i < fam.k; ++i) {
    cost += prefix * ipow(double(p), fam.d);
    prefix *= ipow(double(p), fam.d - rep.dimension_vector[i]);
  }
  const bool exact = cost <= opt.enumeration.budget && prefix <= 4e6;
  enum class Shape { Other, Sphere, Box1 } shape = Shape::Other;
  if (!exact) {
    require(M.p == p && M.d == fam.d && M.A == fam.A, "probe form must match the family");
    if (same_rows(rep.family, standard_rep(gowers_family(M, 0)).family)) shape = Shape::Sphere;
    else if (same_rows(rep.family, standard_rep(gowers_family(M, 1)).family)) shape = Shape::Box1;
    else fail(ErrorKind::BudgetExceeded, "M-set too large to enumerate and not a sampled shape");
  }
  out.sampled = !exact;

  std::vector<Vec> pts;
  if (exact) {
    pts = enumerate_mset(fam, opt.enumeration);
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<i64> U(0, p - 1);
    auto sphere_point = [&] {
      Vec x(fam.d);
      do
        for (auto& c : x) c = U(rng);
      while (M.eval(x) != 0);
      return x;
    };
    for (std::uint64_t t = 0; t < opt.samples; ++t) {
      Vec a = sphere_point();
      if (shape == Shape::Box1) {
        Vec m = sphere_point();
        for (int s = 0; s < fam.d; ++s) a.push_back(modp(m[s] - a[s], p));
      }
      pts.push_back(std::move(a));
    }
  }
  MonomialTable tab(pts, n, maxdeg, p);
  const std::size_t nm = tab.monos.size();
  out.verdicts = parallel_map<ProbeVerdict>(trials.size(), opt.enumeration.threads, [&](std::size_t ti) {
    const FpMultiPoly& P = trials[ti];
    Vec coef(nm, 0);
    for (std::size_t m = 0; m < nm; ++m) coef[m] = P.coeff(tab.monos[m]);
    ProbeVerdict v;
    v.sampled = !exact;
    v.total = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const i64* row = &tab.vals[i * nm];
      i64 acc = 0;
      for (std::size_t m = 0; m < nm; ++m) acc = (acc + coef[m] * row[m]) % p;
      if (acc == 0) ++v.hits;
      else if (v.witness.empty()) v.witness = pts[i];
    }
    v.ratio = v.total ? double(v.hits) / double(v.total) : 1.0;
    if (exact) {
      if (v.hits == v.total) v.kind = ProbeVerdict::Kind::Contained;
      else if (v.ratio <= opt.delta) v.kind = ProbeVerdict::Kind::Small;
      else v.kind = ProbeVerdict::Kind::MiddleGround;
      return v;
    }
    v.std_error = std::sqrt(std::max(v.ratio * (1 - v.ratio), 1.0 / double(v.total)) / double(v.total));
    if (v.hits == v.total) {
      bool contained = false;
      if (shape == Shape::Sphere) {
        contained = divide(P, M).exact();
      } else {
        FpMatrix B(p, n, n);  // (n, h) = (n, m) B with h = m - n
        for (int s = 0; s < fam.d; ++s) {
          B(s, s) = 1;
          B(fam.d + s, fam.d + s) = 1;
          B(s, fam.d + s) = p - 1;
        }
        contained = product_contains(linear_substitute(P, B), M);
      }
      v.kind = contained ? ProbeVerdict::Kind::Contained : ProbeVerdict::Kind::MiddleGround;
    } else if (v.ratio + 3 * v.std_error <= opt.delta) {
      v.kind = ProbeVerdict::Kind::Small;
    } else if (v.ratio - 3 * v.std_error > opt.delta) {
      v.kind = ProbeVerdict::Kind::MiddleGround;
    } else {
      v.kind = ProbeVerdict::Kind::Inconclusive;
    }
    return v;
  });
  for (auto& v : out.verdicts) {
    if (v.kind == ProbeVerdict::Kind::MiddleGround) ++out.middle_ground;
    if (v.kind == ProbeVerdict::Kind::Inconclusive) ++out.inconclusive;
  }
  return out;
}

}  // namespace shofa
