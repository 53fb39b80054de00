#include "sphere_hofa/division.hpp"

#include <algorithm>

#include "sphere_hofa/zlocal.hpp"

namespace shofa {

FpMultiPoly linear_substitute(const FpMultiPoly& f, const FpMatrix& B) {
  require(B.rows == f.nvars && B.cols == f.nvars, "substitution matrix shape mismatch");
  std::vector<FpMultiPoly> subs;
  for (int j = 0; j < f.nvars; ++j) {
    FpMultiPoly s(f.p, f.nvars);
    for (int i = 0; i < f.nvars; ++i) s.add_term([&] {
        Exp e(f.nvars, 0);
        e[i] = 1;
        return e;
      }(), B(i, j));
    subs.push_back(s);
  }
  return compose(f, subs);
}

DivisionCert standard_division(const FpMultiPoly& P, const QuadForm& M) {
  require(P.p == M.p && P.nvars == M.d, "division operands live in different spaces");
  require(M.d >= 1, "division needs at least one variable");
  if (P.degree() >= P.p) fail(ErrorKind::InvalidInput, "division needs deg P < p");
  const i64 a = M.A(0, 0);
  if (a == 0) fail(ErrorKind::PivotZero, "upper-left entry of A is zero");
  const i64 ia = inv_mod(a, M.p);
  const FpMultiPoly Mp = M.to_poly();
  DivisionCert c;
  c.Q = FpMultiPoly(P.p, P.nvars);
  c.R1 = FpMultiPoly(P.p, P.nvars);
  c.R0 = FpMultiPoly(P.p, P.nvars);
  c.B = FpMatrix::identity(P.p, P.nvars);
  FpMultiPoly rem = P;
  for (;;) {
    int top = -1;
    for (auto& [e, x] : rem.terms) top = std::max(top, e[0]);
    if (top < 2) break;
    FpMultiPoly t(P.p, P.nvars);
    for (auto& [e, x] : rem.terms)
      if (e[0] == top) {
        Exp e2 = e;
        e2[0] -= 2;
        t.add_term(e2, x * ia);
      }
    c.Q += t;
    rem -= Mp * t;
  }
  for (auto& [e, x] : rem.terms) {
    if (e[0] == 1) {
      Exp e2 = e;
      e2[0] = 0;
      c.R1.add_term(e2, x);
    } else {
      c.R0.add_term(e, x);
    }
  }
  return c;
}

PivotChange pivot_change(const FpMatrix& A) {
  require(A.is_symmetric(), "pivot change needs a symmetric matrix");
  if (A.is_zero()) fail(ErrorKind::ZeroMatrix, "pivot change of the zero matrix");
  const int d = A.rows;
  PivotChange pc;
  pc.B = FpMatrix(A.p, d, d);
  int pi = -1, pj = -1;
  for (int i = 0; i < d && pi < 0; ++i)
    if (A(i, i)) pi = pj = i;
  for (int i = 0; i < d && pi < 0; ++i)
    for (int j = i + 1; j < d; ++j)
      if (A(i, j)) {
        pi = i;
        pj = j;
        break;
      }
  pc.i = pi;
  pc.j = pj;
  // New variables m: m_1 = n_i (or (n_i + n_j)/2, m_2 = (n_i - n_j)/2), the rest
  // in their original order. B expresses n = m B.
  std::vector<int> rest;
  for (int k = 0; k < d; ++k)
    if (k != pi && k != pj) rest.push_back(k);
  if (pi == pj) {
    pc.B(0, pi) = 1;
    for (std::size_t r = 0; r < rest.size(); ++r) pc.B(int(r) + 1, rest[r]) = 1;
  } else {
    pc.B(0, pi) = 1;
    pc.B(0, pj) = 1;
    pc.B(1, pi) = 1;
    pc.B(1, pj) = A.p - 1;
    for (std::size_t r = 0; r < rest.size(); ++r) pc.B(int(r) + 2, rest[r]) = 1;
  }
  return pc;
}

DivisionCert divide(const FpMultiPoly& P, const QuadForm& M) {
  PivotChange pc = pivot_change(M.A);
  QuadForm Mt = QuadForm::from_poly(linear_substitute(M.to_poly(), pc.B));
  DivisionCert c = standard_division(linear_substitute(P, pc.B), Mt);
  c.pivot_i = pc.i;
  c.pivot_j = pc.j;
  c.B = pc.B;
  return c;
}

bool verify_division(const FpMultiPoly& P, const QuadForm& M, const DivisionCert& c) {
  for (auto* r : {&c.R1, &c.R0})
    for (auto& [e, x] : r->terms)
      if (e[0] != 0) return false;
  int dp = P.degree();
  if (c.Q.degree() > std::max(dp - 2, -1) || c.R1.degree() > std::max(dp - 1, -1) || c.R0.degree() > dp)
    return false;
  FpMultiPoly lhs = linear_substitute(P, c.B);
  FpMultiPoly rhs = linear_substitute(M.to_poly(), c.B) * c.Q + FpMultiPoly::var(P.p, P.nvars, 0) * c.R1 + c.R0;
  return lhs == rhs;
}

FpMultiPoly quotient_in_original(const DivisionCert& c) {
  auto inv = inverse(c.B);
  require(inv.has_value(), "singular substitution matrix");
  return linear_substitute(c.Q, *inv);
}

namespace {

// First point of V(M), in lexicographic order, where P does not vanish.
std::optional<Vec> first_nonvanishing(const FpMultiPoly& P, const PointSet& V) {
  for (std::size_t k = 0; k < V.size(); ++k) {
    Vec n = V.point(k);
    if (P.eval(n) != 0) return n;
  }
  return std::nullopt;
}

}  // namespace

NullstellensatzResult nullstellensatz(const FpMultiPoly& P, const QuadForm& M, const EnumOptions& o) {
  NullstellensatzResult res;
  res.division = divide(P, M);
  if (res.division.exact()) {
    res.R = quotient_in_original(res.division);
    res.status = P == M.to_poly() * res.R ? NullstellensatzResult::Status::Certificate
                                          : NullstellensatzResult::Status::Violation;
    return res;
  }
  PointSet V = enumerate_zeros(M, nullptr, o);
  if (auto w = first_nonvanishing(P, V)) {
    res.status = NullstellensatzResult::Status::Witness;
    res.witness = *w;
  } else {
    // V(M) inside V(P) but no exact division: outside the p >> d, s regime.
    res.status = NullstellensatzResult::Status::Violation;
  }
  return res;
}

DichotomyVerdict dichotomy(const FpMultiPoly& P, const QuadForm& M, double delta, const EnumOptions& o) {
  DichotomyVerdict v;
  PointSet V = enumerate_zeros(M, nullptr, o);
  v.total = i64(V.size());
  for (std::size_t k = 0; k < V.size(); ++k) {
    Vec n = V.point(k);
    if (P.eval(n) == 0) ++v.count;
    else if (v.witness.empty()) v.witness = n;
  }
  v.bound_4p = 4 * ipow(double(M.p), M.d - 2);
  v.within_4p = double(v.count) <= v.bound_4p;
  v.within_delta = double(v.count) <= delta * double(v.total);
  if (v.count == v.total) {
    v.kind = DichotomyVerdict::Kind::Contained;
    v.certificate = divide(P, M);
    v.certificate_exact = v.certificate->exact();
  } else {
    v.kind = DichotomyVerdict::Kind::SmallIntersection;
    v.middle_ground = !v.within_4p;
  }
  return v;
}

AntiderivativeResult antiderivative(const FpMultiPoly& Q, const QuadForm& M, const EnumOptions& o) {
  require(Q.p == M.p && Q.nvars == M.d, "operands live in different spaces");
  require(Q.eval(Vec(M.d, 0)) == 0, "antiderivative needs Q(0) = 0");
  if (qf_rank(M) < 3) fail(ErrorKind::RankHypothesis, "antiderivative needs rank M >= 3");
  AntiderivativeResult res;
  const FpMultiPoly Mp = M.to_poly();
  const FpMultiPoly dM1 = derivative(Mp, 0), dQ1 = derivative(Q, 0);
  PointSet V = enumerate_zeros(M, nullptr, o);
  for (int i = 1; i < M.d; ++i) {
    FpMultiPoly D = dM1 * derivative(Q, i) - derivative(Mp, i) * dQ1;
    if (auto w = first_nonvanishing(D, V)) {
      res.status = AntiderivativeResult::Status::HypothesisFailed;
      res.failed_index = i;
      res.witness = *w;
      return res;
    }
  }
  DivisionCert c = divide(Q, M);
  bool constant_rem = c.R1.is_zero() && c.R0.degree() <= 0;
  if (!constant_rem) {
    res.status = AntiderivativeResult::Status::Violation;
    return res;
  }
  res.Qprime = quotient_in_original(c);
  res.constant = c.R0.coeff(Exp(M.d, 0));
  if (res.constant != 0) res.status = AntiderivativeResult::Status::ConstantTerm;
  return res;
}

std::optional<std::vector<FpMultiPoly>> solve_combination(const FpMultiPoly& target,
                                                          const std::vector<FpMultiPoly>& gens,
                                                          const std::vector<int>& degs) {
  require(gens.size() == degs.size(), "one degree bound per generator");
  const i64 p = target.p;
  const int n = target.nvars;
  struct Col {
    std::size_t g;
    Exp mono;
  };
  std::vector<Col> cols;
  std::vector<FpMultiPoly> colpolys;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (degs[g] < 0) continue;
    for (auto& e : monomials_upto(n, degs[g])) {
      cols.push_back({g, e});
      colpolys.push_back(gens[g] * FpMultiPoly::monomial(p, e, 1));
    }
  }
  std::map<Exp, int> rowid;
  auto row_of = [&](const Exp& e) {
    auto [it, ins] = rowid.emplace(e, int(rowid.size()));
    return it->second;
  };
  for (auto& [e, x] : target.terms) row_of(e);
  for (auto& cp : colpolys)
    for (auto& [e, x] : cp.terms) row_of(e);
  FpMatrix L(p, int(rowid.size()), int(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (auto& [e, x] : colpolys[c].terms) L(rowid[e], int(c)) = x;
  Vec rhs(rowid.size(), 0);
  for (auto& [e, x] : target.terms) rhs[rowid[e]] = x;
  auto sol = solve_linear(L, rhs);
  if (!sol) return std::nullopt;
  std::vector<FpMultiPoly> out(gens.size(), FpMultiPoly(p, n));
  for (std::size_t c = 0; c < cols.size(); ++c) out[cols[c].g].add_term(cols[c].mono, sol->particular[c]);
  return out;
}

i64 iterated_delta(const FpMultiPoly& g, const Vec& n, const std::vector<Vec>& hs) {
  const int k = int(hs.size());
  const i64 p = g.p;
  i64 s = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Vec x = n;
    int bits = 0;
    for (int i = 0; i < k; ++i)
      if (mask >> i & 1) {
        ++bits;
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = modp(x[j] + hs[i][j], p);
      }
    i64 v = g.eval(x);
    s = modp((k - bits) % 2 ? s - v : s + v, p);
  }
  return s;
}

namespace {
Vec flatten_cube(const Vec& n, const std::vector<Vec>& hs) {
  Vec t = n;
  for (auto& h : hs) t.insert(t.end(), h.begin(), h.end());
  return t;
}
}  // namespace

IntrinsicResult intrinsic_decompose(const FpMultiPoly& g, const QuadForm& M, int s, const EnumOptions& o) {
  require(g.p == M.p && g.nvars == M.d, "operands live in different spaces");
  require(s >= 1 && g.degree() <= s, "intrinsic_decompose needs 1 <= s and deg g <= s");
  if (qf_rank(M) < s + 3) fail(ErrorKind::RankHypothesis, "intrinsic_decompose needs rank M >= s + 3");
  IntrinsicResult res;
  FpMultiPoly one = FpMultiPoly::constant(g.p, g.nvars, 1);
  if (auto sol = solve_combination(g, {M.to_poly(), one}, {s - 2, s - 1})) {
    res.g1 = (*sol)[0];
    res.g2 = (*sol)[1];
    return res;
  }
  PointSet V = enumerate_zeros(M, nullptr, o);
  bool found = scan_gowers(V, s, [&](const Vec& n, const std::vector<Vec>& hs) {
    if (iterated_delta(g, n, hs) == 0) return false;
    res.witness = flatten_cube(n, hs);
    return true;
  });
  res.status = found ? IntrinsicResult::Status::Witness : IntrinsicResult::Status::Violation;
  return res;
}

GowersEquationResult gowers_equation_solve(const FpMultiPoly& P, const FpMultiPoly& Q, const QuadForm& M,
                                           int s, int k, const EnumOptions& o) {
  require(P.p == M.p && Q.p == M.p && P.nvars == M.d && Q.nvars == M.d, "operands live in different spaces");
  require(s >= 1, "s must be positive");
  require(P.degree() <= k - 1 && Q.degree() <= k, "degree bounds deg P <= k-1, deg Q <= k");
  if (qf_rank(M) < s + 3) fail(ErrorKind::RankHypothesis, "gowers_equation_solve needs rank M >= s + 3");
  GowersEquationResult res;
  PointSet V = enumerate_zeros(M, nullptr, o);
  bool violated = scan_gowers(V, s, [&](const Vec& n, const std::vector<Vec>& hs) {
    std::vector<Vec> head(hs.begin(), hs.end() - 1);
    i64 lhs = modp(iterated_delta(P, n, head) + iterated_delta(Q, n, hs), M.p);
    if (lhs == 0) return false;
    res.witness = flatten_cube(n, hs);
    return true;
  });
  if (violated) {
    res.status = GowersEquationResult::Status::HypothesisFailed;
    return res;
  }
  FpMultiPoly one = FpMultiPoly::constant(M.p, M.d, 1);
  FpMultiPoly Mp = M.to_poly();
  auto ps = solve_combination(P, {Mp, one}, {k - 3, s - 2});
  auto qs = solve_combination(Q, {Mp, one}, {k - 2, s - 1});
  if (!ps || !qs) {
    res.status = GowersEquationResult::Status::NoSolution;
    return res;
  }
  res.P1 = (*ps)[0];
  res.P2 = (*ps)[1];
  res.Q1 = (*qs)[0];
  res.Q2 = (*qs)[1];
  return res;
}

// ---------------------------------------------------------------- Z/p lifts

QuadForm reduce_form(const RatMultiPoly& M, i64 p) {
  if (M.degree() > 2) fail(ErrorKind::InvalidInput, "quadratic form needs degree <= 2");
  return QuadForm::from_poly(induce(M, p));
}

RatMultiPoly lift_form(const QuadForm& M) { return regular_lift(M.to_poly()); }

LiftNullResult lift_nullstellensatz(const RatMultiPoly& P, const RatMultiPoly& M, i64 p, const EnumOptions& o) {
  require(P.nvars == M.nvars, "operands live in different spaces");
  QuadForm Mb = reduce_form(M, p);
  if (qf_rank(Mb) < 3) fail(ErrorKind::RankHypothesis, "lift_nullstellensatz needs p-rank >= 3");
  FpMultiPoly Pb = induce(P, p);
  LiftNullResult res;
  NullstellensatzResult nr = nullstellensatz(Pb, Mb, o);
  if (nr.status == NullstellensatzResult::Status::Witness) {
    res.status = LiftNullResult::Status::Witness;
    res.witness = nr.witness;  // canonical representatives: M(n) in Z, P(n) not in Z
    return res;
  }
  if (nr.status == NullstellensatzResult::Status::Violation) {
    res.status = LiftNullResult::Status::Violation;
    return res;
  }
  // P - M tau(R) is Z/p-valued and induces Pb - Mb R = 0, so it is integer valued.
  res.P1 = to_rat(nr.R);
  res.P0 = P - M * res.P1;
  if (!is_integer_valued(res.P0)) res.status = LiftNullResult::Status::Violation;
  return res;
}

namespace {

struct Column {
  int block;  // power of M, or 0 for the R0 block
  Exp index;  // binomial multi-index
};

// Solves f = sum over columns of c * colpoly with c in Z_(p); drop_constant skips
// the constant-monomial equation.
std::optional<std::vector<Rat>> solve_columns(const RatMultiPoly& f, const std::vector<RatMultiPoly>& colpolys,
                                              i64 p, bool drop_constant, bool* consistent) {
  const Exp zero(f.nvars, 0);
  std::map<Exp, int> rowid;
  auto add_row = [&](const Exp& e) {
    if (drop_constant && e == zero) return;
    rowid.emplace(e, int(rowid.size()));
  };
  for (auto& [e, c] : f.terms) add_row(e);
  for (auto& cp : colpolys)
    for (auto& [e, c] : cp.terms) add_row(e);
  std::vector<std::vector<Rat>> L(rowid.size(), std::vector<Rat>(colpolys.size(), 0));
  std::vector<Rat> b(rowid.size(), 0);
  for (std::size_t c = 0; c < colpolys.size(); ++c)
    for (auto& [e, x] : colpolys[c].terms) {
      auto it = rowid.find(e);
      if (it != rowid.end()) L[it->second][c] = x;
    }
  for (auto& [e, x] : f.terms) {
    auto it = rowid.find(e);
    if (it != rowid.end()) b[it->second] = x;
  }
  LocalSolution sol = solve_local(std::move(L), std::move(b), p);
  if (consistent) *consistent = sol.consistent;
  if (!sol.integral) return std::nullopt;
  return sol.x;
}

SphereDecomposition assemble(const RatMultiPoly& f, const std::vector<Column>& cols,
                             const std::vector<Rat>& x, int nblocks) {
  SphereDecomposition dec;
  mpz_class Q0 = 1;
  for (auto& c : x) mpz_lcm(Q0.get_mpz_t(), Q0.get_mpz_t(), c.get_den_mpz_t());
  dec.Q0 = Q0;
  std::vector<std::map<Exp, Rat>> bc(nblocks);
  for (std::size_t c = 0; c < cols.size(); ++c)
    if (x[c] != 0) bc[cols[c].block][cols[c].index] = x[c] * Q0;
  for (int i = 0; i < nblocks; ++i) dec.R.push_back(from_binomial(f.nvars, bc[i]));
  return dec;
}

}  // namespace

SphereDecomposition sphere_vanishing_decompose(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                               const EnumOptions& o) {
  require(f.nvars == M.nvars, "operands live in different spaces");
  if (f.degree() >= p) fail(ErrorKind::InvalidInput, "needs deg f < p");
  QuadForm Mb = reduce_form(M, p);
  if (qf_rank(Mb) < 3) fail(ErrorKind::RankHypothesis, "needs p-rank >= 3");
  const int d = f.nvars;
  const int s = std::max(f.degree(), 0);
  SphereDecomposition dec;
  Vec w;
  if (!integral_on_fibers(f, p, enumerate_zeros(Mb, nullptr, o).points(), &w)) {
    dec.status = SphereDecomposition::Status::Witness;
    dec.witness = w;
    return dec;
  }
  std::vector<Column> cols;
  std::vector<RatMultiPoly> colpolys;
  RatMultiPoly Mi = RatMultiPoly::constant(d, 1);
  for (int i = 0; 2 * i <= s; ++i) {
    for (auto& j : monomials_upto(d, s - 2 * i)) {
      cols.push_back({i, j});
      colpolys.push_back(Mi * from_binomial(d, {{j, Rat(1)}}));
    }
    Mi = Mi * M;
  }
  auto x = solve_columns(f, colpolys, p, false, nullptr);
  if (!x) {
    dec.status = SphereDecomposition::Status::Violation;
    dec.note = "member of the sphere-integral class without a Z_(p) decomposition";
    return dec;
  }
  SphereDecomposition out = assemble(f, cols, *x, s / 2 + 1);
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), p, s / 2);
  out.pfloor_integer_valued = is_integer_valued(f.scaled(Rat(pw)));
  return out;
}

SphereDecomposition sphere_periodic_decompose(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                              const EnumOptions& o) {
  require(f.nvars == M.nvars, "operands live in different spaces");
  if (f.degree() >= p) fail(ErrorKind::InvalidInput, "needs deg f < p");
  QuadForm Mb = reduce_form(M, p);
  if (qf_rank(Mb) < 3) fail(ErrorKind::RankHypothesis, "needs p-rank >= 3");
  const int d = f.nvars;
  const int s = std::max(f.degree(), 0);
  SphereDecomposition dec;
  Vec w;
  if (!is_partially_p_periodic_on(f, p, enumerate_zeros(Mb, nullptr, o).points(), &w)) {
    dec.status = SphereDecomposition::Status::Witness;
    dec.witness = w;
    return dec;
  }
  std::vector<Column> cols;
  std::vector<RatMultiPoly> colpolys;
  for (auto& j : monomials_upto(d, s)) {
    cols.push_back({0, j});
    colpolys.push_back(from_binomial(d, {{j, Rat(1, p)}}));
  }
  RatMultiPoly Mi = M * M;
  for (int i = 2; 2 * i <= s; ++i) {
    for (auto& j : monomials_upto(d, s - 2 * i)) {
      cols.push_back({i, j});
      colpolys.push_back(Mi * from_binomial(d, {{j, Rat(1)}}));
    }
    Mi = Mi * M;
  }
  // Try C = 0 first; otherwise let the constant equation float and read C off.
  bool drop = false;
  auto x = solve_columns(f, colpolys, p, false, nullptr);
  if (!x) {
    drop = true;
    std::vector<Column> c2;
    std::vector<RatMultiPoly> p2;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (!(cols[c].block == 0 && total_degree(cols[c].index) == 0)) {
        c2.push_back(cols[c]);
        p2.push_back(colpolys[c]);
      }
    cols = std::move(c2);
    colpolys = std::move(p2);
    x = solve_columns(f, colpolys, p, true, nullptr);
  }
  if (!x) {
    dec.status = SphereDecomposition::Status::Violation;
    dec.note = "partially periodic without a Z_(p) decomposition";
    return dec;
  }
  SphereDecomposition out = assemble(f, cols, *x, s / 2 + 1);
  if (int(out.R.size()) > 1) out.R[1] = RatMultiPoly(d);
  RatMultiPoly rhs = out.R[0].scaled(Rat(1, p));
  RatMultiPoly Mi2 = M * M;
  for (std::size_t i = 2; i < out.R.size(); ++i) {
    rhs += Mi2 * out.R[i];
    Mi2 = Mi2 * M;
  }
  out.C = drop ? Rat(out.Q0) * f.coeff(Exp(d, 0)) - rhs.coeff(Exp(d, 0)) : Rat(0);
  return out;
}

bool verify_sphere_decomposition(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                 const SphereDecomposition& dec, bool periodic) {
  if (dec.status != SphereDecomposition::Status::Decomposed) return false;
  mpz_class pp = p;
  if (dec.Q0 <= 0 || mpz_divisible_p(dec.Q0.get_mpz_t(), pp.get_mpz_t())) return false;
  const int d = f.nvars;
  const int s = std::max(f.degree(), 0);
  RatMultiPoly rhs = RatMultiPoly::constant(d, dec.C);
  RatMultiPoly Mi = RatMultiPoly::constant(d, 1);
  for (std::size_t i = 0; i < dec.R.size(); ++i) {
    const RatMultiPoly& Ri = dec.R[i];
    if (!is_integer_valued(Ri)) return false;
    if (!Ri.is_zero() && Ri.degree() > s - 2 * int(i)) return false;
    if (periodic && i == 1 && !Ri.is_zero()) return false;
    rhs += (periodic && i == 0) ? Ri.scaled(Rat(1, p)) : Mi * Ri;
    Mi = Mi * M;
  }
  if (!periodic && dec.C != 0) return false;
  return f.scaled(Rat(dec.Q0)) == rhs;
}

}  // namespace shofa
