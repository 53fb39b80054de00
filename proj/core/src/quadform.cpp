#include "sphere_hofa/quadform.hpp"

#include <cmath>
#include <utility>

namespace shofa {

QuadForm::QuadForm(FpMatrix A_, Vec u_, i64 v_) : p(A_.p), d(A_.rows), A(std::move(A_)), u(std::move(u_)) {
  require(A.rows == A.cols, "form matrix must be square");
  require(A.is_symmetric(), "form matrix must be symmetric");
  if (u.empty()) u.assign(d, 0);
  require(int(u.size()) == d, "linear part length mismatch");
  for (auto& x : u) x = modp(x, p);
  v = modp(v_, p);
}

QuadForm QuadForm::sphere(i64 p, int d, i64 r) {
  return QuadForm(FpMatrix::identity(p, d), Vec(d, 0), -r);
}

QuadForm QuadForm::from_poly(const FpMultiPoly& f) {
  require(f.degree() <= 2, "quadratic form needs degree <= 2");
  const i64 p = f.p;
  const int d = f.nvars;
  const i64 half = inv_mod(2, p);
  FpMatrix A(p, d, d);
  Vec u(d, 0);
  i64 v = 0;
  for (auto& [e, c] : f.terms) {
    std::vector<int> idx;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < e[i]; ++k) idx.push_back(i);
    if (idx.empty()) v = c;
    else if (idx.size() == 1) u[idx[0]] = c;
    else if (idx[0] == idx[1]) A(idx[0], idx[0]) = c;
    else A(idx[0], idx[1]) = A(idx[1], idx[0]) = c * half % p;
  }
  return QuadForm(A, u, v);
}

i64 QuadForm::quad(const Vec& n) const { return dot(mul(n, A), n, p); }

i64 QuadForm::eval(const Vec& n) const {
  return modp(quad(n) + dot(u, n, p) + v, p);
}

FpMultiPoly QuadForm::to_poly() const {
  FpMultiPoly f(p, d);
  for (int i = 0; i < d; ++i) {
    Exp e(d, 0);
    e[i] = 2;
    f.add_term(e, A(i, i));
    for (int j = i + 1; j < d; ++j) {
      Exp e2(d, 0);
      e2[i] = e2[j] = 1;
      f.add_term(e2, 2 * A(i, j));
    }
    Exp e1(d, 0);
    e1[i] = 1;
    f.add_term(e1, u[i]);
  }
  f.add_term(Exp(d, 0), v);
  return f;
}

bool QuadForm::is_homogeneous() const { return is_pure() && v == 0; }

bool QuadForm::is_pure() const {
  for (i64 x : u)
    if (x) return false;
  return true;
}

AffineSubspace AffineSubspace::full(i64 p, int d) {
  AffineSubspace s;
  s.p = p;
  s.d = d;
  for (int i = 0; i < d; ++i) {
    Vec e(d, 0);
    e[i] = 1;
    s.basis.push_back(e);
  }
  s.offset.assign(d, 0);
  return s;
}

Vec AffineSubspace::point(const Vec& t) const {
  Vec x = offset;
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (int j = 0; j < d; ++j) x[j] = modp(x[j] + t[k] * basis[k][j], p);
  return x;
}

int qf_rank(const QuadForm& M) { return rank(M.A); }

namespace {

// Applies n-space substitution rows: T <- E T and D <- E D E^T.
struct Congruence {
  i64 p;
  FpMatrix T, D;

  void swap(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < T.cols; ++c) std::swap(T(i, c), T(j, c));
    for (int c = 0; c < D.cols; ++c) std::swap(D(i, c), D(j, c));
    for (int r = 0; r < D.rows; ++r) std::swap(D(r, i), D(r, j));
  }
  // row i += f * row j
  void add(int i, int j, i64 f) {
    for (int c = 0; c < T.cols; ++c) T(i, c) = modp(T(i, c) + f * T(j, c), p);
    for (int c = 0; c < D.cols; ++c) D(i, c) = modp(D(i, c) + f * D(j, c), p);
    for (int r = 0; r < D.rows; ++r) D(r, i) = modp(D(r, i) + f * D(r, j), p);
  }
  void scale(int i, i64 f) {
    for (int c = 0; c < T.cols; ++c) T(i, c) = modp(T(i, c) * f, p);
    for (int c = 0; c < D.cols; ++c) D(i, c) = modp(D(i, c) * f, p);
    for (int r = 0; r < D.rows; ++r) D(r, i) = modp(D(r, i) * f, p);
  }
  void apply(const FpMatrix& E) {
    T = mul(E, T);
    D = mul(mul(E, D), transpose(E));
  }
};

}  // namespace

NormalizationCert normalize(const QuadForm& M) {
  const i64 p = M.p;
  const int d = M.d;
  PrimeField F(p);
  Congruence g{p, FpMatrix::identity(p, d), M.A};

  int r = 0;
  for (; r < d; ++r) {
    int piv = -1;
    for (int i = r; i < d && piv < 0; ++i)
      if (g.D(i, i)) piv = i;
    if (piv < 0) {
      // No diagonal pivot left: fold an off-diagonal pair, 2 D_ij != 0.
      for (int i = r; i < d && piv < 0; ++i)
        for (int j = i + 1; j < d; ++j)
          if (g.D(i, j)) {
            g.add(i, j, 1);
            piv = i;
            break;
          }
    }
    if (piv < 0) break;
    g.swap(r, piv);
    i64 iv = F.inv(g.D(r, r));
    for (int i = r + 1; i < d; ++i)
      if (g.D(i, r)) g.add(i, r, F.neg(F.mul(g.D(i, r), iv)));
  }

  const i64 c = F.smallest_nonresidue();
  std::vector<int> cpos;
  for (int i = 0; i < r; ++i) {
    i64 a = g.D(i, i);
    if (auto s = F.sqrt(a)) {
      g.scale(i, F.inv(*s));
    } else {
      g.scale(i, F.inv(*F.sqrt(F.mul(a, F.inv(c)))));
      cpos.push_back(i);
    }
  }
  // c(x^2 + y^2) = X^2 + Y^2 with x = (aX + Y)/c, y = (X - aY)/c, a^2 + 1 = c.
  const i64 a = *F.sqrt(c - 1);
  const i64 ic = F.inv(c);
  while (cpos.size() >= 2) {
    int i = cpos[cpos.size() - 2], j = cpos.back();
    cpos.resize(cpos.size() - 2);
    FpMatrix E = FpMatrix::identity(p, d);
    E(i, i) = F.mul(a, ic);
    E(i, j) = ic;
    E(j, i) = ic;
    E(j, j) = F.neg(F.mul(a, ic));
    g.apply(E);
  }
  NormalizationCert cert;
  cert.dprime = r;
  cert.c = 1;
  if (!cpos.empty()) {
    g.swap(0, cpos[0]);
    cert.c = c;
  }

  // Linear part in m-coordinates: w = T u.
  Vec w(d, 0);
  for (int i = 0; i < d; ++i) w[i] = dot(g.T.row(i), M.u, p);
  Vec t(d, 0);
  i64 lam = F.neg(M.v);
  for (int i = 0; i < r; ++i) {
    i64 ai = g.D(i, i);
    t[i] = F.neg(F.mul(w[i], F.inv(F.mul(2, ai))));
    lam = F.add(lam, F.mul(F.mul(w[i], w[i]), F.inv(F.mul(4, ai))));
  }
  cert.shift = mul(t, g.T);
  cert.lambda = lam;

  int j0 = -1;
  for (int j = r; j < d; ++j)
    if (w[j]) { j0 = j; break; }
  if (j0 >= 0) {
    g.swap(r, j0);
    std::swap(w[r], w[j0]);
    FpMatrix E = FpMatrix::identity(p, d);
    i64 iw = F.inv(w[r]);
    E(r, r) = iw;
    for (int i = r + 1; i < d; ++i) E(i, r) = F.neg(F.mul(w[i], iw));
    g.apply(E);
    cert.cprime = 1;
  }
  cert.R = g.T;
  return cert;
}

FpMultiPoly normal_form_poly(const NormalizationCert& cert, i64 p, int d) {
  FpMultiPoly f(p, d);
  for (int i = 0; i < cert.dprime; ++i) {
    Exp e(d, 0);
    e[i] = 2;
    f.add_term(e, i == 0 ? cert.c : 1);
  }
  if (cert.dprime < d && cert.cprime) {
    Exp e(d, 0);
    e[cert.dprime] = 1;
    f.add_term(e, cert.cprime);
  }
  f.add_term(Exp(d, 0), -cert.lambda);
  return f;
}

bool verify_normalization(const QuadForm& M, const NormalizationCert& cert) {
  const i64 p = M.p;
  const int d = M.d;
  if (cert.R.rows != d || cert.R.cols != d || det(cert.R) == 0) return false;
  std::vector<FpMultiPoly> subs;
  for (int j = 0; j < d; ++j) {
    FpMultiPoly s = FpMultiPoly::constant(p, d, cert.shift[j]);
    for (int i = 0; i < d; ++i) s += FpMultiPoly::var(p, d, i).scaled(cert.R(i, j));
    subs.push_back(s);
  }
  return compose(M.to_poly(), subs) == normal_form_poly(cert, p, d);
}

std::vector<Vec> perp(const QuadForm& M, const std::vector<Vec>& V) {
  if (V.empty()) return AffineSubspace::full(M.p, M.d).basis;
  std::vector<Vec> rows;
  for (auto& m : V) rows.push_back(mul(m, M.A));
  return nullspace(FpMatrix::from_rows(M.p, rows));
}

bool isotropic_test(const QuadForm& M, const std::vector<Vec>& hs) {
  const int k = int(hs.size());
  if (k == 0) return false;
  FpMatrix G(M.p, k, k);
  for (int i = 0; i < k; ++i) {
    Vec hi = mul(hs[i], M.A);
    for (int j = 0; j < k; ++j) G(i, j) = dot(hi, hs[j], M.p);
  }
  return det(G) == 0;
}

QuadForm restrict_to(const QuadForm& M, const AffineSubspace& S) {
  const int k = S.dim();
  const i64 p = M.p;
  if (k == 0) return QuadForm(FpMatrix(p, 0, 0), {}, M.eval(S.offset));
  FpMatrix B = FpMatrix::from_rows(p, S.basis);
  FpMatrix A2 = mul(mul(B, M.A), transpose(B));
  // linear: 2 (cA) B^T + u B^T ; constant M(c)
  Vec cA = mul(S.offset, M.A);
  Vec u2(k, 0);
  for (int i = 0; i < k; ++i) u2[i] = modp(2 * dot(cA, S.basis[i], p) + dot(M.u, S.basis[i], p), p);
  return QuadForm(A2, u2, M.eval(S.offset));
}

int restricted_rank(const QuadForm& M, const AffineSubspace& S) {
  if (S.dim() == 0) return 0;
  FpMatrix B = FpMatrix::from_rows(M.p, S.basis);
  return rank(mul(mul(B, M.A), transpose(B)));
}

std::vector<Vec> find_nonisotropic(const QuadForm& M, int k) {
  int r = qf_rank(M);
  if (k < 0 || k > r) fail(ErrorKind::RankTooSmall, "requested dimension exceeds rank");
  NormalizationCert cert = normalize(M);
  std::vector<Vec> out;
  for (int i = 0; i < k; ++i) out.push_back(cert.R.row(i));
  return out;
}

ParallelCertificate parallel_certificate(const FpMatrix& A, const FpMatrix& B, const Vec& v,
                                         const std::vector<Vec>& W) {
  const i64 p = A.p;
  const int d = A.rows;
  require(A.is_symmetric() && B.rows == d && B.cols == d && int(v.size()) == d, "shape mismatch");
  if (rank(A) < 3) fail(ErrorKind::RankHypothesis, "parallel_certificate needs rank A >= 3");
  if (std::pow(double(p), d) > 1e7) fail(ErrorKind::BudgetExceeded, "p^d exceeds 10^7");
  ParallelCertificate res;
  for (const Vec& w : W) {
    // (nA).w = n.(Aw) and (nB+v).w = n.(Bw) + v.w.
    Vec Aw(d, 0), Bw(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Aw[i] = modp(Aw[i] + A(i, j) * w[j], p);
        Bw[i] = modp(Bw[i] + B(i, j) * w[j], p);
      }
    i64 vw = dot(v, w, p);
    bool aw_zero = true;
    for (i64 x : Aw) aw_zero &= x == 0;
    bool ok;
    if (aw_zero) {
      ok = vw == 0;
      for (i64 x : Bw) ok &= x == 0;
    } else {
      FpMatrix two = FpMatrix::from_rows(p, {Aw, Bw});
      ok = vw == 0 && rank(two) == 1;
    }
    if (ok) continue;
    // Lexicographically first violating n.
    Vec n(d, 0);
    for (;;) {
      if (dot(n, Aw, p) == 0 && modp(dot(n, Bw, p) + vw, p) != 0) break;
      int k = d - 1;
      while (k >= 0 && ++n[k] == p) n[k--] = 0;
      if (k < 0) break;
    }
    res.status = ParallelCertificate::Status::HypothesisFailed;
    res.witness_n = n;
    res.witness_w = w;
    return res;
  }
  // Hypothesis holds on W: read c off a nonzero entry of A.
  i64 c = 0;
  for (int i = 0; i < d * d; ++i)
    if (A.data[i]) {
      c = modp(B.data[i] * inv_mod(A.data[i], p), p);
      break;
    }
  bool parallel = true;
  for (int i = 0; i < d * d; ++i) parallel &= B.data[i] == modp(c * A.data[i], p);
  for (i64 x : v) parallel &= modp(x, p) == 0;
  res.c = c;
  if (!parallel) res.status = ParallelCertificate::Status::TheoremViolation;
  return res;
}

}  // namespace shofa
