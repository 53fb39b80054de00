#include "sphere_hofa/ffcore.hpp"

#include <string>
#include <utility>

namespace shofa {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NotIntegerValued: return "NotIntegerValued";
    case ErrorKind::ValueRange: return "ValueRangeError";
    case ErrorKind::RankHypothesis: return "RankHypothesisFailed";
    case ErrorKind::PivotZero: return "PivotZero";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::DependentShifts: return "DependentShifts";
    case ErrorKind::NotConsistent: return "NotConsistent";
    case ErrorKind::RankTooSmall: return "RankTooSmall";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

i64 inv_mod(i64 a, i64 p) {
  i64 r0 = p, r1 = modp(a, p), s0 = 0, s1 = 1;
  if (r1 == 0) fail(ErrorKind::InvalidInput, "inverse of zero mod " + std::to_string(p));
  while (r1 != 0) {
    i64 q = r0 / r1;
    std::swap(r0, r1);
    r1 -= q * r0;
    std::swap(s0, s1);
    s1 -= q * s0;
  }
  return modp(s0, p);
}

i64 pow_mod(i64 a, std::uint64_t e, i64 p) {
  i64 b = modp(a, p), r = 1 % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

PrimeField::PrimeField(i64 p) : p_(p) {
  if (p < 5 || p >= (i64(1) << 31) || !is_prime(p))
    fail(ErrorKind::InvalidInput, "modulus must be a prime with 5 <= p < 2^31, got " + std::to_string(p));
}

int PrimeField::legendre(i64 a) const {
  a = reduce(a);
  if (a == 0) return 0;
  return pow(a, std::uint64_t(p_ - 1) / 2) == 1 ? 1 : -1;
}

i64 PrimeField::smallest_nonresidue() const {
  for (i64 c = 2; c < p_; ++c)
    if (legendre(c) == -1) return c;
  return 0;  // unreachable for odd p
}

std::optional<i64> PrimeField::sqrt(i64 a) const {
  a = reduce(a);
  if (a == 0) return 0;
  if (legendre(a) != 1) return std::nullopt;
  for (i64 x = 1; x <= p_ / 2; ++x)
    if (x * x % p_ == a) return x;
  return std::nullopt;
}

FpMatrix FpMatrix::identity(i64 p, int n) {
  FpMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

FpMatrix FpMatrix::from_rows(i64 p, const std::vector<Vec>& rs) {
  int c = rs.empty() ? 0 : int(rs[0].size());
  FpMatrix m(p, int(rs.size()), c);
  for (int i = 0; i < m.rows; ++i) {
    require(int(rs[i].size()) == c, "ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = modp(rs[i][j], p);
  }
  return m;
}

Vec FpMatrix::row(int i) const {
  return Vec(data.begin() + std::size_t(i) * cols, data.begin() + std::size_t(i + 1) * cols);
}

std::vector<Vec> FpMatrix::to_rows() const {
  std::vector<Vec> out;
  for (int i = 0; i < rows; ++i) out.push_back(row(i));
  return out;
}

bool FpMatrix::is_zero() const {
  for (i64 x : data)
    if (x) return false;
  return true;
}

bool FpMatrix::is_symmetric() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < i; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

FpMatrix transpose(const FpMatrix& m) {
  FpMatrix t(m.p, m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

FpMatrix mul(const FpMatrix& a, const FpMatrix& b) {
  require(a.cols == b.rows && a.p == b.p, "matrix product shape mismatch");
  FpMatrix c(a.p, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      i64 x = a(i, k);
      if (!x) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) = (c(i, j) + x * b(k, j)) % a.p;
    }
  return c;
}

Vec mul(const Vec& r, const FpMatrix& m) {
  require(int(r.size()) == m.rows, "vector-matrix shape mismatch");
  Vec out(m.cols, 0);
  for (int k = 0; k < m.rows; ++k) {
    i64 x = modp(r[k], m.p);
    if (!x) continue;
    for (int j = 0; j < m.cols; ++j) out[j] = (out[j] + x * m(k, j)) % m.p;
  }
  return out;
}

i64 dot(const Vec& a, const Vec& b, i64 p) {
  require(a.size() == b.size(), "dot product length mismatch");
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = (s + modp(a[i], p) * modp(b[i], p)) % p;
  return s;
}

RrefResult rref(const FpMatrix& m) {
  RrefResult res{m, 0, {}};
  FpMatrix& a = res.matrix;
  const i64 p = a.p;
  int r = 0;
  for (int c = 0; c < a.cols && r < a.rows; ++c) {
    int piv = -1;
    for (int i = r; i < a.rows; ++i)
      if (a(i, c)) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols; ++j) std::swap(a(r, j), a(piv, j));
    i64 iv = inv_mod(a(r, c), p);
    for (int j = c; j < a.cols; ++j) a(r, j) = a(r, j) * iv % p;
    for (int i = 0; i < a.rows; ++i) {
      if (i == r || !a(i, c)) continue;
      i64 f = a(i, c);
      for (int j = c; j < a.cols; ++j) a(i, j) = modp(a(i, j) - f * a(r, j), p);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

int rank(const FpMatrix& m) { return rref(m).rank; }

i64 det(const FpMatrix& m) {
  require(m.rows == m.cols, "determinant of non-square matrix");
  FpMatrix a = m;
  const i64 p = a.p;
  i64 d = 1;
  for (int c = 0; c < a.cols; ++c) {
    int piv = -1;
    for (int i = c; i < a.rows; ++i)
      if (a(i, c)) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < a.cols; ++j) std::swap(a(c, j), a(piv, j));
      d = modp(-d, p);
    }
    d = d * a(c, c) % p;
    i64 iv = inv_mod(a(c, c), p);
    for (int i = c + 1; i < a.rows; ++i) {
      if (!a(i, c)) continue;
      i64 f = a(i, c) * iv % p;
      for (int j = c; j < a.cols; ++j) a(i, j) = modp(a(i, j) - f * a(c, j), p);
    }
  }
  return d;
}

std::optional<FpMatrix> inverse(const FpMatrix& m) {
  require(m.rows == m.cols, "inverse of non-square matrix");
  int n = m.rows;
  FpMatrix aug(m.p, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RrefResult r = rref(aug);
  if (r.rank < n || r.pivots[n - 1] != n - 1) return std::nullopt;
  FpMatrix out(m.p, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = r.matrix(i, n + j);
  return out;
}

std::vector<Vec> nullspace(const FpMatrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : r.pivots) is_piv[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(m.cols, 0);
    v[f] = 1;
    for (int i = 0; i < r.rank; ++i) v[r.pivots[i]] = modp(-r.matrix(i, f), m.p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<LinearSolution> solve_linear(const FpMatrix& m, const Vec& rhs) {
  require(int(rhs.size()) == m.rows, "right-hand side length mismatch");
  FpMatrix aug(m.p, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = modp(rhs[i], m.p);
  }
  RrefResult r = rref(aug);
  if (r.rank > 0 && r.pivots.back() == m.cols) return std::nullopt;
  LinearSolution sol;
  sol.particular.assign(m.cols, 0);
  for (int i = 0; i < r.rank; ++i) sol.particular[r.pivots[i]] = r.matrix(i, m.cols);
  sol.kernel = nullspace(m);
  return sol;
}

}  // namespace shofa
