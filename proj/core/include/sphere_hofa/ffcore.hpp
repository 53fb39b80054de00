#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sphere_hofa/error.hpp"

namespace shofa {

using i64 = std::int64_t;
using Vec = std::vector<i64>;

// Residue helpers; all results canonical in [0, p).
inline i64 modp(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}
i64 inv_mod(i64 a, i64 p);  // extended Euclid; throws on a == 0 mod p
i64 pow_mod(i64 a, std::uint64_t e, i64 p);
bool is_prime(i64 n);

class PrimeField {
 public:
  // Requires p odd prime, 5 <= p < 2^31.
  explicit PrimeField(i64 p);

  i64 p() const { return p_; }
  i64 reduce(i64 a) const { return modp(a, p_); }
  i64 add(i64 a, i64 b) const { return modp(a + b, p_); }
  i64 sub(i64 a, i64 b) const { return modp(a - b, p_); }
  i64 mul(i64 a, i64 b) const { return modp(a * b, p_); }
  i64 neg(i64 a) const { return modp(-a, p_); }
  i64 inv(i64 a) const { return inv_mod(a, p_); }
  i64 pow(i64 a, std::uint64_t e) const { return pow_mod(a, e, p_); }

  int legendre(i64 a) const;
  i64 smallest_nonresidue() const;
  // Some square root of a (the smaller of the two), or nullopt for a non-residue.
  std::optional<i64> sqrt(i64 a) const;

 private:
  i64 p_;
};

struct FpMatrix {
  i64 p = 5;
  int rows = 0, cols = 0;
  std::vector<i64> data;

  FpMatrix() = default;
  FpMatrix(i64 p_, int r, int c) : p(p_), rows(r), cols(c), data(std::size_t(r) * c, 0) {}
  static FpMatrix identity(i64 p, int n);
  static FpMatrix from_rows(i64 p, const std::vector<Vec>& rows);

  i64& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  i64 operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }
  Vec row(int i) const;
  std::vector<Vec> to_rows() const;
  bool is_zero() const;
  bool is_symmetric() const;
  bool operator==(const FpMatrix& o) const = default;
};

FpMatrix transpose(const FpMatrix& m);
FpMatrix mul(const FpMatrix& a, const FpMatrix& b);
Vec mul(const Vec& row, const FpMatrix& m);  // row vector times matrix
i64 dot(const Vec& a, const Vec& b, i64 p);

struct RrefResult {
  FpMatrix matrix;
  int rank = 0;
  std::vector<int> pivots;
};

// Unique reduced row echelon form; pivots chosen leftmost column, topmost row.
RrefResult rref(const FpMatrix& m);
int rank(const FpMatrix& m);
i64 det(const FpMatrix& m);
std::optional<FpMatrix> inverse(const FpMatrix& m);

// Basis of {x : m x = 0}, in RREF free-variable order.
std::vector<Vec> nullspace(const FpMatrix& m);

struct LinearSolution {
  Vec particular;
  std::vector<Vec> kernel;
};

// Solves m x = rhs. nullopt when infeasible.
std::optional<LinearSolution> solve_linear(const FpMatrix& m, const Vec& rhs);

}  // namespace shofa
