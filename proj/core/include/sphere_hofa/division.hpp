#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/fpoly.hpp"
#include "sphere_hofa/quadform.hpp"

namespace shofa {

// P(nB) = M(nB) Q(n) + n1 R1(n') + R0(n'), n' = (n2..nd). B is the identity
// for standard division.
struct DivisionCert {
  FpMultiPoly Q, R1, R0;
  int pivot_i = 0, pivot_j = 0;  // 0-based
  FpMatrix B;
  bool exact() const { return R1.is_zero() && R0.is_zero(); }
};

DivisionCert standard_division(const FpMultiPoly& P, const QuadForm& M);

struct PivotChange {
  int i = 0, j = 0;  // 0-based; i == j for a diagonal pivot
  FpMatrix B;        // substitution n = m B; row 0 of B is e_i or e_i + e_j
};
PivotChange pivot_change(const FpMatrix& A);

// Division after the pivot change; works for any nonzero A.
DivisionCert divide(const FpMultiPoly& P, const QuadForm& M);
bool verify_division(const FpMultiPoly& P, const QuadForm& M, const DivisionCert& c);
// Q(n B^{-1}): the quotient in the original coordinates.
FpMultiPoly quotient_in_original(const DivisionCert& c);

// Substitution x -> x B on a polynomial.
FpMultiPoly linear_substitute(const FpMultiPoly& f, const FpMatrix& B);

struct NullstellensatzResult {
  enum class Status { Certificate, Witness, Violation };
  Status status = Status::Certificate;
  FpMultiPoly R;  // P = M R when Certificate
  Vec witness;    // n in V(M) with P(n) != 0
  DivisionCert division;
};

NullstellensatzResult nullstellensatz(const FpMultiPoly& P, const QuadForm& M, const EnumOptions& o = {});

struct DichotomyVerdict {
  enum class Kind { Contained, SmallIntersection };
  Kind kind = Kind::SmallIntersection;
  i64 count = 0;  // |V(M) cap V(P)|
  i64 total = 0;  // |V(M)|
  double bound_4p = 0;  // 4 p^(d-2)
  bool within_4p = false;
  bool within_delta = false;
  bool middle_ground = false;  // SmallIntersection with count > 4 p^(d-2)
  std::optional<DivisionCert> certificate;
  bool certificate_exact = false;
  Vec witness;  // first point of V(M) with P != 0
};

DichotomyVerdict dichotomy(const FpMultiPoly& P, const QuadForm& M, double delta, const EnumOptions& o = {});

struct AntiderivativeResult {
  enum class Status { Ok, HypothesisFailed, ConstantTerm, Violation };
  Status status = Status::Ok;
  FpMultiPoly Qprime;
  i64 constant = 0;  // Q = M Q' + constant
  int failed_index = -1;
  Vec witness;
};

// Q = M Q' from d1M diQ = diM d1Q on V(M).
AntiderivativeResult antiderivative(const FpMultiPoly& Q, const QuadForm& M, const EnumOptions& o = {});

// Multipliers c_g with sum gens[g] c_g = target and deg c_g <= degs[g]; a negative
// bound forces c_g = 0.
std::optional<std::vector<FpMultiPoly>> solve_combination(const FpMultiPoly& target,
                                                          const std::vector<FpMultiPoly>& gens,
                                                          const std::vector<int>& degs);

// Delta_{h_k} ... Delta_{h_1} g(n).
i64 iterated_delta(const FpMultiPoly& g, const Vec& n, const std::vector<Vec>& hs);

struct IntrinsicResult {
  enum class Status { Decomposed, Witness, Violation };
  Status status = Status::Decomposed;
  FpMultiPoly g1, g2;
  Vec witness;  // (n, h_1..h_s) flattened
};

// g = M g1 + g2 with deg g1 <= s-2, deg g2 <= s-1, or a cube in Box_s(V(M)) on
// which the s-th difference of g is nonzero.
IntrinsicResult intrinsic_decompose(const FpMultiPoly& g, const QuadForm& M, int s, const EnumOptions& o = {});

struct GowersEquationResult {
  enum class Status { Solved, HypothesisFailed, NoSolution };
  Status status = Status::Solved;
  FpMultiPoly P1, P2, Q1, Q2;
  Vec witness;
};

// W = Box_s(V(M)). deg P <= k-1, deg Q <= k.
GowersEquationResult gowers_equation_solve(const FpMultiPoly& P, const FpMultiPoly& Q, const QuadForm& M,
                                           int s, int k, const EnumOptions& o = {});

// ---- Z/p-valued lifts ----

// A Z/p-valued quadratic polynomial, p M integer valued, reduced to F_p.
QuadForm reduce_form(const RatMultiPoly& M, i64 p);
// Regular lift of a quadratic form as a Z/p-valued polynomial.
RatMultiPoly lift_form(const QuadForm& M);

struct LiftNullResult {
  enum class Status { Decomposed, Witness, Violation };
  Status status = Status::Decomposed;
  RatMultiPoly P1;  // integer coefficients
  RatMultiPoly P0;  // integer valued
  Vec witness;      // n in [p]^d with M(n) in Z and P(n) not in Z
};

// P = M P1 + P0 over Q.
LiftNullResult lift_nullstellensatz(const RatMultiPoly& P, const RatMultiPoly& M, i64 p,
                                    const EnumOptions& o = {});

struct SphereDecomposition {
  enum class Status { Decomposed, Witness, Violation };
  Status status = Status::Decomposed;
  mpz_class Q0 = 1;
  Rat C = 0;                     // only for the periodic variant
  std::vector<RatMultiPoly> R;   // R[i] multiplies M^i; R[1] is zero in the periodic variant
  bool pfloor_integer_valued = false;
  Vec witness;                   // integer point exposing non-membership
  std::string note;
};

// Q0 f = sum_i M^i R_i with R_i integer valued, deg R_i <= deg f - 2i.
SphereDecomposition sphere_vanishing_decompose(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                               const EnumOptions& o = {});
// Q0 f = C + R0/p + sum_{i>=2} M^i R_i.
SphereDecomposition sphere_periodic_decompose(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                              const EnumOptions& o = {});
bool verify_sphere_decomposition(const RatMultiPoly& f, const RatMultiPoly& M, i64 p,
                                 const SphereDecomposition& dec, bool periodic);

}  // namespace shofa
