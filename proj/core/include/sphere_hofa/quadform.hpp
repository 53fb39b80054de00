#pragma once

#include <optional>
#include <vector>

#include "sphere_hofa/ffcore.hpp"
#include "sphere_hofa/fpoly.hpp"

namespace shofa {

// M(n) = (nA).n + u.n + v over F_p.
struct QuadForm {
  i64 p = 5;
  int d = 0;
  FpMatrix A;
  Vec u;
  i64 v = 0;

  QuadForm() = default;
  QuadForm(FpMatrix A_, Vec u_, i64 v_);
  static QuadForm sphere(i64 p, int d, i64 r);  // n.n - r
  // Reads A, u, v off a polynomial of degree <= 2.
  static QuadForm from_poly(const FpMultiPoly& f);

  i64 eval(const Vec& n) const;
  i64 quad(const Vec& n) const;  // (nA).n
  FpMultiPoly to_poly() const;
  bool is_homogeneous() const;
  bool is_pure() const;  // u == 0
};

struct AffineSubspace {
  i64 p = 5;
  int d = 0;
  std::vector<Vec> basis;  // independent rows
  Vec offset;

  static AffineSubspace full(i64 p, int d);
  int dim() const { return int(basis.size()); }
  int codim() const { return d - dim(); }
  Vec point(const Vec& t) const;  // t B + c
};

int qf_rank(const QuadForm& M);

struct NormalizationCert {
  FpMatrix R;
  Vec shift;
  i64 c = 1;
  i64 cprime = 0;
  i64 lambda = 0;
  int dprime = 0;
};

// M(nR + shift) = c n1^2 + n2^2 + ... + n_{d'}^2 + c' n_{d'+1} - lambda.
NormalizationCert normalize(const QuadForm& M);
FpMultiPoly normal_form_poly(const NormalizationCert& cert, i64 p, int d);
bool verify_normalization(const QuadForm& M, const NormalizationCert& cert);

std::vector<Vec> perp(const QuadForm& M, const std::vector<Vec>& V);
bool isotropic_test(const QuadForm& M, const std::vector<Vec>& hs);
int restricted_rank(const QuadForm& M, const AffineSubspace& S);
// Pull-back M(tB + c) as a form in dim(S) variables.
QuadForm restrict_to(const QuadForm& M, const AffineSubspace& S);
std::vector<Vec> find_nonisotropic(const QuadForm& M, int k);

struct ParallelCertificate {
  enum class Status { Parallel, HypothesisFailed, TheoremViolation };
  Status status = Status::Parallel;
  i64 c = 0;
  Vec witness_n, witness_w;
};

// For all w in W and n: (nA).w = 0 => (nB + v).w = 0; then B = cA and v = 0.
// Requires rank A >= 3 and p^d <= 10^7.
ParallelCertificate parallel_certificate(const FpMatrix& A, const FpMatrix& B, const Vec& v,
                                         const std::vector<Vec>& W);

}  // namespace shofa
