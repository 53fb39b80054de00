#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "sphere_hofa/ffcore.hpp"

namespace shofa {

using Exp = std::vector<int>;
using Rat = mpq_class;

int total_degree(const Exp& e);

// All exponent tuples with total degree <= deg, graded then lexicographically descending.
std::vector<Exp> monomials_upto(int nvars, int deg);

// Polynomial function F_p^d -> F_p. Exponents are kept < p via x^p = x.
struct FpMultiPoly {
  i64 p = 5;
  int nvars = 0;
  std::map<Exp, i64> terms;

  FpMultiPoly() = default;
  FpMultiPoly(i64 p_, int n) : p(p_), nvars(n) {}
  static FpMultiPoly constant(i64 p, int n, i64 c);
  static FpMultiPoly var(i64 p, int n, int i);
  static FpMultiPoly monomial(i64 p, const Exp& e, i64 c);

  bool is_zero() const { return terms.empty(); }
  int degree() const;  // -1 for zero
  i64 coeff(const Exp& e) const;
  void add_term(Exp e, i64 c);
  i64 eval(const Vec& x) const;
  bool is_homogeneous() const;

  FpMultiPoly operator-() const;
  FpMultiPoly& operator+=(const FpMultiPoly& o);
  FpMultiPoly& operator-=(const FpMultiPoly& o);
  FpMultiPoly scaled(i64 c) const;
  bool operator==(const FpMultiPoly& o) const { return p == o.p && nvars == o.nvars && terms == o.terms; }
};

FpMultiPoly operator+(FpMultiPoly a, const FpMultiPoly& b);
FpMultiPoly operator-(FpMultiPoly a, const FpMultiPoly& b);
FpMultiPoly operator*(const FpMultiPoly& a, const FpMultiPoly& b);
FpMultiPoly pow(const FpMultiPoly& a, int e);
// Substitutes subs[i] for variable i; result lives in subs' variable space.
FpMultiPoly compose(const FpMultiPoly& f, const std::vector<FpMultiPoly>& subs);
FpMultiPoly derivative(const FpMultiPoly& f, int i);
FpMultiPoly delta(const FpMultiPoly& f, const Vec& h);
// Embeds f into a larger variable space; variable i maps to slot offset + i.
FpMultiPoly embed(const FpMultiPoly& f, int nvars, int offset);

// Polynomial with exact rational coefficients.
struct RatMultiPoly {
  int nvars = 0;
  std::map<Exp, Rat> terms;

  RatMultiPoly() = default;
  explicit RatMultiPoly(int n) : nvars(n) {}
  static RatMultiPoly constant(int n, const Rat& c);
  static RatMultiPoly var(int n, int i);
  static RatMultiPoly monomial(const Exp& e, const Rat& c);

  bool is_zero() const { return terms.empty(); }
  int degree() const;
  Rat coeff(const Exp& e) const;
  void add_term(const Exp& e, const Rat& c);
  Rat eval(const Vec& x) const;
  bool is_homogeneous() const;

  RatMultiPoly operator-() const;
  RatMultiPoly& operator+=(const RatMultiPoly& o);
  RatMultiPoly& operator-=(const RatMultiPoly& o);
  RatMultiPoly scaled(const Rat& c) const;
  bool operator==(const RatMultiPoly& o) const { return nvars == o.nvars && terms == o.terms; }
};

RatMultiPoly operator+(RatMultiPoly a, const RatMultiPoly& b);
RatMultiPoly operator-(RatMultiPoly a, const RatMultiPoly& b);
RatMultiPoly operator*(const RatMultiPoly& a, const RatMultiPoly& b);
RatMultiPoly pow(const RatMultiPoly& a, int e);
RatMultiPoly compose(const RatMultiPoly& f, const std::vector<RatMultiPoly>& subs);
RatMultiPoly derivative(const RatMultiPoly& f, int i);
RatMultiPoly delta(const RatMultiPoly& f, const Vec& h);
RatMultiPoly embed(const RatMultiPoly& f, int nvars, int offset);

// tau: F_p -> {0..p-1}; iota: Z -> F_p, extended to fractions with denominator prime to p.
inline i64 tau(i64 a, i64 p) { return modp(a, p); }
i64 iota(const Rat& q, i64 p);
RatMultiPoly to_rat(const FpMultiPoly& f);  // coefficients tau(c)
// Integer-coefficient poly reduced mod p; throws if a denominator is divisible by p.
FpMultiPoly to_fp(const RatMultiPoly& f, i64 p);

// Coefficients in the product binomial basis C(n,i) = prod_j C(n_j, i_j).
std::map<Exp, Rat> binomial_coeffs(const RatMultiPoly& f);
RatMultiPoly from_binomial(int nvars, const std::map<Exp, Rat>& c);
Rat binomial_value(const Exp& i, const Vec& n);  // C(n,i) at an integer point
bool is_integer_valued(const RatMultiPoly& f);
bool has_integer_coeffs(const RatMultiPoly& f);
mpz_class denominator_lcm(const RatMultiPoly& f);

// F = iota o (p f) o tau. Requires deg f < p and p f integer valued.
FpMultiPoly induce(const RatMultiPoly& f, i64 p);
// Coefficients tau(C)/p.
RatMultiPoly regular_lift(const FpMultiPoly& F);

struct PExpansion {
  RatMultiPoly f1;  // integer valued
  RatMultiPoly f2;  // integer coefficients in [0, p)
};
// f/p = f1 + f2/p.
PExpansion p_expand(const RatMultiPoly& f, i64 p);

bool is_p_periodic(const RatMultiPoly& f, i64 p);
// Omega given by canonical representatives; checks m -> f(n0 + p m) for each n0.
bool is_partially_p_periodic_on(const RatMultiPoly& f, i64 p, const std::vector<Vec>& omega,
                                Vec* witness = nullptr);

// f(n) in Z on every fiber n0 + pZ^d, n0 in omega. The witness is an integer point
// n0 + p m with f(n0 + p m) not in Z.
bool integral_on_fibers(const RatMultiPoly& f, i64 p, const std::vector<Vec>& omega, Vec* witness = nullptr);

std::string to_string(const FpMultiPoly& f);
std::string to_string(const RatMultiPoly& f);

}  // namespace shofa
