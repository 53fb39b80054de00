#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/quadform.hpp"

namespace shofa {

// F(n_1..n_k) = sum_{i<=j} b_{i,j} (n_i A).n_j + sum v_i.n_i + u. Blocks are 0-based
// internally; b is keyed by (i, j) with i <= j.
struct MQuadFn {
  int k = 0;
  int d = 0;
  std::map<std::pair<int, int>, i64> b;
  std::vector<Vec> v;  // k vectors of length d
  i64 u = 0;

  MQuadFn() = default;
  MQuadFn(int k_, int d_) : k(k_), d(d_), v(std::size_t(k_), Vec(std::size_t(d_), 0)) {}

  i64 bij(int i, int j) const;
  void set_b(int i, int j, i64 x, i64 p);
  bool is_pure() const;
  // Single-pivot shape: pure and every quadratic term involves one common top block.
  bool is_nice_shape() const;
  int top_block() const;  // highest block the function depends on, -1 for constants
  i64 eval(const FpMatrix& A, const Vec& x) const;  // x is the flat kd vector
  FpMultiPoly to_poly(const FpMatrix& A) const;
};

struct MFamily {
  i64 p = 5;
  int d = 0;
  int k = 0;
  FpMatrix A;
  std::vector<MQuadFn> fns;
};

struct CoeffVectors {
  Vec full;   // v_M(F), length C(k+1,2) + kd + 1
  Vec prime;  // v'_M(F), the same without the trailing u
};

CoeffVectors coeff_vectors(const MQuadFn& F, i64 p);
MQuadFn from_coeff_vector(const Vec& full, int k, int d, i64 p);

enum class Tri { No, Yes, Unknown };

struct FamilyFlags {
  bool pure = true;
  bool consistent = true;
  bool independent = true;
  Tri nice = Tri::Unknown;
  std::string nice_reason;
};

FamilyFlags classify(const MFamily& fam);

struct MRepresentation {
  MFamily family;                  // standard functions, highest block first
  std::vector<int> dimension_vector;  // r_1..r_k
  FamilyFlags flags;
  int total_codim = 0;
};

MRepresentation standard_rep(const MFamily& fam);
int total_codim(const MFamily& fam);

// {M(n), M(n+h_i) - M(n), (h_i A).h_j (i<j)} on blocks (n, h_1..h_s).
MFamily gowers_family(const QuadForm& M, int s);

struct Projection {
  MFamily inside;   // independent of blocks outside I
  MFamily outside;  // every nonzero combination depends on them
};

// I is a set of 0-based block indices. pivot_outside_last flips the column order
// used for the split, giving a second valid decomposition.
Projection i_projection(const MFamily& fam, const std::vector<int>& I, bool alternative_order = false);
// Drops blocks outside I (the family must not depend on them).
MFamily restrict_blocks(const MFamily& fam, const std::vector<int>& I);

// Block-recursive enumeration of V(fam): block i is scanned for each admissible
// prefix, checking the functions whose top block is i. Points are flat kd vectors in
// lexicographic order.
std::vector<Vec> enumerate_mset(const MFamily& fam, const EnumOptions& o = {});
bool in_mset(const MFamily& fam, const Vec& x);

struct FubiniReport {
  Rat lhs, rhs;
  double diff = 0;
  double bound = 0;  // 4 p^{-1/2}
  bool pass = false;
  std::uint64_t omega_size = 0;
  std::uint64_t projection_size = 0;
  std::uint64_t empty_fibers = 0;
};

// I = blocks {0..kprime-1}; f is integer valued (|f| <= 1 for the 4/sqrt(p) bound).
FubiniReport fubini_check(const MFamily& fam, int kprime, const std::function<i64(const Vec&)>& f,
                          const EnumOptions& o = {});

struct MsetCountReport {
  CountReport report;
  bool sampled = false;
  std::uint64_t samples = 0;
  double estimate = 0;
  double std_error = 0;
  int codim = 0;
};

constexpr std::uint64_t kMonteCarloSamples = 1000000;

MsetCountReport mset_cardinality_check(const MFamily& fam, std::uint64_t seed = 1, const EnumOptions& o = {},
                                       std::uint64_t samples = kMonteCarloSamples);

struct ProbeVerdict {
  enum class Kind { Contained, Small, MiddleGround, Inconclusive };
  Kind kind = Kind::Small;
  bool sampled = false;
  std::uint64_t hits = 0;   // points (or samples) in V(P)
  std::uint64_t total = 0;  // |Omega| (or sample count)
  double ratio = 0;
  double std_error = 0;
  Vec witness;  // a point of Omega off V(P), when one was seen
};

struct ProbeOptions {
  double delta = 0.3;
  std::uint64_t samples = 4000;
  std::uint64_t seed = 1;
  EnumOptions enumeration;
};

struct ProbeReport {
  std::vector<ProbeVerdict> verdicts;
  bool sampled = false;
  bool hypotheses_met = false;  // d >= max(2r+1, 4k-1)
  int codim = 0;
  std::uint64_t middle_ground = 0;
  std::uint64_t inconclusive = 0;
};

// Exact when V(fam) is enumerable within budget; otherwise fam must be V(M) or the
// Box_1 family of gowers_family(M, 1) (sampled uniformly, containment decided
// symbolically by division).
ProbeReport irreducibility_probe(const MFamily& fam, const QuadForm& M, const std::vector<FpMultiPoly>& trials,
                                 const ProbeOptions& opt = {});

FpMultiPoly random_poly(i64 p, int nvars, int deg, std::mt19937_64& rng);

}  // namespace shofa
