#pragma once

#include <vector>

#include "sphere_hofa/fpoly.hpp"

namespace shofa {

// p-adic valuation of a nonzero rational.
int valuation(const Rat& q, i64 p);
bool is_p_integral(const Rat& q, i64 p);

struct LocalSolution {
  bool consistent = false;  // solvable over Q
  bool integral = false;    // solvable with every unknown in Z_(p)
  std::vector<Rat> x;       // a solution when `integral` (free unknowns set to 0)
};

// Solves L x = b with x in Z_(p)^N, the rationals whose denominators are prime to p.
// Row operations are arbitrary rational; column operations use only p-integral
// multipliers, so the lattice Z_(p)^N is preserved.
LocalSolution solve_local(std::vector<std::vector<Rat>> L, std::vector<Rat> b, i64 p);

}  // namespace shofa
