#pragma once

#include <random>

#include "oracles.hpp"
#include "sphere_hofa/quadform.hpp"

namespace testutil {

inline oracle::Mat to_mat(const shofa::FpMatrix& m) { return m.to_rows(); }

inline shofa::QuadForm random_form(shofa::i64 p, int d, int min_rank, std::mt19937_64& rng) {
  std::uniform_int_distribution<shofa::i64> U(0, p - 1);
  while (true) {
    shofa::FpMatrix A(p, d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) A(i, j) = A(j, i) = U(rng);
    shofa::Vec u(d);
    for (auto& x : u) x = U(rng);
    shofa::QuadForm M(A, u, U(rng));
    if (shofa::qf_rank(M) >= min_rank) return M;
  }
}

inline oracle::Poly to_oracle(const shofa::FpMultiPoly& f) {
  oracle::Poly g;
  for (auto& [e, c] : f.terms) g[e] = c;
  return g;
}

}  // namespace testutil
