#include "sphere_hofa/zlocal.hpp"

namespace shofa {

int valuation(const Rat& q, i64 p) {
  require(q != 0, "valuation of zero");
  int v = 0;
  mpz_class n = q.get_num(), d = q.get_den(), pp = p;
  while (mpz_divisible_p(n.get_mpz_t(), pp.get_mpz_t())) { n /= pp; ++v; }
  while (mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t())) { d /= pp; --v; }
  return v;
}

bool is_p_integral(const Rat& q, i64 p) {
  mpz_class pp = p;
  return !mpz_divisible_p(q.get_den_mpz_t(), pp.get_mpz_t());
}

LocalSolution solve_local(std::vector<std::vector<Rat>> L, std::vector<Rat> b, i64 p) {
  const std::size_t m = L.size();
  require(b.size() == m, "right-hand side length mismatch");
  const std::size_t n = m ? L[0].size() : 0;
  // U tracks column operations: x = U y.
  std::vector<std::vector<Rat>> U(n, std::vector<Rat>(n, 0));
  for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
  std::vector<bool> used(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::vector<bool> done(m, false);

  for (std::size_t r = 0; r < m; ++r) {
    std::size_t pc = n;
    int best = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c] || L[r][c] == 0) continue;
      int v = valuation(L[r][c], p);
      if (pc == n || v < best) { pc = c; best = v; }
    }
    if (pc == n) continue;  // zero row for now; checked for consistency below
    // Clear row r with p-integral column operations.
    for (std::size_t c = 0; c < n; ++c) {
      if (c == pc || used[c] || L[r][c] == 0) continue;
      Rat f = L[r][c] / L[r][pc];
      for (std::size_t i = 0; i < m; ++i)
        if (L[i][pc] != 0) L[i][c] -= f * L[i][pc];
      for (std::size_t i = 0; i < n; ++i)
        if (U[i][pc] != 0) U[i][c] -= f * U[i][pc];
    }
    Rat piv = L[r][pc];
    for (std::size_t c = 0; c < n; ++c)
      if (L[r][c] != 0) L[r][c] /= piv;
    b[r] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || L[i][pc] == 0) continue;
      Rat f = L[i][pc];
      for (std::size_t c = 0; c < n; ++c)
        if (L[r][c] != 0) L[i][c] -= f * L[r][c];
      b[i] -= f * b[r];
    }
    used[pc] = true;
    done[r] = true;
    pivots.emplace_back(r, pc);
  }

  LocalSolution res;
  res.consistent = true;
  for (std::size_t r = 0; r < m; ++r) {
    if (done[r]) continue;
    bool zero = true;
    for (std::size_t c = 0; c < n && zero; ++c) zero = L[r][c] == 0;
    if (zero && b[r] != 0) res.consistent = false;
  }
  if (!res.consistent) return res;
  std::vector<Rat> y(n, 0);
  res.integral = true;
  for (auto [r, c] : pivots) {
    y[c] = b[r];
    if (!is_p_integral(y[c], p)) res.integral = false;
  }
  if (!res.integral) return res;
  res.x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < n; ++c)
      if (U[i][c] != 0 && y[c] != 0) res.x[i] += U[i][c] * y[c];
  return res;
}

}  // namespace shofa
