#include "sphere_hofa/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "sphere_hofa/division.hpp"
#include "sphere_hofa/parallel.hpp"

namespace shofa {

void TorusPolySeq::validate() const {
  require(m >= 1 && d >= 1 && s >= 0, "sequence needs m, d >= 1 and s >= 0");
  require(filtration.empty() || int(filtration.size()) == m, "one filtration degree per torus coordinate");
  for (auto& [i, c] : coeffs) {
    require(int(i.size()) == d, "binomial index arity mismatch");
    require(int(c.size()) == m, "coefficient vector length mismatch");
    const int deg = total_degree(i);
    require(deg <= s, "sequence degree exceeds s");
    for (int t = 0; t < m; ++t)
      if (!filtration.empty() && deg > filtration[t] && c[t] != 0)
        fail(ErrorKind::InvalidInput, "coefficient outside its filtration block");
  }
}

RatMultiPoly TorusPolySeq::coordinate(int t) const {
  std::map<Exp, Rat> bc;
  for (auto& [i, c] : coeffs)
    if (c[t] != 0) bc[i] = c[t];
  return from_binomial(d, bc);
}

TorusPolySeq TorusPolySeq::from_polys(const std::vector<RatMultiPoly>& polys) {
  require(!polys.empty(), "need at least one coordinate");
  TorusPolySeq g;
  g.m = int(polys.size());
  g.d = polys[0].nvars;
  g.s = 0;
  for (int t = 0; t < g.m; ++t) {
    require(polys[t].nvars == g.d, "coordinates live in different spaces");
    g.s = std::max(g.s, polys[t].degree());
    for (auto& [i, c] : binomial_coeffs(polys[t])) {
      auto& v = g.coeffs.try_emplace(i, std::vector<Rat>(g.m, Rat(0))).first->second;
      v[t] = c;
    }
  }
  return g;
}

namespace {

Rat frac(const Rat& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rat r = q - Rat(f);
  r.canonicalize();
  return r;
}

// Integer values D * g_t(tau n) mod D for every point, with D the lcm of all
// coefficient denominators.
struct Values {
  i64 D = 1;
  int m = 1;
  std::vector<i64> v;  // points x m
};

Values tabulate(const TorusPolySeq& g, const PointSet& omega) {
  g.validate();
  require(omega.d == g.d, "point set and sequence have different dimensions");
  mpz_class D = 1;
  for (auto& [i, c] : g.coeffs)
    for (auto& x : c) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
  if (D > mpz_class(1) << 40) fail(ErrorKind::Unsupported, "common denominator too large");
  Values out;
  out.D = D.get_si();
  out.m = g.m;
  out.v.resize(omega.size() * g.m);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    Vec n = omega.point(k);
    for (int t = 0; t < g.m; ++t) {
      mpz_class acc = 0;
      for (auto& [i, c] : g.coeffs) {
        if (c[t] == 0) continue;
        Rat b = binomial_value(i, n) * c[t] * Rat(D);
        acc += b.get_num();
      }
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), D.get_mpz_t());
      out.v[k * g.m + t] = r.get_si();
    }
  }
  return out;
}

i64 residue(const Values& vals, std::size_t pt, const Vec& k) {
  __int128 a = 0;
  for (int t = 0; t < vals.m; ++t) a += __int128(k[t]) * vals.v[pt * vals.m + t];
  i64 r = i64(a % vals.D);
  return r < 0 ? r + vals.D : r;
}

std::complex<double> character_sum(const Values& vals, std::size_t npts, const Vec& k) {
  if (vals.D <= (i64(1) << 22)) {
    std::vector<i64> hist(vals.D, 0);
    for (std::size_t i = 0; i < npts; ++i) ++hist[residue(vals, i, k)];
    return root_of_unity_sum(hist, vals.D);
  }
  std::complex<double> s = 0;
  for (std::size_t i = 0; i < npts; ++i) s += std::polar(1.0, 2 * std::numbers::pi * double(residue(vals, i, k)) / double(vals.D));
  return s;
}

std::optional<Rat> constant_residue(const Values& vals, std::size_t npts, const Vec& k) {
  if (npts == 0) return Rat(0);
  i64 r0 = residue(vals, 0, k);
  for (std::size_t i = 1; i < npts; ++i)
    if (residue(vals, i, k) != r0) return std::nullopt;
  Rat c(r0, vals.D);
  c.canonicalize();
  return c;
}

}  // namespace

std::vector<Rat> seq_eval(const TorusPolySeq& g, const Vec& n) {
  require(int(n.size()) == g.d, "point arity mismatch");
  std::vector<Rat> out(g.m, Rat(0));
  for (auto& [i, c] : g.coeffs) {
    Rat b = binomial_value(i, n);
    for (int t = 0; t < g.m; ++t) out[t] += b * c[t];
  }
  for (auto& x : out) x = frac(x);
  return out;
}

std::vector<Vec> frequencies(int m, int K) {
  std::vector<Vec> out;
  Vec k(m, 0);
  for (int norm = 1; norm <= K; ++norm) {
    std::vector<Vec> layer;
    // Distribute |k|_1 = norm over m coordinates with signs.
    std::function<void(int, int)> rec = [&](int t, int left) {
      if (t == m - 1) {
        for (int sgn : {-1, 1}) {
          if (left == 0 && sgn > 0) continue;
          k[t] = sgn * left;
          bool lead_ok = false;
          for (int j = 0; j < m; ++j)
            if (k[j]) {
              lead_ok = k[j] > 0;
              break;
            }
          if (lead_ok) layer.push_back(k);
        }
        return;
      }
      for (int a = -left; a <= left; ++a) {
        k[t] = a;
        rec(t + 1, left - std::abs(a));
      }
    };
    rec(0, norm);
    std::sort(layer.begin(), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

int default_freq_budget(double delta) {
  require(delta > 0, "delta must be positive");
  double K = std::ceil(1.0 / (delta * delta));
  return int(std::min(K, 1000.0));
}

std::optional<HorizontalCharacter> character_search(const TorusPolySeq& g, const PointSet& omega, int K) {
  Values vals = tabulate(g, omega);
  for (auto& k : frequencies(g.m, K))
    if (auto c = constant_residue(vals, omega.size(), k)) {
      HorizontalCharacter h;
      h.k = k;
      for (auto x : k) h.complexity += std::abs(x);
      h.constant = *c;
      return h;
    }
  return std::nullopt;
}

Constancy constancy_check(const Vec& k, const TorusPolySeq& g, const PointSet& omega) {
  require(int(k.size()) == g.m, "frequency arity mismatch");
  Values vals = tabulate(g, omega);
  Constancy c;
  auto r = constant_residue(vals, omega.size(), k);
  c.constant = r.has_value();
  if (r) c.value = *r;
  return c;
}

EquidistReport equidist_test(const TorusPolySeq& g, const PointSet& omega, double delta, int K,
                             const EnumOptions& o) {
  require(K >= 1, "frequency budget must be positive");
  require(!omega.empty(), "equidistribution over an empty set");
  if (double(omega.size()) > o.budget) fail(ErrorKind::BudgetExceeded, "point set exceeds the budget");
  Values vals = tabulate(g, omega);
  auto ks = frequencies(g.m, K);
  auto mags = parallel_map<double>(ks.size(), o.threads, [&](std::size_t i) {
    return std::abs(character_sum(vals, omega.size(), ks[i])) / double(omega.size());
  });
  EquidistReport rep;
  rep.delta = delta;
  rep.K = K;
  rep.characters = ks.size();
  rep.points = omega.size();
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (mags[i] > rep.max_fourier) {
      rep.max_fourier = mags[i];
      rep.max_k = ks[i];
    }
  if (rep.max_fourier < delta - kTieTolerance) {
    rep.verdict = EquidistReport::Verdict::Equidistributed;
    return rep;
  }
  // Large coefficient or a tie: look for a character making k.g constant.
  for (auto& k : ks)
    if (auto c = constant_residue(vals, omega.size(), k)) {
      HorizontalCharacter h;
      h.k = k;
      for (auto x : k) h.complexity += std::abs(x);
      h.constant = *c;
      rep.witness = h;
      rep.verdict = EquidistReport::Verdict::Obstructed;
      return rep;
    }
  rep.verdict = rep.max_fourier <= delta + kTieTolerance ? EquidistReport::Verdict::Equidistributed
                                                        : EquidistReport::Verdict::Unresolved;
  return rep;
}

WeylResult weyl_dichotomy(const RatMultiPoly& g, i64 p, int d, i64 r, double delta, const EnumOptions& o) {
  require(g.nvars == d, "polynomial arity mismatch");
  if (!is_integer_valued(g)) fail(ErrorKind::NotIntegerValued, "Weyl dichotomy needs an integer-valued g");
  if (d < 3) fail(ErrorKind::RankHypothesis, "sphere needs d >= 3");
  PrimeField F(p);
  QuadForm S = QuadForm::sphere(p, d, F.reduce(r));
  PointSet omega = enumerate_zeros(S, nullptr, o);
  require(!omega.empty(), "empty sphere");
  WeylResult res;
  res.points = omega.size();
  std::vector<i64> hist(p, 0);
  for (std::size_t k = 0; k < omega.size(); ++k) {
    Rat v = g.eval(omega.point(k));
    mpz_class q;
    mpz_fdiv_r_ui(q.get_mpz_t(), v.get_num_mpz_t(), p);
    ++hist[q.get_si()];
  }
  res.sum = root_of_unity_sum(hist, p) / double(omega.size());
  res.value = std::abs(res.sum);
  i64 nonzero = std::count_if(hist.begin(), hist.end(), [](i64 c) { return c != 0; });
  res.unit_exact = nonzero == 1;
  if (res.unit_exact) res.value = 1.0;
  if (res.value <= delta) return res;
  if (!res.unit_exact) {
    res.branch = WeylResult::Branch::Violation;
    res.note = "large sum without constancy";
    if (d < g.degree() + 13) res.note += "; outside the asymptotic regime d >= s + 13";
    return res;
  }
  res.branch = WeylResult::Branch::Constant;
  res.constant = i64(std::find_if(hist.begin(), hist.end(), [](i64 c) { return c != 0; }) - hist.begin());
  // Sphere polynomial n.n - tau(r) and its Z/p-valued form M = (n.n - tau(r))/p.
  RatMultiPoly S0 = RatMultiPoly::constant(d, Rat(-F.reduce(r)));
  for (int i = 0; i < d; ++i) {
    Exp e(d, 0);
    e[i] = 2;
    S0.add_term(e, 1);
  }
  RatMultiPoly M = S0.scaled(Rat(1, p));
  RatMultiPoly P = (g - RatMultiPoly::constant(d, Rat(res.constant))).scaled(Rat(1, p));
  LiftNullResult ln = lift_nullstellensatz(P, M, p, o);
  if (ln.status != LiftNullResult::Status::Decomposed) {
    res.branch = WeylResult::Branch::Violation;
    res.note = "constant on the sphere but no divisibility certificate";
    return res;
  }
  res.g1 = ln.P1;
  res.g2 = ln.P0;
  res.certificate_verified = is_integer_valued(res.g1) && is_integer_valued(res.g2) &&
                             S0 * res.g1 + res.g2.scaled(Rat(p)) + RatMultiPoly::constant(d, Rat(res.constant)) == g;
  return res;
}

TorusPolySeq random_periodic_seq(const PointSet& omega, int m, int s, std::mt19937_64& rng) {
  const i64 p = omega.p;
  const int d = omega.d;
  auto pts = omega.points();
  std::uniform_int_distribution<i64> U(0, p - 1);
  std::vector<RatMultiPoly> polys;
  for (int t = 0; t < m; ++t) {
    // Binomial-basis coefficients a / p^j with j <= |i|; keep the first candidate that
    // is partially p-periodic, else fall back to a regular lift (periodic on F_p^d).
    std::optional<RatMultiPoly> pick;
    for (int attempt = 0; attempt < 8 && !pick; ++attempt) {
      std::map<Exp, Rat> bc;
      for (auto& i : monomials_upto(d, s)) {
        int deg = total_degree(i);
        int j = std::uniform_int_distribution<int>(0, std::max(deg, 1))(rng);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), p, j);
        Rat c(mpz_class(U(rng)), den);
        c.canonicalize();
        if (c != 0) bc[i] = c;
      }
      RatMultiPoly f = from_binomial(d, bc);
      if (is_partially_p_periodic_on(f, p, pts)) pick = f;
    }
    if (!pick) {
      FpMultiPoly F(p, d);
      for (auto& e : monomials_upto(d, std::min<int>(s, int(p) - 1))) F.add_term(e, U(rng));
      pick = regular_lift(F);
    }
    polys.push_back(*pick);
  }
  TorusPolySeq g = TorusPolySeq::from_polys(polys);
  g.s = s;
  return g;
}

LeibmanStats leibman_probe(const PointSet& omega, int m, int s, double delta, int trials, int K,
                           std::uint64_t seed, const EnumOptions& o) {
  require(trials >= 0, "trial count must be non-negative");
  LeibmanStats st;
  st.hypotheses_met = omega.d >= s + 13;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    LeibmanTrial tr;
    tr.g = random_periodic_seq(omega, m, s, rng);
    tr.report = equidist_test(tr.g, omega, delta, K, o);
    ++st.trials;
    switch (tr.report.verdict) {
      case EquidistReport::Verdict::Equidistributed: ++st.equidistributed; break;
      case EquidistReport::Verdict::Obstructed: ++st.obstructed; break;
      case EquidistReport::Verdict::Unresolved:
        ++st.unresolved;
        st.exceptions.push_back(std::move(tr));
        break;
    }
  }
  return st;
}

}  // namespace shofa
