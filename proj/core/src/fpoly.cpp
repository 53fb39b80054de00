#include "sphere_hofa/fpoly.hpp"

#include <algorithm>
#include <sstream>

namespace shofa {

int total_degree(const Exp& e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

namespace {

void monomials_rec(int nvars, int remaining, Exp& cur, int pos, std::vector<Exp>& out) {
  if (pos == nvars) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[pos] = a;
    monomials_rec(nvars, remaining - a, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

Exp add_exp(const Exp& a, const Exp& b) {
  Exp c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

// x^e as a function on F_p: fold exponents >= p down by p-1.
int reduce_exponent(int e, i64 p) {
  if (e < p) return e;
  return int((e - 1) % (p - 1)) + 1;
}

// Stirling numbers: S2(n,k) second kind and signed s1(n,k) first kind.
struct StirlingTables {
  std::vector<std::vector<mpz_class>> s2, s1;
  std::vector<mpz_class> fact;
};

constexpr int kMaxDegree = 128;

StirlingTables build_stirling() {
  StirlingTables t;
  const int n = kMaxDegree + 1;
  t.s2.assign(n, std::vector<mpz_class>(n, 0));
  t.s1.assign(n, std::vector<mpz_class>(n, 0));
  t.fact.assign(n, 1);
  t.s2[0][0] = 1;
  t.s1[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    t.fact[i] = t.fact[i - 1] * i;
    for (int k = 1; k <= i; ++k) {
      t.s2[i][k] = k * t.s2[i - 1][k] + t.s2[i - 1][k - 1];
      t.s1[i][k] = t.s1[i - 1][k - 1] - (i - 1) * t.s1[i - 1][k];
    }
  }
  return t;
}

const StirlingTables& stirling(int need) {
  static const StirlingTables t = build_stirling();
  if (need > kMaxDegree) fail(ErrorKind::Unsupported, "degree above 128 in binomial basis");
  return t;
}

}  // namespace

std::vector<Exp> monomials_upto(int nvars, int deg) {
  std::vector<Exp> out;
  Exp cur(nvars, 0);
  for (int t = 0; t <= deg; ++t) monomials_rec(nvars, t, cur, 0, out);
  return out;
}

// ---------------------------------------------------------------- FpMultiPoly

FpMultiPoly FpMultiPoly::constant(i64 p, int n, i64 c) {
  FpMultiPoly f(p, n);
  f.add_term(Exp(n, 0), c);
  return f;
}

FpMultiPoly FpMultiPoly::var(i64 p, int n, int i) {
  FpMultiPoly f(p, n);
  Exp e(n, 0);
  e[i] = 1;
  f.add_term(e, 1);
  return f;
}

FpMultiPoly FpMultiPoly::monomial(i64 p, const Exp& e, i64 c) {
  FpMultiPoly f(p, int(e.size()));
  f.add_term(e, c);
  return f;
}

int FpMultiPoly::degree() const {
  int d = -1;
  for (auto& [e, c] : terms) d = std::max(d, total_degree(e));
  return d;
}

i64 FpMultiPoly::coeff(const Exp& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? 0 : it->second;
}

void FpMultiPoly::add_term(Exp e, i64 c) {
  require(int(e.size()) == nvars, "exponent arity mismatch");
  for (int& x : e) x = reduce_exponent(x, p);
  c = modp(c, p);
  if (!c) return;
  auto [it, inserted] = terms.emplace(std::move(e), c);
  if (!inserted) {
    it->second = (it->second + c) % p;
    if (!it->second) terms.erase(it);
  }
}

i64 FpMultiPoly::eval(const Vec& x) const {
  require(int(x.size()) == nvars, "evaluation arity mismatch");
  i64 s = 0;
  for (auto& [e, c] : terms) {
    i64 t = c;
    for (int i = 0; i < nvars && t; ++i)
      if (e[i]) t = t * pow_mod(x[i], e[i], p) % p;
    s = (s + t) % p;
  }
  return s;
}

bool FpMultiPoly::is_homogeneous() const {
  int d = -2;
  for (auto& [e, c] : terms) {
    int t = total_degree(e);
    if (d == -2) d = t;
    else if (t != d) return false;
  }
  return true;
}

FpMultiPoly FpMultiPoly::operator-() const { return scaled(p - 1); }

FpMultiPoly& FpMultiPoly::operator+=(const FpMultiPoly& o) {
  require(p == o.p && nvars == o.nvars, "polynomial space mismatch");
  for (auto& [e, c] : o.terms) add_term(e, c);
  return *this;
}

FpMultiPoly& FpMultiPoly::operator-=(const FpMultiPoly& o) {
  require(p == o.p && nvars == o.nvars, "polynomial space mismatch");
  for (auto& [e, c] : o.terms) add_term(e, p - c);
  return *this;
}

FpMultiPoly FpMultiPoly::scaled(i64 c) const {
  FpMultiPoly f(p, nvars);
  c = modp(c, p);
  if (!c) return f;
  for (auto& [e, x] : terms) f.terms.emplace(e, x * c % p);
  return f;
}

FpMultiPoly operator+(FpMultiPoly a, const FpMultiPoly& b) { return a += b; }
FpMultiPoly operator-(FpMultiPoly a, const FpMultiPoly& b) { return a -= b; }

FpMultiPoly operator*(const FpMultiPoly& a, const FpMultiPoly& b) {
  require(a.p == b.p && a.nvars == b.nvars, "polynomial space mismatch");
  FpMultiPoly c(a.p, a.nvars);
  for (auto& [ea, ca] : a.terms)
    for (auto& [eb, cb] : b.terms) c.add_term(add_exp(ea, eb), ca * cb);
  return c;
}

FpMultiPoly pow(const FpMultiPoly& a, int e) {
  FpMultiPoly r = FpMultiPoly::constant(a.p, a.nvars, 1);
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

FpMultiPoly compose(const FpMultiPoly& f, const std::vector<FpMultiPoly>& subs) {
  require(int(subs.size()) == f.nvars, "composition arity mismatch");
  require(!subs.empty() || f.nvars == 0, "composition needs target space");
  int n = subs.empty() ? 0 : subs[0].nvars;
  std::vector<std::vector<FpMultiPoly>> powers(f.nvars);
  FpMultiPoly out(f.p, n);
  for (auto& [e, c] : f.terms) {
    FpMultiPoly t = FpMultiPoly::constant(f.p, n, c);
    for (int i = 0; i < f.nvars; ++i) {
      if (!e[i]) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(FpMultiPoly::constant(f.p, n, 1));
      while (int(pw.size()) <= e[i]) pw.push_back(pw.back() * subs[i]);
      t = t * pw[e[i]];
    }
    out += t;
  }
  return out;
}

FpMultiPoly derivative(const FpMultiPoly& f, int i) {
  FpMultiPoly d(f.p, f.nvars);
  for (auto& [e, c] : f.terms) {
    if (!e[i]) continue;
    Exp e2 = e;
    e2[i] -= 1;
    d.add_term(e2, c * (e[i] % f.p));
  }
  return d;
}

FpMultiPoly delta(const FpMultiPoly& f, const Vec& h) {
  require(int(h.size()) == f.nvars, "shift arity mismatch");
  std::vector<FpMultiPoly> subs;
  for (int i = 0; i < f.nvars; ++i)
    subs.push_back(FpMultiPoly::var(f.p, f.nvars, i) + FpMultiPoly::constant(f.p, f.nvars, h[i]));
  return compose(f, subs) - f;
}

FpMultiPoly embed(const FpMultiPoly& f, int nvars, int offset) {
  require(offset + f.nvars <= nvars, "embedding out of range");
  FpMultiPoly g(f.p, nvars);
  for (auto& [e, c] : f.terms) {
    Exp e2(nvars, 0);
    std::copy(e.begin(), e.end(), e2.begin() + offset);
    g.terms.emplace(std::move(e2), c);
  }
  return g;
}

// ---------------------------------------------------------------- RatMultiPoly

RatMultiPoly RatMultiPoly::constant(int n, const Rat& c) {
  RatMultiPoly f(n);
  f.add_term(Exp(n, 0), c);
  return f;
}

RatMultiPoly RatMultiPoly::var(int n, int i) {
  RatMultiPoly f(n);
  Exp e(n, 0);
  e[i] = 1;
  f.add_term(e, 1);
  return f;
}

RatMultiPoly RatMultiPoly::monomial(const Exp& e, const Rat& c) {
  RatMultiPoly f(int(e.size()));
  f.add_term(e, c);
  return f;
}

int RatMultiPoly::degree() const {
  int d = -1;
  for (auto& [e, c] : terms) d = std::max(d, total_degree(e));
  return d;
}

Rat RatMultiPoly::coeff(const Exp& e) const {
  auto it = terms.find(e);
  return it == terms.end() ? Rat(0) : it->second;
}

void RatMultiPoly::add_term(const Exp& e, const Rat& c0) {
  require(int(e.size()) == nvars, "exponent arity mismatch");
  Rat c = c0;
  c.canonicalize();  // callers may pass an unreduced Rat(num, den)
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Rat RatMultiPoly::eval(const Vec& x) const {
  require(int(x.size()) == nvars, "evaluation arity mismatch");
  Rat s = 0;
  mpz_class t;
  for (auto& [e, c] : terms) {
    t = 1;
    for (int i = 0; i < nvars; ++i)
      if (e[i]) {
        mpz_class b = x[i], pw;
        mpz_pow_ui(pw.get_mpz_t(), b.get_mpz_t(), e[i]);
        t *= pw;
      }
    s += c * t;
  }
  return s;
}

bool RatMultiPoly::is_homogeneous() const {
  int d = -2;
  for (auto& [e, c] : terms) {
    int t = total_degree(e);
    if (d == -2) d = t;
    else if (t != d) return false;
  }
  return true;
}

RatMultiPoly RatMultiPoly::operator-() const { return scaled(-1); }

RatMultiPoly& RatMultiPoly::operator+=(const RatMultiPoly& o) {
  require(nvars == o.nvars, "polynomial space mismatch");
  for (auto& [e, c] : o.terms) add_term(e, c);
  return *this;
}

RatMultiPoly& RatMultiPoly::operator-=(const RatMultiPoly& o) {
  require(nvars == o.nvars, "polynomial space mismatch");
  for (auto& [e, c] : o.terms) add_term(e, -c);
  return *this;
}

RatMultiPoly RatMultiPoly::scaled(const Rat& c0) const {
  RatMultiPoly f(nvars);
  Rat c = c0;
  c.canonicalize();
  if (c == 0) return f;
  for (auto& [e, x] : terms) f.terms.emplace(e, x * c);
  return f;
}

RatMultiPoly operator+(RatMultiPoly a, const RatMultiPoly& b) { return a += b; }
RatMultiPoly operator-(RatMultiPoly a, const RatMultiPoly& b) { return a -= b; }

RatMultiPoly operator*(const RatMultiPoly& a, const RatMultiPoly& b) {
  require(a.nvars == b.nvars, "polynomial space mismatch");
  RatMultiPoly c(a.nvars);
  for (auto& [ea, ca] : a.terms)
    for (auto& [eb, cb] : b.terms) c.add_term(add_exp(ea, eb), ca * cb);
  return c;
}

RatMultiPoly pow(const RatMultiPoly& a, int e) {
  RatMultiPoly r = RatMultiPoly::constant(a.nvars, 1);
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

RatMultiPoly compose(const RatMultiPoly& f, const std::vector<RatMultiPoly>& subs) {
  require(int(subs.size()) == f.nvars, "composition arity mismatch");
  int n = subs.empty() ? 0 : subs[0].nvars;
  std::vector<std::vector<RatMultiPoly>> powers(f.nvars);
  RatMultiPoly out(n);
  for (auto& [e, c] : f.terms) {
    RatMultiPoly t = RatMultiPoly::constant(n, c);
    for (int i = 0; i < f.nvars; ++i) {
      if (!e[i]) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(RatMultiPoly::constant(n, 1));
      while (int(pw.size()) <= e[i]) pw.push_back(pw.back() * subs[i]);
      t = t * pw[e[i]];
    }
    out += t;
  }
  return out;
}

RatMultiPoly derivative(const RatMultiPoly& f, int i) {
  RatMultiPoly d(f.nvars);
  for (auto& [e, c] : f.terms) {
    if (!e[i]) continue;
    Exp e2 = e;
    e2[i] -= 1;
    d.add_term(e2, c * e[i]);
  }
  return d;
}

RatMultiPoly delta(const RatMultiPoly& f, const Vec& h) {
  require(int(h.size()) == f.nvars, "shift arity mismatch");
  std::vector<RatMultiPoly> subs;
  for (int i = 0; i < f.nvars; ++i)
    subs.push_back(RatMultiPoly::var(f.nvars, i) + RatMultiPoly::constant(f.nvars, Rat(h[i])));
  return compose(f, subs) - f;
}

RatMultiPoly embed(const RatMultiPoly& f, int nvars, int offset) {
  require(offset + f.nvars <= nvars, "embedding out of range");
  RatMultiPoly g(nvars);
  for (auto& [e, c] : f.terms) {
    Exp e2(nvars, 0);
    std::copy(e.begin(), e.end(), e2.begin() + offset);
    g.terms.emplace(std::move(e2), c);
  }
  return g;
}

// ---------------------------------------------------------------- tau / iota

i64 iota(const Rat& q, i64 p) {
  mpz_class pp = p;
  mpz_class den = q.get_den() % pp;
  if (den == 0) fail(ErrorKind::ValueRange, "denominator divisible by p");
  mpz_class num = q.get_num() % pp;
  return modp(num.get_si(), p) * inv_mod(den.get_si(), p) % p;
}

RatMultiPoly to_rat(const FpMultiPoly& f) {
  RatMultiPoly g(f.nvars);
  for (auto& [e, c] : f.terms) g.terms.emplace(e, Rat(c));
  return g;
}

FpMultiPoly to_fp(const RatMultiPoly& f, i64 p) {
  FpMultiPoly g(p, f.nvars);
  for (auto& [e, c] : f.terms) g.add_term(e, iota(c, p));
  return g;
}

// ---------------------------------------------------------------- binomial basis

std::map<Exp, Rat> binomial_coeffs(const RatMultiPoly& f) {
  const auto& st = stirling(std::max(f.degree(), 0));
  std::map<Exp, Rat> out;
  const int n = f.nvars;
  for (auto& [e, c] : f.terms) {
    // n^a = sum_k S2(a,k) k! C(n,k), per coordinate.
    std::vector<std::pair<Exp, Rat>> acc{{Exp(n, 0), c}};
    for (int j = 0; j < n; ++j) {
      if (!e[j]) continue;
      std::vector<std::pair<Exp, Rat>> next;
      for (auto& [ex, cx] : acc)
        for (int k = 1; k <= e[j]; ++k) {
          Exp e2 = ex;
          e2[j] = k;
          next.emplace_back(e2, cx * Rat(st.s2[e[j]][k] * st.fact[k]));
        }
      acc = std::move(next);
    }
    for (auto& [ex, cx] : acc) {
      auto [it, ins] = out.emplace(ex, cx);
      if (!ins) it->second += cx;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

RatMultiPoly from_binomial(int nvars, const std::map<Exp, Rat>& bc) {
  int deg = 0;
  for (auto& [e, c] : bc) deg = std::max(deg, *std::max_element(e.begin(), e.end()));
  const auto& st = stirling(deg);
  RatMultiPoly f(nvars);
  for (auto& [e, c] : bc) {
    // C(n,k) = (1/k!) sum_j s1(k,j) n^j.
    std::vector<std::pair<Exp, Rat>> acc{{Exp(nvars, 0), c}};
    for (int j = 0; j < nvars; ++j) {
      if (!e[j]) continue;
      std::vector<std::pair<Exp, Rat>> next;
      for (auto& [ex, cx] : acc)
        for (int t = 1; t <= e[j]; ++t) {
          if (st.s1[e[j]][t] == 0) continue;
          Exp e2 = ex;
          e2[j] = t;
          next.emplace_back(e2, cx * Rat(st.s1[e[j]][t]) / Rat(st.fact[e[j]]));
        }
      acc = std::move(next);
    }
    for (auto& [ex, cx] : acc) f.add_term(ex, cx);
  }
  return f;
}

Rat binomial_value(const Exp& i, const Vec& n) {
  mpz_class v = 1;
  for (std::size_t j = 0; j < i.size(); ++j) {
    mpz_class b;
    if (i[j] == 0) continue;
    if (n[j] >= 0) {
      mpz_bin_ui(b.get_mpz_t(), mpz_class(n[j]).get_mpz_t(), i[j]);
    } else {
      // C(-m, k) = (-1)^k C(m+k-1, k)
      mpz_bin_ui(b.get_mpz_t(), mpz_class(-n[j] + i[j] - 1).get_mpz_t(), i[j]);
      if (i[j] % 2) b = -b;
    }
    v *= b;
  }
  return Rat(v);
}

bool is_integer_valued(const RatMultiPoly& f) {
  for (auto& [e, c] : binomial_coeffs(f))
    if (c.get_den() != 1) return false;
  return true;
}

bool has_integer_coeffs(const RatMultiPoly& f) {
  for (auto& [e, c] : f.terms)
    if (c.get_den() != 1) return false;
  return true;
}

mpz_class denominator_lcm(const RatMultiPoly& f) {
  mpz_class l = 1;
  for (auto& [e, c] : f.terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

// ---------------------------------------------------------------- liftings

FpMultiPoly induce(const RatMultiPoly& f, i64 p) {
  if (f.degree() >= p) fail(ErrorKind::InvalidInput, "induce needs deg f < p");
  RatMultiPoly pf = f.scaled(Rat(p));
  if (!is_integer_valued(pf)) fail(ErrorKind::ValueRange, "polynomial does not take values in Z/p");
  // deg < p, so denominators of p f are prime to p.
  return to_fp(pf, p);
}

RatMultiPoly regular_lift(const FpMultiPoly& F) {
  if (F.degree() >= F.p) fail(ErrorKind::InvalidInput, "regular lift needs deg F < p");
  RatMultiPoly f(F.nvars);
  for (auto& [e, c] : F.terms) f.terms.emplace(e, Rat(c, F.p));
  return f;
}

PExpansion p_expand(const RatMultiPoly& f, i64 p) {
  if (f.degree() >= p) fail(ErrorKind::InvalidInput, "p-expansion needs deg f < p");
  if (!is_integer_valued(f)) fail(ErrorKind::NotIntegerValued, "p-expansion needs an integer-valued polynomial");
  mpz_class Q = denominator_lcm(f);
  mpz_class qs = inv_mod(mpz_class(Q % p).get_si(), p);
  RatMultiPoly f2 = f.scaled(Rat(Q * qs));
  RatMultiPoly f1 = f.scaled(Rat(1 - Q * qs, p));
  // Move multiples of p out of f2 so its coefficients land in [0, p).
  RatMultiPoly f2n(f.nvars);
  for (auto& [e, c] : f2.terms) {
    mpz_class num = c.get_num();
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), num.get_mpz_t(), p);
    mpz_class k = (num - r) / p;
    f2n.add_term(e, Rat(r));
    f1.add_term(e, Rat(k));
  }
  return {f1, f2n};
}

namespace {

// h(n, m) = f(n + p m) in 2d variables.
RatMultiPoly shifted_by_pm(const RatMultiPoly& f, i64 p) {
  int d = f.nvars;
  std::vector<RatMultiPoly> subs;
  for (int i = 0; i < d; ++i)
    subs.push_back(RatMultiPoly::var(2 * d, i) + RatMultiPoly::var(2 * d, d + i).scaled(Rat(p)));
  return compose(f, subs);
}

// Integrality of an integer polynomial N at x modulo D, i.e. N(x)/D in Z.
struct ModIntegralityCheck {
  mpz_class D;
  std::vector<std::pair<Exp, mpz_class>> terms;

  bool holds_at(const Vec& x) const {
    if (D == 1) return true;
    if (mpz_sizeinbase(D.get_mpz_t(), 2) <= 62) {
      using u128 = unsigned __int128;
      std::uint64_t m = D.get_ui();
      u128 s = 0;
      for (auto& [e, c] : terms) {
        mpz_class cr;
        mpz_fdiv_r(cr.get_mpz_t(), c.get_mpz_t(), D.get_mpz_t());
        u128 t = cr.get_ui();
        for (std::size_t i = 0; i < e.size(); ++i)
          for (int k = 0; k < e[i]; ++k) {
            i64 xm = x[i] % i64(m);
            if (xm < 0) xm += i64(m);
            t = t * std::uint64_t(xm) % m;
          }
        s = (s + t) % m;
      }
      return s == 0;
    }
    mpz_class s = 0;
    for (auto& [e, c] : terms) {
      mpz_class t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      s += t;
    }
    return mpz_divisible_p(s.get_mpz_t(), D.get_mpz_t()) != 0;
  }
};

}  // namespace

bool is_p_periodic(const RatMultiPoly& f, i64 p) {
  RatMultiPoly g = shifted_by_pm(f, p) - embed(f, 2 * f.nvars, 0);
  return is_integer_valued(g);
}

namespace {

// m -> f(n0 + p m) in the binomial basis of m; checks integrality of the
// coefficients (the constant one only when asked) at each n0 in omega.
bool fiber_check(const RatMultiPoly& f, i64 p, const std::vector<Vec>& omega, bool with_constant,
                 Vec* witness) {
  const int d = f.nvars;
  const auto& st = stirling(std::max(f.degree(), 0));
  RatMultiPoly h = shifted_by_pm(f, p);
  std::map<Exp, RatMultiPoly> H;
  for (auto& [e, c] : h.terms) {
    Exp en(e.begin(), e.begin() + d), em(e.begin() + d, e.end());
    std::vector<std::pair<Exp, Rat>> acc{{Exp(d, 0), c}};
    for (int j = 0; j < d; ++j) {
      if (!em[j]) continue;
      std::vector<std::pair<Exp, Rat>> next;
      for (auto& [ex, cx] : acc)
        for (int k = 1; k <= em[j]; ++k) {
          Exp e2 = ex;
          e2[j] = k;
          next.emplace_back(e2, cx * Rat(st.s2[em[j]][k] * st.fact[k]));
        }
      acc = std::move(next);
    }
    for (auto& [k, ck] : acc) {
      if (!with_constant && total_degree(k) == 0) continue;
      auto it = H.try_emplace(k, RatMultiPoly(d)).first;
      it->second.add_term(en, ck);
    }
  }
  std::vector<ModIntegralityCheck> checks;
  for (auto& [k, hk] : H) {
    if (hk.is_zero()) continue;
    ModIntegralityCheck chk;
    chk.D = denominator_lcm(hk);
    if (chk.D == 1) continue;
    for (auto& [e, c] : hk.terms) chk.terms.emplace_back(e, mpz_class(c * chk.D));
    checks.push_back(std::move(chk));
  }
  for (const Vec& n0 : omega) {
    require(int(n0.size()) == d, "point arity mismatch");
    for (auto& chk : checks)
      if (!chk.holds_at(n0)) {
        if (witness) *witness = n0;
        return false;
      }
  }
  return true;
}

}  // namespace

bool is_partially_p_periodic_on(const RatMultiPoly& f, i64 p, const std::vector<Vec>& omega,
                                Vec* witness) {
  return fiber_check(f, p, omega, false, witness);
}

bool integral_on_fibers(const RatMultiPoly& f, i64 p, const std::vector<Vec>& omega, Vec* witness) {
  Vec n0;
  if (fiber_check(f, p, omega, true, &n0)) return true;
  if (witness) {
    // Values on the box [0..deg]^d determine the fiber polynomial, so a
    // non-integral value shows up there.
    const int d = f.nvars;
    const int deg = std::max(f.degree(), 0);
    Vec m(d, 0);
    *witness = n0;
    for (;;) {
      Vec n(d);
      for (int i = 0; i < d; ++i) n[i] = n0[i] + p * m[i];
      if (f.eval(n).get_den() != 1) {
        *witness = n;
        break;
      }
      int k = d - 1;
      while (k >= 0 && ++m[k] > deg) m[k--] = 0;
      if (k < 0) break;
    }
  }
  return false;
}

// ---------------------------------------------------------------- printing

namespace {
template <class Poly>
std::string poly_to_string(const Poly& f) {
  if (f.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << it->second;
    for (int i = 0; i < f.nvars; ++i)
      if (it->first[i]) {
        os << "*x" << i + 1;
        if (it->first[i] > 1) os << "^" << it->first[i];
      }
  }
  return os.str();
}
}  // namespace

std::string to_string(const FpMultiPoly& f) { return poly_to_string(f); }
std::string to_string(const RatMultiPoly& f) { return poly_to_string(f); }

}  // namespace shofa
