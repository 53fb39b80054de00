#include "json_io.hpp"

#include <sstream>

namespace shofa::cli {

Rat parse_rat(const json& j) {
  if (j.is_number_integer()) return Rat(mpz_class(std::to_string(j.get<long long>())));
  if (j.is_string()) {
    Rat q;
    if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0)
      fail(ErrorKind::InvalidInput, "bad rational '" + j.get<std::string>() + "'");
    q.canonicalize();
    return q;
  }
  fail(ErrorKind::InvalidInput, "expected an integer or an \"a/b\" string");
}

json rat_json(const Rat& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

Vec parse_vec(const json& j) {
  require(j.is_array(), "expected an integer array");
  Vec v;
  for (auto& x : j) {
    require(x.is_number_integer(), "expected an integer array");
    v.push_back(x.get<i64>());
  }
  return v;
}

namespace {

template <class F>
void for_terms(const json& j, int& nvars, F&& add) {
  require(j.is_object() && j.contains("nvars") && j.contains("terms"), "polynomial needs nvars and terms");
  nvars = j.at("nvars").get<int>();
  require(nvars >= 0 && nvars <= 64, "nvars out of range");
  for (auto& t : j.at("terms")) {
    Vec e = parse_vec(t.at("exp"));
    require(int(e.size()) == nvars, "exponent arity mismatch");
    Exp ex(e.begin(), e.end());
    for (int x : ex) require(x >= 0 && x <= 64, "exponent out of range");
    add(ex, parse_rat(t.at("coeff")));
  }
}

}  // namespace

RatMultiPoly parse_rat_poly(const json& j) {
  int n = 0;
  RatMultiPoly f;
  bool init = false;
  for_terms(j, n, [&](const Exp& e, const Rat& c) {
    if (!init) f = RatMultiPoly(n), init = true;
    f.add_term(e, c);
  });
  if (!init) f = RatMultiPoly(n);
  return f;
}

FpMultiPoly parse_fp_poly(const json& j, i64 p) {
  int n = 0;
  std::vector<std::pair<Exp, Rat>> terms;
  for_terms(j, n, [&](const Exp& e, const Rat& c) { terms.emplace_back(e, c); });
  FpMultiPoly f(p, n);
  for (auto& [e, c] : terms) f.add_term(e, iota(c, p));
  return f;
}

json poly_json(const RatMultiPoly& f) {
  json terms = json::array();
  for (auto& [e, c] : f.terms) terms.push_back({{"exp", e}, {"coeff", rat_json(c)}});
  return {{"nvars", f.nvars}, {"terms", terms}, {"text", to_string(f)}};
}

json poly_json(const FpMultiPoly& f) {
  json terms = json::array();
  for (auto& [e, c] : f.terms) terms.push_back({{"exp", e}, {"coeff", c}});
  return {{"nvars", f.nvars}, {"terms", terms}, {"text", to_string(f)}};
}

QuadForm parse_form(const json& j, i64 p, int dim_hint) {
  require(j.is_object(), "form must be an object");
  if (j.contains("sphere")) {
    int d = j.value("d", dim_hint);
    require(d >= 1, "sphere needs a dimension (--dim or \"d\")");
    return QuadForm::sphere(p, d, iota(parse_rat(j.at("sphere")), p));
  }
  require(j.contains("A"), "form needs a matrix A");
  std::vector<Vec> rows;
  for (auto& r : j.at("A")) rows.push_back(parse_vec(r));
  int d = int(rows.size());
  require(d >= 1, "empty matrix");
  for (auto& r : rows) {
    require(int(r.size()) == d, "A must be square");
    for (auto& x : r) x = modp(x, p);
  }
  Vec u = j.contains("u") ? parse_vec(j.at("u")) : Vec(d, 0);
  require(int(u.size()) == d, "u has the wrong length");
  for (auto& x : u) x = modp(x, p);
  i64 v = j.contains("v") ? iota(parse_rat(j.at("v")), p) : 0;
  return QuadForm(FpMatrix::from_rows(p, rows), u, v);
}

json matrix_json(const FpMatrix& m) { return m.to_rows(); }

json form_json(const QuadForm& M) { return {{"p", M.p}, {"A", matrix_json(M.A)}, {"u", M.u}, {"v", M.v}}; }

MFamily parse_family(const json& j, const QuadForm& M) {
  require(j.is_object(), "family must be an object");
  if (j.contains("gowers")) return gowers_family(M, j.at("gowers").get<int>());
  MFamily fam;
  fam.p = M.p;
  fam.d = M.d;
  fam.A = M.A;
  fam.k = j.at("k").get<int>();
  require(fam.k >= 0 && fam.k <= 16, "k out of range");
  for (auto& fj : j.at("functions")) {
    MQuadFn F(fam.k, fam.d);
    if (fj.contains("b"))
      for (auto& [key, val] : fj.at("b").items()) {
        int a = 0, b = 0;
        char comma = 0;
        std::istringstream is(key);
        if (!(is >> a >> comma >> b) || comma != ',' || a < 1 || b < 1 || a > fam.k || b > fam.k)
          fail(ErrorKind::InvalidInput, "bad b key '" + key + "'");
        F.set_b(a - 1, b - 1, iota(parse_rat(val), fam.p), fam.p);
      }
    if (fj.contains("v")) {
      require(fj.at("v").size() == std::size_t(fam.k), "v needs one vector per block");
      for (int i = 0; i < fam.k; ++i) {
        Vec v = parse_vec(fj.at("v")[i]);
        require(int(v.size()) == fam.d, "v_i has the wrong length");
        for (auto& x : v) x = modp(x, fam.p);
        F.v[i] = v;
      }
    }
    if (fj.contains("u")) F.u = iota(parse_rat(fj.at("u")), fam.p);
    fam.fns.push_back(F);
  }
  return fam;
}

json family_json(const MFamily& fam) {
  json fns = json::array();
  for (auto& F : fam.fns) {
    json b = json::object();
    for (auto& [ij, c] : F.b) b[std::to_string(ij.first + 1) + "," + std::to_string(ij.second + 1)] = c;
    fns.push_back({{"b", b}, {"v", F.v}, {"u", F.u}});
  }
  return {{"k", fam.k}, {"functions", fns}};
}

TorusPolySeq parse_seq(const json& j) {
  TorusPolySeq g;
  g.m = j.at("m").get<int>();
  g.s = j.at("s").get<int>();
  g.d = j.value("d", 0);
  if (j.contains("filtration")) {
    for (auto& x : j.at("filtration")) g.filtration.push_back(x.get<int>());
  }
  for (auto& c : j.at("coeffs")) {
    Vec idx = parse_vec(c.at("index"));
    if (g.d == 0) g.d = int(idx.size());
    require(int(idx.size()) == g.d, "index arity mismatch");
    std::vector<Rat> val;
    for (auto& x : c.at("value")) val.push_back(parse_rat(x));
    Exp e(idx.begin(), idx.end());
    for (int x : e) require(x >= 0, "negative binomial index");
    g.coeffs[e] = val;
  }
  require(g.d >= 1, "sequence needs a dimension");
  g.validate();
  return g;
}

json seq_json(const TorusPolySeq& g) {
  json cs = json::array();
  for (auto& [i, c] : g.coeffs) {
    json v = json::array();
    for (auto& x : c) v.push_back(x.get_str());
    cs.push_back({{"index", i}, {"value", v}});
  }
  return {{"m", g.m}, {"s", g.s}, {"d", g.d}, {"coeffs", cs}};
}

json count_json(const CountReport& r) {
  return {{"exact", r.exact},          {"main_term", r.main_term}, {"error_bound", r.error_bound},
          {"constant", r.constant_used}, {"pass", r.pass},          {"ratio", r.ratio}};
}

}  // namespace shofa::cli
