#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include "json_io.hpp"
#include "sphere_hofa/counting.hpp"
#include "sphere_hofa/division.hpp"
#include "sphere_hofa/equidist.hpp"
#include "sphere_hofa/msets.hpp"
#include "sphere_hofa/quadform.hpp"

namespace shofa::cli {

namespace {

constexpr const char* kSchema = "sphere-hofa/1";

struct Config {
  i64 prime = 5;
  int dim = 3;
  std::uint64_t seed = 1;
  double delta = 0.3;
  int freq_budget = 0;
  double budget = kDefaultBudget;
  int threads = 0;
  std::string json_path;
  std::string out_path;

  EnumOptions enum_opts() const { return {threads, budget}; }
};

using Handler = std::function<int(const Config&, const json&, json&)>;

QuadForm form_of(const Config& c, const json& in) {
  if (in.contains("form")) return parse_form(in.at("form"), c.prime, c.dim);
  return QuadForm::sphere(c.prime, c.dim, 1);
}

json witness_json(const Vec& w) { return w.empty() ? json(nullptr) : json(w); }

// Deterministic +-1 function of a point.
i64 random_sign(const Vec& x, std::uint64_t seed) {
  std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ULL;
  for (auto c : x) {
    h ^= std::uint64_t(c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 31;
  }
  return (h >> 11) & 1 ? 1 : -1;
}

PointSet omega_of(const Config& c, const json& spec, int d) {
  if (spec.contains("full") && spec.at("full").get<bool>()) {
    if (ipow(double(c.prime), d) > c.budget) fail(ErrorKind::BudgetExceeded, "full space exceeds the budget");
    PointSet s;
    s.p = c.prime;
    s.d = d;
    std::uint64_t n = std::uint64_t(ipow(double(c.prime), d));
    for (std::uint64_t i = 0; i < n; ++i) s.idx.push_back(i);
    return s;
  }
  if (spec.contains("form")) return enumerate_zeros(parse_form(spec.at("form"), c.prime, d), nullptr, c.enum_opts());
  i64 r = spec.contains("sphere") ? iota(parse_rat(spec.at("sphere")), c.prime) : 1;
  return enumerate_zeros(QuadForm::sphere(c.prime, d, r), nullptr, c.enum_opts());
}

int cmd_normalize(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  NormalizationCert cert = normalize(M);
  out["form"] = form_json(M);
  out["certificate"] = {{"R", matrix_json(cert.R)}, {"shift", cert.shift}, {"c", cert.c},
                        {"cprime", cert.cprime},    {"lambda", cert.lambda}, {"dprime", cert.dprime}};
  out["normal_form"] = to_string(normal_form_poly(cert, M.p, M.d));
  out["rank"] = qf_rank(M);
  out["verified"] = verify_normalization(M, cert);
  return 0;
}

int cmd_count(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  std::optional<AffineSubspace> S;
  if (in.contains("subspace")) {
    AffineSubspace a;
    a.p = M.p;
    a.d = M.d;
    for (auto& b : in["subspace"].at("basis")) a.basis.push_back(parse_vec(b));
    a.offset = in["subspace"].contains("offset") ? parse_vec(in["subspace"]["offset"]) : Vec(M.d, 0);
    S = a;
  }
  CountReport r = zero_count_check(M, S ? &*S : nullptr, c.enum_opts());
  out = count_json(r);
  out["rank"] = S ? restricted_rank(M, *S) : qf_rank(M);
  if (in.value("roots", false)) out["quadratic_roots"] = count_json(quadratic_root_count(M, c.enum_opts()));
  return r.pass ? 0 : 1;
}

int cmd_expsum(const Config& c, const json& in, json& out) {
  if (in.contains("gauss")) {
    auto g = gauss_sum(c.prime, in.at("gauss").get<i64>());
    out = {{"re", g.real()}, {"im", g.imag()}, {"abs", std::abs(g)}, {"sqrt_p", std::sqrt(double(c.prime))}};
    return 0;
  }
  QuadForm M = form_of(c, in);
  Vec xi = in.contains("xi") ? parse_vec(in.at("xi")) : Vec(M.d, 0);
  if (!in.contains("xi")) xi[0] = 1;
  auto s = exp_sum(M, xi, c.enum_opts());
  int r = qf_rank(M);
  double bound = 4 * std::pow(double(M.p), -(r - 2) / 2.0);
  out = {{"xi", xi}, {"re", s.real()}, {"im", s.imag()}, {"abs", std::abs(s)}, {"bound", bound}, {"rank", r}};
  out["pass"] = std::abs(s) <= bound;
  return std::abs(s) <= bound ? 0 : 1;
}

int cmd_gowers(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  int s = in.value("s", 1);
  PointSet V = enumerate_zeros(M, nullptr, c.enum_opts());
  std::uint64_t n = count_gowers(V, s, c.enum_opts());
  double main = gowers_main_term(M.p, M.d, 0, s);
  out = {{"s", s}, {"count", n}, {"main_term", main}, {"omega", V.size()}};
  out["relative_error"] = std::abs(double(n) - main) / main;
  return 0;
}

json division_json(const DivisionCert& d) {
  return {{"Q", poly_json(d.Q)},        {"R1", poly_json(d.R1)}, {"R0", poly_json(d.R0)},
          {"pivot", {d.pivot_i, d.pivot_j}}, {"B", matrix_json(d.B)}, {"exact", d.exact()}};
}

int cmd_divide(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  FpMultiPoly P = parse_fp_poly(in.at("poly"), M.p);
  require(P.nvars == M.d, "polynomial and form have different arity");
  DivisionCert d = divide(P, M);
  out = division_json(d);
  out["verified"] = verify_division(P, M, d);
  if (d.exact()) out["quotient"] = poly_json(quotient_in_original(d));
  return d.exact() ? 0 : 1;
}

int cmd_nullstellensatz(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  FpMultiPoly P = parse_fp_poly(in.at("poly"), M.p);
  require(P.nvars == M.d, "polynomial and form have different arity");
  auto r = nullstellensatz(P, M, c.enum_opts());
  using S = NullstellensatzResult::Status;
  switch (r.status) {
    case S::Certificate:
      out = {{"status", "certificate"}, {"R", poly_json(r.R)}};
      return 0;
    case S::Witness:
      out = {{"status", "witness"}, {"witness", r.witness}, {"P_at_witness", P.eval(r.witness)}};
      return 1;
    case S::Violation:
      out = {{"status", "violation"}, {"division", division_json(r.division)}};
      return 1;
  }
  return 1;
}

int cmd_dichotomy(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  FpMultiPoly P = parse_fp_poly(in.at("poly"), M.p);
  require(P.nvars == M.d, "polynomial and form have different arity");
  auto v = dichotomy(P, M, c.delta, c.enum_opts());
  bool contained = v.kind == DichotomyVerdict::Kind::Contained;
  out = {{"verdict", contained ? "contained" : "small_intersection"},
         {"count", v.count},
         {"total", v.total},
         {"bound_4p", v.bound_4p},
         {"within_4p", v.within_4p},
         {"within_delta", v.within_delta},
         {"middle_ground", v.middle_ground},
         {"witness", witness_json(v.witness)}};
  if (v.certificate) out["certificate"] = division_json(*v.certificate);
  return contained ? 0 : 1;
}

int cmd_decompose(const Config& c, const json& in, json& out) {
  const std::string kind = in.at("kind").get<std::string>();
  out["kind"] = kind;
  if (kind == "att1") {
    QuadForm M = form_of(c, in);
    auto r = intrinsic_decompose(parse_fp_poly(in.at("poly"), M.p), M, in.value("s", 1), c.enum_opts());
    using S = IntrinsicResult::Status;
    if (r.status == S::Decomposed) {
      out["status"] = "decomposed";
      out["g1"] = poly_json(r.g1);
      out["g2"] = poly_json(r.g2);
      return 0;
    }
    out["status"] = r.status == S::Witness ? "witness" : "violation";
    out["witness"] = witness_json(r.witness);
    return 1;
  }
  if (kind == "packforce0") {
    QuadForm M = form_of(c, in);
    auto r = gowers_equation_solve(parse_fp_poly(in.at("P"), M.p), parse_fp_poly(in.at("Q"), M.p), M,
                                   in.value("s", 1), in.at("k").get<int>(), c.enum_opts());
    using S = GowersEquationResult::Status;
    if (r.status == S::Solved) {
      out["status"] = "decomposed";
      out["P1"] = poly_json(r.P1);
      out["P2"] = poly_json(r.P2);
      out["Q1"] = poly_json(r.Q1);
      out["Q2"] = poly_json(r.Q2);
      return 0;
    }
    out["status"] = r.status == S::HypothesisFailed ? "hypothesis_failed" : "no_solution";
    out["witness"] = witness_json(r.witness);
    return 1;
  }
  if (kind == "antiderivative") {
    QuadForm M = form_of(c, in);
    auto r = antiderivative(parse_fp_poly(in.at("poly"), M.p), M, c.enum_opts());
    using S = AntiderivativeResult::Status;
    static const std::map<S, const char*> names = {{S::Ok, "decomposed"},
                                                   {S::HypothesisFailed, "hypothesis_failed"},
                                                   {S::ConstantTerm, "constant_term"},
                                                   {S::Violation, "violation"}};
    out["status"] = names.at(r.status);
    if (r.status == S::Ok || r.status == S::ConstantTerm) {
      out["Qprime"] = poly_json(r.Qprime);
      out["constant"] = r.constant;
    }
    if (r.status == S::HypothesisFailed) {
      out["failed_index"] = r.failed_index;
      out["witness"] = r.witness;
    }
    return r.status == S::Ok ? 0 : 1;
  }
  const RatMultiPoly M = parse_rat_poly(in.at("M"));
  if (kind == "lift") {
    auto r = lift_nullstellensatz(parse_rat_poly(in.at("P")), M, c.prime, c.enum_opts());
    using S = LiftNullResult::Status;
    if (r.status == S::Decomposed) {
      out["status"] = "decomposed";
      out["P1"] = poly_json(r.P1);
      out["P0"] = poly_json(r.P0);
      return 0;
    }
    out["status"] = r.status == S::Witness ? "witness" : "violation";
    out["witness"] = witness_json(r.witness);
    return 1;
  }
  if (kind == "basicpp1" || kind == "basicpp2") {
    const bool periodic = kind == "basicpp2";
    RatMultiPoly f = parse_rat_poly(in.at("f"));
    auto dec = periodic ? sphere_periodic_decompose(f, M, c.prime, c.enum_opts())
                        : sphere_vanishing_decompose(f, M, c.prime, c.enum_opts());
    using S = SphereDecomposition::Status;
    if (dec.status == S::Decomposed) {
      out["status"] = "decomposed";
      out["Q0"] = dec.Q0.get_str();
      out["C"] = rat_json(dec.C);
      json rs = json::array();
      for (auto& R : dec.R) rs.push_back(poly_json(R));
      out["R"] = rs;
      out["verified"] = verify_sphere_decomposition(f, M, c.prime, dec, periodic);
      if (!periodic) out["pfloor_integer_valued"] = dec.pfloor_integer_valued;
      return 0;
    }
    out["status"] = dec.status == S::Witness ? "witness" : "violation";
    out["witness"] = witness_json(dec.witness);
    out["note"] = dec.note;
    return 1;
  }
  fail(ErrorKind::InvalidInput, "unknown decomposition kind '" + kind + "'");
}

json flags_json(const FamilyFlags& f) {
  const char* nice = f.nice == Tri::Yes ? "yes" : f.nice == Tri::No ? "no" : "unknown";
  return {{"pure", f.pure}, {"consistent", f.consistent}, {"independent", f.independent},
          {"nice", nice},   {"nice_reason", f.nice_reason}};
}

MFamily family_of(const json& in, const QuadForm& M) {
  return in.contains("family") ? parse_family(in.at("family"), M) : gowers_family(M, 0);
}

int cmd_mset_repr(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  MFamily fam = family_of(in, M);
  FamilyFlags fl = classify(fam);
  out["flags"] = flags_json(fl);
  if (!fl.consistent) return 1;
  MRepresentation rep = standard_rep(fam);
  out["standard"] = family_json(rep.family);
  out["dimension_vector"] = rep.dimension_vector;
  out["total_codim"] = rep.total_codim;
  return 0;
}

int cmd_fubini(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  MFamily fam = family_of(in, M);
  int kprime = in.value("kprime", 1);
  std::string fn = in.value("function", std::string("random"));
  std::function<i64(const Vec&)> f;
  if (fn == "one") f = [](const Vec&) { return i64(1); };
  else if (fn == "random") f = [&](const Vec& x) { return random_sign(x, c.seed); };
  else fail(ErrorKind::InvalidInput, "function must be \"one\" or \"random\"");
  auto r = fubini_check(fam, kprime, f, c.enum_opts());
  out = {{"lhs", rat_json(r.lhs)},        {"rhs", rat_json(r.rhs)},
         {"lhs_value", r.lhs.get_d()},    {"rhs_value", r.rhs.get_d()},
         {"diff", r.diff},                {"bound", r.bound},
         {"pass", r.pass},                {"omega", r.omega_size},
         {"projection", r.projection_size}, {"empty_fibers", r.empty_fibers}};
  return r.pass ? 0 : 1;
}

int cmd_irreducibility(const Config& c, const json& in, json& out) {
  QuadForm M = form_of(c, in);
  MFamily fam = family_of(in, M);
  int trials = in.value("trials", 50);
  int degree = in.value("degree", 3);
  require(trials >= 0 && degree >= 0, "trials and degree must be non-negative");
  std::mt19937_64 rng(c.seed);
  std::vector<FpMultiPoly> polys;
  for (int t = 0; t < trials; ++t) polys.push_back(random_poly(M.p, fam.k * fam.d, degree, rng));
  ProbeOptions po;
  po.delta = c.delta;
  po.seed = c.seed;
  po.samples = in.value("samples", po.samples);
  po.enumeration = c.enum_opts();
  ProbeReport rep = irreducibility_probe(fam, M, polys, po);
  static const char* names[] = {"contained", "small", "middle_ground", "inconclusive"};
  json vs = json::array();
  for (auto& v : rep.verdicts)
    vs.push_back({{"kind", names[int(v.kind)]}, {"hits", v.hits}, {"total", v.total}, {"ratio", v.ratio},
                  {"std_error", v.std_error}, {"witness", witness_json(v.witness)}});
  out = {{"sampled", rep.sampled},       {"hypotheses_met", rep.hypotheses_met},
         {"codim", rep.codim},           {"middle_ground", rep.middle_ground},
         {"inconclusive", rep.inconclusive}, {"verdicts", vs}};
  return rep.middle_ground == 0 ? 0 : 1;
}

json report_json(const EquidistReport& r) {
  static const char* names[] = {"equidistributed", "obstructed", "unresolved"};
  json o = {{"verdict", names[int(r.verdict)]}, {"max_fourier", r.max_fourier}, {"max_k", r.max_k},
            {"delta", r.delta},                 {"K", r.K},                     {"characters", r.characters},
            {"points", r.points}};
  if (r.witness) o["witness"] = {{"k", r.witness->k}, {"complexity", r.witness->complexity},
                                 {"constant", rat_json(r.witness->constant)}};
  return o;
}

int freq_budget(const Config& c) { return c.freq_budget > 0 ? c.freq_budget : default_freq_budget(c.delta); }

int cmd_equidist(const Config& c, const json& in, json& out) {
  TorusPolySeq g = parse_seq(in.at("sequence"));
  PointSet omega = omega_of(c, in.value("omega", json::object()), g.d);
  auto r = equidist_test(g, omega, c.delta, freq_budget(c), c.enum_opts());
  out = report_json(r);
  return r.verdict == EquidistReport::Verdict::Equidistributed ? 0 : 1;
}

int cmd_weyl(const Config& c, const json& in, json& out) {
  RatMultiPoly g = parse_rat_poly(in.at("poly"));
  i64 r = in.contains("r") ? iota(parse_rat(in.at("r")), c.prime) : 1;
  auto w = weyl_dichotomy(g, c.prime, g.nvars, r, c.delta, c.enum_opts());
  static const char* names[] = {"sum_small", "constant", "violation"};
  out = {{"branch", names[int(w.branch)]}, {"value", w.value}, {"unit_exact", w.unit_exact},
         {"points", w.points}, {"re", w.sum.real()}, {"im", w.sum.imag()}};
  if (w.branch == WeylResult::Branch::Constant) {
    out["constant"] = w.constant;
    out["g1"] = poly_json(w.g1);
    out["g2"] = poly_json(w.g2);
    out["certificate_verified"] = w.certificate_verified;
  }
  if (!w.note.empty()) out["note"] = w.note;
  return w.branch == WeylResult::Branch::SumSmall ? 0 : 1;
}

int cmd_leibman(const Config& c, const json& in, json& out) {
  int d = in.value("d", c.dim);
  PointSet omega = omega_of(c, in.value("omega", json::object()), d);
  auto st = leibman_probe(omega, in.value("m", 1), in.value("s", 2), c.delta, in.value("trials", 10), freq_budget(c),
                          c.seed, c.enum_opts());
  json ex = json::array();
  for (auto& t : st.exceptions) ex.push_back({{"sequence", seq_json(t.g)}, {"report", report_json(t.report)}});
  out = {{"trials", st.trials},       {"equidistributed", st.equidistributed}, {"obstructed", st.obstructed},
         {"unresolved", st.unresolved}, {"hypotheses_met", st.hypotheses_met}, {"exceptions", ex}};
  return 0;
}

const std::map<std::string, std::pair<Handler, const char*>>& commands() {
  static const std::map<std::string, std::pair<Handler, const char*>> cmds = {
      {"normalize", {cmd_normalize, "Normal form of a quadratic form with a certificate"}},
      {"count", {cmd_count, "Count zeros of a quadratic form, optionally on an affine subspace"}},
      {"expsum", {cmd_expsum, "Character sum over V(M), or a Gauss sum"}},
      {"gowers", {cmd_gowers, "Size of the Gowers set Box_s(V(M))"}},
      {"divide", {cmd_divide, "Long division by M with a pivot change"}},
      {"nullstellensatz", {cmd_nullstellensatz, "Certificate P = M R or a witness point"}},
      {"dichotomy", {cmd_dichotomy, "Containment or small intersection of V(P) and V(M)"}},
      {"decompose", {cmd_decompose, "Decomposition solvers (att1, packforce0, antiderivative, lift, basicpp1/2)"}},
      {"mset-repr", {cmd_mset_repr, "Standard representation and flags of an M-family"}},
      {"fubini-check", {cmd_fubini, "Iterated versus direct averages on an M-set"}},
      {"irreducibility-probe", {cmd_irreducibility, "Random polynomials against a nice M-set"}},
      {"equidist", {cmd_equidist, "Fourier test of a torus sequence on a point set"}},
      {"weyl", {cmd_weyl, "Weyl sum along a sphere with a divisibility certificate"}},
      {"leibman-probe", {cmd_leibman, "Dichotomy statistics for random periodic sequences"}},
  };
  return cmds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic forms, spherical counting and equidistribution checks over F_p"};
  app.require_subcommand(1, 1);
  Config cfg;
  std::string chosen;
  for (auto& [name, entry] : commands()) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--prime", cfg.prime, "Prime p >= 5");
    sub->add_option("--dim", cfg.dim, "Dimension d");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--delta", cfg.delta, "Threshold delta");
    sub->add_option("--freq-budget", cfg.freq_budget, "Frequency budget K (default ceil(delta^-2), capped at 1000)");
    sub->add_option("--budget", cfg.budget, "Enumeration budget");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
    sub->add_option("--json", cfg.json_path, "Input JSON file");
    sub->add_option("--out", cfg.out_path, "Write the report here instead of stdout");
    sub->callback([&chosen, name = name] { chosen = name; });
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    app.exit(e, o, er);
    err << er.str() << o.str();
    return 2;
  }

  json result = {{"schema", kSchema}, {"command", chosen}};
  int code = 0;
  try {
    require(cfg.prime >= 5 && is_prime(cfg.prime) && cfg.prime < (i64(1) << 31), "--prime must be a prime >= 5");
    require(cfg.dim >= 1 && cfg.dim <= 64, "--dim out of range");
    require(cfg.budget > 0, "--budget must be positive");
    require(cfg.delta > 0 && cfg.delta < 1, "--delta must lie in (0, 1)");
    require(cfg.threads >= 0, "--threads must be non-negative");
    json in = json::object();
    if (!cfg.json_path.empty()) {
      std::ifstream f(cfg.json_path);
      if (!f) fail(ErrorKind::InvalidInput, "cannot open " + cfg.json_path);
      in = json::parse(f);
      require(in.is_object(), "input must be a JSON object");
    }
    result["params"] = {{"prime", cfg.prime}, {"dim", cfg.dim},         {"seed", cfg.seed},
                        {"delta", cfg.delta}, {"budget", cfg.budget}, {"freq_budget", cfg.freq_budget}};
    json body;
    code = commands().at(chosen).first(cfg, in, body);
    result["result"] = body;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::BudgetExceeded ? 3 : 2;
  } catch (const json::exception& e) {
    err << "error (json): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::string text = result.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out_path);
    if (!f) {
      err << "error: cannot write " << cfg.out_path << "\n";
      return 2;
    }
    f << text;
  }
  return code;
}

}  // namespace shofa::cli
