#include "qgamble/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "qgamble/classical.hpp"
#include "qgamble/entanglement.hpp"
#include "qgamble/json_io.hpp"
#include "qgamble/quasiprob.hpp"
#include "qgamble/sos.hpp"

namespace qgamble {

namespace {

using nlohmann::json;

json load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  json j;
  in >> j;  // parse errors propagate as nlohmann::json::parse_error
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
  return j;
}

std::string dir_of(const std::string& path) {
  const auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

void require_kind(const json& j, const std::string& want) {
  if (!j.contains("kind") || j["kind"] != want)
    throw ValidationError("scenario kind must be '" + want + "'");
}

std::uint64_t effective_seed(const json& j, const ScenarioOptions& opts) {
  if (opts.seed_overridden) return opts.seed;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw ValidationError("seed must be an integer");
    return j["seed"].get<std::uint64_t>();
  }
  if (const char* env = std::getenv("QGAMBLE_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return opts.seed;
}

int effective_restarts(const json& j) {
  if (j.contains("restarts")) {
    const int r = j["restarts"].get<int>();
    if (r < 1) throw ValidationError("restarts must be positive");
    return r;
  }
  return kDefaultSeesawRestarts;
}

SystemShape shape_from(const json& j) {
  if (!j.contains("shape")) throw ValidationError("scenario needs a 'shape' array");
  std::vector<int> dims;
  for (const auto& d : j["shape"]) dims.push_back(d.get<int>());
  return SystemShape(dims);
}

Gamble gamble_from(const json& j) { return Gamble(real_vector_from_json(j)); }

Poly2 poly_from(const json& j) {
  if (!j.is_array()) throw ValidationError("polynomial must be a list of {alpha, beta, coeff}");
  Poly2 p;
  for (const auto& t : j) {
    if (!t.contains("alpha") || !t.contains("beta") || !t.contains("coeff"))
      throw ValidationError("polynomial term needs alpha, beta, coeff");
    p.set(t["alpha"].get<int>(), t["beta"].get<int>(), t["coeff"].get<double>());
  }
  return p;
}

void write_poly(ReportWriter& w, const Poly2& p) {
  w.begin_array();
  for (const auto& [m, c] : p.terms()) {
    w.begin_object();
    w.key("alpha").value(m.alpha);
    w.key("beta").value(m.beta);
    w.key("coeff").value(c);
    w.end_object();
  }
  w.end_array();
}

void write_product_state(ReportWriter& w, const ProductState& s) {
  w.begin_array();
  for (int f = 0; f < s.num_factors(); ++f) {
    w.begin_array();
    for (int i = 0; i < s.factor(f).dim(); ++i) w.complex_value(s.factor(f)[i]);
    w.end_array();
  }
  w.end_array();
}

void trace_solver(const ScenarioOptions& opts, const char* what, int iterations, double gap) {
  if (opts.verbose) std::fprintf(stderr, "[%s] iterations=%d gap=%.3e\n", what, iterations, gap);
}

// ---- command handlers ----

std::string coherence_classical(const json& j, const ScenarioOptions&) {
  require_kind(j, "classical");
  const int omega = j.at("omega").get<int>();
  std::vector<Gamble> gs;
  for (const auto& g : j.at("assessments")) gs.push_back(gamble_from(g));
  const AssessmentSet a(omega, gs);

  DutchBook book;
  const bool coherent = is_coherent(a, &book);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("coherence classical");
  w.key("omega").value(omega);
  w.key("assessments").begin_array();
  for (const auto& g : gs) w.real_array(g.values);
  w.end_array();
  w.key("coherent").value(coherent);
  if (coherent) {
    const auto cw = credal_witness(a);
    w.key("credal_witness").real_array(cw.pmf);
  } else {
    w.key("dutch_book").begin_object();
    w.key("coefficients").real_array(book.coefficients);
    w.key("combined").real_array(book.combined.values);
    w.key("max_payoff").value(book.combined.max());
    w.end_object();
  }
  w.end_object();
  return w.str();
}

std::string prevision_classical(const json& j, const ScenarioOptions&) {
  require_kind(j, "classical");
  const int omega = j.at("omega").get<int>();
  std::vector<Gamble> gs;
  for (const auto& g : j.at("assessments")) gs.push_back(gamble_from(g));
  const AssessmentSet a(omega, gs);
  const Gamble f = gamble_from(j.at("query"));

  ReportWriter w;
  w.begin_object();
  w.key("command").value("prevision classical");
  w.key("omega").value(omega);
  w.key("query").real_array(f.values);

  DutchBook book;
  if (!is_coherent(a, &book)) {
    w.key("coherent").value(false);
    w.key("dutch_book").begin_object();
    w.key("coefficients").real_array(book.coefficients);
    w.key("combined").real_array(book.combined.values);
    w.end_object();
    w.end_object();
    return w.str();
  }
  w.key("coherent").value(true);
  w.key("lower_prevision").value(lower_prevision(a, f));
  w.key("upper_prevision").value(upper_prevision(a, f));
  w.key("in_natural_extension").value(natural_extension_contains(a, f));
  w.end_object();
  return w.str();
}

QuantumAssessmentSet quantum_set_from(const json& j) {
  const SystemShape shape = shape_from(j);
  std::vector<HermitianGamble> gs;
  if (j.contains("assessments"))
    for (const auto& g : j["assessments"]) gs.emplace_back(shape, matrix_from_json(g));
  QuantumAssessmentSet base(shape, gs);
  if (j.contains("pin_state")) {
    const DensityMatrix rho(matrix_from_json(j["pin_state"]));
    const auto pinned = pinning_assessments(rho, shape);
    std::vector<HermitianGamble> all = base.gambles();
    for (const auto& g : pinned.gambles()) all.push_back(g);
    return QuantumAssessmentSet(shape, all);
  }
  return base;
}

std::string coherence_quantum(const json& j, const ScenarioOptions&) {
  require_kind(j, "quantum");
  const auto a = quantum_set_from(j);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("coherence quantum");
  w.key("shape").begin_array();
  for (int d : a.shape().dims) w.value(d);
  w.end_array();
  w.key("assessment_count").value(a.count());

  IncoherenceCertificate cert;
  const bool coherent = is_p_coherent(a, &cert);
  w.key("p_coherent").value(coherent);
  if (coherent) {
    const auto rho = dual_state(a);
    w.key("dual_state").matrix_value(rho.matrix());
  } else {
    w.key("certificate").begin_object();
    w.key("lambda").real_array(cert.lambda);
    w.key("remainder").matrix_value(cert.remainder);
    w.end_object();
  }
  w.end_object();
  return w.str();
}

std::string prevision_quantum(const json& j, const ScenarioOptions& opts) {
  require_kind(j, "quantum");
  const auto a = quantum_set_from(j);
  const HermitianGamble f(a.shape(), matrix_from_json(j.at("query")));

  ReportWriter w;
  w.begin_object();
  w.key("command").value("prevision quantum");
  w.key("query").matrix_value(f.g);

  IncoherenceCertificate cert;
  if (!is_p_coherent(a, &cert)) {
    w.key("p_coherent").value(false);
    w.key("certificate").begin_object();
    w.key("lambda").real_array(cert.lambda);
    w.key("remainder").matrix_value(cert.remainder);
    w.end_object();
    w.end_object();
    return w.str();
  }
  const auto lo = lower_prevision_report(a, f);
  const auto up = lower_prevision_report(a, HermitianGamble(f.shape, -f.g));
  trace_solver(opts, "prevision quantum", lo.iterations, lo.gap);

  w.key("p_coherent").value(true);
  w.key("lower_prevision").value(lo.value);
  w.key("upper_prevision").value(-up.value);
  w.key("lambda").real_array(lo.lambda);
  w.key("dual_state").matrix_value(lo.dual_rho->matrix());
  w.key("duality_gap").value(lo.gap);
  w.key("iterations").value(lo.iterations);
  w.end_object();
  return w.str();
}

std::string witness_cmd(const json& j, const ScenarioOptions& opts) {
  require_kind(j, "witness");
  const SystemShape shape = shape_from(j);
  const HermitianGamble h(shape, matrix_from_json(j.at("h")));
  const DensityMatrix rho(matrix_from_json(j.at("rho")));
  const double eps = j.contains("epsilon") ? j["epsilon"].get<double>() : 0.0;
  const double verdict_tol = opts.tol.value_or(1e-9);
  const auto rep = witness_check(h, rho, eps, effective_restarts(j), effective_seed(j, opts),
                                 opts.threads, verdict_tol);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("witness");
  w.key("epsilon").value(rep.epsilon);
  w.key("trace_value").value(rep.trace_value);
  w.key("product_max").value(rep.product_max);
  w.key("product_max_state");
  write_product_state(w, rep.seesaw.state);
  w.key("condition_holds").value(rep.condition_holds);
  w.key("epsilon_band").begin_array().value(rep.epsilon_band_lo).value(rep.epsilon_band_hi).end_array();
  w.key("lambda_max_upper_bound").value(rep.seesaw.upper_bound);
  w.key("restarts").value(effective_restarts(j));

  if (shape.dims.size() == 2) {
    const auto ppt = ppt_check(rho, shape.dims, verdict_tol);
    w.key("ppt").begin_object();
    w.key("entangled").value(ppt.entangled);
    w.key("conclusive").value(ppt.conclusive);
    w.key("min_eigenvalue").value(ppt.min_eigenvalue);
    w.end_object();
    if (ppt.entangled) {
      const auto derived =
          witness_from_ppt(rho, shape.dims, effective_restarts(j), effective_seed(j, opts));
      w.key("derived_witness").begin_object();
      w.key("matrix").matrix_value(derived.g);
      w.key("trace_against_rho").value(trace_product(derived.g, rho.matrix()));
      w.end_object();
    }
  }
  w.end_object();
  return w.str();
}

std::string chsh_cmd(const json& j, const ScenarioOptions& opts) {
  require_kind(j, "chsh");
  ChshConfig cfg;
  if (j.contains("angles")) {
    const auto& a = j["angles"];
    cfg.alpha1 = a.at("alpha1").get<double>();
    cfg.alpha2 = a.at("alpha2").get<double>();
    cfg.beta1 = a.at("beta1").get<double>();
    cfg.beta2 = a.at("beta2").get<double>();
  }
  const DensityMatrix rho(matrix_from_json(j.at("rho")));
  const auto rep =
      bell_gap_report(cfg, rho, effective_restarts(j), effective_seed(j, opts), opts.threads);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("chsh");
  w.key("angles").begin_object();
  w.key("alpha1").value(cfg.alpha1);
  w.key("alpha2").value(cfg.alpha2);
  w.key("beta1").value(cfg.beta1);
  w.key("beta2").value(cfg.beta2);
  w.end_object();
  w.key("operator").matrix_value(chsh_operator(cfg).g);
  w.key("quantum_value").value(rep.quantum_value);
  w.key("product_state_max").value(rep.product_max);
  w.key("algebraic_bound").value(rep.algebraic_bound);
  w.key("lambda_max").value(rep.lambda_max);
  w.key("chain_holds")
      .value(rep.product_max <= rep.algebraic_bound + 1e-9 &&
             rep.quantum_value <= rep.lambda_max + 1e-9);
  w.end_object();
  return w.str();
}

std::string quasifit_cmd(const json& j, const ScenarioOptions& opts, const std::string& base_dir) {
  require_kind(j, "quasifit");
  const SystemShape shape = shape_from(j);
  const DensityMatrix target(matrix_from_json(j.at("target")));

  ReportWriter w;
  w.begin_object();
  w.key("command").value("quasifit");
  w.key("target").matrix_value(target.matrix());

  SignedCharge charge;
  if (j.contains("charge_file")) {
    charge = load_charge_file(base_dir + "/" + j["charge_file"].get<std::string>());
    w.key("source").value("file");
  } else {
    const int k =
        j.contains("atoms") ? j["atoms"].get<int>() : 4 * shape.total_dim() * shape.total_dim();
    charge = fit_signed_charge(target, shape, k, effective_seed(j, opts));
    w.key("source").value("fit");
  }

  const auto moments = charge_moment_matrix(charge);
  w.key("atom_count").value(static_cast<int>(charge.atoms.size()));
  w.key("weights").begin_array();
  for (const auto& atom : charge.atoms) w.value(atom.weight);
  w.end_array();
  w.key("weight_sum").value(charge.weight_sum());
  w.key("min_weight").value(charge.min_weight());
  w.key("moment_matrix").matrix_value(moments);
  w.key("max_moment_error").value((moments - target.matrix()).max_abs());
  w.key("marginals").begin_array();
  for (int f = 0; f < shape.factors(); ++f) w.matrix_value(marginal_moments(charge, f));
  w.end_array();
  w.end_object();
  return w.str();
}

std::string condition_cmd(const json& j, const ScenarioOptions&) {
  require_kind(j, "condition");
  const DensityMatrix rho(matrix_from_json(j.at("rho")));
  const HermitianMatrix projector = matrix_from_json(j.at("projector"));
  const auto post = luder_condition(rho, projector);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("condition");
  w.key("probability").value(trace_product(projector, rho.matrix()));
  w.key("state").matrix_value(post.matrix());
  w.end_object();
  return w.str();
}

std::string evolve_cmd(const json& j, const ScenarioOptions&) {
  require_kind(j, "evolve");
  const DensityMatrix rho(matrix_from_json(j.at("rho")));
  const auto& ju = j.at("unitary");
  const int n = static_cast<int>(ju.size());
  std::vector<Complex> u;
  for (const auto& row : ju)
    for (const auto& cell : row) u.push_back(complex_from_json(cell));
  const auto post = unitary_evolve(rho, ComplexMatrix(n, std::move(u)));

  ReportWriter w;
  w.begin_object();
  w.key("command").value("evolve");
  w.key("state").matrix_value(post.matrix());
  w.end_object();
  return w.str();
}

std::string sos_motzkin_cmd(const ScenarioOptions& opts) {
  const auto z = ze_matrix();
  const auto m = motzkin();
  const auto gram = gram_sos_feasible(m);
  trace_solver(opts, "sos motzkin", gram.iterations, 0.0);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("sos motzkin");
  w.key("polynomial");
  write_poly(w, m);
  w.key("grid_min").value(grid_min(m, 2.0, 400));
  w.key("sos_feasible").value(gram.feasible);
  if (!gram.feasible) w.key("infeasibility_certificate").real_array(gram.certificate);
  w.key("moment_value_of_negated").value(lb_evaluate(z, -m));
  w.key("z_min_eigenvalue_scaled")
      .value(eigh(z.matrix()).eigenvalues.front() / z.matrix().max_abs());
  w.key("marginal_x1").real_matrix_value(marginal_moment_matrix(z, 1));
  w.key("marginal_x2").real_matrix_value(marginal_moment_matrix(z, 2));
  w.end_object();
  return w.str();
}

std::string sos_gram_cmd(const json& j, const ScenarioOptions& opts) {
  require_kind(j, "sos");
  const Poly2 p = poly_from(j.at("polynomial"));
  const auto res = gram_sos_feasible(p);
  trace_solver(opts, "sos gram", res.iterations, 0.0);

  ReportWriter w;
  w.begin_object();
  w.key("command").value("sos gram");
  w.key("polynomial");
  write_poly(w, p);
  w.key("sos_feasible").value(res.feasible);
  if (res.feasible)
    w.key("gram").real_matrix_value(*res.gram);
  else
    w.key("infeasibility_certificate").real_array(res.certificate);
  w.key("iterations").value(res.iterations);
  w.end_object();
  return w.str();
}

std::string sos_eval_cmd(const json& j, const ScenarioOptions&) {
  require_kind(j, "sos");
  const Poly2 p = poly_from(j.at("polynomial"));
  std::optional<MomentMatrixZ> z;
  if (j.contains("z") && j["z"].is_string() && j["z"] == "ze") {
    z.emplace(ze_matrix());
  } else if (j.contains("z")) {
    std::vector<double> data;
    for (const auto& row : j["z"])
      for (const auto& cell : row) data.push_back(cell.get<double>());
    z.emplace(std::move(data));
  } else {
    throw ValidationError("sos eval needs a 'z' entry ('ze' or a 10x10 matrix)");
  }

  ReportWriter w;
  w.begin_object();
  w.key("command").value("sos eval");
  w.key("polynomial");
  write_poly(w, p);
  w.key("value").value(lb_evaluate(*z, p));
  w.key("z_is_psd").value(eigh(z->matrix()).eigenvalues.front() >= -1e-6 * z->matrix().max_abs());
  w.end_object();
  return w.str();
}

}  // namespace

std::string run_command(const std::string& group, const std::string& sub,
                        const std::string& file_path, const ScenarioOptions& opts) {
  const SolverTraceGuard trace(opts.verbose);
  if (group == "sos" && sub == "motzkin") return sos_motzkin_cmd(opts) + "\n";

  const json j = load_scenario(file_path);
  std::string out;
  if (group == "coherence" && sub == "classical") out = coherence_classical(j, opts);
  else if (group == "coherence" && sub == "quantum") out = coherence_quantum(j, opts);
  else if (group == "prevision" && sub == "classical") out = prevision_classical(j, opts);
  else if (group == "prevision" && sub == "quantum") out = prevision_quantum(j, opts);
  else if (group == "witness") out = witness_cmd(j, opts);
  else if (group == "chsh") out = chsh_cmd(j, opts);
  else if (group == "quasifit") out = quasifit_cmd(j, opts, dir_of(file_path));
  else if (group == "condition") out = condition_cmd(j, opts);
  else if (group == "evolve") out = evolve_cmd(j, opts);
  else if (group == "sos" && sub == "gram") out = sos_gram_cmd(j, opts);
  else if (group == "sos" && sub == "eval") out = sos_eval_cmd(j, opts);
  else throw ValidationError("unknown command: " + group + " " + sub);
  return out + "\n";
}

}  // namespace qgamble
