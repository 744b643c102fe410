#include "substatic/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "substatic/elliptic.hpp"
#include "substatic/errors.hpp"
#include "substatic/flow.hpp"
#include "substatic/functionals.hpp"
#include "substatic/hypersurface.hpp"

namespace substatic {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config access with field paths

double number_field(const json& cfg, const std::string& key, double fallback) {
  if (!cfg.contains(key)) {
    return fallback;
  }
  const json& v = cfg.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw InputError("/" + key, "expected a finite number");
  }
  return v.get<double>();
}

double required_number(const json& cfg, const std::string& key, const std::string& base = "") {
  if (!cfg.contains(key)) {
    throw InputError(base + "/" + key, "missing required field");
  }
  const json& v = cfg.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    throw InputError(base + "/" + key, "expected a finite number");
  }
  return v.get<double>();
}

std::size_t count_field(const json& cfg, const std::string& key, std::size_t fallback,
                        std::size_t minimum) {
  if (!cfg.contains(key)) {
    return fallback;
  }
  const json& v = cfg.at(key);
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(minimum)) {
    throw InputError("/" + key, fmt::format("expected an integer ≥ {}", minimum));
  }
  return static_cast<std::size_t>(v.get<long long>());
}

std::vector<Perturbation> perturbation_field(const json& cfg, const std::string& base) {
  std::vector<Perturbation> out;
  if (!cfg.contains("perturbation")) {
    return out;
  }
  const json& arr = cfg.at("perturbation");
  const std::string path = base + "/perturbation";
  if (!arr.is_array()) {
    throw InputError(path, "expected an array of {amplitude, mode}");
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& p = arr.at(i);
    const std::string ip = path + "/" + std::to_string(i);
    if (!p.is_object()) {
      throw InputError(ip, "expected an object");
    }
    const double amp = required_number(p, "amplitude", ip);
    const double mode = required_number(p, "mode", ip);
    if (mode != std::floor(mode) || mode < 0) {
      throw InputError(ip + "/mode", "mode must be a nonnegative integer");
    }
    out.push_back({amp, static_cast<int>(mode)});
  }
  return out;
}

json perturbation_json(const std::vector<Perturbation>& terms) {
  json arr = json::array();
  for (const auto& p : terms) {
    arr.push_back({{"amplitude", p.amplitude}, {"mode", p.mode}});
  }
  return arr;
}

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

// ---------------------------------------------------------------------------
// Tasks. Each returns pass/fail and fills the summary and tables.

struct TaskResult {
  bool pass = false;
  json results;
  std::vector<Table> tables;
};

std::string substatic_table(const WarpedProductModel& model, GridSpec grid, double tol_scale) {
  std::ostringstream out;
  out << "s,f,radial_gap,tangential_gap,tolerance,brendle_F,t,eta,eta_d1,eta_d2\n";
  for (const auto& s : substatic_samples(model, grid, tol_scale)) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_number(s.s), csv_number(s.f),
                       csv_number(s.radial_gap), csv_number(s.tangential_gap),
                       csv_number(s.tolerance), csv_number(s.brendle_F), csv_number(s.t),
                       csv_number(s.eta.value), csv_number(s.eta.d1), csv_number(s.eta.d2));
  }
  return out.str();
}

json report_json(const SubstaticReport& r) {
  return {{"radial_gap_min", r.radial_gap_min},
          {"tangential_gap_min", r.tangential_gap_min},
          {"H1", r.H1},
          {"H2", r.H2},
          {"H3", r.H3},
          {"H4", r.H4},
          {"eta_convexity_min", r.eta_convexity_min},
          {"eta_slope_max", r.eta_slope_max},
          {"substatic", r.substatic},
          {"samples", r.samples}};
}

TaskResult task_substatic(const CatalogueEntry& entry, const json& cfg, const RunOptions& opt) {
  const GridSpec grid{count_field(cfg, "grid", 400, 8)};
  bool expect = true;
  if (cfg.contains("expect_substatic")) {
    if (!cfg.at("expect_substatic").is_boolean()) {
      throw InputError("/expect_substatic", "expected a boolean");
    }
    expect = cfg.at("expect_substatic").get<bool>();
  }
  const SubstaticReport r = substatic_check(entry.model, grid, opt.tol_scale);
  TaskResult out;
  out.results = report_json(r);
  out.results["expect_substatic"] = expect;
  out.pass = r.substatic == expect;
  out.tables.push_back({"samples", substatic_table(entry.model, grid, opt.tol_scale)});
  return out;
}

TaskResult task_hk(const CatalogueEntry& entry, const json& cfg, const RunOptions& opt) {
  const WarpedProductModel& model = entry.model;
  const double s_hat = required_number(cfg, "s_hat");
  const std::size_t nodes = count_field(cfg, "nodes", 64, 3);
  const std::vector<Perturbation> terms = perturbation_field(cfg, "");
  HKOptions hk;
  hk.potential_scale = number_field(cfg, "potential_scale", 1.0);
  if (cfg.contains("cn_override")) {
    hk.cn_override = required_number(cfg, "cn_override");
  }
  RadialGraph graph = [&] {
    try {
      return perturbed_graph(model, s_hat, terms, nodes);
    } catch (const DomainError& e) {
      throw InputError("/s_hat", e.what());
    }
  }();
  const HKReport r = hk_deficit(model, graph, hk);
  const CmcCheck cmc = minkowski_cmc_check(model, graph, hk, 1e-8, 1e-9 * opt.tol_scale);
  const bool sphere = graph.is_constant();
  const double tol = 1e-9 * opt.tol_scale * r.scale;
  TaskResult out;
  out.results = to_json(r);
  out.results["sphere"] = sphere;
  out.results["relative_deficit"] = r.deficit / r.scale;
  out.results["cmc"] = cmc.cmc;
  out.results["cmc_check_pass"] = cmc.pass;
  out.results["perturbation"] = perturbation_json(terms);
  out.pass = (sphere ? std::abs(r.deficit) < tol : r.deficit > -tol) && cmc.pass;
  std::ostringstream csv;
  write_graph_csv(csv, graph);
  out.tables.push_back({"graph", csv.str()});
  return out;
}

TaskResult task_flow(const CatalogueEntry& entry, const json& cfg, const RunOptions& opt) {
  const WarpedProductModel& model = entry.model;
  if (!cfg.contains("initial_graph") || !cfg.at("initial_graph").is_object()) {
    throw InputError("/initial_graph", "missing initial graph {s_hat, perturbation}");
  }
  const json& ig = cfg.at("initial_graph");
  const double s_hat = required_number(ig, "s_hat", "/initial_graph");
  const std::vector<Perturbation> terms = perturbation_field(ig, "/initial_graph");
  const std::size_t nodes = count_field(cfg, "nodes", 64, 3);
  FlowOptions fo;
  fo.t_end = number_field(cfg, "t_end", 1.0);
  fo.dt = number_field(cfg, "dt", 1e-3);
  fo.stop_fraction = number_field(cfg, "stop_fraction", 1e-4);
  if (!(fo.dt > 0.0) || !(fo.t_end >= 0.0)) {
    throw InputError("/dt", "need dt > 0 and t_end ≥ 0");
  }
  RadialGraph graph = [&] {
    try {
      return perturbed_graph(model, s_hat, terms, nodes);
    } catch (const DomainError& e) {
      throw InputError("/initial_graph/s_hat", e.what());
    }
  }();
  const FlowTrace trace = run_flow(model, graph, fo);
  const MonotonicityReport mono = monotonicity_report(trace, model);
  const EqualityFlowDiagnostics eq = equality_flow_diagnostics(trace);
  const double residual = q_prime_residual(trace);
  const bool sphere = graph.is_constant();
  double min_h = trace.states.front().diagnostics.min_h;
  double ff0 = trace.states.front().diagnostics.max_second_ff;
  double ff_max = 0.0;
  for (const auto& s : trace.states) {
    min_h = std::min(min_h, s.diagnostics.min_h);
    ff_max = std::max(ff_max, s.diagnostics.max_second_ff);
  }
  TaskResult out;
  out.results = {{"t_final", trace.states.back().t},
                 {"steps", trace.states.size() - 1},
                 {"stopped_early", trace.stopped_early},
                 {"stop_reason", trace.stop_reason},
                 {"q_initial", trace.states.front().diagnostics.q},
                 {"q_final", trace.states.back().diagnostics.q},
                 {"q_prime_residual", residual},
                 {"nonincreasing", mono.nonincreasing},
                 {"max_increase", mono.max_increase},
                 {"limit_gap", mono.limit_gap},
                 {"limit_target", mono.limit_target},
                 {"umbilicity_max", eq.umbilicity_max},
                 {"substatic_nu_max", eq.substatic_nu_max},
                 {"min_H", min_h},
                 {"second_ff_growth", ff_max / ff0},
                 {"perturbation", perturbation_json(terms)}};
  const bool graph_lost = trace.stopped_early && trace.stop_reason != "horizon proximity";
  const double q_tol = (sphere ? 1e-6 : 1e-4) * opt.tol_scale;
  out.pass = mono.nonincreasing && !graph_lost && residual < q_tol && min_h > 0.0;
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  out.tables.push_back({"trace", csv.str()});
  return out;
}

TaskResult task_torsion(const CatalogueEntry& entry, const json& cfg, const RunOptions& opt) {
  const WarpedProductModel& model = entry.model;
  const double s_hat = required_number(cfg, "s_hat");
  TorsionOptions to;
  to.grid_size = count_field(cfg, "grid_size", 48, 4);
  to.residual_tol = 1e-8 * opt.tol_scale;
  if (cfg.contains("horizon")) {
    const json& h = cfg.at("horizon");
    if (!h.is_string() || (h != "dirichlet" && h != "regular")) {
      throw InputError("/horizon", "expected \"dirichlet\" or \"regular\"");
    }
    to.horizon = h == "regular" ? HorizonCondition::regular : HorizonCondition::dirichlet;
  }
  if (cfg.contains("horizon_datum")) {
    to.horizon_datum = required_number(cfg, "horizon_datum");
  }
  if (!(s_hat > model.s_min()) || s_hat > model.s_max()) {
    throw InputError("/s_hat", "torsion domain empty or outside the model");
  }
  const TorsionSolution sol = solve_torsion_radial(model, s_hat, to);
  const double confhess = conformal_hessian_residual(model, sol);
  const bool hopf = hopf_check(sol);
  const double interior_min = torsion_interior_min(sol);
  const double slope = inner_slope(sol);
  TaskResult out;
  out.results = {{"residual", sol.residual},
                 {"conformal_hessian_residual", confhess},
                 {"hopf", hopf},
                 {"interior_min", interior_min},
                 {"datum", sol.datum},
                 {"inner_slope", std::isfinite(slope) ? json(slope) : json(fmt::format("{}", slope))},
                 {"outer_slope", sol.du_ds.back()},
                 {"phi_monotone", conformal_split_monotone(model, sol)}};
  const bool equality_case = model.has_horizon() && to.horizon == HorizonCondition::dirichlet &&
                             !to.horizon_datum.has_value();
  out.pass = !sol.flagged && hopf && interior_min > 0.0 &&
             (!equality_case || confhess < 1e-6 * opt.tol_scale);
  std::ostringstream csv;
  write_torsion_csv(csv, model, sol);
  out.tables.push_back({"solution", csv.str()});
  return out;
}

TaskResult task_classification(const CatalogueEntry& entry, const json& cfg,
                               const RunOptions& opt) {
  const WarpedProductModel& model = entry.model;
  const GridSpec grid{count_field(cfg, "grid", 400, 8)};
  const EtaProfile eta = eta_extract(model);
  const DeSitterFit fit = fit_desitter_schwarzschild(eta);
  const SubstaticReport r = substatic_check(model, grid, opt.tol_scale);
  const bool convex = r.eta_convexity_min >= -1e-9 * opt.tol_scale;
  TaskResult out;
  out.results = report_json(r);
  out.results["fit_lambda"] = fit.lambda;
  out.results["fit_m"] = fit.m;
  out.results["fit_residual"] = fit.residual;
  out.results["affine_eta"] = fit.residual < 1e-10 * opt.tol_scale;
  out.results["eta_convex"] = convex;
  out.pass = convex == r.substatic;
  std::ostringstream csv;
  csv << "t,eta,eta_d1,eta_d2\n";
  for (std::size_t i = 0; i <= 200; ++i) {
    const double t = eta.t_lo() + (eta.t_hi() - eta.t_lo()) * static_cast<double>(i) / 200.0;
    const EtaValue e = eta(t);
    csv << fmt::format("{},{},{},{}\n", csv_number(t), csv_number(e.value), csv_number(e.d1),
                       csv_number(e.d2));
  }
  out.tables.push_back({"eta", csv.str()});
  return out;
}

void write_outputs(const ScenarioOutcome& outcome, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  {
    std::ofstream f(options.out_dir / (outcome.name + ".summary.json"));
    f << outcome.summary.dump(2) << '\n';
  }
  for (const auto& t : outcome.tables) {
    std::ofstream f(options.out_dir / (outcome.name + "." + t.name + ".csv"));
    f << t.csv;
  }
}

}  // namespace

ScenarioOutcome run_scenario(const json& config, const std::vector<CatalogueEntry>& catalogue,
                             const RunOptions& options) {
  ScenarioOutcome out;
  out.name = "scenario";
  out.summary = {{"seed", options.seed}, {"tol_scale", options.tol_scale}};
  try {
    if (!config.is_object()) {
      throw InputError("/", "config must be a JSON object");
    }
    if (config.contains("name")) {
      if (!config.at("name").is_string() || config.at("name").get<std::string>().empty()) {
        throw InputError("/name", "expected a nonempty string");
      }
      out.name = config.at("name").get<std::string>();
    }
    out.summary["scenario"] = out.name;
    if (!config.contains("model")) {
      throw InputError("/model", "missing required field");
    }
    const json& mref = config.at("model");
    CatalogueEntry entry = [&]() -> CatalogueEntry {
      if (mref.is_object()) {
        return model_from_json(mref, "/model");
      }
      if (!mref.is_string()) {
        throw InputError("/model", "expected a model name or a model record");
      }
      const CatalogueEntry* e = find_model(catalogue, mref.get<std::string>());
      if (e == nullptr) {
        throw InputError("/model", "model '" + mref.get<std::string>() + "' not in catalogue");
      }
      return *e;
    }();
    if (!config.contains("task") || !config.at("task").is_string()) {
      throw InputError("/task", "missing or non-string task");
    }
    const std::string task = config.at("task").get<std::string>();
    out.summary["task"] = task;
    out.summary["model"] = model_to_json(entry);

    TaskResult result;
    try {
      if (task == "substatic_check") {
        result = task_substatic(entry, config, options);
      } else if (task == "hk_deficit") {
        result = task_hk(entry, config, options);
      } else if (task == "flow") {
        result = task_flow(entry, config, options);
      } else if (task == "torsion") {
        result = task_torsion(entry, config, options);
      } else if (task == "classification") {
        result = task_classification(entry, config, options);
      } else {
        throw InputError("/task", "unknown task '" + task + "'");
      }
    } catch (const InputError&) {
      throw;
    } catch (const Error& e) {
      // Numerical failure: a diagnosed check failure, not an input problem.
      out.summary["pass"] = false;
      out.summary["error"] = {{"kind", "numerical"}, {"message", e.what()}};
      out.exit_code = kExitCheckFailure;
      return out;
    }
    out.summary["results"] = result.results;
    out.summary["pass"] = result.pass;
    out.tables = std::move(result.tables);
    out.exit_code = result.pass ? kExitPass : kExitCheckFailure;
  } catch (const InputError& e) {
    out.summary["pass"] = false;
    out.summary["error"] = {{"kind", "input"}, {"path", e.path()}, {"message", e.what()}};
    out.exit_code = kExitInputError;
  } catch (const json::exception& e) {
    out.summary["pass"] = false;
    out.summary["error"] = {{"kind", "input"}, {"message", e.what()}};
    out.exit_code = kExitInputError;
  }
  return out;
}

int run_scenario_file(const std::filesystem::path& config_path, const RunOptions& options) {
  RunOptions opt = options;
  json config;
  std::vector<CatalogueEntry> catalogue;
  ScenarioOutcome outcome;
  try {
    std::ifstream in(config_path);
    if (!in) {
      throw InputError(config_path.string(), "cannot open config");
    }
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw InputError(config_path.string(), std::string("invalid JSON: ") + e.what());
    }
    if (config.is_object() && config.contains("catalogue")) {
      if (!config.at("catalogue").is_string()) {
        throw InputError("/catalogue", "expected a path");
      }
      std::filesystem::path p = config.at("catalogue").get<std::string>();
      if (p.is_relative()) {
        p = config_path.parent_path() / p;
      }
      catalogue = load_catalogue(p);
    } else {
      catalogue = builtin_catalogue();
    }
    if (config.is_object() && !config.contains("name")) {
      config["name"] = config_path.stem().string();
    }
    outcome = run_scenario(config, catalogue, opt);
  } catch (const InputError& e) {
    outcome.name = config_path.stem().string();
    outcome.summary = {{"scenario", outcome.name},
                       {"pass", false},
                       {"error", {{"kind", "input"}, {"path", e.path()}, {"message", e.what()}}}};
    outcome.exit_code = kExitInputError;
  }
  if (opt.write_files) {
    write_outputs(outcome, opt);
  }
  return outcome.exit_code;
}

// ---------------------------------------------------------------------------
// Suite

namespace {

std::vector<double> sphere_radii(const WarpedProductModel& model) {
  std::vector<double> out;
  const double lo = model.s_min();
  for (double s : {1.2, 1.5, 2.0, 3.0}) {
    if (s > lo + 1e-3 * (model.s_max() - lo) && s <= model.s_max()) {
      out.push_back(s);
    }
  }
  if (out.empty()) {
    out.push_back(lo + 0.6 * (model.s_max() - lo));
  }
  return out;
}

double interior_radius(const WarpedProductModel& model) {
  const std::vector<double> radii = sphere_radii(model);
  return radii[radii.size() / 2];
}

std::vector<SuiteRow> suite_for_model(const CatalogueEntry& entry, std::size_t index,
                                      const RunOptions& opt) {
  const WarpedProductModel& model = entry.model;
  const std::string name = model.name();
  const double ts = opt.tol_scale;
  std::vector<SuiteRow> rows;
  auto add = [&](const std::string& row, bool pass, double value, std::string detail) {
    rows.push_back({name, row, pass ? "pass" : "fail", value, std::move(detail)});
  };
  auto guarded = [&](const std::string& row, const auto& body) {
    try {
      body();
    } catch (const std::exception& e) {
      rows.push_back({name, row, "fail", 0.0, std::string("error: ") + e.what()});
    }
  };
  static const std::vector<std::string> kRows = {"cn_consistency", "sphere_equality",
                                                 "perturbed_deficit", "sphere_flow",
                                                 "torsion", "classification"};

  bool substatic = false;
  guarded("substatic", [&] {
    const SubstaticReport r = substatic_check(model, GridSpec{}, ts);
    substatic = r.substatic;
    add("substatic", r.substatic, std::min(r.radial_gap_min, r.tangential_gap_min),
        fmt::format("H4={}", r.H4));
  });
  if (!substatic) {
    for (const auto& row : kRows) {
      rows.push_back({name, row, "skipped", 0.0, "model is not substatic"});
    }
    return rows;
  }

  guarded("cn_consistency", [&] {
    const HorizonConstant closed = horizon_constant_closed(model);
    const HorizonConstant integral = horizon_constant_integral(model);
    const double diff = std::abs(closed.value - integral.value);
    add("cn_consistency", diff <= 1e-10 * ts * std::max(1.0, std::abs(closed.value)), diff,
        fmt::format("cN={}", csv_number(closed.value)));
  });

  guarded("sphere_equality", [&] {
    double worst = 0.0;
    for (double s : sphere_radii(model)) {
      const HKReport r = hk_deficit(model, sphere_graph(model, s, 64));
      worst = std::max(worst, std::abs(r.deficit) / r.scale);
    }
    add("sphere_equality", worst < 1e-9 * ts, worst, "max |deficit|/scale");
  });

  guarded("perturbed_deficit", [&] {
    std::mt19937_64 rng(opt.seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    const double s_hat = interior_radius(model);
    const double room = std::min({1.0, 0.5 * (s_hat - model.s_min()), model.s_max() - s_hat});
    double worst = std::numeric_limits<double>::infinity();
    int accepted = 0;
    for (int attempt = 0; attempt < 50 && accepted < 5; ++attempt) {
      const auto terms = random_perturbation(rng, 0.2 * room, 4);
      try {
        const RadialGraph g = perturbed_graph(model, s_hat, terms, 64);
        const HKReport r = hk_deficit(model, g);
        worst = std::min(worst, r.deficit / r.scale);
        ++accepted;
      } catch (const MeanConvexityError&) {
      } catch (const DomainError&) {
      }
    }
    add("perturbed_deficit", accepted == 5 && worst > 0.0, worst,
        fmt::format("{} graphs, min deficit/scale", accepted));
  });

  guarded("sphere_flow", [&] {
    const double s_hat = interior_radius(model);
    FlowOptions fo;
    fo.t_end = 0.5;
    fo.dt = 1e-3;
    const FlowTrace trace = run_flow(model, sphere_graph(model, s_hat, 16), fo);
    const double residual = q_prime_residual(trace);
    const MonotonicityReport mono = monotonicity_report(trace, model);
    const EqualityFlowDiagnostics eq = equality_flow_diagnostics(trace);
    const bool pass = residual < 1e-6 * ts && mono.nonincreasing &&
                      eq.umbilicity_max < 1e-9 * ts && eq.substatic_nu_max < 1e-9 * ts;
    add("sphere_flow", pass, residual,
        fmt::format("umb={:.3g} sub={:.3g}", eq.umbilicity_max, eq.substatic_nu_max));
  });

  guarded("torsion", [&] {
    const double s_hat = interior_radius(model);
    const TorsionSolution sol = solve_torsion_radial(model, s_hat);
    const double confhess = model.has_horizon() ? conformal_hessian_residual(model, sol) : 0.0;
    const bool pass = !sol.flagged && hopf_check(sol) && torsion_interior_min(sol) > 0.0 &&
                      confhess < 1e-6 * ts;
    add("torsion", pass, sol.residual, fmt::format("confhess={:.3g}", confhess));
  });

  guarded("classification", [&] {
    const DeSitterFit fit = fit_desitter_schwarzschild(eta_extract(model));
    const SubstaticReport r = substatic_check(model, GridSpec{}, ts);
    bool pass = (r.eta_convexity_min >= -1e-9 * ts) == r.substatic;
    std::string detail = fmt::format("fit residual={:.3g}", fit.residual);
    if (entry.closed_form) {
      const double err = std::max(std::abs(fit.lambda - entry.closed_form->lambda),
                                  std::abs(fit.m - entry.closed_form->m));
      pass = pass && err < 1e-10 * ts && r.H4 == (entry.closed_form->m > 0.0);
      detail += fmt::format(" param error={:.3g}", err);
    }
    add("classification", pass, fit.residual, detail);
  });
  return rows;
}

}  // namespace

SuiteSummary run_suite(const std::vector<CatalogueEntry>& catalogue, const RunOptions& options) {
  SuiteSummary summary;
  if (catalogue.empty()) {
    summary.exit_code = kExitInputError;
    return summary;
  }
  std::vector<std::vector<SuiteRow>> per_model(catalogue.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < catalogue.size(); i = next++) {
      per_model[i] = suite_for_model(catalogue[i], i, options);
    }
  };
  const unsigned count =
      std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(catalogue.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < count; ++t) {
    threads.emplace_back(worker);
  }
  worker();
  for (auto& t : threads) {
    t.join();
  }
  for (auto& rows : per_model) {
    for (auto& r : rows) {
      if (r.status == "fail") {
        summary.exit_code = kExitCheckFailure;
      }
      summary.rows.push_back(std::move(r));
    }
  }
  return summary;
}

std::string suite_csv(const SuiteSummary& summary) {
  std::string out = "model,row,status,value,detail\n";
  for (const auto& r : summary.rows) {
    out += fmt::format("{},{},{},{},\"{}\"\n", r.model, r.row, r.status, csv_number(r.value),
                       r.detail);
  }
  return out;
}

int run_suite_file(const std::filesystem::path& catalogue_path, const RunOptions& options) {
  SuiteSummary summary;
  json doc = {{"catalogue", catalogue_path.string()},
              {"seed", options.seed},
              {"tol_scale", options.tol_scale}};
  try {
    const std::vector<CatalogueEntry> catalogue = load_catalogue(catalogue_path);
    summary = run_suite(catalogue, options);
  } catch (const InputError& e) {
    summary.exit_code = kExitInputError;
    doc["error"] = {{"kind", "input"}, {"path", e.path()}, {"message", e.what()}};
  }
  json rows = json::array();
  for (const auto& r : summary.rows) {
    rows.push_back({{"model", r.model},
                    {"row", r.row},
                    {"status", r.status},
                    {"value", r.value},
                    {"detail", r.detail}});
  }
  doc["rows"] = rows;
  doc["pass"] = summary.exit_code == kExitPass;
  if (options.write_files) {
    std::filesystem::create_directories(options.out_dir);
    std::ofstream(options.out_dir / "suite.summary.json") << doc.dump(2) << '\n';
    std::ofstream(options.out_dir / "suite.results.csv") << suite_csv(summary);
  }
  return summary.exit_code;
}

}  // namespace substatic
