#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "pdd/config.hpp"
#include "pdd/error_analysis.hpp"
#include "pdd/fitting.hpp"
#include "pdd/io.hpp"
#include "pdd/orchestrator.hpp"
#include "pdd/rng.hpp"
#include "pdd/scheduler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> a0;
  std::optional<double> eps;
  std::optional<int> q;
  std::optional<std::string> out;
  std::optional<std::string> problem;
  bool plain = false;
};

void add_common_options(CLI::App* cmd, CliOverrides* ov) {
  cmd->add_option("--config", ov->config_path, "key=value configuration file");
  cmd->add_option("--seed", ov->seed, "master RNG seed");
  cmd->add_option("--threads", ov->threads, "worker thread count (0 = hardware)");
  cmd->add_option("--a0", ov->a0, "target nodal tolerance");
  cmd->add_option("--eps", ov->eps, "global error tolerance (maps to a0)");
  cmd->add_option("--q", ov->q, "confidence multiplier (1, 2 or 3)");
  cmd->add_option("--out", ov->out, "output directory");
  cmd->add_option("--problem", ov->problem, "registered problem name");
}

pdd::RunConfig resolve_config(const CliOverrides& ov) {
  pdd::RunConfig c;
  if (!ov.config_path.empty()) c = pdd::load_config_file(ov.config_path);
  if (ov.seed) c.seed = *ov.seed;
  if (ov.threads) c.threads = *ov.threads;
  if (ov.a0) {
    c.a0 = *ov.a0;
    c.eps.reset();
  }
  if (ov.eps) {
    c.eps = *ov.eps;
    if (ov.a0) throw std::invalid_argument("config: pass only one of --a0 / --eps");
    c.a0.reset();
  }
  if (ov.q) c.q = *ov.q;
  if (ov.out) c.out_dir = *ov.out;
  if (ov.problem) c.problem = *ov.problem;
  if (ov.plain) c.plain = true;
  return c;
}

pdd::TestProblem make_problem(const pdd::RunConfig& c) {
  if (c.problem == "paper-sec6") {
    const pdd::Domain d = c.domain();
    return pdd::problem_by_name(c.problem, &d);
  }
  return pdd::problem_by_name(c.problem);
}

double fit_spacing(const pdd::RunConfig& c) {
  if (c.fd_spacing > 0.0) return c.fd_spacing;
  return pdd::default_fd_spacing(c.a0.value_or(0.04) / 10.0);
}

pdd::Metadata base_metadata(const pdd::RunConfig& c) {
  pdd::Metadata m;
  m["problem"] = c.problem;
  m["bounds"] = pdd::format_double(c.xmin) + ":" + pdd::format_double(c.xmax) + ":" +
                pdd::format_double(c.ymin) + ":" + pdd::format_double(c.ymax);
  m["bounds_note"] = "default geometry, not an authoritative benchmark datum";
  m["subdomains"] = std::to_string(c.subdomains);
  m["nodes_per_interface"] = std::to_string(c.nodes_per_interface);
  m["q"] = std::to_string(c.q);
  m["seed"] = std::to_string(c.seed);
  return m;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
}

pdd::ConstantsFile run_fit(const pdd::RunConfig& c) {
  const pdd::TestProblem problem = make_problem(c);
  if (!problem.rectangular) {
    throw std::invalid_argument("fit: problem '" + c.problem + "' is not partitionable");
  }
  const pdd::Partition partition =
      pdd::build_partition(problem.bounds, c.subdomains, c.nodes_per_interface);
  std::optional<double> pinned;
  if (c.kappa > 0.0) pinned = c.kappa;
  const pdd::FitAllResult fit = pdd::fit_all_constants(
      problem, partition, c.fit_params(), c.rbf_shape, fit_spacing(c), c.seed, c.threads, pinned);

  pdd::ConstantsFile file;
  file.metadata = base_metadata(c);
  file.metadata["fit_m"] = std::to_string(c.fit_m);
  file.metadata["fit_n"] = std::to_string(c.fit_n);
  file.metadata["fit_steps"] = std::to_string(fit.total_steps);
  file.globals = fit.globals;
  file.nodes = fit.nodes;
  return file;
}

pdd::PiCosts pi_costs(const pdd::RunConfig& c, double a0) {
  // Projected grid sizes at the spacing the solve will use.
  const double spacing =
      c.fd_spacing > 0.0 ? c.fd_spacing : pdd::default_fd_spacing(a0 / 10.0);
  const pdd::Domain d = c.domain();
  const double w = d.width() / c.subdomains;
  const long nx = std::max<long>(2, std::lround(w / spacing));
  const long ny = std::max<long>(2, std::lround(d.height() / spacing));
  pdd::PiCosts pi;
  pi.pi = c.pi_cost_per_unknown * static_cast<double>(c.subdomains * (nx - 1) * (ny - 1));
  pi.pi_tilde =
      c.pi_tilde_cost_per_unknown * static_cast<double>(c.subdomains * (nx + 1) * (ny + 1));
  return pi;
}

int cmd_fit(const CliOverrides& ov) {
  const pdd::RunConfig c = resolve_config(ov);
  pdd::validate_config(c, false);
  const pdd::ConstantsFile file = run_fit(c);
  fs::create_directories(c.out_dir);
  std::ostringstream os;
  pdd::write_constants_csv(os, file);
  write_file(fs::path(c.out_dir) / "constants.csv", os.str());
  std::cout << "fit: " << file.nodes.size() << " nodes, kappa=" << file.globals.kappa
            << ", wrote " << (fs::path(c.out_dir) / "constants.csv").string() << "\n";
  return 0;
}

pdd::ConstantsFile load_or_fit_constants(const pdd::RunConfig& c,
                                         const std::string& constants_path) {
  if (!constants_path.empty()) {
    std::ifstream in(constants_path);
    if (!in) throw std::invalid_argument("cannot open constants file '" + constants_path + "'");
    return pdd::read_constants_csv(in);
  }
  const fs::path default_path = fs::path(c.out_dir) / "constants.csv";
  if (fs::exists(default_path)) {
    std::ifstream in(default_path);
    return pdd::read_constants_csv(in);
  }
  pdd::ConstantsFile file = run_fit(c);
  fs::create_directories(c.out_dir);
  std::ostringstream os;
  pdd::write_constants_csv(os, file);
  write_file(default_path, os.str());
  return file;
}

int cmd_schedule(const CliOverrides& ov, const std::string& constants_path) {
  const pdd::RunConfig c = resolve_config(ov);
  pdd::validate_config(c, true);
  const pdd::TestProblem problem = make_problem(c);
  const double a0 = pdd::resolve_a0(c, problem);
  const pdd::ConstantsFile constants = load_or_fit_constants(c, constants_path);

  const pdd::Schedule schedule =
      pdd::build_schedule(a0, constants.nodes, constants.globals.kappa, constants.globals.delta,
                          c.stop_threshold, pi_costs(c, a0));
  pdd::ScheduleFile sf;
  sf.metadata = base_metadata(c);
  sf.metadata["a0"] = pdd::format_double(a0);
  sf.metadata["kappa"] = pdd::format_double(constants.globals.kappa);
  sf.schedule = schedule;
  fs::create_directories(c.out_dir);
  std::ostringstream os;
  pdd::write_schedule_csv(os, sf);
  write_file(fs::path(c.out_dir) / "schedule.csv", os.str());
  std::cout << "schedule: J=" << schedule.cascade_length() << ", predicted cumulative speedup "
            << schedule.cumulative_speedup << "\n";
  return 0;
}

json error_report_json(const pdd::ErrorReport& rep) {
  return json{{"mean_nodal_error", rep.mean_nodal_error},
              {"sup_interface_error", rep.sup_interface_error},
              {"sup_domain_error", rep.sup_domain_error},
              {"sup_gradient_norm", rep.sup_gradient_norm}};
}

int cmd_solve(const CliOverrides& ov, const std::string& constants_path, bool dump_fields) {
  const pdd::RunConfig c = resolve_config(ov);
  pdd::validate_config(c, true);
  const pdd::TestProblem problem = make_problem(c);
  if (!problem.rectangular) {
    throw std::invalid_argument("solve: problem '" + c.problem + "' is not partitionable");
  }
  const double a0 = pdd::resolve_a0(c, problem);
  const pdd::Partition partition =
      pdd::build_partition(problem.bounds, c.subdomains, c.nodes_per_interface);
  const pdd::ConstantsFile constants = load_or_fit_constants(c, constants_path);
  const pdd::PddRunConfig rc = c.run_params();

  json summary;
  summary["problem"] = c.problem;
  summary["a0"] = a0;
  summary["seed"] = c.seed;
  summary["q"] = c.q;
  summary["geometry_note"] = "domain bounds are a configurable default";

  const pdd::PddSolution* final_solution = nullptr;
  pdd::CostLedger ledger;
  pdd::PlainRun plain_run;
  pdd::IterRun iter_run;
  long fit_steps = 0;
  if (auto it = constants.metadata.find("fit_steps"); it != constants.metadata.end()) {
    fit_steps = std::stol(it->second);
  }
  if (c.plain) {
    plain_run = pdd::run_plain_pdd(a0, problem, partition, constants.nodes, constants.globals, rc);
    final_solution = &plain_run.solution;
    ledger = plain_run.ledger;
    summary["mode"] = "plain";
  } else {
    const pdd::Schedule schedule =
        pdd::build_schedule(a0, constants.nodes, constants.globals.kappa, constants.globals.delta,
                            c.stop_threshold, pi_costs(c, a0));
    iter_run = pdd::run_iter_pdd(schedule, problem, partition, constants.nodes, constants.globals,
                                 rc);
    final_solution = &iter_run.levels.back();
    ledger = iter_run.ledger;
    summary["mode"] = "iter";
    summary["cascade_length"] = schedule.cascade_length();
    summary["predicted_cumulative_speedup"] = schedule.cumulative_speedup;
    json jt = json::array();
    for (const auto& lvl : schedule.levels) jt.push_back(lvl.a);
    summary["tolerances"] = jt;
  }

  ledger.fit_steps = fit_steps;
  fs::create_directories(c.out_dir);
  {
    std::ostringstream os;
    pdd::write_solution_csv(os, pdd::make_solution_file(partition, *final_solution,
                                                        base_metadata(c)));
    write_file(fs::path(c.out_dir) / "solution.csv", os.str());
  }
  write_file(fs::path(c.out_dir) / "ledger.json", pdd::ledger_to_json(ledger));
  if (problem.has_exact) {
    const pdd::ErrorReport rep = pdd::error_report(*final_solution, partition, problem.exact_u);
    summary["error_report"] = error_report_json(rep);
  }
  summary["total_weighted_cost"] = ledger.total_weighted_cost();
  summary["total_mc_steps"] = ledger.total_mc_steps();
  write_file(fs::path(c.out_dir) / "summary.json", summary.dump(2) + "\n");
  if (dump_fields) {
    for (const auto& f : final_solution->fields) {
      std::ostringstream os;
      pdd::dump_grid_csv(f, os);
      write_file(fs::path(c.out_dir) / ("field_" + std::to_string(f.subdomain_id) + ".csv"),
                 os.str());
    }
  }
  std::cout << "solve: total weighted cost " << ledger.total_weighted_cost() << " steps, wrote "
            << c.out_dir << "/{solution.csv, ledger.json, summary.json}\n";
  return 0;
}

int cmd_speedup_sweep(const CliOverrides& ov, const std::string& constants_path) {
  const pdd::RunConfig c = resolve_config(ov);
  pdd::validate_config(c, true);
  const pdd::TestProblem problem = make_problem(c);
  const double a0 = pdd::resolve_a0(c, problem);
  const pdd::ConstantsFile constants = load_or_fit_constants(c, constants_path);
  const pdd::PiCosts pi = pi_costs(c, a0);

  pdd::SweepFile sweep_file;
  sweep_file.metadata = base_metadata(c);
  sweep_file.metadata["a0"] = pdd::format_double(a0);
  for (int i = 0; i < c.sweep_count; ++i) {
    const double t = static_cast<double>(i) / (c.sweep_count - 1);
    const double a1 = a0 * 1.5 * std::pow(c.sweep_max_factor / 1.5, t);
    pdd::SweepRow row;
    row.a1 = a1;
    row.predicted_pair_cost = pdd::predicted_iter_cost(
        a0, a1, constants.nodes, constants.globals.kappa, constants.globals.delta, pi);
    double rho_sum = 0.0;
    for (const auto& n : constants.nodes) {
      rho_sum += std::sqrt(pdd::sensitivity_rho2(a1, a0, n));
    }
    row.predicted_rho_abs = rho_sum / constants.nodes.size();
    row.predicted_speedup =
        pdd::plain_cost(a0, constants.nodes, constants.globals.delta, pi) /
        row.predicted_pair_cost;
    sweep_file.rows.push_back(row);
  }
  fs::create_directories(c.out_dir);
  std::ostringstream os;
  pdd::write_sweep_csv(os, sweep_file);
  write_file(fs::path(c.out_dir) / "speedup_sweep.csv", os.str());
  std::cout << "speedup-sweep: wrote " << c.out_dir << "/speedup_sweep.csv\n";
  return 0;
}

int cmd_nsr_table(const CliOverrides& ov, double gamma_r, long samples) {
  const pdd::RunConfig c = resolve_config(ov);
  pdd::validate_config(c, false);
  if (!(gamma_r >= 1.0) || samples < 2) {
    throw std::invalid_argument("nsr-table: need gamma_r >= 1 and samples >= 2");
  }
  pdd::NsrTable table;
  table.metadata["gamma_r"] = pdd::format_double(gamma_r);
  table.metadata["q"] = std::to_string(c.q);
  table.metadata["samples"] = std::to_string(samples);
  table.metadata["seed"] = std::to_string(c.seed);
  table.ratios = {0.0, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  table.node_counts = {10, 100, 1000, 10'000, 100'000};
  table.values.resize(6, 5);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 5; ++j) {
      pdd::NsrParams p;
      p.ratio_kprime_over_kpp = table.ratios[static_cast<std::size_t>(i)];
      p.gamma_r = gamma_r;
      p.q = c.q;
      p.s = table.node_counts[static_cast<std::size_t>(j)];
      p.sample_count = samples;
      pdd::Rng rng(c.seed, pdd::rng_phase::kNsr, static_cast<std::uint64_t>(i),
                   static_cast<std::uint64_t>(j), 0);
      table.values(i, j) = pdd::nsr_simulate(p, rng);
    }
  }
  fs::create_directories(c.out_dir);
  std::ostringstream os;
  pdd::write_nsr_table_csv(os, table);
  write_file(fs::path(c.out_dir) / "nsr_table.csv", os.str());
  std::cout << "nsr-table: wrote " << c.out_dir << "/nsr_table.csv\n";
  return 0;
}

int cmd_report(const std::string& run_dir) {
  std::ifstream in(fs::path(run_dir) / "summary.json");
  if (!in) throw std::invalid_argument("report: no summary.json under '" + run_dir + "'");
  json summary = json::parse(in);
  std::cout << "run summary (" << run_dir << ")\n";
  std::cout << "  problem:   " << summary.value("problem", std::string("?")) << "\n";
  std::cout << "  mode:      " << summary.value("mode", std::string("?")) << "\n";
  std::cout << "  a0:        " << summary.value("a0", 0.0) << "\n";
  if (summary.contains("tolerances")) {
    std::cout << "  cascade:   ";
    for (const auto& a : summary["tolerances"]) std::cout << a.get<double>() << " ";
    std::cout << "\n";
    std::cout << "  predicted cumulative speedup: "
              << summary.value("predicted_cumulative_speedup", 0.0) << "\n";
  }
  std::cout << "  weighted cost: " << summary.value("total_weighted_cost", 0.0) << "\n";
  if (summary.contains("error_report")) {
    const auto& r = summary["error_report"];
    std::cout << "  mean nodal error:    " << r.value("mean_nodal_error", 0.0) << "\n";
    std::cout << "  sup interface error: " << r.value("sup_interface_error", 0.0) << "\n";
    std::cout << "  sup domain error:    " << r.value("sup_domain_error", 0.0) << "\n";
    std::cout << "  sup |grad|:          " << r.value("sup_gradient_norm", 0.0) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic domain decomposition solver with pathwise control variates"};
  app.require_subcommand(1);

  CliOverrides ov_fit, ov_schedule, ov_solve, ov_sweep, ov_nsr;
  std::string constants_path_schedule, constants_path_solve, constants_path_sweep;
  std::string report_dir;
  bool dump_fields = false;
  double nsr_gamma_r = 1.0;
  long nsr_samples = 100'000;

  auto* fit = app.add_subcommand("fit", "estimate nodal constants, write constants.csv");
  add_common_options(fit, &ov_fit);

  auto* schedule = app.add_subcommand("schedule", "build the tolerance cascade");
  add_common_options(schedule, &ov_schedule);
  schedule->add_option("--constants", constants_path_schedule, "constants CSV path");

  auto* solve = app.add_subcommand("solve", "run PlainPDD or IterPDD");
  add_common_options(solve, &ov_solve);
  solve->add_option("--constants", constants_path_solve, "constants CSV path");
  solve->add_flag("--plain", ov_solve.plain, "plain mode (no variance reduction)");
  solve->add_flag("--dump-fields", dump_fields, "write subdomain grids as CSV");

  auto* sweep = app.add_subcommand("speedup-sweep", "predicted speedup over an a1 grid");
  add_common_options(sweep, &ov_sweep);
  sweep->add_option("--constants", constants_path_sweep, "constants CSV path");

  auto* nsr = app.add_subcommand("nsr-table", "noise-to-signal ratio table");
  add_common_options(nsr, &ov_nsr);
  nsr->add_option("--gamma-r", nsr_gamma_r, "overshoot constant");
  nsr->add_option("--samples", nsr_samples, "realizations per cell");

  auto* report = app.add_subcommand("report", "summarize a prior run directory");
  report->add_option("--run", report_dir, "run output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) return cmd_fit(ov_fit);
    if (schedule->parsed()) return cmd_schedule(ov_schedule, constants_path_schedule);
    if (solve->parsed()) return cmd_solve(ov_solve, constants_path_solve, dump_fields);
    if (sweep->parsed()) return cmd_speedup_sweep(ov_sweep, constants_path_sweep);
    if (nsr->parsed()) return cmd_nsr_table(ov_nsr, nsr_gamma_r, nsr_samples);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
