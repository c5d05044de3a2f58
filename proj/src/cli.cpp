#include "cpbandit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpbandit/bounds.hpp"
#include "cpbandit/config.hpp"
#include "cpbandit/errors.hpp"
#include "cpbandit/halving.hpp"
#include "cpbandit/harness.hpp"

namespace cpbandit::cli {
namespace {

using config::IniDocument;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Inline flags are written over config-file keys, so a flag always wins.
struct Override {
  std::string section;
  std::string key;
  std::optional<std::string> value;
};

void apply(IniDocument& doc, const std::vector<Override>& overrides) {
  for (const auto& o : overrides) {
    if (o.value) doc.set(o.section, o.key, *o.value);
  }
}

int exit_code_for(const Error& e, int policy_code) {
  switch (e.code()) {
    case ErrorCode::IoError: return kIoError;
    case ErrorCode::BudgetTooSmall:
    case ErrorCode::BadExplorationBudget:
      return policy_code;
    default: return kConfigError;
  }
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void print_policy_warnings(std::ostream& err, harness::PolicyKind kind, std::uint64_t T,
                           double eta) {
  if (kind == harness::PolicyKind::SHB) print_warnings(err, halving::shb_warnings(T, eta));
}

struct RunArgs {
  std::optional<std::string> config_path;
  std::optional<std::string> policy, mu1, mu2, xstar, sigma, noise, eta, budget, seed;
  std::optional<std::string> gamma, exploration, exploration_fraction, sha_sigma, grid_points;
  std::optional<std::string> trace_path;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  IniDocument doc = a.config_path ? config::load_ini(*a.config_path) : IniDocument{};
  apply(doc, {{"environment", "mu1", a.mu1},
              {"environment", "mu2", a.mu2},
              {"environment", "x_star", a.xstar},
              {"environment", "sigma", a.sigma},
              {"environment", "noise", a.noise},
              {"sweep", "eta", a.eta},
              {"sweep", "seed", a.seed},
              {"run", "policy", a.policy},
              {"run", "T", a.budget}});

  const std::vector<std::pair<std::string, std::string>> required = {
      {"run", "policy"},       {"run", "T"},          {"environment", "mu1"},
      {"environment", "mu2"},  {"environment", "x_star"}, {"environment", "sigma"},
      {"sweep", "eta"}};
  const std::map<std::string, std::string> flag_of = {
      {"policy", "--policy"}, {"T", "--T"},         {"mu1", "--mu1"}, {"mu2", "--mu2"},
      {"x_star", "--xstar"},  {"sigma", "--sigma"}, {"eta", "--eta"}};
  for (const auto& [section, key] : required) {
    if (!doc.get(section, key)) {
      err << "error: missing required field '" << key << "' (" << flag_of.at(key) << " or ["
          << section << "] " << key << ")\n";
      return kConfigError;
    }
  }

  const std::string name = *doc.get("run", "policy");
  apply(doc, {{"policy." + name, "gamma", a.gamma},
              {"policy." + name, "L", a.exploration},
              {"policy." + name, "L_fraction", a.exploration_fraction},
              {"policy." + name, "sigma", a.sha_sigma},
              {"policy." + name, "G", a.grid_points}});

  // Reuse the sweep parser for a single-budget, single-replication grid.
  doc.set("sweep", "budgets", *doc.get("run", "T"));
  doc.set("sweep", "policies", name);
  doc.set("sweep", "replications", "1");
  const harness::ExperimentConfig cfg = config::experiment_from(doc);
  const Environment env = cfg.environment.build();
  const harness::PolicySpec& spec = cfg.policies.front();
  const harness::Policy policy = harness::make_policy(spec, env, cfg.eta);
  const std::uint64_t T = cfg.budgets.front();

  print_policy_warnings(err, spec.kind, T, cfg.eta);
  print_warnings(err, halving::resolution_warnings(cfg.eta));

  RngStream rng(cfg.master_seed, harness::stream_index_for(spec.name, T, 0));
  PolicyResult result;
  try {
    result = policy.run(env, T, cfg.eta, rng);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e, kPolicyError);
  }

  std::size_t counts[3] = {0, 0, 0};
  nlohmann::json trace = nlohmann::json::array();
  for (Decision d : result.trace) {
    ++counts[static_cast<int>(d)];
    trace.push_back(std::string(to_string(d)));
  }
  nlohmann::json j;
  j["policy"] = spec.name;
  j["T"] = T;
  j["eta"] = cfg.eta;
  j["seed"] = cfg.master_seed;
  j["x_star"] = env.x_star();
  j["estimate"] = result.estimate;
  j["abs_error"] = std::abs(result.estimate - env.x_star());
  j["failure"] = harness::is_failure(result.estimate, env, cfg.eta);
  j["pulls_used"] = result.pulls_used;
  j["trace_summary"] = {{"phases", result.trace.size()},
                        {"zoom_left", counts[0]},
                        {"zoom_right", counts[1]},
                        {"backtrack", counts[2]}};
  j["trace"] = trace;
  if (result.dispatch) {
    const double tau = result.dispatch->tau;
    j["dispatch"] = {{"delta_hat", result.dispatch->delta_hat},
                     {"tau", std::isinf(tau) ? nlohmann::json("inf") : nlohmann::json(tau)},
                     {"chosen", std::string(to_string(result.dispatch->chosen))}};
  }
  out << j.dump(2) << '\n';

  if (a.trace_path) {
    std::ofstream f(*a.trace_path);
    if (!f) {
      err << "error: cannot write trace file '" << *a.trace_path << "'\n";
      return kIoError;
    }
    harness::write_trace_jsonl(f, result);
    if (!f) return kIoError;
  }
  return kOk;
}

struct SweepArgs {
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::string> seed, workers, replications, eta, budgets, confidence;
};

void report_rows(const harness::ExperimentConfig& cfg, const std::vector<harness::SweepRow>& rows,
                 std::ostream& err) {
  print_warnings(err, halving::resolution_warnings(cfg.eta));
  for (const auto& spec : cfg.policies) {
    for (std::uint64_t T : cfg.budgets) print_policy_warnings(err, spec.kind, T, cfg.eta);
  }
  for (const auto& r : rows) {
    if (!r.valid) err << "warning: invalid cell " << r.policy << " T=" << r.budget << ": " << r.error << '\n';
  }
}

int write_rows_to(const std::string& path, const std::vector<harness::SweepRow>& rows,
                  std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return kIoError;
  }
  harness::write_csv(f, rows);
  f.flush();
  if (!f) {
    err << "error: failed writing '" << path << "'\n";
    return kIoError;
  }
  return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  IniDocument doc = config::load_ini(a.config_path);
  apply(doc, {{"sweep", "seed", a.seed},
              {"sweep", "workers", a.workers},
              {"sweep", "replications", a.replications},
              {"sweep", "eta", a.eta},
              {"sweep", "budgets", a.budgets},
              {"sweep", "confidence", a.confidence}});
  const harness::ExperimentConfig cfg =
      config::experiment_from(doc, config::default_workers_from_env());
  const auto rows = harness::run_sweep(cfg);
  report_rows(cfg, rows, err);

  if (!a.output || *a.output == "-") {
    harness::write_csv(out, rows);
    err << rows.size() << " rows\n";
    return kOk;
  }
  if (int rc = write_rows_to(*a.output, rows, err); rc != kOk) return rc;
  out << "wrote " << rows.size() << " rows to " << *a.output << '\n';
  return kOk;
}

struct BoundsArgs {
  double delta = 0.0, sigma = 0.0, eta = 0.0;
  std::vector<std::uint64_t> budgets;
  std::optional<std::uint64_t> from, to, step;
  std::optional<double> sha_b, c1, c2, c3;
  std::optional<std::string> output;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<std::uint64_t> grid = a.budgets;
  if (a.from || a.to || a.step) {
    if (!(a.from && a.to && a.step) || *a.step == 0 || *a.to < *a.from) {
      err << "error: --T-from, --T-to and --T-step must be given together with step > 0\n";
      return kConfigError;
    }
    for (std::uint64_t T = *a.from; T <= *a.to; T += *a.step) grid.push_back(T);
  }
  if (grid.empty()) {
    err << "error: no budgets given (--T or --T-from/--T-to/--T-step)\n";
    return kConfigError;
  }
  const bool with_sha = a.sha_b.has_value();
  if (with_sha != (a.c1 && a.c2 && a.c3) || (!with_sha && (a.c1 || a.c2 || a.c3))) {
    err << "error: the SHA bound needs --sha-B together with --sha-c1, --sha-c2, --sha-c3\n";
    return kConfigError;
  }

  std::ostringstream csv;
  csv << "T,t1,shb_upper,sh_upper,large_lower,small_lower,shb_valid,sh_valid,large_valid,small_valid";
  if (with_sha) csv << ",sha_upper,sha_valid";
  csv << '\n';
  auto flag = [](bool b) { return b ? "true" : "false"; };
  const double t1 = bounds::t1_threshold(a.delta, a.sigma, a.eta);
  for (std::uint64_t T : grid) {
    const bounds::BoundQuery q{T, a.delta, a.sigma, a.eta};
    const auto shb = bounds::shb_upper(q);
    const auto sh = bounds::sh_upper(q);
    const auto large = bounds::large_budget_lower(q);
    const auto small = bounds::small_budget_lower(q);
    csv << T << ',' << fmt(t1) << ',' << fmt(shb.value) << ',' << fmt(sh.value) << ','
        << fmt(large.value) << ',' << fmt(small.value) << ',' << flag(shb.valid) << ','
        << flag(sh.valid) << ',' << flag(large.valid) << ',' << flag(small.valid);
    if (with_sha) {
      const auto sha = bounds::sha_upper(q, *a.sha_b, {*a.c1, *a.c2, *a.c3});
      csv << ',' << fmt(sha.value) << ',' << flag(sha.valid);
    }
    csv << '\n';
  }

  if (!a.output || *a.output == "-") {
    out << csv.str();
    return kOk;
  }
  std::ofstream f(*a.output, std::ios::binary);
  if (!(f << csv.str())) {
    err << "error: cannot write '" << *a.output << "'\n";
    return kIoError;
  }
  return kOk;
}

struct ReproArgs {
  std::string preset;
  std::string output_dir;
  std::optional<std::string> workers, seed, replications;
};

int cmd_repro(const ReproArgs& a, std::ostream& out, std::ostream& err) {
  const auto runs = config::preset(a.preset);
  std::error_code ec;
  std::filesystem::create_directories(a.output_dir, ec);
  if (ec) {
    err << "error: cannot create '" << a.output_dir << "': " << ec.message() << '\n';
    return kIoError;
  }
  for (const auto& run : runs) {
    IniDocument doc = config::parse_ini_string(run.ini_text);
    apply(doc, {{"sweep", "workers", a.workers},
                {"sweep", "seed", a.seed},
                {"sweep", "replications", a.replications}});
    const auto cfg = config::experiment_from(doc, config::default_workers_from_env());
    const auto rows = harness::run_sweep(cfg);
    report_rows(cfg, rows, err);
    const std::string path = (std::filesystem::path(a.output_dir) / (run.stem + ".csv")).string();
    if (int rc = write_rows_to(path, rows, err); rc != kOk) return rc;
    out << "wrote " << rows.size() << " rows to " << path << '\n';
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-budget change point localisation: policies, bounds and Monte Carlo sweeps",
               "cpbandit"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one policy once and print the result as JSON");
  run_cmd->add_option("--config", run.config_path, "INI config providing defaults");
  run_cmd->add_option("--policy", run.policy, "sh, shb, sha or grid_ls");
  run_cmd->add_option("--mu1", run.mu1, "Mean left of the change");
  run_cmd->add_option("--mu2", run.mu2, "Mean right of the change");
  run_cmd->add_option("--xstar", run.xstar, "Change point in [0,1)");
  run_cmd->add_option("--sigma", run.sigma, "Noise scale");
  run_cmd->add_option("--noise", run.noise, "gaussian, uniform or none");
  run_cmd->add_option("--eta", run.eta, "Tolerance in (0, 1/2)");
  run_cmd->add_option("--T", run.budget, "Budget");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--gamma", run.gamma, "SHA threshold multiplier");
  run_cmd->add_option("--L", run.exploration, "SHA exploration pulls (even)");
  run_cmd->add_option("--L-fraction", run.exploration_fraction, "SHA exploration fraction of T");
  run_cmd->add_option("--sha-sigma", run.sha_sigma, "Noise scale SHA is told");
  run_cmd->add_option("--G", run.grid_points, "grid_ls grid size");
  run_cmd->add_option("--trace", run.trace_path, "Write per-phase JSON lines here");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over policies and budgets");
  sweep_cmd->add_option("--config", sweep.config_path, "INI config")->required();
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV output path (default stdout)");
  sweep_cmd->add_option("--seed", sweep.seed, "Override [sweep] seed");
  sweep_cmd->add_option("--workers", sweep.workers, "Override [sweep] workers");
  sweep_cmd->add_option("--replications", sweep.replications, "Override [sweep] replications");
  sweep_cmd->add_option("--eta", sweep.eta, "Override [sweep] eta");
  sweep_cmd->add_option("--budgets", sweep.budgets, "Override [sweep] budgets");
  sweep_cmd->add_option("--confidence", sweep.confidence, "Override [sweep] confidence");

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate the closed-form error bounds");
  bounds_cmd->add_option("--delta", bnd.delta, "Gap |mu1 - mu2|")->required();
  bounds_cmd->add_option("--sigma", bnd.sigma, "Noise scale")->required();
  bounds_cmd->add_option("--eta", bnd.eta, "Tolerance")->required();
  bounds_cmd->add_option("--T", bnd.budgets, "Budgets")->delimiter(',');
  bounds_cmd->add_option("--T-from", bnd.from, "Linear grid start");
  bounds_cmd->add_option("--T-to", bnd.to, "Linear grid end (inclusive)");
  bounds_cmd->add_option("--T-step", bnd.step, "Linear grid step");
  bounds_cmd->add_option("--sha-B", bnd.sha_b, "SHA exploration fraction B");
  bounds_cmd->add_option("--sha-c1", bnd.c1, "SHA constant c1");
  bounds_cmd->add_option("--sha-c2", bnd.c2, "SHA constant c2");
  bounds_cmd->add_option("--sha-c3", bnd.c3, "SHA constant c3");
  bounds_cmd->add_option("-o,--output", bnd.output, "CSV output path (default stdout)");

  ReproArgs repro;
  auto* repro_cmd = app.add_subcommand("repro", "Run a canned experiment preset");
  repro_cmd->add_option("preset", repro.preset, "fig2a, fig2bc-sh-only or zero-noise-suite")
      ->required();
  repro_cmd->add_option("output_dir", repro.output_dir, "Directory for the CSVs")->required();
  repro_cmd->add_option("--workers", repro.workers, "Override worker count");
  repro_cmd->add_option("--seed", repro.seed, "Override master seed");
  repro_cmd->add_option("--replications", repro.replications, "Override replications");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*bounds_cmd) return cmd_bounds(bnd, out, err);
    if (*repro_cmd) return cmd_repro(repro, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e, kConfigError);
  }
  return kConfigError;
}

}  // namespace cpbandit::cli
