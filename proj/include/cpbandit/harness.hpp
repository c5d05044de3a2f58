#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpbandit/env.hpp"
#include "cpbandit/policy_result.hpp"
#include "cpbandit/rng.hpp"

namespace cpbandit::harness {

/// Failure event |estimate - x_star| >= eta (the boundary counts as failure).
bool is_failure(double estimate, const Environment& env, double eta);

/// Two-sided standard normal quantile z at (1 + confidence) / 2.
double normal_quantile_two_sided(double confidence);

/// Wald half-width z * sqrt(p(1-p)/n). Throws DomainError.
double gaussian_ci_halfwidth(double p_hat, std::uint64_t n, double confidence);

using PolicyFn =
    std::function<PolicyResult(const Environment&, std::uint64_t budget, double eta, RngStream&)>;

struct Policy {
  std::string name;
  PolicyFn run;
};

enum class PolicyKind { SH, SHB, SHA, GridLS };

/// Throws ConfigError on an unknown name. Accepts sh, shb, sha, grid_ls.
PolicyKind parse_policy_kind(const std::string& text);
std::string to_string(PolicyKind kind);

/// Declarative policy entry as it appears in a sweep config.
struct PolicySpec {
  std::string name;
  PolicyKind kind = PolicyKind::SH;
  double gamma = 120.0;                          // sha
  double exploration_fraction = 0.05;            // sha: L = floor(fraction T), even
  std::optional<std::uint64_t> exploration_pulls;  // sha: fixed L overrides the fraction
  std::optional<double> sha_sigma;               // sha: defaults to the environment sigma
  std::optional<std::uint64_t> grid_points;      // grid_ls: defaults to 2 ceil(1/(2 eta))

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Binds a spec to the environment and tolerance it will run under.
/// Throws ConfigError when SHA would be handed sigma <= 0.
Policy make_policy(const PolicySpec& spec, const Environment& env, double eta);

struct EnvironmentSpec {
  double mu1 = 0.0;
  double mu2 = 1.0;
  double x_star = 0.5;
  double sigma = 1.0;
  NoiseKind noise = NoiseKind::Gaussian;

  Environment build() const { return make_environment(mu1, mu2, x_star, sigma, noise); }
  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

struct ExperimentConfig {
  EnvironmentSpec environment;
  double eta = 0.1;
  std::vector<PolicySpec> policies;
  std::vector<std::uint64_t> budgets;
  std::uint64_t replications = 1000;
  std::uint64_t master_seed = 0;
  double confidence = 0.90;
  unsigned workers = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError describing the first problem found.
void validate(const ExperimentConfig& cfg);

struct SweepRow {
  std::string policy;
  std::uint64_t budget = 0;
  std::uint64_t replications = 0;
  std::uint64_t failures = 0;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;
  double mean_abs_error = 0.0;
  std::optional<double> dispatch_shb_rate;
  bool valid = true;
  std::string error;  // first policy error of an invalid cell; not part of the CSV
};

/// Stable 64-bit stream id for replication `replication` of (policy, T).
std::uint64_t stream_index_for(const std::string& policy, std::uint64_t budget,
                               std::uint64_t replication);

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn);

/// Independent replications of one (policy, T) cell. The result does not
/// depend on the worker count. Policy errors produce a row with valid = false.
SweepRow run_cell(const Policy& policy, const Environment& env, std::uint64_t budget, double eta,
                  std::uint64_t replications, std::uint64_t master_seed,
                  double confidence = 0.90, unsigned workers = 1);

/// Rows in policy order, then ascending T.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "policy,T,replications,failures,p_hat,ci_halfwidth,mean_abs_error,dispatch_shb_rate,valid";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// One JSON object per phase.
void write_trace_jsonl(std::ostream& out, const PolicyResult& result);

}  // namespace cpbandit::harness
