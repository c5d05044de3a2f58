#include "cpbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <json.hpp>

#include "cpbandit/adaptive.hpp"
#include "cpbandit/errors.hpp"
#include "cpbandit/halving.hpp"
#include "cpbandit/offline.hpp"

namespace cpbandit::harness {

bool is_failure(double estimate, const Environment& env, double eta) {
  return std::abs(estimate - env.x_star()) >= eta;
}

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::DomainError, "confidence must lie in (0,1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), (1.0 + confidence) / 2.0);
}

double gaussian_ci_halfwidth(double p_hat, std::uint64_t n, double confidence) {
  if (n == 0) throw Error(ErrorCode::DomainError, "need at least one replication");
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw Error(ErrorCode::DomainError, "p_hat must lie in [0,1]");
  const double z = normal_quantile_two_sided(confidence);
  return z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

PolicyKind parse_policy_kind(const std::string& text) {
  if (text == "sh") return PolicyKind::SH;
  if (text == "shb") return PolicyKind::SHB;
  if (text == "sha") return PolicyKind::SHA;
  if (text == "grid_ls") return PolicyKind::GridLS;
  throw Error(ErrorCode::ConfigError,
              "unknown policy '" + text + "' (expected sh, shb, sha or grid_ls)");
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::SH: return "sh";
    case PolicyKind::SHB: return "shb";
    case PolicyKind::SHA: return "sha";
    case PolicyKind::GridLS: return "grid_ls";
  }
  return "sh";
}

Policy make_policy(const PolicySpec& spec, const Environment& env, double eta) {
  switch (spec.kind) {
    case PolicyKind::SH:
      return {spec.name, halving::run_sh};
    case PolicyKind::SHB:
      return {spec.name, halving::run_shb};
    case PolicyKind::GridLS: {
      const std::uint64_t g = spec.grid_points.value_or(offline::default_grid_points(eta));
      return {spec.name, [g](const Environment& e, std::uint64_t T, double h, RngStream& rng) {
                return offline::run_grid_ls(e, T, h, g, rng);
              }};
    }
    case PolicyKind::SHA: {
      const double sigma = spec.sha_sigma.value_or(env.sigma());
      if (!(sigma > 0.0)) {
        throw Error(ErrorCode::ConfigError,
                    "policy '" + spec.name + "': SHA needs sigma > 0; set it explicitly");
      }
      if (!(spec.gamma > 0.0)) {
        throw Error(ErrorCode::ConfigError, "policy '" + spec.name + "': gamma must be > 0");
      }
      return {spec.name, [spec, sigma](const Environment& e, std::uint64_t T, double h,
                                        RngStream& rng) {
                adaptive::ShaConfig cfg;
                cfg.gamma = spec.gamma;
                cfg.sigma = sigma;
                cfg.exploration_pulls = spec.exploration_pulls.value_or(
                    adaptive::default_exploration_pulls(T, spec.exploration_fraction));
                return adaptive::run_sha(e, T, h, cfg, rng);
              }};
    }
  }
  throw Error(ErrorCode::ConfigError, "unhandled policy kind");
}

void validate(const ExperimentConfig& cfg) {
  try {
    cfg.environment.build();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("environment: ") + e.what());
  }
  if (!(cfg.eta > 0.0 && cfg.eta < 0.5)) throw Error(ErrorCode::ConfigError, "eta must lie in (0, 1/2)");
  if (cfg.policies.empty()) throw Error(ErrorCode::ConfigError, "no policies configured");
  if (cfg.budgets.empty()) throw Error(ErrorCode::ConfigError, "budget list is empty");
  if (cfg.replications == 0) throw Error(ErrorCode::ConfigError, "replications must be >= 1");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    throw Error(ErrorCode::ConfigError, "confidence must lie in (0,1)");
  }
  if (cfg.workers == 0) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
  std::set<std::string> names;
  for (const auto& p : cfg.policies) {
    if (!names.insert(p.name).second) {
      throw Error(ErrorCode::ConfigError, "duplicate policy name '" + p.name + "'");
    }
    if (p.kind == PolicyKind::SHA &&
        !(p.exploration_fraction > 0.0 && p.exploration_fraction < 1.0)) {
      throw Error(ErrorCode::ConfigError, "policy '" + p.name + "': L_fraction must lie in (0,1)");
    }
    if (p.grid_points && *p.grid_points < 2) {
      throw Error(ErrorCode::ConfigError, "policy '" + p.name + "': G must be >= 2");
    }
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void fnv1a(std::uint64_t& h, unsigned char byte) {
  h ^= byte;
  h *= 0x100000001b3ULL;
}

void fnv1a_u64(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) fnv1a(h, static_cast<unsigned char>(v >> (8 * i)));
}

struct ReplicationOutcome {
  double abs_error = 0.0;
  bool failed = false;
  bool dispatched_shb = false;
  bool has_dispatch = false;
  std::string error;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::uint64_t stream_index_for(const std::string& policy, std::uint64_t budget,
                               std::uint64_t replication) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : policy) fnv1a(h, static_cast<unsigned char>(c));
  fnv1a(h, 0);
  fnv1a_u64(h, budget);
  fnv1a_u64(h, replication);
  return splitmix64(h);
}

void parallel_for(std::uint64_t count, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, workers), count));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SweepRow run_cell(const Policy& policy, const Environment& env, std::uint64_t budget, double eta,
                  std::uint64_t replications, std::uint64_t master_seed, double confidence,
                  unsigned workers) {
  std::vector<ReplicationOutcome> outcomes(replications);
  parallel_for(replications, workers, [&](std::uint64_t i) {
    RngStream rng(master_seed, stream_index_for(policy.name, budget, i));
    ReplicationOutcome& out = outcomes[i];
    try {
      const PolicyResult r = policy.run(env, budget, eta, rng);
      out.abs_error = std::abs(r.estimate - env.x_star());
      out.failed = is_failure(r.estimate, env, eta);
      if (r.dispatch) {
        out.has_dispatch = true;
        out.dispatched_shb = r.dispatch->chosen == HalvingKind::SHB;
      }
    } catch (const Error& e) {
      out.error = e.what();
    }
  });

  SweepRow row;
  row.policy = policy.name;
  row.budget = budget;
  row.replications = replications;

  // Ordered reduction keeps the row independent of scheduling.
  double error_sum = 0.0;
  std::uint64_t dispatches = 0;
  std::uint64_t shb_dispatches = 0;
  for (const auto& o : outcomes) {
    if (!o.error.empty()) {
      row.valid = false;
      row.error = o.error;
      break;
    }
    row.failures += o.failed ? 1 : 0;
    error_sum += o.abs_error;
    if (o.has_dispatch) {
      ++dispatches;
      shb_dispatches += o.dispatched_shb ? 1 : 0;
    }
  }
  if (!row.valid) {
    row.failures = 0;
    row.p_hat = std::nan("");
    row.ci_halfwidth = std::nan("");
    row.mean_abs_error = std::nan("");
    return row;
  }
  const double n = static_cast<double>(replications);
  row.p_hat = static_cast<double>(row.failures) / n;
  row.ci_halfwidth = gaussian_ci_halfwidth(row.p_hat, replications, confidence);
  row.mean_abs_error = error_sum / n;
  if (dispatches > 0) {
    row.dispatch_shb_rate = static_cast<double>(shb_dispatches) / static_cast<double>(dispatches);
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const Environment env = cfg.environment.build();
  std::vector<std::uint64_t> budgets = cfg.budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  std::vector<SweepRow> rows;
  rows.reserve(cfg.policies.size() * budgets.size());
  for (const auto& spec : cfg.policies) {
    const Policy policy = make_policy(spec, env, cfg.eta);
    for (std::uint64_t T : budgets) {
      rows.push_back(run_cell(policy, env, T, cfg.eta, cfg.replications, cfg.master_seed,
                              cfg.confidence, cfg.workers));
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.policy << ',' << r.budget << ',' << r.replications << ',' << r.failures << ','
        << format_double(r.p_hat) << ',' << format_double(r.ci_halfwidth) << ','
        << format_double(r.mean_abs_error) << ','
        << (r.dispatch_shb_rate ? format_double(*r.dispatch_shb_rate) : std::string()) << ','
        << (r.valid ? "true" : "false") << '\n';
  }
}

void write_trace_jsonl(std::ostream& out, const PolicyResult& result) {
  for (const auto& p : result.phases) {
    nlohmann::json j;
    j["phase"] = p.phase;
    j["a1"] = p.a1;
    j["a2"] = p.a2;
    j["a3"] = p.a3;
    auto mean = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
    j["means"] = {{"0", mean(p.means[0])},
                  {"a1", mean(p.means[1])},
                  {"a2", mean(p.means[2])},
                  {"a3", mean(p.means[3])},
                  {"1", mean(p.means[4])}};
    j["pulls_per_slot"] = p.pulls_per_slot;
    j["decision"] = std::string(to_string(p.decision));
    out << j.dump() << '\n';
  }
}

}  // namespace cpbandit::harness
