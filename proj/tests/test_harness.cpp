#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cpbandit/errors.hpp"
#include "cpbandit/harness.hpp"

using namespace cpbandit;
using namespace cpbandit::harness;

namespace {

Policy constant_policy(std::string name, double estimate) {
  return {std::move(name), [estimate](const Environment&, std::uint64_t T, double, RngStream&) {
            PolicyResult r;
            r.estimate = estimate;
            r.pulls_used = T;
            return r;
          }};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(IsFailure, Examples) {
  const Environment env = make_environment(0, 1, 0.7, 1);
  EXPECT_FALSE(is_failure(0.65, env, 0.1));
  EXPECT_TRUE(is_failure(0.80, env, 0.1));
  EXPECT_TRUE(is_failure(0.55, env, 0.1));
  EXPECT_TRUE(is_failure(0.5, make_environment(0, 1, 0.25, 1), 0.25));  // exact boundary
  EXPECT_FALSE(is_failure(0.0, make_environment(0, 1, 0.01, 1), 0.1));
}

TEST(ConfidenceInterval, Examples) {
  EXPECT_NEAR(normal_quantile_two_sided(0.90), 1.6448536269514722, 1e-12);
  EXPECT_NEAR(gaussian_ci_halfwidth(0.5, 1000, 0.9), 0.0260074193937779, 1e-13);
  EXPECT_NEAR(gaussian_ci_halfwidth(0.2, 500, 0.9), 0.0294240361832046, 1e-13);
  EXPECT_EQ(gaussian_ci_halfwidth(0.0, 100, 0.9), 0.0);
  EXPECT_EQ(gaussian_ci_halfwidth(1.0, 100, 0.9), 0.0);
  EXPECT_THROW(gaussian_ci_halfwidth(0.5, 0, 0.9), Error);
  EXPECT_THROW(normal_quantile_two_sided(1.0), Error);
}

TEST(RunCell, ZeroNoiseShNeverFails) {
  const Environment env = make_environment(0, 1, 0.37, 0, NoiseKind::None);
  const Policy sh = make_policy({"sh", PolicyKind::SH}, env, 1e-3);
  const SweepRow row = run_cell(sh, env, 1000, 1e-3, 50, 3);
  EXPECT_TRUE(row.valid);
  EXPECT_EQ(row.failures, 0u);
  EXPECT_EQ(row.p_hat, 0.0);
  EXPECT_EQ(row.ci_halfwidth, 0.0);
  EXPECT_FALSE(row.dispatch_shb_rate.has_value());
}

TEST(RunCell, ConstantWrongEstimateAlwaysFails) {
  const Environment env = make_environment(0, 1, 0.5, 1);
  const SweepRow row = run_cell(constant_policy("zero", 0.0), env, 100, 0.1, 200, 0);
  EXPECT_EQ(row.failures, 200u);
  EXPECT_EQ(row.p_hat, 1.0);
  EXPECT_NEAR(row.mean_abs_error, 0.5, 1e-15);
}

TEST(RunCell, BernoulliStubMatchesItsRate) {
  const double p = 0.3;
  const Environment env = make_environment(0, 1, 0.5, 1);
  const Policy coin{"coin", [p](const Environment& e, std::uint64_t, double, RngStream& rng) {
                      PolicyResult r;
                      r.estimate = rng.uniform(0, 1) < p ? 0.0 : e.x_star();
                      return r;
                    }};
  const std::uint64_t n = 10000;
  const SweepRow row = run_cell(coin, env, 10, 0.1, n, 12345);
  EXPECT_LT(std::abs(row.p_hat - p), 5 * std::sqrt(p * (1 - p) / n));
}

TEST(RunCell, IndependentOfWorkerCount) {
  const Environment env = make_environment(0, 1, 0.42, 1);
  for (PolicyKind kind : {PolicyKind::SH, PolicyKind::SHB, PolicyKind::SHA, PolicyKind::GridLS}) {
    PolicySpec spec{to_string(kind), kind};
    const Policy policy = make_policy(spec, env, 0.05);
    const SweepRow a = run_cell(policy, env, 2000, 0.05, 300, 9, 0.9, 1);
    const SweepRow b = run_cell(policy, env, 2000, 0.05, 300, 9, 0.9, 8);
    EXPECT_EQ(a.failures, b.failures) << spec.name;
    EXPECT_EQ(a.mean_abs_error, b.mean_abs_error) << spec.name;
    EXPECT_EQ(a.dispatch_shb_rate, b.dispatch_shb_rate) << spec.name;
  }
}

TEST(RunCell, PolicyErrorMarksRowInvalid) {
  const Environment env = make_environment(0, 1, 0.5, 1);
  const Policy sh = make_policy({"sh", PolicyKind::SH}, env, 1e-3);
  const SweepRow row = run_cell(sh, env, 8, 1e-3, 10, 0);
  EXPECT_FALSE(row.valid);
  EXPECT_NE(row.error.find("BudgetTooSmall"), std::string::npos);
  EXPECT_TRUE(std::isnan(row.p_hat));
  EXPECT_EQ(row.failures, 0u);
}

TEST(RunCell, ShaReportsDispatchRate) {
  const Environment env = make_environment(0, 2, 0.7, 1);
  const Policy sha = make_policy({"sha", PolicyKind::SHA}, env, 0.1);
  const SweepRow row = run_cell(sha, env, 4000, 0.1, 100, 1);
  ASSERT_TRUE(row.dispatch_shb_rate.has_value());
  EXPECT_GE(*row.dispatch_shb_rate, 0.0);
  EXPECT_LE(*row.dispatch_shb_rate, 1.0);
}

TEST(StreamIndex, DistinctAcrossCells) {
  std::set<std::uint64_t> seen;
  for (const char* name : {"sh", "shb", "sha"}) {
    for (std::uint64_t T : {100u, 200u}) {
      for (std::uint64_t r = 0; r < 100; ++r) seen.insert(stream_index_for(name, T, r));
    }
  }
  EXPECT_EQ(seen.size(), 600u);
  EXPECT_EQ(stream_index_for("sh", 100, 3), stream_index_for("sh", 100, 3));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::uint64_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::uint64_t i) {
                              if (i == 5) throw Error(ErrorCode::DomainError, "boom");
                            }),
               Error);
}

TEST(RunSweep, RowsInPolicyThenBudgetOrder) {
  ExperimentConfig cfg;
  cfg.environment = {0, 1, 0.3, 1, NoiseKind::Gaussian};
  cfg.eta = 0.1;
  cfg.policies = {{"b", PolicyKind::SHB}, {"a", PolicyKind::SH}};
  cfg.budgets = {300, 100, 200, 100};
  cfg.replications = 20;
  const auto rows = run_sweep(cfg);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<std::pair<std::string, std::uint64_t>> expected = {
      {"b", 100}, {"b", 200}, {"b", 300}, {"a", 100}, {"a", 200}, {"a", 300}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].policy, expected[i].first);
    EXPECT_EQ(rows[i].budget, expected[i].second);
  }
}

TEST(Validate, RejectsBadConfigs) {
  ExperimentConfig cfg;
  cfg.policies = {{"sh", PolicyKind::SH}};
  cfg.budgets = {100};
  EXPECT_NO_THROW(validate(cfg));
  auto expect_config_error = [](const ExperimentConfig& c) {
    try {
      validate(c);
      FAIL() << "expected ConfigError";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    }
  };
  auto c = cfg;
  c.budgets.clear();
  expect_config_error(c);
  c = cfg;
  c.eta = 0.5;
  expect_config_error(c);
  c = cfg;
  c.policies.push_back({"sh", PolicyKind::SHB});
  expect_config_error(c);
  c = cfg;
  c.environment.mu2 = c.environment.mu1;
  expect_config_error(c);
  c = cfg;
  c.replications = 0;
  expect_config_error(c);
}

TEST(MakePolicy, ShaNeedsPositiveSigma) {
  const Environment quiet = make_environment(0, 1, 0.3, 0, NoiseKind::None);
  EXPECT_THROW(make_policy({"sha", PolicyKind::SHA}, quiet, 0.1), Error);
  PolicySpec spec{"sha", PolicyKind::SHA};
  spec.sha_sigma = 1.0;
  EXPECT_NO_THROW(make_policy(spec, quiet, 0.1));
}

TEST(Csv, HeaderAndFormatting) {
  std::vector<SweepRow> rows(2);
  rows[0] = {"sh", 100, 1000, 123, 0.123, 0.0170952, 0.05, std::nullopt, true, ""};
  rows[1] = {"sha", 200, 10, 0, std::nan(""), std::nan(""), std::nan(""), std::nullopt, false, "x"};
  rows[0].dispatch_shb_rate = std::nullopt;
  std::ostringstream out;
  write_csv(out, rows);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "policy,T,replications,failures,p_hat,ci_halfwidth,mean_abs_error,dispatch_shb_rate,valid");
  EXPECT_EQ(lines[1], "sh,100,1000,123,0.123,0.0170952,0.05,,true");
  EXPECT_EQ(lines[2], "sha,200,10,0,nan,nan,nan,,false");
}

TEST(TraceJsonl, OneObjectPerPhase) {
  PolicyResult r;
  PhaseRecord p;
  p.phase = 1;
  p.a1 = 0.25;
  p.a2 = 0.5;
  p.a3 = 0.75;
  p.means = {std::nan(""), 0.0, 0.0, 1.0, std::nan("")};
  p.pulls_per_slot = 3;
  p.decision = Decision::ZoomRight;
  r.phases = {p, p};
  std::ostringstream out;
  write_trace_jsonl(out, r);
  const auto lines = lines_of(out.str());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[0].find("\"decision\":\"zoom_right\""), std::string::npos);
  EXPECT_NE(lines[0].find("\"0\":null"), std::string::npos);
  EXPECT_NE(lines[0].find("\"a3\":1.0"), std::string::npos);
}
