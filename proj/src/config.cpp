#include "cpbandit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cpbandit/errors.hpp"

namespace cpbandit::config {
namespace {

using harness::PolicyKind;
using harness::PolicySpec;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::ConfigError, field + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorCode::ConfigError,
                field + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::string require(const IniDocument& doc, const std::string& section, const std::string& key) {
  auto v = doc.get(section, key);
  if (!v) throw Error(ErrorCode::ConfigError, "missing required key " + where(section, key));
  return *v;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

std::optional<std::string> IniDocument::get(const std::string& section,
                                            const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    auto it = entries.find(key);
    if (it != entries.end()) return it->second;
  }
  return std::nullopt;
}

void IniDocument::add_section(const std::string& section) {
  if (!has_section(section)) sections_.push_back({section, {}});
}

void IniDocument::set(const std::string& section, const std::string& key,
                      const std::string& value) {
  for (auto& [name, entries] : sections_) {
    if (name == section) {
      entries[key] = value;
      return;
    }
  }
  sections_.push_back({section, {{key, value}}});
}

bool IniDocument::has_section(const std::string& section) const {
  return std::any_of(sections_.begin(), sections_.end(),
                     [&](const auto& s) { return s.first == section; });
}

IniDocument parse_ini(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  boost::property_tree::ptree tree;
  try {
    std::istringstream body(text);
    boost::property_tree::ini_parser::read_ini(body, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("malformed config: ") + e.what());
  }
  IniDocument doc;
  // read_ini discards sections without keys, but an empty [policy.NAME] is
  // meaningful, so headers are registered from the raw text first.
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const std::string t = trim(line);
    if (t.size() > 2 && t.front() == '[' && t.back() == ']') {
      doc.add_section(trim(t.substr(1, t.size() - 2)));
    }
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::ConfigError, "key '" + section + "' outside of any section");
    }
    for (const auto& [key, value] : body) doc.set(section, key, trim(value.data()));
  }
  return doc;
}

IniDocument parse_ini_string(const std::string& text) {
  std::istringstream in(text);
  return parse_ini(in);
}

IniDocument load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
  return parse_ini(in);
}

std::vector<std::uint64_t> parse_budget_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_names(text)) out.push_back(to_u64(item, "budgets"));
  return out;
}

harness::EnvironmentSpec environment_from(const IniDocument& doc) {
  const std::string s = "environment";
  harness::EnvironmentSpec env;
  env.mu1 = to_double(require(doc, s, "mu1"), where(s, "mu1"));
  env.mu2 = to_double(require(doc, s, "mu2"), where(s, "mu2"));
  env.x_star = to_double(require(doc, s, "x_star"), where(s, "x_star"));
  env.sigma = to_double(require(doc, s, "sigma"), where(s, "sigma"));
  if (auto noise = doc.get(s, "noise")) env.noise = parse_noise_kind(trim(*noise));
  return env;
}

PolicySpec policy_from(const IniDocument& doc, const std::string& name) {
  const std::string s = "policy." + name;
  PolicySpec spec;
  spec.name = name;
  spec.kind = harness::parse_policy_kind(trim(doc.get(s, "kind").value_or(name)));
  if (auto v = doc.get(s, "gamma")) spec.gamma = to_double(*v, where(s, "gamma"));
  if (auto v = doc.get(s, "L_fraction")) {
    spec.exploration_fraction = to_double(*v, where(s, "L_fraction"));
  }
  if (auto v = doc.get(s, "L")) spec.exploration_pulls = to_u64(*v, where(s, "L"));
  if (auto v = doc.get(s, "sigma")) spec.sha_sigma = to_double(*v, where(s, "sigma"));
  if (auto v = doc.get(s, "G")) spec.grid_points = to_u64(*v, where(s, "G"));
  return spec;
}

std::vector<PolicySpec> policies_from(const IniDocument& doc) {
  std::vector<PolicySpec> out;
  if (auto listed = doc.get("sweep", "policies")) {
    for (const auto& name : split_names(*listed)) out.push_back(policy_from(doc, name));
    return out;
  }
  const std::string prefix = "policy.";
  for (const auto& [section, entries] : doc.sections()) {
    if (section.rfind(prefix, 0) == 0) out.push_back(policy_from(doc, section.substr(prefix.size())));
  }
  return out;
}

harness::ExperimentConfig experiment_from(const IniDocument& doc, unsigned default_workers) {
  const std::string s = "sweep";
  harness::ExperimentConfig cfg;
  cfg.environment = environment_from(doc);
  cfg.eta = to_double(require(doc, s, "eta"), where(s, "eta"));
  cfg.budgets = parse_budget_list(require(doc, s, "budgets"));
  cfg.policies = policies_from(doc);
  if (auto v = doc.get(s, "replications")) cfg.replications = to_u64(*v, where(s, "replications"));
  if (auto v = doc.get(s, "seed")) cfg.master_seed = to_u64(*v, where(s, "seed"));
  if (auto v = doc.get(s, "confidence")) cfg.confidence = to_double(*v, where(s, "confidence"));
  cfg.workers = default_workers;
  if (auto v = doc.get(s, "workers")) {
    cfg.workers = static_cast<unsigned>(to_u64(*v, where(s, "workers")));
  }
  harness::validate(cfg);
  return cfg;
}

unsigned default_workers_from_env() {
  const char* raw = std::getenv("CPBANDIT_WORKERS");
  if (raw == nullptr) return 1;
  try {
    const std::uint64_t v = to_u64(raw, "CPBANDIT_WORKERS");
    return v == 0 ? 1u : static_cast<unsigned>(std::min<std::uint64_t>(v, 1024));
  } catch (const Error&) {
    return 1;
  }
}

namespace {

constexpr const char* kFig2a = R"(; Gaussian rewards, gap 2, sigma 8, change at 0.7, tolerance 1e-8.
; The budget grid is our own choice, spaced to resolve the SH/SHB crossover.
[environment]
mu1 = 0
mu2 = 2
x_star = 0.7
sigma = 8
noise = gaussian

[sweep]
eta = 1e-8
budgets = 8000, 16000, 24000, 32000, 40000, 48000, 56000, 64000, 72000, 80000, 88000, 96000
replications = 1000
seed = 1
confidence = 0.9

[policy.sh]

[policy.shb]

[policy.sha]
gamma = 120
L_fraction = 0.05
)";

std::string fig2bc_text(const std::string& x_star) {
  return R"(; Gaussian rewards, gap 2, sigma 1, tolerance 0.1.
; Budget grid chosen by us; G defaults to 2 ceil(1/(2 eta)) = 10.
[environment]
mu1 = 0
mu2 = 2
x_star = )" + x_star + R"(
sigma = 1
noise = gaussian

[sweep]
eta = 0.1
budgets = 9, 12, 18, 24, 30, 36, 45, 60
replications = 500
seed = 1
confidence = 0.9

[policy.sh]

[policy.grid_ls]
)";
}

std::string zero_noise_text(const std::string& x_star) {
  return R"(; Noiseless sanity suite: every policy must land within eta.
[environment]
mu1 = 0
mu2 = 2
x_star = )" + x_star + R"(
sigma = 0
noise = none

[sweep]
eta = 1e-3
budgets = 1001, 2002, 5005
replications = 10
seed = 1
confidence = 0.9

[policy.sh]

[policy.shb]

[policy.sha]
gamma = 120
L_fraction = 0.05
sigma = 1

[policy.grid_ls]
)";
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig2a", "fig2bc-sh-only", "zero-noise-suite"}; }

std::vector<PresetRun> preset(const std::string& name) {
  if (name == "fig2a") return {{"fig2a", kFig2a}};
  if (name == "fig2bc-sh-only") {
    return {{"fig2bc-sh-only_xstar0.7", fig2bc_text("0.7")},
            {"fig2bc-sh-only_xstar0.01", fig2bc_text("0.01")}};
  }
  if (name == "zero-noise-suite") {
    std::vector<PresetRun> runs;
    for (const char* x : {"0", "0.01", "0.3", "0.7", "0.999"}) {
      runs.push_back({std::string("zero-noise-suite_xstar") + x, zero_noise_text(x)});
    }
    return runs;
  }
  throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
}

}  // namespace cpbandit::config
