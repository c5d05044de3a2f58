#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpbandit/harness.hpp"

namespace cpbandit::config {

/// Flat INI document: ordered sections of key = value pairs. Sections used:
///   [environment]  mu1, mu2, x_star, sigma, noise
///   [sweep]        eta, budgets, replications, seed, confidence, workers, policies
///   [policy.NAME]  kind, gamma, L_fraction, L, sigma, G
class IniDocument {
 public:
  using Section = std::map<std::string, std::string>;

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  /// Appends an empty section if it does not exist yet.
  void add_section(const std::string& section);
  /// Creates the section (appended last) if needed.
  void set(const std::string& section, const std::string& key, const std::string& value);
  bool has_section(const std::string& section) const;
  const std::vector<std::pair<std::string, Section>>& sections() const { return sections_; }

 private:
  std::vector<std::pair<std::string, Section>> sections_;
};

/// Throws ConfigError on malformed input.
IniDocument parse_ini(std::istream& in);
IniDocument parse_ini_string(const std::string& text);
/// Throws IoError when the file cannot be read.
IniDocument load_ini(const std::string& path);

harness::EnvironmentSpec environment_from(const IniDocument& doc);
/// Policy settings from [policy.NAME], defaulting kind to NAME.
harness::PolicySpec policy_from(const IniDocument& doc, const std::string& name);
/// Policies named by [sweep] policies, else every [policy.*] section in file order.
std::vector<harness::PolicySpec> policies_from(const IniDocument& doc);

/// Full sweep configuration; validates. `default_workers` applies when [sweep]
/// has no workers key.
harness::ExperimentConfig experiment_from(const IniDocument& doc, unsigned default_workers = 1);

/// Comma or whitespace separated unsigned integers.
std::vector<std::uint64_t> parse_budget_list(const std::string& text);

/// CPBANDIT_WORKERS if set to a positive integer, else 1.
unsigned default_workers_from_env();

/// Built-in reproduction presets. Each preset is one or more named sweep
/// configurations; the name becomes the CSV file stem.
struct PresetRun {
  std::string stem;
  std::string ini_text;
};

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown preset.
std::vector<PresetRun> preset(const std::string& name);

}  // namespace cpbandit::config
