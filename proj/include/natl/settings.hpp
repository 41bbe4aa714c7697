#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "natl/copula.hpp"
#include "natl/embedding.hpp"
#include "natl/reasoner.hpp"
#include "natl/rules.hpp"

namespace natl {

class SettingsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Engine configuration read from flat `section.key = value` text.
///
///   embedding.dim, embedding.seed, embedding.synonyms,
///   embedding.cluster_similarity, unify.theta, unify.token_insensitive,
///   policy.strong, policy.weak, policy.focus, policy.copula_order,
///   reasoner.max_steps, reasoner.max_depth, reasoner.beam_width,
///   reasoner.soft_goal, reasoner.conjunctions,
///   copula.<id> = <surface> statement|linkage [symmetric] [negates=<id>]
struct Settings {
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> synonyms;
  double cluster_similarity = 0.95;

  double theta = 0.85;
  bool token_insensitive = false;

  ConfidencePolicy policy;

  std::size_t max_steps = 200;
  std::size_t max_depth = 8;
  std::size_t beam_width = 32;
  bool soft_goal = true;
  std::vector<std::string> conjunctions{"and", "causal-and"};

  CopulaRegistry registry;

  /// Sets one key. Relative synonym paths resolve against `base_dir`.
  /// Throws SettingsError for unknown keys and malformed values.
  void set(std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir = {});

  /// Throws SettingsError naming the line on any problem.
  static Settings parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static Settings load(const std::filesystem::path& path);

  ToyProvider::Options provider_options() const;
  DerivationConfig derivation(Term goal, Mode mode) const;
};

struct SettingLine {
  std::size_t line;
  std::string key;
  std::string value;
};

/// Splits `key = value` lines, dropping `#` comments and blank lines.
/// Throws SettingsError on a line without `=`.
std::vector<SettingLine> split_settings(std::string_view text);

}  // namespace natl
