#include "natl/settings.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace natl {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw SettingsError("invalid value '" + std::string(value) + "' for " + std::string(key) +
                      " (expected " + std::string(expected) + ")");
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value, bool positive) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || (positive && out == 0)) {
    bad_value(key, value, positive ? "a positive integer" : "an integer");
  }
  return out;
}

double to_unit(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !(out > 0.0 && out <= 1.0)) {
    bad_value(key, value, "a number in (0, 1]");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  bad_value(key, value, "true or false");
}

}  // namespace

std::vector<SettingLine> split_settings(std::string_view text) {
  std::vector<SettingLine> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw SettingsError("line " + std::to_string(n) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw SettingsError("line " + std::to_string(n) + ": empty key");
    out.push_back({n, std::move(key), trim(std::string_view(line).substr(eq + 1))});
  }
  return out;
}

void Settings::set(std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir) {
  if (key == "embedding.dim") {
    dim = to_int<std::size_t>(key, value, true);
    if (dim < 2) bad_value(key, value, "at least 2");
  } else if (key == "embedding.seed") {
    seed = to_int<std::uint64_t>(key, value, false);
  } else if (key == "embedding.synonyms") {
    if (value.empty()) {
      synonyms.reset();
    } else {
      std::filesystem::path p{std::string(value)};
      synonyms = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
  } else if (key == "embedding.cluster_similarity") {
    cluster_similarity = to_unit(key, value);
  } else if (key == "unify.theta") {
    theta = to_unit(key, value);
  } else if (key == "unify.token_insensitive") {
    token_insensitive = to_bool(key, value);
  } else if (key == "policy.strong") {
    policy.strong = to_unit(key, value);
  } else if (key == "policy.weak") {
    policy.weak = to_unit(key, value);
  } else if (key == "policy.focus") {
    policy.focus = to_unit(key, value);
  } else if (key == "policy.copula_order") {
    auto ids = words(value);
    for (const auto& id : ids) {
      const Copula* c = registry.by_id(id);
      if (c == nullptr || c->kind != CopulaKind::statement) {
        bad_value(key, value, "statement copula ids");
      }
    }
    policy.copula_order = std::move(ids);
  } else if (key == "reasoner.max_steps") {
    max_steps = to_int<std::size_t>(key, value, true);
  } else if (key == "reasoner.max_depth") {
    max_depth = to_int<std::size_t>(key, value, true);
  } else if (key == "reasoner.beam_width") {
    beam_width = to_int<std::size_t>(key, value, true);
  } else if (key == "reasoner.soft_goal") {
    soft_goal = to_bool(key, value);
  } else if (key == "reasoner.conjunctions") {
    auto rels = words(value);
    for (const auto& r : rels) {
      if (!is_identifier(r)) bad_value(key, value, "relation symbols");
    }
    conjunctions = std::move(rels);
  } else if (key.substr(0, 7) == "copula.") {
    const std::string id(key.substr(7));
    auto parts = words(value);
    if (parts.size() < 2) bad_value(key, value, "<surface> statement|linkage [symmetric] [negates=<id>]");
    Copula c;
    c.id = id;
    c.surface = parts[0];
    if (parts[1] == "statement") {
      c.kind = CopulaKind::statement;
    } else if (parts[1] == "linkage") {
      c.kind = CopulaKind::linkage;
    } else {
      bad_value(key, value, "kind statement or linkage");
    }
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (parts[i] == "symmetric") {
        c.symmetric = true;
      } else if (parts[i].rfind("negates=", 0) == 0) {
        c.negates = parts[i].substr(8);
        c.polarity = Polarity::negative;
      } else {
        bad_value(key, value, "flags symmetric or negates=<id>");
      }
    }
    try {
      registry.add(std::move(c));
    } catch (const std::invalid_argument& e) {
      throw SettingsError(e.what());
    }
  } else {
    throw SettingsError("unknown setting '" + std::string(key) + "'");
  }
}

Settings Settings::parse(std::string_view text, const std::filesystem::path& base_dir) {
  Settings s;
  for (const auto& l : split_settings(text)) {
    try {
      s.set(l.key, l.value, base_dir);
    } catch (const SettingsError& e) {
      throw SettingsError("line " + std::to_string(l.line) + ": " + e.what());
    }
  }
  return s;
}

Settings Settings::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SettingsError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str(), path.parent_path());
  } catch (const SettingsError& e) {
    throw SettingsError(path.string() + ": " + e.what());
  }
}

ToyProvider::Options Settings::provider_options() const {
  ToyProvider::Options o;
  o.dimension = dim;
  o.seed = seed;
  o.cluster_similarity = cluster_similarity;
  if (synonyms) {
    try {
      o.synonyms = SynonymTable::load(*synonyms);
    } catch (const std::exception& e) {
      throw SettingsError(e.what());
    }
  }
  return o;
}

DerivationConfig Settings::derivation(Term goal, Mode mode) const {
  DerivationConfig c(std::move(goal), mode);
  c.max_steps = max_steps;
  c.max_depth = max_depth;
  c.beam_width = beam_width;
  c.theta = theta;
  c.token_insensitive = token_insensitive;
  c.soft_goal = soft_goal;
  c.conjunctions = conjunctions;
  c.policy = policy;
  return c;
}

}  // namespace natl
