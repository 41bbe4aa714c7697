#include "corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "natl/syntax.hpp"
#include "natl/trace_json.hpp"

namespace natl::cli {

namespace fs = std::filesystem;

namespace {

std::string status_in(const nlohmann::json& doc) {
  if (doc.contains("outcome") && doc["outcome"].is_object()) {
    return doc["outcome"].value("status", "?");
  }
  return "?";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CorpusCase load_case(const fs::path& case_file) {
  CorpusCase c;
  c.name = case_file.stem().string();
  c.dir = case_file.parent_path();
  bool have_goal = false;
  for (auto& line : split_settings(read_file(case_file))) {
    if (line.key == "kb") {
      std::istringstream files(line.value);
      for (std::string f; files >> f;) c.kb_files.push_back(c.dir / f);
    } else if (line.key == "mode") {
      auto m = mode_from_string(line.value);
      if (!m) throw std::runtime_error(case_file.string() + ": bad mode '" + line.value + "'");
      c.mode = *m;
    } else if (line.key == "goal") {
      c.goal = line.value;
      have_goal = true;
    } else if (line.key == "description") {
      // Free text for readers of the case file.
    } else {
      c.settings.push_back(std::move(line));
    }
  }
  if (c.kb_files.empty() || !have_goal) {
    throw std::runtime_error(case_file.string() + ": a case needs 'kb' and 'goal'");
  }
  return c;
}

std::vector<CorpusCase> load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("corpus directory '" + dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".case") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw std::runtime_error("corpus directory '" + dir.string() + "' holds no cases");
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusCase> out;
  for (const auto& f : files) out.push_back(load_case(f));
  return out;
}

Settings case_settings(const CorpusCase& c, const CorpusOptions& options) {
  Settings s;
  for (const auto& line : c.settings) {
    try {
      s.set(line.key, line.value, c.dir);
    } catch (const SettingsError& e) {
      throw SettingsError(c.name + ".case line " + std::to_string(line.line) + ": " + e.what());
    }
  }
  if (options.theta) s.theta = *options.theta;
  return s;
}

DerivationTrace run_case(const CorpusCase& c, const CorpusOptions& options) {
  const Settings s = case_settings(c, options);
  KnowledgeBase kb;
  for (const auto& f : c.kb_files) {
    for (const auto& j : parse_kb(read_file(f), s.registry)) {
      kb.assert_judgment(j.term, j.confidence, Given{j.label});
    }
  }
  const ToyProvider provider(s.provider_options());
  return derive(std::move(kb), s.derivation(parse_term(c.goal, s.registry), c.mode), provider);
}

CaseResult check_case(const CorpusCase& c, const CorpusOptions& options) {
  CaseResult r{c.name, false, {}};
  nlohmann::ordered_json actual;
  try {
    actual = trace_to_json(run_case(c, options));
  } catch (const std::exception& e) {
    r.message = e.what();
    return r;
  }
  if (options.update_golden) {
    std::ofstream out(c.golden_path());
    out << actual.dump(2) << '\n';
    r.passed = static_cast<bool>(out);
    r.message = r.passed ? "golden updated" : "cannot write golden file";
    return r;
  }
  if (!fs::exists(c.golden_path())) {
    r.message = "missing golden file " + c.golden_path().filename().string();
    return r;
  }
  nlohmann::json golden;
  try {
    golden = nlohmann::json::parse(read_file(c.golden_path()));
  } catch (const std::exception& e) {
    r.message = std::string("unreadable golden file: ") + e.what();
    return r;
  }
  nlohmann::json got = nlohmann::json::parse(actual.dump());
  for (const char* key : {"premises", "steps", "outcome"}) {
    if (golden.value(key, nlohmann::json()) != got.value(key, nlohmann::json())) {
      r.message = std::string("trace differs from golden in '") + key + "' (outcome " +
                  status_in(got) + ", golden " + status_in(golden) + ")";
      return r;
    }
  }
  r.passed = true;
  return r;
}

}  // namespace natl::cli
