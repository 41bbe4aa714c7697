#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "natl/reasoner.hpp"
#include "natl/settings.hpp"

namespace natl::cli {

/// One regression case: `<name>.case` (settings lines plus `kb`, `mode`,
/// `goal`), its knowledge base and `<name>.golden.json`.
struct CorpusCase {
  std::string name;
  std::filesystem::path dir;
  std::vector<std::filesystem::path> kb_files;
  Mode mode = Mode::solve;
  std::string goal;
  std::vector<SettingLine> settings;

  std::filesystem::path golden_path() const { return dir / (name + ".golden.json"); }
};

struct CorpusOptions {
  std::optional<double> theta;
  bool update_golden = false;
};

struct CaseResult {
  std::string name;
  bool passed = false;
  std::string message;
};

/// Reads every `*.case` file in `dir`, sorted by name. Throws
/// std::runtime_error when the directory is missing or holds no cases.
std::vector<CorpusCase> load_corpus(const std::filesystem::path& dir);

/// Throws std::runtime_error on malformed case files.
CorpusCase load_case(const std::filesystem::path& case_file);

/// Settings for a case: defaults, then the case lines, then the options.
Settings case_settings(const CorpusCase& c, const CorpusOptions& options);

/// Runs the case and returns its trace.
DerivationTrace run_case(const CorpusCase& c, const CorpusOptions& options);

/// Runs the case and compares premises, steps and outcome with the golden
/// trace (the config echo is not compared), or rewrites the golden file.
CaseResult check_case(const CorpusCase& c, const CorpusOptions& options);

}  // namespace natl::cli
