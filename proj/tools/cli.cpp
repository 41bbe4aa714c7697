#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "corpus.hpp"
#include "json.hpp"
#include "natl/embedding.hpp"
#include "natl/knowledge_base.hpp"
#include "natl/reasoner.hpp"
#include "natl/settings.hpp"
#include "natl/syntax.hpp"
#include "natl/trace_json.hpp"
#include "natl/unification.hpp"

namespace natl::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> theta;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> max_depth;
  std::string format = "human";
  std::string mode;
  std::vector<std::string> kb;
  std::string goal;
  std::vector<std::string> positional;
  std::string corpus_dir = "corpus";
  bool update_golden = false;
};

/// Raised for problems the user must fix (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Settings load_settings(const Options& o) {
  Settings s;
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("NATL_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) s = Settings::load(path);
  if (o.seed) s.seed = *o.seed;
  if (o.theta) s.theta = *o.theta;
  if (o.max_steps) s.max_steps = *o.max_steps;
  if (o.max_depth) s.max_depth = *o.max_depth;
  return s;
}

bool structured(const Options& o) { return o.format == "structured"; }

Term parse_arg_term(const std::string& text, const Settings& s, const std::string& what) {
  try {
    return parse_term(text, s.registry);
  } catch (const SyntaxError& e) {
    throw UsageError(what + ": " + e.what());
  }
}

void print_diagnostics(std::ostream& err, const std::string& file,
                       const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) {
    err << file << ':' << d.line << ':' << d.column << ": error: " << d.message;
    if (!d.expected.empty()) {
      err << " (expected ";
      for (std::size_t i = 0; i < d.expected.size(); ++i) {
        err << (i ? ", " : "") << d.expected[i];
      }
      err << ')';
    }
    err << '\n';
  }
}

int cmd_parse(const Options& o, std::ostream& out, std::ostream& err) {
  const Settings s = load_settings(o);
  std::vector<std::string> files = o.positional;
  files.insert(files.end(), o.kb.begin(), o.kb.end());
  if (files.empty()) throw UsageError("parse: no input files");
  ordered_json doc = ordered_json::array();
  bool ok = true;
  for (const auto& f : files) {
    try {
      auto judgments = parse_kb(read_file(f), s.registry);
      ordered_json entries = ordered_json::array();
      for (const auto& j : judgments) {
        if (structured(o)) {
          ordered_json e{{"line", j.line}};
          if (j.label) e["label"] = *j.label;
          e["term"] = print_term(j.term);
          e["class"] = std::string(to_string(class_of(j.term)));
          e["t"] = j.confidence;
          entries.push_back(std::move(e));
        } else {
          out << print_judgment(j.term, j.confidence, j.label) << '\n';
        }
      }
      if (structured(o)) doc.push_back({{"file", f}, {"judgments", std::move(entries)}});
    } catch (const KbSyntaxError& e) {
      print_diagnostics(err, f, e.diagnostics());
      ok = false;
    }
  }
  if (structured(o)) out << doc.dump(2) << '\n';
  return ok ? kOk : kUsage;
}

int cmd_unify(const Options& o, std::ostream& out) {
  const Settings s = load_settings(o);
  if (o.positional.size() != 2) throw UsageError("unify: expected two terms");
  const Term a = parse_arg_term(o.positional[0], s, "first term");
  const Term b = parse_arg_term(o.positional[1], s, "second term");
  const ToyProvider provider(s.provider_options());
  const auto r = soft_unify(a, b, provider, s.theta, s.token_insensitive);
  if (structured(o)) {
    ordered_json doc;
    if (r) {
      ordered_json subst = ordered_json::object();
      for (const auto& [name, value] : r.outcome().substitution.bindings()) {
        subst["$" + name] = print_term(value);
      }
      ordered_json facts = ordered_json::array();
      for (const auto& f : r.outcome().identity_facts) {
        facts.push_back({{"statement", print_term(f.statement())}, {"t", f.similarity}});
      }
      doc = {{"status", "unified"},
             {"substitution", subst},
             {"similarity", r.outcome().similarity},
             {"identity_facts", facts}};
    } else {
      doc = {{"status", "failed"},
             {"kind", to_string(r.failure().kind)},
             {"path", r.failure().path},
             {"detail", r.failure().detail}};
    }
    out << doc.dump(2) << '\n';
  } else if (r) {
    out << "unified " << r.outcome().substitution << " similarity "
        << format_confidence(r.outcome().similarity) << '\n';
    for (const auto& f : r.outcome().identity_facts) {
      out << "identity " << print_judgment(f.statement(), f.similarity) << '\n';
    }
  } else {
    out << "failed: " << to_string(r.failure().kind) << " at "
        << path_to_string(r.failure().path) << ": " << r.failure().detail << '\n';
  }
  return r ? kOk : kFailed;
}

int cmd_embed(const Options& o, std::ostream& out) {
  const Settings s = load_settings(o);
  if (o.positional.empty()) throw UsageError("embed: expected at least one term");
  const ToyProvider provider(s.provider_options());
  std::vector<Term> terms;
  std::vector<SemanticVector> vectors;
  for (const auto& text : o.positional) {
    terms.push_back(parse_arg_term(text, s, "term"));
    vectors.push_back(embed(terms.back(), provider));
  }
  if (structured(o)) {
    ordered_json doc;
    ordered_json items = ordered_json::array();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      auto c = vectors[i].components();
      items.push_back({{"term", print_term(terms[i])},
                       {"dimension", vectors[i].dimension()},
                       {"vector", std::vector<double>(c.begin(), c.end())}});
    }
    doc["embeddings"] = std::move(items);
    if (terms.size() == 2) doc["similarity"] = similarity(vectors[0], vectors[1]);
    out << doc.dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      out << print_term(terms[i]) << " [" << vectors[i].dimension() << "]";
      for (double x : vectors[i].components()) out << ' ' << format_confidence(x);
      out << '\n';
    }
    if (terms.size() == 2) {
      out << "similarity " << format_confidence(similarity(vectors[0], vectors[1])) << '\n';
    }
  }
  return kOk;
}

void print_human(const DerivationTrace& t, std::ostream& out) {
  for (const auto& s : t.steps) {
    out << "step " << s.id.value << ": " << describe(s.kind) << " from [";
    for (std::size_t i = 0; i < s.premises.size(); ++i) {
      out << (i ? ", " : "") << s.premises[i].value;
    }
    out << "] " << print_term(s.conclusion) << " % " << format_confidence(s.confidence)
        << " %";
    if (!s.substitution.empty()) out << ' ' << s.substitution;
    out << '\n';
    for (const auto& m : s.merges) {
      out << "  soft merge " << print_term(m.statement()) << " % "
          << format_confidence(m.similarity) << " %\n";
    }
  }
  if (const auto* a = std::get_if<Answered>(&t.outcome)) {
    out << "answered";
    if (!a->bindings.empty()) out << ' ' << a->bindings;
    out << " by judgment " << a->judgment.value << '\n';
    for (const auto& [name, value] : a->bindings.bindings()) {
      out << '$' << name << " = " << print_term(value) << '\n';
    }
  } else if (const auto* e = std::get_if<Explained>(&t.outcome)) {
    out << "explained by steps [";
    for (std::size_t i = 0; i < e->path.size(); ++i) {
      out << (i ? ", " : "") << e->path[i].value;
    }
    out << "]\n";
  } else {
    out << "exhausted after " << t.steps.size() << " steps\n";
  }
}

int cmd_derive(const Options& o, Mode mode, std::ostream& out) {
  const Settings s = load_settings(o);
  if (!o.mode.empty()) {
    auto m = mode_from_string(o.mode);
    if (!m) throw UsageError("--mode must be solve or explain");
    mode = *m;
  }
  if (o.kb.empty()) throw UsageError("at least one --kb file is required");
  if (o.goal.empty()) throw UsageError("--goal is required");
  KnowledgeBase kb;
  for (const auto& f : o.kb) {
    for (const auto& j : parse_kb(read_file(f), s.registry)) {
      try {
        kb.assert_judgment(j.term, j.confidence, Given{j.label});
      } catch (const std::invalid_argument& e) {
        throw UsageError(f + ":" + std::to_string(j.line) + ": " + e.what());
      }
    }
  }
  const Term goal = parse_arg_term(o.goal, s, "goal");
  const ToyProvider provider(s.provider_options());
  const DerivationTrace trace = derive(std::move(kb), s.derivation(goal, mode), provider);
  if (structured(o)) {
    out << trace_to_string(trace);
  } else {
    print_human(trace, out);
  }
  return std::holds_alternative<Exhausted>(trace.outcome) ? kFailed : kOk;
}

int cmd_corpus(const Options& o, std::ostream& out) {
  std::string dir = o.positional.empty() ? o.corpus_dir : o.positional.front();
  std::vector<CorpusCase> cases;
  try {
    cases = load_corpus(dir);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  CorpusOptions options{o.theta, o.update_golden};
  std::size_t failed = 0;
  ordered_json results = ordered_json::array();
  for (const auto& c : cases) {
    const CaseResult r = check_case(c, options);
    if (!r.passed) ++failed;
    if (structured(o)) {
      results.push_back({{"case", r.name}, {"passed", r.passed}, {"message", r.message}});
    } else {
      out << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.message.empty()) out << ": " << r.message;
      out << '\n';
    }
  }
  if (structured(o)) {
    out << ordered_json{{"cases", results}, {"failed", failed}}.dump(2) << '\n';
  } else {
    out << (cases.size() - failed) << '/' << cases.size() << " cases passed\n";
  }
  return failed == 0 ? kOk : kFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Term-logic reasoner over TRL knowledge bases", "natl"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "Config file (default: $NATL_CONFIG)");
    cmd->add_option("--seed", o.seed, "Embedding seed");
    cmd->add_option("--theta", o.theta, "Soft-unification threshold in (0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"human", "structured"}));
  };
  auto derivation = [&](CLI::App* cmd) {
    common(cmd);
    cmd->add_option("--kb", o.kb, "Knowledge-base file (repeatable)");
    cmd->add_option("--goal", o.goal, "Goal term");
    cmd->add_option("--mode", o.mode, "solve or explain");
    cmd->add_option("--max-steps", o.max_steps, "Step budget")->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", o.max_depth, "Depth budget")->check(CLI::PositiveNumber);
  };

  auto* parse = app.add_subcommand("parse", "Validate KB files and print canonical form");
  common(parse);
  parse->add_option("files", o.positional, "KB files");
  parse->add_option("--kb", o.kb, "KB file (repeatable)");

  auto* unify = app.add_subcommand("unify", "Unify two terms (soft, at --theta)");
  common(unify);
  unify->add_option("terms", o.positional, "Two terms")->expected(2);

  auto* embed_cmd = app.add_subcommand("embed", "Print term vectors");
  common(embed_cmd);
  embed_cmd->add_option("terms", o.positional, "Terms")->expected(1, 1 << 20);

  auto* solve = app.add_subcommand("solve", "Derive an answer to a goal pattern");
  derivation(solve);
  auto* explain = app.add_subcommand("explain", "Find the steps leading to a goal");
  derivation(explain);

  auto* corpus = app.add_subcommand("corpus", "Replay the regression corpus");
  common(corpus);
  corpus->add_option("dir", o.positional, "Corpus directory (default: corpus)");
  corpus->add_flag("--update-golden", o.update_golden, "Rewrite golden traces");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse) return cmd_parse(o, out, err);
    if (*unify) return cmd_unify(o, out);
    if (*embed_cmd) return cmd_embed(o, out);
    if (*solve) return cmd_derive(o, Mode::solve, out);
    if (*explain) return cmd_derive(o, Mode::explain, out);
    if (*corpus) return cmd_corpus(o, out);
  } catch (const KbSyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SettingsError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace natl::cli
