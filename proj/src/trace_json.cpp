#include "natl/trace_json.hpp"

#include <set>

#include "natl/syntax.hpp"

namespace natl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json substitution_json(const Substitution& s) {
  ordered_json out = ordered_json::object();
  for (const auto& [name, value] : s.bindings()) out["$" + name] = print_term(value);
  return out;
}

ordered_json merges_json(const std::vector<IdentityFact>& merges) {
  ordered_json out = ordered_json::array();
  for (const auto& m : merges) {
    out.push_back({{"left", print_term(m.left)},
                   {"right", print_term(m.right)},
                   {"similarity", m.similarity}});
  }
  return out;
}

ordered_json config_json(const DerivationConfig& c) {
  ordered_json policy{{"strong", c.policy.strong},
                      {"weak", c.policy.weak},
                      {"focus", c.policy.focus},
                      {"copula_order", c.policy.copula_order}};
  return ordered_json{{"mode", to_string(c.mode)},
                      {"goal", print_term(c.goal)},
                      {"max_steps", c.max_steps},
                      {"max_depth", c.max_depth},
                      {"beam_width", c.beam_width},
                      {"theta", c.theta},
                      {"token_insensitive", c.token_insensitive},
                      {"soft_goal", c.soft_goal},
                      {"conjunctions", c.conjunctions},
                      {"policy", policy}};
}

ordered_json outcome_json(const DerivationTrace& t) {
  ordered_json out{{"status", status_of(t.outcome)}};
  if (const auto* a = std::get_if<Answered>(&t.outcome)) {
    out["judgment"] = a->judgment.value;
    out["bindings"] = substitution_json(a->bindings);
  } else if (const auto* e = std::get_if<Explained>(&t.outcome)) {
    out["judgment"] = e->judgment.value;
    ordered_json path = ordered_json::array();
    for (auto s : e->path) path.push_back(s.value);
    out["path"] = path;
  }
  out["steps_recorded"] = t.steps.size();
  out["expanded"] = t.expanded;
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw TraceSchemaError(where + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

void expect(bool ok, const std::string& where, const std::string& what) {
  if (!ok) fail(where, what);
}

void check_term(const json& v, const std::string& where, const CopulaRegistry& registry) {
  expect(v.is_string(), where, "expected a term string");
  try {
    parse_term(v.get<std::string>(), registry);
  } catch (const SyntaxError& e) {
    fail(where, std::string("unparsable term: ") + e.what());
  }
}

void check_confidence(const json& v, const std::string& where) {
  expect(v.is_number(), where, "expected a number");
  double t = v.get<double>();
  expect(t >= 0.0 && t <= 1.0, where, "confidence out of range");
}

void check_substitution(const json& v, const std::string& where,
                        const CopulaRegistry& registry) {
  expect(v.is_object(), where, "expected an object");
  for (const auto& [name, value] : v.items()) {
    expect(name.size() > 1 && name[0] == '$', where, "bad variable key '" + name + "'");
    check_term(value, where + "." + name, registry);
  }
}

}  // namespace

ordered_json trace_to_json(const DerivationTrace& trace) {
  ordered_json doc;
  doc["version"] = kTraceVersion;
  doc["config"] = config_json(trace.config);

  ordered_json premises = ordered_json::array();
  for (const auto& j : trace.premises) {
    ordered_json p{{"id", j.id.value}};
    if (const auto* g = std::get_if<Given>(&j.provenance); g && g->label) {
      p["label"] = *g->label;
    }
    p["term"] = print_term(j.term);
    p["t"] = j.confidence;
    premises.push_back(std::move(p));
  }
  doc["premises"] = std::move(premises);

  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    ordered_json step{{"id", s.id.value},
                      {"rule", to_string(s.kind.type)},
                      {"direction", to_string(s.kind.direction)}};
    if (s.kind.pattern) step["pattern"] = to_string(*s.kind.pattern);
    ordered_json ids = ordered_json::array();
    for (auto p : s.premises) ids.push_back(p.value);
    step["premises"] = std::move(ids);
    if (s.path) step["path"] = *s.path;
    step["substitution"] = substitution_json(s.substitution);
    step["merges"] = merges_json(s.merges);
    step["conclusion"] = print_term(s.conclusion);
    step["t"] = s.confidence;
    step["depth"] = s.depth;
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  doc["outcome"] = outcome_json(trace);
  return doc;
}

std::string trace_to_string(const DerivationTrace& trace) {
  return trace_to_json(trace).dump(2) + "\n";
}

void validate_trace_json(const json& doc, const CopulaRegistry& registry) {
  expect(doc.is_object(), "trace", "expected an object");
  const json& version = field(doc, "version", "trace");
  expect(version.is_number_integer() && version.get<int>() == kTraceVersion, "version",
         "unsupported version");

  const json& config = field(doc, "config", "trace");
  const json& mode = field(config, "mode", "config");
  expect(mode.is_string() && mode_from_string(mode.get<std::string>()), "config.mode",
         "expected solve or explain");
  check_term(field(config, "goal", "config"), "config.goal", registry);
  for (const char* key : {"max_steps", "max_depth", "beam_width"}) {
    const json& v = field(config, key, "config");
    expect(v.is_number_unsigned() && v.get<std::size_t>() > 0, std::string("config.") + key,
           "expected a positive integer");
  }
  const json& theta = field(config, "theta", "config");
  expect(theta.is_number() && theta.get<double>() > 0.0 && theta.get<double>() <= 1.0,
         "config.theta", "expected a number in (0, 1]");

  if (doc.contains("premises")) {
    const json& premises = doc["premises"];
    expect(premises.is_array(), "premises", "expected an array");
    for (std::size_t i = 0; i < premises.size(); ++i) {
      const std::string where = "premises[" + std::to_string(i) + "]";
      const json& id = field(premises[i], "id", where);
      expect(id.is_number_unsigned(), where + ".id", "expected an id");
      check_term(field(premises[i], "term", where), where + ".term", registry);
      check_confidence(field(premises[i], "t", where), where + ".t");
    }
  }

  const json& steps = field(doc, "steps", "trace");
  expect(steps.is_array(), "steps", "expected an array");
  std::set<std::uint64_t> step_ids;
  std::uint64_t last = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    const json& s = steps[i];
    const json& id = field(s, "id", where);
    expect(id.is_number_unsigned() && id.get<std::uint64_t>() > last, where + ".id",
           "step ids must increase");
    last = id.get<std::uint64_t>();
    step_ids.insert(last);

    const json& rule = field(s, "rule", where);
    expect(rule.is_string(), where + ".rule", "expected a string");
    auto type = rule_type_from_string(rule.get<std::string>());
    expect(type.has_value(), where + ".rule", "unknown rule");
    const json& direction = field(s, "direction", where);
    expect(direction.is_string() && direction_from_string(direction.get<std::string>()),
           where + ".direction", "expected forward or reverse");
    const bool syllogism = *type == RuleType::SS || *type == RuleType::LL;
    expect(s.contains("pattern") == syllogism, where + ".pattern",
           syllogism ? "missing pattern" : "pattern only applies to SS and LL");
    if (syllogism) {
      expect(s["pattern"].is_string() && pattern_from_string(s["pattern"].get<std::string>()),
             where + ".pattern", "unknown pattern");
    }
    if (*type == RuleType::CONJ || *type == RuleType::FOCUS) {
      expect(direction.get<std::string>() == "forward", where + ".direction",
             "CONJ and FOCUS have no reverse direction");
    }
    if (*type == RuleType::FOCUS) {
      expect(s.contains("path") && s["path"].is_array(), where + ".path", "missing path");
    }

    const json& premises = field(s, "premises", where);
    expect(premises.is_array() && !premises.empty(), where + ".premises",
           "expected a non-empty array");
    for (const auto& p : premises) {
      expect(p.is_number_unsigned() && p.get<std::uint64_t>() < last, where + ".premises",
             "premise ids must precede the step");
    }
    check_substitution(field(s, "substitution", where), where + ".substitution", registry);
    const json& merges = field(s, "merges", where);
    expect(merges.is_array(), where + ".merges", "expected an array");
    for (const auto& m : merges) {
      check_term(field(m, "left", where + ".merges"), where + ".merges.left", registry);
      check_term(field(m, "right", where + ".merges"), where + ".merges.right", registry);
      check_confidence(field(m, "similarity", where + ".merges"), where + ".merges.similarity");
    }
    check_term(field(s, "conclusion", where), where + ".conclusion", registry);
    check_confidence(field(s, "t", where), where + ".t");
  }

  const json& outcome = field(doc, "outcome", "trace");
  const json& status = field(outcome, "status", "outcome");
  expect(status.is_string(), "outcome.status", "expected a string");
  const std::string st = status.get<std::string>();
  if (st == "answered") {
    check_substitution(field(outcome, "bindings", "outcome"), "outcome.bindings", registry);
  } else if (st == "explained") {
    const json& path = field(outcome, "path", "outcome");
    expect(path.is_array(), "outcome.path", "expected an array");
    for (const auto& p : path) {
      expect(p.is_number_unsigned() && step_ids.count(p.get<std::uint64_t>()) != 0,
             "outcome.path", "path must list recorded steps");
    }
  } else {
    expect(st == "exhausted", "outcome.status", "expected answered, explained or exhausted");
  }
}

}  // namespace natl
