#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "natl/copula.hpp"
#include "natl/reasoner.hpp"

namespace natl {

inline constexpr int kTraceVersion = 1;

/// Structured trace document with stable field order:
/// {version, config, premises, steps, outcome}.
nlohmann::ordered_json trace_to_json(const DerivationTrace& trace);

std::string trace_to_string(const DerivationTrace& trace);

class TraceSchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks field presence, types and internal references (premise ids
/// precede their step, the explained path lists recorded steps). Terms
/// must parse under `registry`. Throws TraceSchemaError naming the field.
void validate_trace_json(const nlohmann::json& doc,
                         const CopulaRegistry& registry = CopulaRegistry::builtin());

}  // namespace natl
