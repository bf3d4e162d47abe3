#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iotforge/model.hpp"
#include "iotforge/symbol_table.hpp"

namespace iotforge {

struct ValidationOptions {
    // Escalates V008 to an error for timing-annotated components.
    bool analysis_requested = false;
};

// Runs the full well-formedness rule catalog (V001..V012, plus the
// resolver's R001/R002). Diagnostics are sorted by (file, span, code);
// an empty error set means the model is safe for analysis, simulation
// and code generation.
std::vector<Diagnostic> validate(const IoTModel& model, ValidationOptions options = {});

// Rule checks on an already-built table (table diagnostics not included).
std::vector<Diagnostic> run_rules(const SymbolTable& table, ValidationOptions options = {});

// Human-readable description of a catalog rule, e.g. "V004".
// Throws QueryError for codes outside the catalog.
std::string explain_rule(std::string_view code);

// All catalog rule codes in order (V001..V012).
std::vector<std::string> rule_catalog();

// Returns a copy of the model where states missing OnEntry/OnExit refer
// to a synthesized no-op general event (the `--fix` behavior).
IoTModel synthesize_missing_state_events(const IoTModel& model);

} // namespace iotforge
