#pragma once

#include <string>
#include <vector>

#include "iotforge/explore.hpp"
#include "iotforge/rta.hpp"
#include "iotforge/symbol_table.hpp"

namespace iotforge {

// Canonical JSON export of a resolved model: stable key order, durations
// as integer microseconds, references as fully qualified dotted names.
// Schemas for all four documents live in docs/schemas/.
std::string model_to_json(const SymbolTable& table);

std::string diagnostics_to_json(const std::vector<Diagnostic>& diagnostics);

std::string schedule_report_to_json(const ScheduleReport& report);
std::string schedule_report_to_text(const ScheduleReport& report);

std::string exploration_report_to_json(const ExplorationReport& report);

} // namespace iotforge
