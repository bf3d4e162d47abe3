#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iotforge/symbol_table.hpp"

namespace iotforge {

// One analyzable timing request: a timing-annotated operation of a
// deployed component.
struct TaskSpec {
    std::string component; // qualified name
    std::string operation;
    TimingKind kind = TimingKind::Periodic;
    Duration wcet;
    Duration period_or_miat;
    std::optional<int> priority;
    Duration deadline;
    std::string processor;

    std::string id() const { return component + "." + operation; }
};

// Every timing-annotated operation of every component bound (directly or
// through its top-level ancestor) to the processor, ordered by
// (component, operation). Throws QueryError for an unknown processor.
std::vector<TaskSpec> deployed_task_set(const SymbolTable& table, std::string_view processor);

// Multiplies WCETs by `margin` (ceiling to whole microseconds).
void apply_wcet_margin(std::vector<TaskSpec>& tasks, double margin);

} // namespace iotforge
