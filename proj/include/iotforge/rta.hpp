#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iotforge/rational.hpp"
#include "iotforge/task_set.hpp"

namespace iotforge {

struct ResponseResult {
    std::string component;
    std::string operation;
    std::optional<Duration> response; // nullopt = diverged past the deadline
    int iterations = 0;
    bool schedulable = false;

    std::string id() const { return component + "." + operation; }
};

enum class Verdict { Schedulable, Unschedulable, Overload };

std::string verdict_to_text(Verdict v);

struct CoreReport {
    int core = 0;
    Rational utilization;
    std::vector<TaskSpec> tasks; // priority order, priorities populated
    std::vector<ResponseResult> results;
};

struct ScheduleReport {
    std::string processor;
    std::vector<CoreReport> cores;
    Verdict verdict = Verdict::Schedulable;
};

// Exact utilization sum C_i / T_i; empty set yields 0.
Rational utilization(std::span<const TaskSpec> tasks);

// Explicit priorities are kept; tasks without one receive
// deadline-monotonic priorities placed after all explicit ones. Ties
// break by (deadline, component, operation). Returned tasks are sorted
// highest priority first with unique priority values.
std::vector<TaskSpec> assign_priorities(std::vector<TaskSpec> tasks);

// Exact fixed-point response-time iteration for constrained deadlines,
// starting from the task's own wcet. Sporadic interferers use their
// minimum inter-arrival time as the period. Divergence past the deadline
// yields an unschedulable result, not an error.
ResponseResult response_time(const TaskSpec& task, std::span<const TaskSpec> higher_priority);

// Least common multiple of all periods. Throws QueryError on an empty set.
Duration hyperperiod(std::span<const TaskSpec> tasks);

struct AnalyzeOptions {
    double wcet_margin = 1.0;
};

// Derives the processor's task set, assigns priorities, partitions tasks
// onto cores (first-fit by decreasing utilization) and runs the response
// analysis per core. Verdict is Overload when some task fits no core
// under utilization <= 1. Throws QueryError for an unknown processor.
ScheduleReport analyze_processor(const SymbolTable& table, std::string_view processor,
                                 AnalyzeOptions options = {});

} // namespace iotforge
