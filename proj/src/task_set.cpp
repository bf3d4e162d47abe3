#include "iotforge/task_set.hpp"

#include <algorithm>
#include <cmath>

namespace iotforge {

std::vector<TaskSpec> deployed_task_set(const SymbolTable& table, std::string_view processor) {
    if (!table.find_processor(processor))
        throw QueryError("unknown processor '" + std::string(processor) + "'");
    std::vector<TaskSpec> tasks;
    for (const auto& [qname, info] : table.components()) {
        auto bound_to = table.deployment_of(info.top_level);
        if (!bound_to || *bound_to != processor) continue;
        for (const auto& op : info.component->operations) {
            if (!op.timing) continue;
            TaskSpec task;
            task.component = qname;
            task.operation = op.name;
            task.kind = op.timing->kind;
            task.wcet = op.timing->wcet;
            task.period_or_miat = op.timing->period_or_miat;
            task.priority = op.timing->priority;
            task.deadline = op.timing->deadline;
            task.processor = std::string(processor);
            tasks.push_back(std::move(task));
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const TaskSpec& a, const TaskSpec& b) {
        if (a.component != b.component) return a.component < b.component;
        return a.operation < b.operation;
    });
    return tasks;
}

void apply_wcet_margin(std::vector<TaskSpec>& tasks, double margin) {
    if (margin == 1.0) return;
    for (auto& task : tasks) {
        double scaled = std::ceil(static_cast<double>(task.wcet.us) * margin);
        task.wcet.us = static_cast<std::int64_t>(scaled);
        if (task.wcet.us < 1) task.wcet.us = 1;
    }
}

} // namespace iotforge
