#include "iotforge/rta.hpp"

#include <algorithm>
#include <numeric>

namespace iotforge {

std::string verdict_to_text(Verdict v) {
    switch (v) {
    case Verdict::Schedulable: return "schedulable";
    case Verdict::Unschedulable: return "unschedulable";
    case Verdict::Overload: return "overload";
    }
    return "unschedulable";
}

Rational utilization(std::span<const TaskSpec> tasks) {
    Rational sum;
    for (const auto& task : tasks) sum = sum + Rational(task.wcet.us, task.period_or_miat.us);
    return sum;
}

std::vector<TaskSpec> assign_priorities(std::vector<TaskSpec> tasks) {
    auto tie_break = [](const TaskSpec& a, const TaskSpec& b) {
        if (a.deadline != b.deadline) return a.deadline < b.deadline;
        if (a.component != b.component) return a.component < b.component;
        return a.operation < b.operation;
    };
    std::vector<TaskSpec> explicit_tasks;
    std::vector<TaskSpec> implicit_tasks;
    for (auto& task : tasks)
        (task.priority ? explicit_tasks : implicit_tasks).push_back(std::move(task));
    std::stable_sort(explicit_tasks.begin(), explicit_tasks.end(),
                     [&](const TaskSpec& a, const TaskSpec& b) {
                         if (*a.priority != *b.priority) return *a.priority < *b.priority;
                         return tie_break(a, b);
                     });
    // duplicates slide to the next free number so values stay unique
    int last = 0;
    for (auto& task : explicit_tasks) {
        int value = std::max(*task.priority, last + 1);
        task.priority = value;
        last = value;
    }
    // deadline-monotonic completion, placed after all explicit priorities
    std::stable_sort(implicit_tasks.begin(), implicit_tasks.end(), tie_break);
    for (auto& task : implicit_tasks) task.priority = ++last;
    std::vector<TaskSpec> out = std::move(explicit_tasks);
    out.insert(out.end(), std::make_move_iterator(implicit_tasks.begin()),
               std::make_move_iterator(implicit_tasks.end()));
    return out;
}

ResponseResult response_time(const TaskSpec& task, std::span<const TaskSpec> higher_priority) {
    ResponseResult result;
    result.component = task.component;
    result.operation = task.operation;

    // w(k+1) = C + sum over hp of ceil(w(k) / T_j) * C_j
    std::int64_t w = task.wcet.us;
    int iterations = 0;
    while (true) {
        iterations++;
        std::int64_t next = task.wcet.us;
        for (const auto& hp : higher_priority) {
            std::int64_t period = hp.period_or_miat.us;
            std::int64_t releases = (w + period - 1) / period; // ceil(w / T_j)
            next += releases * hp.wcet.us;
        }
        if (next > task.deadline.us) {
            result.response = std::nullopt;
            result.schedulable = false;
            result.iterations = iterations;
            return result;
        }
        if (next == w) break;
        w = next;
    }
    result.response = Duration{w};
    result.schedulable = true;
    result.iterations = iterations;
    return result;
}

Duration hyperperiod(std::span<const TaskSpec> tasks) {
    if (tasks.empty()) throw QueryError("hyperperiod of an empty task set");
    std::int64_t lcm = 1;
    for (const auto& task : tasks) lcm = std::lcm(lcm, task.period_or_miat.us);
    return Duration{lcm};
}

ScheduleReport analyze_processor(const SymbolTable& table, std::string_view processor,
                                 AnalyzeOptions options) {
    const Processor* proc = table.find_processor(processor);
    if (!proc) throw QueryError("unknown processor '" + std::string(processor) + "'");

    std::vector<TaskSpec> tasks = deployed_task_set(table, processor);
    apply_wcet_margin(tasks, options.wcet_margin);
    tasks = assign_priorities(std::move(tasks));

    ScheduleReport report;
    report.processor = std::string(processor);
    report.cores.resize(static_cast<size_t>(proc->cores));
    for (int i = 0; i < proc->cores; ++i) report.cores[static_cast<size_t>(i)].core = i;

    bool overload = false;
    if (proc->cores == 1) {
        // nothing to partition: the single core takes everything and the
        // response analysis alone decides the verdict
        for (const auto& t : tasks) {
            report.cores[0].utilization =
                report.cores[0].utilization + Rational(t.wcet.us, t.period_or_miat.us);
            report.cores[0].tasks.push_back(t);
        }
    } else {
        // first-fit by decreasing utilization; ties by priority order
        std::vector<size_t> order(tasks.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            Rational ua(tasks[a].wcet.us, tasks[a].period_or_miat.us);
            Rational ub(tasks[b].wcet.us, tasks[b].period_or_miat.us);
            if (!(ua == ub)) return ub < ua;
            return *tasks[a].priority < *tasks[b].priority;
        });
        for (size_t idx : order) {
            Rational task_util(tasks[idx].wcet.us, tasks[idx].period_or_miat.us);
            CoreReport* slot = nullptr;
            for (auto& core : report.cores) {
                if (core.utilization + task_util <= Rational(1, 1)) {
                    slot = &core;
                    break;
                }
            }
            if (!slot) {
                // fits no core: flag the report and park it on the least
                // utilized core so it still shows up in the results
                overload = true;
                slot = &report.cores.front();
                for (auto& core : report.cores)
                    if (core.utilization < slot->utilization) slot = &core;
            }
            slot->utilization = slot->utilization + task_util;
            slot->tasks.push_back(tasks[idx]);
        }
    }

    bool all_schedulable = true;
    for (auto& core : report.cores) {
        std::sort(core.tasks.begin(), core.tasks.end(),
                  [](const TaskSpec& a, const TaskSpec& b) { return *a.priority < *b.priority; });
        for (size_t i = 0; i < core.tasks.size(); ++i) {
            std::span<const TaskSpec> higher(core.tasks.data(), i);
            ResponseResult result = response_time(core.tasks[i], higher);
            all_schedulable = all_schedulable && result.schedulable;
            core.results.push_back(std::move(result));
        }
    }
    if (overload) report.verdict = Verdict::Overload;
    else if (!all_schedulable) report.verdict = Verdict::Unschedulable;
    else report.verdict = Verdict::Schedulable;
    return report;
}

} // namespace iotforge
