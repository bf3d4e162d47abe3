#include "iotforge/schedule_sim.hpp"

#include <deque>
#include <set>

namespace iotforge {

namespace {

struct PendingJob {
    size_t job_index;
    std::int64_t remaining;
    std::int64_t absolute_deadline;
};

} // namespace

Timeline simulate_schedule(std::span<const TaskSpec> tasks, Duration horizon) {
    std::set<int> seen_priorities;
    for (const auto& task : tasks) {
        if (!task.priority) throw QueryError("task '" + task.id() + "' has no priority");
        if (!seen_priorities.insert(*task.priority).second)
            throw QueryError("duplicate priority " + std::to_string(*task.priority));
    }

    Timeline timeline;
    timeline.max_response.assign(tasks.size(), Duration{0});

    size_t n = tasks.size();
    std::vector<std::int64_t> next_release(n, 0);
    std::vector<std::deque<PendingJob>> pending(n); // FIFO per task
    std::vector<std::set<size_t>> missed_logged(n); // job indices already reported

    // order of task indices by priority, highest first
    std::vector<size_t> by_priority;
    for (size_t i = 0; i < n; ++i) by_priority.push_back(i);
    std::sort(by_priority.begin(), by_priority.end(),
              [&](size_t a, size_t b) { return *tasks[a].priority < *tasks[b].priority; });

    for (std::int64_t t = 0; t <= horizon.us; ++t) {
        // deadline misses first: a job whose absolute deadline is now and
        // which is still pending has missed
        for (size_t i = 0; i < n; ++i) {
            for (const auto& job : pending[i]) {
                if (job.absolute_deadline == t && !missed_logged[i].count(job.job_index)) {
                    timeline.misses.push_back({static_cast<int>(i), Duration{t}});
                    missed_logged[i].insert(job.job_index);
                }
            }
        }
        if (t == horizon.us) break;

        // synchronous release at 0, then periodic
        for (size_t i = 0; i < n; ++i) {
            if (next_release[i] == t) {
                SimJob job;
                job.task = static_cast<int>(i);
                job.release = Duration{t};
                timeline.jobs.push_back(job);
                pending[i].push_back({timeline.jobs.size() - 1,
                                      tasks[i].wcet.us,
                                      t + tasks[i].deadline.us});
                next_release[i] += tasks[i].period_or_miat.us;
            }
        }

        // run the highest-priority pending job for one tick
        for (size_t i : by_priority) {
            if (pending[i].empty()) continue;
            PendingJob& job = pending[i].front();
            SimJob& record = timeline.jobs[job.job_index];
            if (record.start.us < 0) record.start = Duration{t};
            job.remaining--;
            if (job.remaining == 0) {
                record.finish = Duration{t + 1};
                auto response = record.response();
                if (response > timeline.max_response[i]) timeline.max_response[i] = response;
                pending[i].pop_front();
            }
            break;
        }
    }
    return timeline;
}

} // namespace iotforge
