#pragma once

#include <span>
#include <vector>

#include "iotforge/task_set.hpp"

namespace iotforge {

// Discrete-time preemptive fixed-priority schedule, 1 us per tick, all
// tasks released synchronously at t = 0 and re-released every period
// (sporadic tasks at their minimum inter-arrival time, the worst case).
// Serves as the independent oracle for the response-time analysis.

struct SimJob {
    int task = 0; // index into the input span
    Duration release;
    Duration start{-1}; // first tick executed, -1 if never started
    Duration finish{-1};
    Duration response() const { return Duration{finish.us - release.us}; }
};

struct DeadlineMiss {
    int task = 0;
    Duration at; // the absolute deadline that passed unfinished
};

struct Timeline {
    std::vector<SimJob> jobs;              // completed or in flight, release order
    std::vector<DeadlineMiss> misses;      // chronological
    std::vector<Duration> max_response;    // per task, over completed jobs
};

// Priorities must be populated and unique (QueryError otherwise). Jobs
// past their deadline keep running; later jobs of the same task queue
// FIFO behind them.
Timeline simulate_schedule(std::span<const TaskSpec> tasks, Duration horizon);

} // namespace iotforge
