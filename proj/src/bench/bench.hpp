#pragma once

#include <span>

#include "bench/suite.hpp"
#include "behavior/library.hpp"
#include "planner/generate.hpp"

namespace bench {

struct summary_row {
    std::string key;          // task id, plus the fault point for sweeps
    double executable = 0.0;  // rate in [0,1]
    double success = 0.0;     // oracle-success rate in [0,1]
    double plan_time = 0.0;   // mean seconds per trial
    double exec_ticks = 0.0;  // mean root ticks over executed trials

    friend bool operator==(const summary_row&, const summary_row&) = default;
};

struct summary_table {
    std::string kind;     // "plan" | "exec"
    std::string backend;  // backend kind, or "template" for exec runs
    std::uint64_t trials = 0;
    std::uint64_t base_seed = 0;
    std::vector<summary_row> rows;
    std::vector<std::string> notes;  // skipped tasks, transport failures

    friend bool operator==(const summary_table&, const summary_table&) = default;
};

struct interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval at 99% confidence.
interval wilson99(double rate, std::uint64_t n);

// Half-width of the normal-approximation 99% binomial CI around p.
double binomial_ci99_halfwidth(double p, std::uint64_t n);

// Plans every task n times through the backend. A trial is executable when a
// validated graph came back; it is a success when that graph, executed on a
// fault-free copy of the task's scene, reaches done. Backend failures mark the
// trial non-executable and never abort the batch.
summary_table run_planning_benchmark(const task_suite& suite, const behavior::library& lib,
                                     planner::backend& be, std::uint64_t n,
                                     int max_repair_rounds = 2, std::uint64_t base_seed = 42);

// Plans each task once with the template planner and executes it n times per
// fault point with derived per-trial seeds. An empty sweep uses each entry's
// own fault profile; otherwise rows are grouped by fault point so FR /
// non-FR pairs sit side by side.
summary_table run_execution_benchmark(const task_suite& suite, const behavior::library& lib,
                                      std::uint64_t n,
                                      std::span<const sim::fault_profile> sweep = {},
                                      std::uint64_t base_seed = 42);

}  // namespace bench
