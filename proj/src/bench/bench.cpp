#include "bench/bench.hpp"

#include <cmath>

#include "executor/run.hpp"
#include "planner/template_plan.hpp"
#include "sim/scene.hpp"
#include "util/rng.hpp"
#include "util/strings.hpp"

namespace bench {

namespace {
constexpr double z99 = 2.5758293035489004;  // two-sided 99% normal quantile
}

interval wilson99(double rate, std::uint64_t n) {
    if (n == 0) {
        return {0.0, 1.0};
    }
    const double nn = static_cast<double>(n);
    const double z2 = z99 * z99;
    const double denom = 1.0 + z2 / nn;
    const double center = (rate + z2 / (2.0 * nn)) / denom;
    const double spread =
        z99 * std::sqrt(rate * (1.0 - rate) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - spread), std::min(1.0, center + spread)};
}

double binomial_ci99_halfwidth(double p, std::uint64_t n) {
    if (n == 0) {
        return 1.0;
    }
    return z99 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

namespace {

double mean(double total, std::uint64_t count) {
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

// ';'-separated so the key stays a single CSV field
std::string fault_point_key(const sim::fault_profile& p) {
    return "slip=" + util::format_double(p.p_grasp_slip) +
           ";miss=" + util::format_double(p.p_detect_miss) +
           ";vqa=" + util::format_double(p.p_vqa_error);
}

}  // namespace

summary_table run_planning_benchmark(const task_suite& suite, const behavior::library& lib,
                                     planner::backend& be, std::uint64_t n,
                                     int max_repair_rounds, std::uint64_t base_seed) {
    summary_table table;
    table.kind = "plan";
    table.backend = be.kind();
    table.trials = n;
    table.base_seed = base_seed;

    for (std::size_t task_idx = 0; task_idx < suite.entries.size(); ++task_idx) {
        const task_entry& entry = suite.entries[task_idx];
        std::string scene_text;
        try {
            scene_text = load_scene_text(suite, entry);
        } catch (const std::exception& e) {
            table.notes.push_back(entry.id + ": scene skipped (" + e.what() + ")");
            continue;
        }

        std::uint64_t executable = 0;
        std::uint64_t succeeded = 0;
        std::uint64_t executed = 0;
        double plan_seconds = 0.0;
        double ticks = 0.0;
        for (std::uint64_t trial = 0; trial < n; ++trial) {
            planner::plan_outcome outcome;
            try {
                outcome = planner::generate_task_graph(entry.instruction, lib, be,
                                                       max_repair_rounds);
            } catch (const planner::transport_error& e) {
                table.notes.push_back(entry.id + " trial " + std::to_string(trial) +
                                      ": transport error (" + std::string(e.what()) + ")");
                continue;
            } catch (const planner::backend_config_error& e) {
                table.notes.push_back(entry.id + " trial " + std::to_string(trial) +
                                      ": backend config error (" + std::string(e.what()) + ")");
                continue;
            }
            for (double s : outcome.round_latency) {
                plan_seconds += s;
            }
            if (!outcome.ok()) {
                continue;
            }
            ++executable;
            // Oracle success: the plan, run fault-free on the task's scene,
            // reaches done. Stands in for manual judging.
            sim::fault_profile fault_free;
            fault_free.seed = util::mix_seed(base_seed, task_idx, trial);
            sim::world_state world = sim::world_from_scene(scene_text, fault_free);
            const executor::run_result rr = executor::run(*outcome.graph, lib, world);
            ++executed;
            ticks += static_cast<double>(rr.ticks_used);
            if (rr.out == executor::outcome::done) {
                ++succeeded;
            }
        }

        summary_row row;
        row.key = entry.id;
        row.executable = mean(static_cast<double>(executable), n);
        row.success = mean(static_cast<double>(succeeded), n);
        row.plan_time = mean(plan_seconds, n);
        row.exec_ticks = mean(ticks, executed);
        table.rows.push_back(std::move(row));
    }
    return table;
}

summary_table run_execution_benchmark(const task_suite& suite, const behavior::library& lib,
                                      std::uint64_t n, std::span<const sim::fault_profile> sweep,
                                      std::uint64_t base_seed) {
    summary_table table;
    table.kind = "exec";
    table.backend = "template";
    table.trials = n;
    table.base_seed = base_seed;

    struct prepared {
        const task_entry* entry = nullptr;
        std::size_t index = 0;
        bt::task_graph graph;
        std::string scene_text;
    };
    std::vector<prepared> tasks;
    for (std::size_t task_idx = 0; task_idx < suite.entries.size(); ++task_idx) {
        const task_entry& entry = suite.entries[task_idx];
        prepared p;
        p.entry = &entry;
        p.index = task_idx;
        try {
            p.scene_text = load_scene_text(suite, entry);
        } catch (const std::exception& e) {
            table.notes.push_back(entry.id + ": scene skipped (" + e.what() + ")");
            continue;
        }
        try {
            p.graph = planner::template_plan(entry.instruction, lib);
        } catch (const planner::no_template_error& e) {
            table.notes.push_back(entry.id + ": no template (" + std::string(e.what()) + ")");
            continue;
        }
        tasks.push_back(std::move(p));
    }

    const bool swept = !sweep.empty();
    const std::size_t point_count = swept ? sweep.size() : 1;
    for (std::size_t point_idx = 0; point_idx < point_count; ++point_idx) {
        for (const prepared& task : tasks) {
            sim::fault_profile profile = swept ? sweep[point_idx] : task.entry->faults;
            std::uint64_t succeeded = 0;
            double ticks = 0.0;
            for (std::uint64_t trial = 0; trial < n; ++trial) {
                profile.seed =
                    util::mix_seed(base_seed, point_idx * 1000 + task.index, trial);
                sim::world_state world = sim::world_from_scene(task.scene_text, profile);
                const executor::run_result rr = executor::run(task.graph, lib, world);
                ticks += static_cast<double>(rr.ticks_used);
                if (rr.out == executor::outcome::done) {
                    ++succeeded;
                }
            }
            summary_row row;
            row.key = task.entry->id + "@" + fault_point_key(profile);
            row.executable = 1.0;
            row.success = mean(static_cast<double>(succeeded), n);
            row.plan_time = 0.0;
            row.exec_ticks = mean(ticks, n);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

}  // namespace bench
