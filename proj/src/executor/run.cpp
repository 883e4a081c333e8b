#include "executor/run.hpp"

#include <chrono>

#include "bt/tick.hpp"
#include "bt/validate.hpp"

namespace executor {

const char* to_string(outcome o) {
    switch (o) {
        case outcome::done:
            return "done";
        case outcome::failed:
            return "failed";
        case outcome::budget_exhausted:
            return "budget_exhausted";
    }
    return "?";
}

run_result run(const bt::task_graph& graph, const behavior::library& lib, sim::world_state& world,
               const run_limits& limits) {
    if (limits.max_ticks < 1) {
        throw std::invalid_argument("max_ticks must be at least 1");
    }
    const bt::validation_report report = bt::validate(graph, lib);
    if (!report.ok) {
        throw std::invalid_argument("graph failed validation: " + report.summary());
    }

    run_result result;
    bt::run_state state;
    const auto started = std::chrono::steady_clock::now();

    for (std::uint64_t tick_index = 1; tick_index <= limits.max_ticks; ++tick_index) {
        result.ticks_used = tick_index;
        std::vector<behavior::dispatch_event> events;
        const bt::leaf_dispatch dispatch = [&](const bt::node& leaf) {
            const bt::tick_status st = behavior::dispatch(lib, leaf, world, events);
            result.trace.push_back({tick_index, leaf.id, events.back().behavior,
                                    events.back().status, events.back().world_step,
                                    events.back().detail});
            return st;
        };

        bt::tick_status status;
        try {
            status = bt::tick(graph, state, dispatch);
        } catch (const behavior::execution_error& e) {
            result.trace.push_back({tick_index, bt::invalid_node, "<execution-error>",
                                    bt::tick_status::failure, world.step_count, e.what()});
            result.out = outcome::failed;
            result.final_world = sim::snapshot(world);
            return result;
        }

        if (status == bt::tick_status::success || status == bt::tick_status::failure) {
            result.out =
                status == bt::tick_status::success ? outcome::done : outcome::failed;
            result.final_world = sim::snapshot(world);
            return result;
        }

        if (limits.max_wall_seconds) {
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - started;
            if (elapsed.count() > *limits.max_wall_seconds) {
                break;
            }
        }
    }

    result.out = outcome::budget_exhausted;
    result.final_world = sim::snapshot(world);
    return result;
}

}  // namespace executor
