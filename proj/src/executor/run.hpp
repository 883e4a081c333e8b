#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "behavior/library.hpp"
#include "bt/types.hpp"
#include "sim/world.hpp"

namespace executor {

struct run_limits {
    std::uint64_t max_ticks = 10000;
    std::optional<double> max_wall_seconds;
};

enum class outcome { done, failed, budget_exhausted };

const char* to_string(outcome o);

struct trace_event {
    std::uint64_t tick_index = 0;  // root tick the dispatch happened in
    bt::node_id node = bt::invalid_node;
    std::string behavior;
    bt::tick_status status = bt::tick_status::failure;
    std::uint64_t world_step = 0;
    std::string detail;

    friend bool operator==(const trace_event&, const trace_event&) = default;
};

struct run_result {
    outcome out = outcome::failed;
    std::uint64_t ticks_used = 0;
    std::vector<trace_event> trace;  // one event per leaf dispatch
    std::string final_world;         // sim::snapshot of the terminal state
};

// Drives the task graph against the world: one bt::tick per control step,
// leaves dispatched through the library, until the root settles or the
// budget runs out. Rejects graphs that fail validation before touching the
// world. A dispatch-level execution error ends the run as failed, with the
// error recorded as the last trace event.
run_result run(const bt::task_graph& graph, const behavior::library& lib, sim::world_state& world,
               const run_limits& limits = {});

}  // namespace executor
