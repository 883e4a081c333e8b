#pragma once

#include <string_view>

#include "executor/run.hpp"

namespace executor {

struct trace_meta {
    std::uint64_t scene_hash = 0;
    std::uint64_t graph_hash = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const trace_meta&, const trace_meta&) = default;
};

// Newline-delimited trace: a header line with schema version, scene hash,
// graph hash and seed, then one `tick|node|behavior|status|world_step|detail`
// line per event; byte-stable for diff-based regression.
std::string trace_text(const run_result& result, const trace_meta& meta);

struct parsed_trace {
    trace_meta meta;
    outcome out = outcome::failed;
    std::vector<trace_event> events;
};

parsed_trace parse_trace(std::string_view text);  // throws std::invalid_argument

// Re-execution diverged from the recorded trace. Names the first differing
// event (or header/outcome mismatch).
struct divergence_error : std::runtime_error {
    divergence_error(std::string message, std::size_t event_index_)
        : std::runtime_error(std::move(message)), event_index(event_index_) {}
    std::size_t event_index;
};

// Re-runs the graph on a world rebuilt from the scene text and fault profile
// and checks the produced trace event-by-event against the recorded one.
// Header hash mismatches are reported alongside the first differing event;
// identical re-executions return the fresh result.
run_result replay(std::string_view recorded_trace, const bt::task_graph& graph,
                  const behavior::library& lib, std::string_view scene_text,
                  const sim::fault_profile& faults, const run_limits& limits = {});

}  // namespace executor
