#pragma once

#include <optional>

#include "planner/backend.hpp"

namespace planner {

struct plan_outcome {
    std::optional<bt::task_graph> graph;  // present iff validation.ok
    std::vector<std::string> raw_responses;
    int repair_rounds_used = 0;
    bt::validation_report validation;
    std::vector<double> round_latency;      // seconds per round
    std::vector<chat_message> conversation;  // full exchange, for audit

    bool ok() const { return graph.has_value(); }
};

// First well-formed <TaskGraph>...</TaskGraph> span in a response (models wrap
// XML in prose). Throws bt::syntax_error when no such span exists.
std::string extract_task_graph_span(std::string_view response);

// Prompts the backend, parses and validates the reply, and re-prompts with
// the error text up to max_repair_rounds times. Transport errors are retried
// once per round before surfacing.
plan_outcome generate_task_graph(std::string_view instruction, const behavior::library& lib,
                                 backend& be, int max_repair_rounds = 2,
                                 std::string_view robot_description = "");

}  // namespace planner
