#pragma once

#include <string_view>

#include "behavior/library.hpp"
#include "bt/types.hpp"

namespace planner {

// Instruction matched none of the task templates (or no target was found).
struct no_template_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic rule-based planner covering the eight benchmark task shapes
// (find / approach / grasp / pick / pick FR / pick-and-place / pick-and-place
// FR / find-and-pick FR). Serves as the offline stand-in for a language-model
// backend; its output always validates against the given library.
bt::task_graph template_plan(std::string_view instruction, const behavior::library& lib);

// The template id an instruction would map to, for diagnostics ("" if none).
std::string match_template_id(std::string_view instruction);

}  // namespace planner
