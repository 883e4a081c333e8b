#pragma once

#include <string>
#include <string_view>

#include "behavior/library.hpp"

namespace planner {

// The four prompt sections, rendered in fixed order: robot description,
// behavior library block, output format spec, instruction.
struct prompt_bundle {
    std::string robot_description;
    std::string library_block;
    std::string output_format_spec;
    std::string instruction;  // raw; text() embeds it XML-escaped

    std::string text() const;
};

std::string default_robot_description();

// Deterministic bundle; library_block is byte-equal to the library's
// tags_prompt_block. Rejects empty instructions and empty libraries.
prompt_bundle build_prompt(std::string_view instruction, const behavior::library& lib,
                           std::string_view robot_description = default_robot_description());

}  // namespace planner
