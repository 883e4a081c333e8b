#pragma once

#include <filesystem>
#include <string_view>

#include "sim/world.hpp"

namespace sim {

struct scene_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scene files are line-oriented:
//   robot|x,y,z,yaw
//   object|<id>|<label>|x,y,z,yaw|<graspable 0/1>
// '#' starts a comment. The robot starts with an open gripper at the home
// offset; the rng is seeded from the fault profile.
world_state world_from_scene(std::string_view scene_text, fault_profile faults,
                             world_config config = {});

std::string load_text_file(const std::filesystem::path& file);  // throws scene_error

}  // namespace sim
