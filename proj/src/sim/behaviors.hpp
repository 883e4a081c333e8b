#pragma once

#include <string_view>

#include "behavior/library.hpp"

namespace sim {

// The standard nine-behavior library (five actions, four perceptions) bound to
// the simulated world, plus the stock conditions:
//   IsObjectHeld  — grip torque above threshold AND the VLM answers yes
//   ObjectVisible — object detection returns a pose
behavior::library standard_library();

// The manifest bytes matching standard_library() (`name|kind|tag` lines).
std::string standard_manifest();

// Builds a library from manifest text. Every entry must name one of the
// standard behaviors (the manifest selects and orders the robot's skills; the
// bindings are the simulation's). Conditions whose member behaviors are all
// present are registered automatically.
behavior::library library_from_manifest(std::string_view manifest);

// Grip torque above this reads as "there is a torque on the gripper".
inline constexpr double grip_torque_threshold = 0.1;

}  // namespace sim
