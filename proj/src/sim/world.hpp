#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bt/types.hpp"
#include "util/rng.hpp"

namespace sim {

struct pose {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double yaw = 0.0;  // normalized to (-pi, pi]

    friend bool operator==(const pose&, const pose&) = default;
};

double normalize_angle(double yaw);
pose normalized(pose p);
double planar_distance(const pose& a, const pose& b);

struct world_config {
    double reach = 0.8;              // planar gripper reach from the base, m
    double camera_range = 4.0;       // planar detection range, m
    double holding_torque = 2.5;     // grip torque while holding, N*m
    double chest_height = 1.2;       // gripper z after a lift, m
    double table_height = 0.75;      // nominal tabletop z, m
    double near_threshold = 1.0;     // "near" for visual Q&A, m
    double base_step = 0.1;          // base travel per simulation step, m
    double approach_tolerance = 0.01;
    double default_standoff = 0.5;
    double chest_forward = 0.35;     // gripper x offset at the chest pose, m
    pose home_offset{0.35, 0.0, 0.9, 0.0};

    friend bool operator==(const world_config&, const world_config&) = default;
};

struct fault_profile {
    double p_grasp_slip = 0.0;
    double p_detect_miss = 0.0;
    double p_vqa_error = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const fault_profile&, const fault_profile&) = default;
};

struct robot_state {
    pose base;
    pose gripper_offset;  // relative to the base, world axes
    bool gripper_open = true;
    double grip_torque = 0.0;  // > 0 iff holding with a closed gripper
    std::optional<std::string> held_object;

    friend bool operator==(const robot_state&, const robot_state&) = default;
};

struct object_state {
    std::string id;
    std::string label;  // object class name, e.g. "cracker_box"
    pose p;
    bool graspable = true;

    friend bool operator==(const object_state&, const object_state&) = default;
};

struct world_state {
    robot_state robot;
    std::vector<object_state> objects;
    std::uint64_t step_count = 0;  // world mutation steps (one per action call)
    util::rng64 rng;
    fault_profile faults;
    world_config config;

    pose gripper_world() const;
    object_state* object_by_id(std::string_view id);
    const object_state* object_by_id(std::string_view id) const;

    friend bool operator==(const world_state&, const world_state&) = default;
};

// Resolves a target reference against the scene: exact id, then exact label,
// then unique-enough label prefix / substring; ties broken by planar distance
// to the base. Returns nullptr when nothing matches.
const object_state* resolve_target(const world_state& world, std::string_view ref);
object_state* resolve_target(world_state& world, std::string_view ref);

// Hash of the physical state (robot + objects). Excludes step_count, rng and
// faults so it can express "nothing physically changed".
std::uint64_t state_hash(const world_state& world);

// --- behaviors ---------------------------------------------------------------
// Action behaviors mutate the world and advance step_count by one per call.

// Opens the gripper (releasing any held object in place) and returns the arm
// to the home offset.
bt::tick_status act_homing(world_state& world);

// One 0.1 m step of straight-line base travel toward the target, turning to
// face it; success once the planar distance is within standoff (+tolerance).
// Already within standoff: success without motion.
bt::tick_status act_approach(world_state& world, std::string_view target, double standoff);

// Moves the gripper to the target pose and closes it, when the target is
// within reach and nothing is held. A slip (probability p_grasp_slip) leaves
// the hand empty but still reports success: only perception can tell.
bt::tick_status act_grasp(world_state& world, std::string_view target);

// Raises the gripper to the chest pose; a held object moves with it.
bt::tick_status act_lift(world_state& world);

// Moves the gripper to the drop pose and opens it; any held object is
// released there. Without an explicit pose, drops at a spot beside the robot
// at table height. Out-of-reach drop poses fail and keep the object.
bt::tick_status act_place(world_state& world, std::optional<pose> drop);

// Perception behaviors never mutate the physical state.

std::optional<double> sense_distance(const world_state& world, std::string_view target);
double sense_grip_force(const world_state& world);

// Pose of the nearest matching object within camera range in the forward
// half-plane, or nothing (a miss). Misreports a miss with p_detect_miss.
std::optional<pose> sense_object_detection(world_state& world, std::string_view target);

enum class vqa_answer { yes, no };

// Answers one of the supported question templates from ground truth, flipped
// with probability p_vqa_error:
//   "Is the <target> held by the gripper?"
//   "Is the <target> on the table?"
//   "Is the robot near the <target>?"
// Unsupported questions return nullopt (perception unavailable).
std::optional<vqa_answer> sense_visual_qa(world_state& world, std::string_view question);

// --- persistence -------------------------------------------------------------

struct snapshot_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical text record; restore(snapshot(w)) == w, rng state included.
std::string snapshot(const world_state& world);
world_state restore(std::string_view record);

}  // namespace sim
