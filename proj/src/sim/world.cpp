#include "sim/world.hpp"

#include <cmath>

#include "util/hash.hpp"
#include "util/strings.hpp"

namespace sim {

namespace {
constexpr double pi = 3.14159265358979323846;
}

double normalize_angle(double yaw) {
    yaw = std::fmod(yaw, 2.0 * pi);
    if (yaw <= -pi) {
        yaw += 2.0 * pi;
    } else if (yaw > pi) {
        yaw -= 2.0 * pi;
    }
    return yaw;
}

pose normalized(pose p) {
    p.yaw = normalize_angle(p.yaw);
    return p;
}

double planar_distance(const pose& a, const pose& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

pose world_state::gripper_world() const {
    return normalized({robot.base.x + robot.gripper_offset.x,
                       robot.base.y + robot.gripper_offset.y,
                       robot.base.z + robot.gripper_offset.z,
                       robot.base.yaw + robot.gripper_offset.yaw});
}

object_state* world_state::object_by_id(std::string_view id) {
    for (object_state& o : objects) {
        if (o.id == id) {
            return &o;
        }
    }
    return nullptr;
}

const object_state* world_state::object_by_id(std::string_view id) const {
    return const_cast<world_state*>(this)->object_by_id(id);
}

namespace {

// Match tiers for target resolution; lower is stronger.
int match_tier(const object_state& obj, std::string_view ref) {
    if (obj.id == ref) {
        return 0;
    }
    if (obj.label == ref) {
        return 1;
    }
    if (obj.label.starts_with(ref)) {
        return 2;
    }
    if (obj.label.find(ref) != std::string::npos) {
        return 3;
    }
    return -1;
}

}  // namespace

const object_state* resolve_target(const world_state& world, std::string_view ref) {
    if (ref.empty()) {
        return nullptr;
    }
    const object_state* best = nullptr;
    int best_tier = 99;
    double best_dist = 0.0;
    for (const object_state& obj : world.objects) {
        const int tier = match_tier(obj, ref);
        if (tier < 0) {
            continue;
        }
        const double dist = planar_distance(world.robot.base, obj.p);
        if (tier < best_tier || (tier == best_tier && dist < best_dist)) {
            best = &obj;
            best_tier = tier;
            best_dist = dist;
        }
    }
    return best;
}

object_state* resolve_target(world_state& world, std::string_view ref) {
    return const_cast<object_state*>(resolve_target(static_cast<const world_state&>(world), ref));
}

std::uint64_t state_hash(const world_state& world) {
    std::string repr;
    const auto put_pose = [&repr](const pose& p) {
        repr += util::format_double(p.x) + "," + util::format_double(p.y) + "," +
                util::format_double(p.z) + "," + util::format_double(p.yaw) + ";";
    };
    put_pose(world.robot.base);
    put_pose(world.robot.gripper_offset);
    repr += world.robot.gripper_open ? "o" : "c";
    repr += util::format_double(world.robot.grip_torque) + ";";
    repr += world.robot.held_object.value_or("-") + ";";
    for (const object_state& obj : world.objects) {
        repr += obj.id + "/" + obj.label + "/";
        put_pose(obj.p);
        repr += obj.graspable ? "g" : "f";
    }
    return util::fnv1a64(repr);
}

namespace {

// Keeps a held object glued to the gripper.
void sync_held(world_state& world) {
    if (!world.robot.held_object) {
        return;
    }
    object_state* obj = world.object_by_id(*world.robot.held_object);
    if (obj != nullptr) {
        obj->p = world.gripper_world();
    }
}

void release_held(world_state& world) {
    world.robot.held_object.reset();
    world.robot.grip_torque = 0.0;
}

}  // namespace

bt::tick_status act_homing(world_state& world) {
    ++world.step_count;
    release_held(world);
    world.robot.gripper_open = true;
    world.robot.gripper_offset = world.config.home_offset;
    return bt::tick_status::success;
}

bt::tick_status act_approach(world_state& world, std::string_view target, double standoff) {
    ++world.step_count;
    const object_state* obj = resolve_target(world, target);
    if (obj == nullptr) {
        return bt::tick_status::failure;
    }
    const double dist = planar_distance(world.robot.base, obj->p);
    if (dist <= standoff + world.config.approach_tolerance) {
        return bt::tick_status::success;
    }
    const double travel = std::min(world.config.base_step, dist - standoff);
    const double ux = (obj->p.x - world.robot.base.x) / dist;
    const double uy = (obj->p.y - world.robot.base.y) / dist;
    world.robot.base.x += ux * travel;
    world.robot.base.y += uy * travel;
    world.robot.base.yaw = normalize_angle(std::atan2(uy, ux));
    sync_held(world);
    const double remaining = planar_distance(world.robot.base, obj->p) - standoff;
    return remaining <= world.config.approach_tolerance ? bt::tick_status::success
                                                        : bt::tick_status::running;
}

bt::tick_status act_grasp(world_state& world, std::string_view target) {
    ++world.step_count;
    if (world.robot.held_object) {
        return bt::tick_status::failure;
    }
    object_state* obj = resolve_target(world, target);
    if (obj == nullptr || !obj->graspable) {
        return bt::tick_status::failure;
    }
    if (planar_distance(world.robot.base, obj->p) > world.config.reach) {
        return bt::tick_status::failure;
    }
    world.robot.gripper_offset = {obj->p.x - world.robot.base.x, obj->p.y - world.robot.base.y,
                                  obj->p.z - world.robot.base.z,
                                  normalize_angle(obj->p.yaw - world.robot.base.yaw)};
    world.robot.gripper_open = false;
    if (world.rng.chance(world.faults.p_grasp_slip)) {
        // The grasp slipped: hand is empty, but the action itself reports
        // success. Only the grip sensor or the VLM can notice.
        release_held(world);
        return bt::tick_status::success;
    }
    world.robot.held_object = obj->id;
    world.robot.grip_torque = world.config.holding_torque;
    sync_held(world);
    return bt::tick_status::success;
}

bt::tick_status act_lift(world_state& world) {
    ++world.step_count;
    world.robot.gripper_offset = {world.config.chest_forward, 0.0,
                                  world.config.chest_height - world.robot.base.z, 0.0};
    sync_held(world);
    return bt::tick_status::success;
}

bt::tick_status act_place(world_state& world, std::optional<pose> drop) {
    ++world.step_count;
    pose target;
    if (drop) {
        if (drop->z < 0.0 || planar_distance(world.robot.base, *drop) > world.config.reach) {
            return bt::tick_status::failure;
        }
        target = *drop;
    } else {
        // Default drop spot: half a metre ahead, 0.4 m to the right, at
        // table height. Always within reach.
        const double c = std::cos(world.robot.base.yaw);
        const double s = std::sin(world.robot.base.yaw);
        target = {world.robot.base.x + 0.5 * c + 0.4 * s,
                  world.robot.base.y + 0.5 * s - 0.4 * c, world.config.table_height, 0.0};
    }
    world.robot.gripper_offset = {target.x - world.robot.base.x, target.y - world.robot.base.y,
                                  target.z - world.robot.base.z,
                                  world.robot.gripper_offset.yaw};
    world.robot.gripper_open = true;
    if (world.robot.held_object) {
        object_state* obj = world.object_by_id(*world.robot.held_object);
        if (obj != nullptr) {
            obj->p = world.gripper_world();
        }
        release_held(world);
    }
    return bt::tick_status::success;
}

std::optional<double> sense_distance(const world_state& world, std::string_view target) {
    const object_state* obj = resolve_target(world, target);
    if (obj == nullptr) {
        return std::nullopt;
    }
    return planar_distance(world.robot.base, obj->p);
}

double sense_grip_force(const world_state& world) { return world.robot.grip_torque; }

std::optional<pose> sense_object_detection(world_state& world, std::string_view target) {
    if (target.empty()) {
        return std::nullopt;
    }
    const object_state* best = nullptr;
    int best_tier = 99;
    double best_dist = 0.0;
    const double cy = std::cos(world.robot.base.yaw);
    const double sy = std::sin(world.robot.base.yaw);
    for (const object_state& obj : world.objects) {
        const int tier = match_tier(obj, target);
        if (tier < 0) {
            continue;
        }
        const double dx = obj.p.x - world.robot.base.x;
        const double dy = obj.p.y - world.robot.base.y;
        const double dist = std::hypot(dx, dy);
        if (dist > world.config.camera_range) {
            continue;
        }
        // Camera sees the forward half-plane of the base heading.
        if (dx * cy + dy * sy < 0.0) {
            continue;
        }
        if (tier < best_tier || (tier == best_tier && dist < best_dist)) {
            best = &obj;
            best_tier = tier;
            best_dist = dist;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    if (world.rng.chance(world.faults.p_detect_miss)) {
        return std::nullopt;
    }
    return best->p;
}

namespace {

bool object_matches(const object_state& obj, std::string_view ref) {
    return match_tier(obj, ref) >= 0;
}

std::optional<bool> ground_truth_answer(const world_state& world, std::string_view question) {
    std::string_view q = util::trim(question);
    if (q.ends_with("?")) {
        q.remove_suffix(1);
    }
    constexpr std::string_view held_prefix = "Is the ";
    constexpr std::string_view held_suffix = " held by the gripper";
    constexpr std::string_view table_suffix = " on the table";
    constexpr std::string_view near_prefix = "Is the robot near the ";

    if (q.starts_with(near_prefix)) {
        const std::string_view ref = q.substr(near_prefix.size());
        const object_state* obj = resolve_target(world, ref);
        return obj != nullptr &&
               planar_distance(world.robot.base, obj->p) <= world.config.near_threshold;
    }
    if (q.starts_with(held_prefix) && q.ends_with(held_suffix)) {
        const std::string_view ref =
            q.substr(held_prefix.size(), q.size() - held_prefix.size() - held_suffix.size());
        if (ref.empty()) {
            return std::nullopt;
        }
        if (!world.robot.held_object) {
            return false;
        }
        const object_state* held = world.object_by_id(*world.robot.held_object);
        return held != nullptr && object_matches(*held, ref);
    }
    if (q.starts_with(held_prefix) && q.ends_with(table_suffix)) {
        const std::string_view ref =
            q.substr(held_prefix.size(), q.size() - held_prefix.size() - table_suffix.size());
        if (ref.empty()) {
            return std::nullopt;
        }
        const object_state* obj = resolve_target(world, ref);
        if (obj == nullptr) {
            return false;
        }
        const bool held = world.robot.held_object && *world.robot.held_object == obj->id;
        return !held && std::abs(obj->p.z - world.config.table_height) <= 0.1;
    }
    return std::nullopt;
}

}  // namespace

std::optional<vqa_answer> sense_visual_qa(world_state& world, std::string_view question) {
    const std::optional<bool> truth = ground_truth_answer(world, question);
    if (!truth) {
        return std::nullopt;
    }
    bool answer = *truth;
    if (world.rng.chance(world.faults.p_vqa_error)) {
        answer = !answer;
    }
    return answer ? vqa_answer::yes : vqa_answer::no;
}

// --- snapshot ----------------------------------------------------------------

namespace {

std::string pose_fields(const pose& p) {
    return util::format_double(p.x) + " " + util::format_double(p.y) + " " +
           util::format_double(p.z) + " " + util::format_double(p.yaw);
}

[[noreturn]] void bad_record(const std::string& what) {
    throw snapshot_error("malformed world record: " + what);
}

pose parse_pose_fields(const std::vector<std::string_view>& fields, std::size_t at) {
    pose p;
    const auto x = util::parse_double(fields.at(at));
    const auto y = util::parse_double(fields.at(at + 1));
    const auto z = util::parse_double(fields.at(at + 2));
    const auto yaw = util::parse_double(fields.at(at + 3));
    if (!x || !y || !z || !yaw) {
        bad_record("bad pose");
    }
    p = {*x, *y, *z, *yaw};
    return p;
}

}  // namespace

std::string snapshot(const world_state& world) {
    std::string out = "world v1\n";
    out += "step " + std::to_string(world.step_count) + "\n";
    out += "rng " + std::to_string(world.rng.state) + "\n";
    out += "faults " + util::format_double(world.faults.p_grasp_slip) + " " +
           util::format_double(world.faults.p_detect_miss) + " " +
           util::format_double(world.faults.p_vqa_error) + " " +
           std::to_string(world.faults.seed) + "\n";
    const world_config& c = world.config;
    out += "config " + util::format_double(c.reach) + " " + util::format_double(c.camera_range) +
           " " + util::format_double(c.holding_torque) + " " +
           util::format_double(c.chest_height) + " " + util::format_double(c.table_height) + " " +
           util::format_double(c.near_threshold) + " " + util::format_double(c.base_step) + " " +
           util::format_double(c.approach_tolerance) + " " +
           util::format_double(c.default_standoff) + " " + util::format_double(c.chest_forward) +
           " " + pose_fields(c.home_offset) + "\n";
    out += "robot " + pose_fields(world.robot.base) + " " + pose_fields(world.robot.gripper_offset) +
           " " + (world.robot.gripper_open ? "1" : "0") + " " +
           util::format_double(world.robot.grip_torque) + " " +
           world.robot.held_object.value_or("-") + "\n";
    for (const object_state& obj : world.objects) {
        out += "object " + obj.id + " " + obj.label + " " + pose_fields(obj.p) + " " +
               (obj.graspable ? "1" : "0") + "\n";
    }
    return out;
}

world_state restore(std::string_view record) {
    world_state world;
    bool saw_header = false;
    bool saw_robot = false;
    for (std::string_view line : util::split(record, '\n')) {
        line = util::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split(line, ' ');
        const std::string_view kind = fields[0];
        if (kind == "world") {
            if (fields.size() != 2 || fields[1] != "v1") {
                bad_record("unsupported version");
            }
            saw_header = true;
        } else if (kind == "step") {
            const auto v = util::parse_u64(fields.at(1));
            if (!v) {
                bad_record("bad step");
            }
            world.step_count = *v;
        } else if (kind == "rng") {
            const auto v = util::parse_u64(fields.at(1));
            if (!v) {
                bad_record("bad rng");
            }
            world.rng.state = *v;
        } else if (kind == "faults") {
            if (fields.size() != 5) {
                bad_record("bad faults");
            }
            const auto slip = util::parse_double(fields[1]);
            const auto miss = util::parse_double(fields[2]);
            const auto vqa = util::parse_double(fields[3]);
            const auto seed = util::parse_u64(fields[4]);
            if (!slip || !miss || !vqa || !seed) {
                bad_record("bad faults");
            }
            world.faults = {*slip, *miss, *vqa, *seed};
        } else if (kind == "config") {
            if (fields.size() != 15) {
                bad_record("bad config");
            }
            double vals[10];
            for (int i = 0; i < 10; ++i) {
                const auto v = util::parse_double(fields[static_cast<std::size_t>(i) + 1]);
                if (!v) {
                    bad_record("bad config");
                }
                vals[i] = *v;
            }
            world.config.reach = vals[0];
            world.config.camera_range = vals[1];
            world.config.holding_torque = vals[2];
            world.config.chest_height = vals[3];
            world.config.table_height = vals[4];
            world.config.near_threshold = vals[5];
            world.config.base_step = vals[6];
            world.config.approach_tolerance = vals[7];
            world.config.default_standoff = vals[8];
            world.config.chest_forward = vals[9];
            world.config.home_offset = parse_pose_fields(fields, 11);
        } else if (kind == "robot") {
            if (fields.size() != 12) {
                bad_record("bad robot");
            }
            world.robot.base = parse_pose_fields(fields, 1);
            world.robot.gripper_offset = parse_pose_fields(fields, 5);
            world.robot.gripper_open = fields[9] == "1";
            const auto torque = util::parse_double(fields[10]);
            if (!torque) {
                bad_record("bad robot torque");
            }
            world.robot.grip_torque = *torque;
            if (fields[11] != "-") {
                world.robot.held_object = std::string(fields[11]);
            }
            saw_robot = true;
        } else if (kind == "object") {
            if (fields.size() != 8) {
                bad_record("bad object");
            }
            object_state obj;
            obj.id = std::string(fields[1]);
            obj.label = std::string(fields[2]);
            obj.p = parse_pose_fields(fields, 3);
            obj.graspable = fields[7] == "1";
            world.objects.push_back(std::move(obj));
        } else {
            bad_record("unknown line kind " + std::string(kind));
        }
    }
    if (!saw_header || !saw_robot) {
        bad_record("missing world/robot lines");
    }
    return world;
}

}  // namespace sim
