#include "sim/behaviors.hpp"

#include <array>

#include "util/strings.hpp"

namespace sim {

namespace {

using behavior::kind;
using behavior::perception_result;
using behavior::reading;

std::string get_param(const bt::param_map& params, const std::string& key) {
    const auto it = params.find(key);
    return it == params.end() ? std::string() : it->second;
}

bt::tick_status bind_homing(const bt::param_map&, world_state& w) { return act_homing(w); }

bt::tick_status bind_approach(const bt::param_map& params, world_state& w) {
    const std::string target = get_param(params, "target");
    if (target.empty()) {
        return bt::tick_status::failure;
    }
    double standoff = w.config.default_standoff;
    if (const auto it = params.find("standoff_m"); it != params.end()) {
        const auto v = util::parse_double(it->second);
        if (!v || *v < 0.0) {
            return bt::tick_status::failure;
        }
        standoff = *v;
    }
    return act_approach(w, target, standoff);
}

bt::tick_status bind_grasp(const bt::param_map& params, world_state& w) {
    const std::string target = get_param(params, "target");
    if (target.empty()) {
        return bt::tick_status::failure;
    }
    return act_grasp(w, target);
}

bt::tick_status bind_lift(const bt::param_map&, world_state& w) { return act_lift(w); }

bt::tick_status bind_place(const bt::param_map& params, world_state& w) {
    const bool has_x = params.count("x") > 0;
    const bool has_y = params.count("y") > 0;
    const bool has_z = params.count("z") > 0;
    if (!has_x && !has_y && !has_z) {
        return act_place(w, std::nullopt);
    }
    if (!(has_x && has_y && has_z)) {
        return bt::tick_status::failure;
    }
    const auto x = util::parse_double(params.at("x"));
    const auto y = util::parse_double(params.at("y"));
    const auto z = util::parse_double(params.at("z"));
    if (!x || !y || !z) {
        return bt::tick_status::failure;
    }
    return act_place(w, pose{*x, *y, *z, 0.0});
}

perception_result bind_distance(const bt::param_map& params, world_state& w) {
    const std::string target = get_param(params, "target");
    if (target.empty()) {
        return {false, {}, "missing target param"};
    }
    const auto d = sense_distance(w, target);
    if (!d) {
        return {false, {}, "unknown target " + target};
    }
    return {true, reading{*d}, {}};
}

perception_result bind_grip_force(const bt::param_map&, world_state& w) {
    return {true, reading{sense_grip_force(w)}, {}};
}

perception_result bind_object_detection(const bt::param_map& params, world_state& w) {
    const std::string target = get_param(params, "target");
    if (target.empty()) {
        return {false, {}, "missing target param"};
    }
    const auto p = sense_object_detection(w, target);
    if (!p) {
        return {true, reading{std::monostate{}}, {}};  // a miss is a valid reading
    }
    return {true, reading{*p}, {}};
}

perception_result bind_visual_qa(const bt::param_map& params, world_state& w) {
    const std::string question = get_param(params, "question");
    if (question.empty()) {
        return {false, {}, "missing question param"};
    }
    const auto answer = sense_visual_qa(w, question);
    if (!answer) {
        return {false, {}, "unsupported question: " + question};
    }
    return {true, reading{*answer == vqa_answer::yes}, {}};
}

struct entry_def {
    const char* name;
    kind k;
    const char* tag;
};

constexpr std::array<entry_def, 9> standard_entries = {{
    {"Homing", kind::action, "bringing all of the joints of robot to homing configuration"},
    {"Approach", kind::action, "moving robot torso closer to target by certain distance"},
    {"Grasp", kind::action, "moving gripper to a given pose and close it"},
    {"Lift", kind::action, "raising gripper to the chest and adjusting pose"},
    {"Place", kind::action, "moving gripper to the given position and open it"},
    {"Distance", kind::perception, "measuring distance between object and robot"},
    {"GripForce", kind::perception, "obtaining the actual torque of gripper"},
    {"ObjectDetection", kind::perception, "detecting and estimating 6-DoF of objects"},
    {"VisualQA", kind::perception, "reasoning task state using visual language model"},
}};

void register_standard(behavior::library& lib, const entry_def& def, const std::string& tag_text) {
    const behavior::tag t{def.name, def.k, tag_text};
    const std::string_view name = def.name;
    if (name == "Homing") {
        lib.register_action(t, bind_homing);
    } else if (name == "Approach") {
        lib.register_action(t, bind_approach);
    } else if (name == "Grasp") {
        lib.register_action(t, bind_grasp);
    } else if (name == "Lift") {
        lib.register_action(t, bind_lift);
    } else if (name == "Place") {
        lib.register_action(t, bind_place);
    } else if (name == "Distance") {
        lib.register_perception(t, bind_distance);
    } else if (name == "GripForce") {
        lib.register_perception(t, bind_grip_force);
    } else if (name == "ObjectDetection") {
        lib.register_perception(t, bind_object_detection);
    } else {
        lib.register_perception(t, bind_visual_qa);
    }
}

void register_standard_conditions(behavior::library& lib) {
    if (lib.find("GripForce") != nullptr && lib.find("VisualQA") != nullptr) {
        behavior::condition_spec held;
        held.name = "IsObjectHeld";
        held.mode = behavior::fusion::all;
        held.verifies_grasp = true;
        held.members.push_back({"GripForce",
                                {},
                                [](const reading& r) {
                                    const double* torque = std::get_if<double>(&r);
                                    return torque != nullptr && *torque > grip_torque_threshold;
                                }});
        held.members.push_back({"VisualQA",
                                {{"question", "Is the {target} held by the gripper?"}},
                                [](const reading& r) {
                                    const bool* yes = std::get_if<bool>(&r);
                                    return yes != nullptr && *yes;
                                }});
        lib.register_condition(std::move(held));
    }
    if (lib.find("ObjectDetection") != nullptr) {
        behavior::condition_spec visible;
        visible.name = "ObjectVisible";
        visible.mode = behavior::fusion::all;
        visible.members.push_back({"ObjectDetection", {}, [](const reading& r) {
                                       return std::holds_alternative<pose>(r);
                                   }});
        lib.register_condition(std::move(visible));
    }
}

const entry_def* standard_entry(std::string_view name) {
    for (const entry_def& def : standard_entries) {
        if (name == def.name) {
            return &def;
        }
    }
    return nullptr;
}

}  // namespace

behavior::library standard_library() {
    behavior::library lib;
    for (const entry_def& def : standard_entries) {
        register_standard(lib, def, def.tag);
    }
    register_standard_conditions(lib);
    return lib;
}

std::string standard_manifest() {
    std::string out;
    for (kind want : {kind::action, kind::perception}) {
        std::map<std::string, const entry_def*> sorted;
        for (const entry_def& def : standard_entries) {
            if (def.k == want) {
                sorted[def.name] = &def;
            }
        }
        for (const auto& [name, def] : sorted) {
            out += name + "|" + behavior::to_string(def->k) + "|" + def->tag + "\n";
        }
    }
    return out;
}

behavior::library library_from_manifest(std::string_view manifest) {
    behavior::library lib;
    int line_no = 0;
    for (std::string_view line : util::split(manifest, '\n')) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = util::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split_limit(line, '|', 3);
        if (fields.size() != 3) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": expected name|kind|tag");
        }
        const std::string name(util::trim(fields[0]));
        const std::string kind_text(util::trim(fields[1]));
        const std::string tag_text(util::trim(fields[2]));
        const entry_def* def = standard_entry(name);
        if (def == nullptr) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": no binding for behavior " + name);
        }
        if (kind_text != behavior::to_string(def->k)) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) + ": " + name +
                                        " must have kind " + behavior::to_string(def->k));
        }
        if (tag_text.empty()) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) +
                                        ": empty tag");
        }
        register_standard(lib, *def, tag_text);
    }
    register_standard_conditions(lib);
    return lib;
}

}  // namespace sim
