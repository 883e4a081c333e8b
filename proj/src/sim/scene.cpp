#include "sim/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "util/strings.hpp"

namespace sim {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw scene_error("scene line " + std::to_string(line_no) + ": " + what);
}

pose parse_pose(std::string_view field, int line_no) {
    const auto parts = util::split(field, ',');
    if (parts.size() != 4) {
        fail(line_no, "pose must be x,y,z,yaw");
    }
    double vals[4];
    for (std::size_t i = 0; i < 4; ++i) {
        const auto v = util::parse_double(parts[i]);
        if (!v) {
            fail(line_no, "bad pose number: " + std::string(parts[i]));
        }
        vals[i] = *v;
    }
    return normalized({vals[0], vals[1], vals[2], vals[3]});
}

bool parse_flag(std::string_view field, int line_no) {
    const std::string_view f = util::trim(field);
    if (f == "1" || f == "true") {
        return true;
    }
    if (f == "0" || f == "false") {
        return false;
    }
    fail(line_no, "expected 0/1/true/false, got " + std::string(field));
}

bool plain_token(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '|') {
            return false;
        }
    }
    return s != "-";
}

}  // namespace

world_state world_from_scene(std::string_view scene_text, fault_profile faults,
                             world_config config) {
    world_state world;
    world.config = config;
    world.faults = faults;
    world.rng = util::rng64(faults.seed);
    world.robot.gripper_offset = config.home_offset;
    world.robot.gripper_open = true;

    bool saw_robot = false;
    std::set<std::string, std::less<>> ids;
    int line_no = 0;
    for (std::string_view line : util::split(scene_text, '\n')) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = util::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = util::split(line, '|');
        if (fields[0] == "robot") {
            if (fields.size() != 2) {
                fail(line_no, "robot line must be robot|x,y,z,yaw");
            }
            world.robot.base = parse_pose(fields[1], line_no);
            saw_robot = true;
        } else if (fields[0] == "object") {
            if (fields.size() != 5) {
                fail(line_no, "object line must be object|id|label|x,y,z,yaw|graspable");
            }
            object_state obj;
            obj.id = std::string(util::trim(fields[1]));
            obj.label = std::string(util::trim(fields[2]));
            if (!plain_token(obj.id) || !plain_token(obj.label)) {
                fail(line_no, "object id/label must be plain tokens");
            }
            if (!ids.insert(obj.id).second) {
                fail(line_no, "duplicate object id " + obj.id);
            }
            obj.p = parse_pose(fields[3], line_no);
            if (obj.p.z < 0.0) {
                fail(line_no, "object z must be >= 0");
            }
            obj.graspable = parse_flag(fields[4], line_no);
            world.objects.push_back(std::move(obj));
        } else {
            fail(line_no, "unknown line kind " + std::string(fields[0]));
        }
    }
    if (!saw_robot) {
        throw scene_error("scene has no robot line");
    }
    return world;
}

std::string load_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw scene_error("cannot open file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace sim
