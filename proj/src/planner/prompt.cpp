#include "planner/prompt.hpp"

#include "bt/xml.hpp"
#include "util/strings.hpp"

namespace planner {

namespace {

const char* const worked_example =
    "<TaskGraph name=\"pick_example\">\n"
    "  <Sequence>\n"
    "    <Action name=\"Approach\" target=\"box\"/>\n"
    "    <Retry num_attempts=\"3\">\n"
    "      <Sequence>\n"
    "        <Action name=\"Grasp\" target=\"box\"/>\n"
    "        <Condition name=\"IsObjectHeld\" target=\"box\"/>\n"
    "      </Sequence>\n"
    "    </Retry>\n"
    "    <Action name=\"Lift\"/>\n"
    "  </Sequence>\n"
    "</TaskGraph>";

std::string format_spec(const behavior::library& lib) {
    std::string out;
    out +=
        "Reply with exactly one XML document and nothing else. The document is a behavior\n"
        "tree with this schema:\n"
        "- <TaskGraph name=\"...\"> is the root element and has exactly one child.\n"
        "- <Sequence> runs its children in order and fails on the first failure.\n"
        "- <Fallback> tries its children in order until one succeeds.\n"
        "- <Retry num_attempts=\"N\"> re-runs its single child on failure, up to N attempts.\n"
        "- <Action name=\"...\"/> invokes an action behavior; extra attributes are its\n"
        "  parameters (e.g. target=\"cracker_box\").\n"
        "- <Condition name=\"...\"/> checks the world through perception behaviors and\n"
        "  returns success or failure.\n";
    const auto conditions = lib.condition_names();
    if (!conditions.empty()) {
        out += "Available condition names:\n";
        for (const std::string& name : conditions) {
            const behavior::condition_spec* spec = lib.find_condition(name);
            std::vector<std::string> members;
            members.reserve(spec->members.size());
            for (const auto& m : spec->members) {
                members.push_back(m.behavior);
            }
            out += "- " + name + " (fuses " + util::join(members, ", ") + ")\n";
        }
    }
    out += "Example:\n";
    out += worked_example;
    out += "\n";
    return out;
}

}  // namespace

std::string default_robot_description() {
    return "The robot is a mobile manipulator: a wheeled quadruped base carrying a torso\n"
           "with one arm and a two-finger gripper, a head RGBD camera, and joint torque\n"
           "sensing. It moves on flat ground and manipulates small tabletop objects.\n";
}

std::string prompt_bundle::text() const {
    std::string out;
    out += "## Robot\n";
    out += robot_description;
    if (!robot_description.ends_with('\n')) {
        out += "\n";
    }
    out += "\n## Behavior library\n";
    out += library_block;
    out += "\n## Output format\n";
    out += output_format_spec;
    out += "\n## Instruction\n";
    out += bt::escape_text(instruction);
    out += "\n";
    return out;
}

prompt_bundle build_prompt(std::string_view instruction, const behavior::library& lib,
                           std::string_view robot_description) {
    if (util::trim(instruction).empty()) {
        throw std::invalid_argument("instruction must be non-empty");
    }
    if (lib.empty()) {
        throw std::invalid_argument("behavior library is empty; nothing to plan with");
    }
    if (util::trim(robot_description).empty()) {
        throw std::invalid_argument("robot description must be non-empty");
    }
    prompt_bundle bundle;
    bundle.robot_description = std::string(robot_description);
    bundle.library_block = lib.tags_prompt_block();
    bundle.output_format_spec = format_spec(lib);
    bundle.instruction = std::string(instruction);
    return bundle;
}

}  // namespace planner
