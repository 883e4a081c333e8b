#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sim/world.hpp"

namespace bench {

struct suite_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct task_entry {
    std::string id;
    std::string instruction;
    std::string scene_path;  // relative to the suite file's directory
    sim::fault_profile faults;
    bool expects_fr = false;
};

struct task_suite {
    std::vector<task_entry> entries;
    std::filesystem::path base_dir;
};

// Suite files are line-oriented:
//   <task id>|<instruction>|<scene path>|<p_grasp_slip,p_detect_miss,p_vqa_error[,seed]>|<fr 0/1>
// '#' starts a comment. Task ids must be unique.
task_suite parse_suite(std::string_view text, std::filesystem::path base_dir);
task_suite load_suite(const std::filesystem::path& file);

std::string load_scene_text(const task_suite& suite, const task_entry& entry);

}  // namespace bench
