#include "bench/suite.hpp"

#include <set>

#include "sim/scene.hpp"
#include "util/strings.hpp"

namespace bench {

namespace {

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw suite_error("suite line " + std::to_string(line_no) + ": " + what);
}

sim::fault_profile parse_faults(std::string_view field, int line_no) {
    const auto parts = util::split(field, ',');
    if (parts.size() != 3 && parts.size() != 4) {
        fail(line_no, "fault profile must be p_grasp_slip,p_detect_miss,p_vqa_error[,seed]");
    }
    sim::fault_profile faults;
    double* const slots[3] = {&faults.p_grasp_slip, &faults.p_detect_miss, &faults.p_vqa_error};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto v = util::parse_double(parts[i]);
        if (!v || *v < 0.0 || *v > 1.0) {
            fail(line_no, "fault probability out of [0,1]: " + std::string(parts[i]));
        }
        *slots[i] = *v;
    }
    if (parts.size() == 4) {
        const auto seed = util::parse_u64(parts[3]);
        if (!seed) {
            fail(line_no, "bad seed: " + std::string(parts[3]));
        }
        faults.seed = *seed;
    }
    return faults;
}

}  // namespace

task_suite parse_suite(std::string_view text, std::filesystem::path base_dir) {
    task_suite suite;
    suite.base_dir = std::move(base_dir);
    std::set<std::string> ids;
    int line_no = 0;
    for (std::string_view line : util::split(text, '\n')) {
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
        if (fields.size() != 5) {
            fail(line_no, "expected id|instruction|scene|faults|fr");
        }
        task_entry entry;
        entry.id = std::string(util::trim(fields[0]));
        entry.instruction = std::string(util::trim(fields[1]));
        entry.scene_path = std::string(util::trim(fields[2]));
        if (entry.id.empty() || entry.instruction.empty() || entry.scene_path.empty()) {
            fail(line_no, "id, instruction and scene must be non-empty");
        }
        if (!ids.insert(entry.id).second) {
            fail(line_no, "duplicate task id " + entry.id);
        }
        entry.faults = parse_faults(fields[3], line_no);
        const std::string_view fr = util::trim(fields[4]);
        if (fr == "1" || fr == "true") {
            entry.expects_fr = true;
        } else if (fr == "0" || fr == "false") {
            entry.expects_fr = false;
        } else {
            fail(line_no, "fr flag must be 0/1");
        }
        suite.entries.push_back(std::move(entry));
    }
    if (suite.entries.empty()) {
        throw suite_error("suite has no tasks");
    }
    return suite;
}

task_suite load_suite(const std::filesystem::path& file) {
    const std::string text = sim::load_text_file(file);
    return parse_suite(text, file.parent_path());
}

std::string load_scene_text(const task_suite& suite, const task_entry& entry) {
    return sim::load_text_file(suite.base_dir / entry.scene_path);
}

}  // namespace bench
