#include "executor/trace.hpp"

#include "bt/xml.hpp"
#include "sim/scene.hpp"
#include "util/hash.hpp"
#include "util/strings.hpp"

namespace executor {

namespace {

std::string event_line(const trace_event& ev) {
    std::string node = ev.node == bt::invalid_node ? "-" : std::to_string(ev.node);
    return std::to_string(ev.tick_index) + "|" + node + "|" + ev.behavior + "|" +
           to_string(ev.status) + "|" + std::to_string(ev.world_step) + "|" + ev.detail;
}

[[noreturn]] void bad_trace(int line_no, const std::string& what) {
    throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string trace_text(const run_result& result, const trace_meta& meta) {
    std::string out = "#btrace v1 scene=" + util::hex64(meta.scene_hash) +
                      " graph=" + util::hex64(meta.graph_hash) +
                      " seed=" + std::to_string(meta.seed) + " outcome=" + to_string(result.out) +
                      "\n";
    for (const trace_event& ev : result.trace) {
        out += event_line(ev) + "\n";
    }
    return out;
}

parsed_trace parse_trace(std::string_view text) {
    parsed_trace out;
    bool saw_header = false;
    int line_no = 0;
    for (std::string_view line : util::split(text, '\n')) {
        ++line_no;
        if (util::trim(line).empty()) {
            continue;
        }
        if (line.starts_with("#btrace")) {
            if (saw_header) {
                bad_trace(line_no, "duplicate header");
            }
            saw_header = true;
            for (std::string_view field : util::split(line, ' ')) {
                const std::size_t eq = field.find('=');
                if (eq == std::string_view::npos) {
                    continue;
                }
                const std::string_view key = field.substr(0, eq);
                const std::string_view value = field.substr(eq + 1);
                if (key == "scene" || key == "graph") {
                    std::uint64_t v = 0;
                    for (char c : value) {
                        const int digit = c >= '0' && c <= '9'   ? c - '0'
                                          : c >= 'a' && c <= 'f' ? c - 'a' + 10
                                                                 : -1;
                        if (digit < 0) {
                            bad_trace(line_no, "bad hash field");
                        }
                        v = (v << 4) | static_cast<std::uint64_t>(digit);
                    }
                    (key == "scene" ? out.meta.scene_hash : out.meta.graph_hash) = v;
                } else if (key == "seed") {
                    const auto v = util::parse_u64(value);
                    if (!v) {
                        bad_trace(line_no, "bad seed field");
                    }
                    out.meta.seed = *v;
                } else if (key == "outcome") {
                    if (value == "done") {
                        out.out = outcome::done;
                    } else if (value == "failed") {
                        out.out = outcome::failed;
                    } else if (value == "budget_exhausted") {
                        out.out = outcome::budget_exhausted;
                    } else {
                        bad_trace(line_no, "bad outcome field");
                    }
                }
            }
            continue;
        }
        if (!saw_header) {
            bad_trace(line_no, "missing #btrace header");
        }
        const auto fields = util::split_limit(line, '|', 6);
        if (fields.size() != 6) {
            bad_trace(line_no, "expected 6 fields");
        }
        trace_event ev;
        const auto tick = util::parse_u64(fields[0]);
        if (!tick) {
            bad_trace(line_no, "bad tick index");
        }
        ev.tick_index = *tick;
        if (fields[1] == "-") {
            ev.node = bt::invalid_node;
        } else {
            const auto node = util::parse_u64(fields[1]);
            if (!node) {
                bad_trace(line_no, "bad node id");
            }
            ev.node = static_cast<bt::node_id>(*node);
        }
        ev.behavior = std::string(fields[2]);
        const auto status = bt::tick_status_from(fields[3]);
        if (!status) {
            bad_trace(line_no, "bad status");
        }
        ev.status = *status;
        const auto step = util::parse_u64(fields[4]);
        if (!step) {
            bad_trace(line_no, "bad world step");
        }
        ev.world_step = *step;
        ev.detail = std::string(fields[5]);
        out.events.push_back(std::move(ev));
    }
    if (!saw_header) {
        throw std::invalid_argument("trace has no #btrace header");
    }
    return out;
}

run_result replay(std::string_view recorded_trace, const bt::task_graph& graph,
                  const behavior::library& lib, std::string_view scene_text,
                  const sim::fault_profile& faults, const run_limits& limits) {
    const parsed_trace recorded = parse_trace(recorded_trace);

    std::string header_note;
    const trace_meta actual{util::fnv1a64(scene_text), util::fnv1a64(bt::serialize(graph)),
                            faults.seed};
    if (actual.scene_hash != recorded.meta.scene_hash) {
        header_note += " [scene hash differs from trace header]";
    }
    if (actual.graph_hash != recorded.meta.graph_hash) {
        header_note += " [graph hash differs from trace header]";
    }
    if (actual.seed != recorded.meta.seed) {
        header_note += " [seed differs from trace header]";
    }

    sim::world_state world = sim::world_from_scene(scene_text, faults);
    run_result fresh = run(graph, lib, world, limits);

    const std::size_t common = std::min(recorded.events.size(), fresh.trace.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (!(recorded.events[i] == fresh.trace[i])) {
            throw divergence_error("replay diverged at event " + std::to_string(i) +
                                       ": recorded `" + event_line(recorded.events[i]) +
                                       "` vs re-run `" + event_line(fresh.trace[i]) + "`" +
                                       header_note,
                                   i);
        }
    }
    if (recorded.events.size() != fresh.trace.size()) {
        const std::size_t i = common;
        const std::string which = recorded.events.size() > fresh.trace.size()
                                      ? "recorded `" + event_line(recorded.events[i]) +
                                            "` has no re-run counterpart"
                                      : "re-run produced extra event `" +
                                            event_line(fresh.trace[i]) + "`";
        throw divergence_error("replay diverged at event " + std::to_string(i) + ": " + which +
                                   header_note,
                               i);
    }
    if (recorded.out != fresh.out) {
        throw divergence_error("replay diverged at outcome: recorded " +
                                   std::string(to_string(recorded.out)) + " vs re-run " +
                                   to_string(fresh.out) + header_note,
                               recorded.events.size());
    }
    return fresh;
}

}  // namespace executor
