#include "planner/generate.hpp"

#include "bt/validate.hpp"
#include "bt/xml.hpp"

namespace planner {

std::string extract_task_graph_span(std::string_view response) {
    constexpr std::string_view open = "<TaskGraph";
    constexpr std::string_view close = "</TaskGraph>";
    std::size_t begin = response.find(open);
    while (begin != std::string_view::npos) {
        const std::size_t after = begin + open.size();
        // Must be the element, not e.g. <TaskGraphX.
        if (after >= response.size() || response[after] == '>' || response[after] == '/' ||
            response[after] == ' ' || response[after] == '\t' || response[after] == '\n' ||
            response[after] == '\r') {
            break;
        }
        begin = response.find(open, after);
    }
    if (begin == std::string_view::npos) {
        throw bt::syntax_error("response contains no <TaskGraph> element", 1, 1);
    }
    // Self-closing root: schema-invalid, but that is the schema layer's call.
    const std::size_t self_close = response.find("/>", begin);
    const std::size_t first_gt = response.find('>', begin);
    if (self_close != std::string_view::npos && first_gt != std::string_view::npos &&
        self_close + 1 == first_gt) {
        return std::string(response.substr(begin, self_close + 2 - begin));
    }
    const std::size_t end = response.find(close, begin);
    if (end == std::string_view::npos) {
        throw bt::syntax_error("<TaskGraph> element is never closed", 1, 1);
    }
    return std::string(response.substr(begin, end + close.size() - begin));
}

namespace {

completion complete_with_retry(backend& be, const prompt_bundle& bundle,
                               const std::vector<chat_message>& conversation) {
    try {
        return be.complete(bundle, conversation);
    } catch (const transport_error&) {
        return be.complete(bundle, conversation);
    }
}

bt::validation_report report_from_parse_error(const std::string& message) {
    bt::validation_report report;
    report.ok = false;
    report.issues.push_back({bt::severity::error, std::nullopt, message});
    return report;
}

}  // namespace

plan_outcome generate_task_graph(std::string_view instruction, const behavior::library& lib,
                                 backend& be, int max_repair_rounds,
                                 std::string_view robot_description) {
    const prompt_bundle bundle =
        robot_description.empty() ? build_prompt(instruction, lib)
                                  : build_prompt(instruction, lib, robot_description);
    plan_outcome outcome;
    outcome.conversation.push_back({"user", bundle.text()});

    for (int round = 0; round <= max_repair_rounds; ++round) {
        const completion reply = complete_with_retry(be, bundle, outcome.conversation);
        outcome.conversation.push_back({"assistant", reply.text});
        outcome.raw_responses.push_back(reply.text);
        outcome.round_latency.push_back(reply.seconds);

        std::string feedback;
        try {
            const bt::task_graph graph = bt::parse_xml(extract_task_graph_span(reply.text));
            const bt::validation_report report = bt::validate(graph, lib);
            if (report.ok) {
                outcome.graph = graph;
                outcome.validation = report;
                outcome.repair_rounds_used = round;
                return outcome;
            }
            outcome.validation = report;
            feedback = "your task graph failed validation: " + report.summary() +
                       "; emit only corrected XML";
        } catch (const bt::syntax_error& e) {
            outcome.validation = report_from_parse_error(e.what());
            feedback = std::string("your XML failed to parse: ") + e.what() +
                       "; emit only corrected XML";
        } catch (const bt::schema_error& e) {
            outcome.validation = report_from_parse_error(e.what());
            feedback = std::string("your task graph failed validation: ") + e.what() +
                       "; emit only corrected XML";
        }

        if (round < max_repair_rounds) {
            outcome.conversation.push_back({"user", feedback});
        }
    }
    outcome.repair_rounds_used = max_repair_rounds;
    return outcome;
}

}  // namespace planner
