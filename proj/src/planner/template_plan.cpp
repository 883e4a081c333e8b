#include "planner/template_plan.hpp"

#include <set>

#include "bt/validate.hpp"
#include "util/strings.hpp"

namespace planner {

namespace {

bool has_word(const std::string& text, std::string_view word) {
    std::size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
        const std::size_t end = pos + word.size();
        const bool right_ok =
            end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
        if (left_ok && right_ok) {
            return true;
        }
        pos = end;
    }
    return false;
}

const std::set<std::string_view>& target_stop_words() {
    static const std::set<std::string_view> stop = {
        "and",  "then",    "up",    "it",    "its",   "aside", "object", "objects",
        "from", "to",      "on",    "in",    "at",    "with",  "that",   "this",
        "robot", "pick",   "place", "put",   "grasp", "grab",  "find",   "locate",
        "search", "approach", "move", "go",  "lift",  "detect", "recover", "failure",
        "failures", "task", "during", "please",
    };
    return stop;
}

std::string strip_punct(std::string_view token) {
    std::size_t b = 0;
    std::size_t e = token.size();
    while (b < e && !std::isalnum(static_cast<unsigned char>(token[b])) && token[b] != '_') {
        ++b;
    }
    while (e > b && !std::isalnum(static_cast<unsigned char>(token[e - 1])) &&
           token[e - 1] != '_') {
        --e;
    }
    return std::string(token.substr(b, e - b));
}

// The noun phrase after an article, joined with underscores: "the soup can" ->
// "soup_can". Skips "the robot" and keeps scanning.
std::string extract_target(const std::string& lowered) {
    const auto raw_tokens = util::split(lowered, ' ');
    std::vector<std::string> tokens;
    tokens.reserve(raw_tokens.size());
    for (std::string_view t : raw_tokens) {
        // Punctuation ends a noun phrase; keep a marker for it.
        std::string cleaned = strip_punct(t);
        const bool ends_phrase = !t.empty() && (t.ends_with(',') || t.ends_with('.') ||
                                                t.ends_with(';') || t.ends_with('!'));
        tokens.push_back(cleaned);
        if (ends_phrase) {
            tokens.emplace_back(".");
        }
    }
    const auto& stop = target_stop_words();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] != "the" && tokens[i] != "a" && tokens[i] != "an") {
            continue;
        }
        std::vector<std::string> phrase;
        for (std::size_t j = i + 1; j < tokens.size(); ++j) {
            const std::string& tok = tokens[j];
            if (tok.empty() || tok == "." || stop.count(tok)) {
                break;
            }
            phrase.push_back(tok);
        }
        if (!phrase.empty()) {
            return util::join(phrase, "_");
        }
    }
    return {};
}

struct template_match {
    std::string id;
    std::string target;
};

template_match match(std::string_view instruction) {
    const std::string lowered = util::to_lower(instruction);
    const bool fr = util::contains(lowered, "recover") || util::contains(lowered, "failure");
    const bool w_find = has_word(lowered, "find") || has_word(lowered, "locate") ||
                        has_word(lowered, "search");
    const bool w_pick = has_word(lowered, "pick") || has_word(lowered, "take");
    const bool w_grasp = has_word(lowered, "grasp") || has_word(lowered, "grab");
    const bool w_place = has_word(lowered, "place") || has_word(lowered, "put");
    const bool w_approach = has_word(lowered, "approach") || util::contains(lowered, "move closer") ||
                            util::contains(lowered, "go to");

    template_match m;
    m.target = extract_target(lowered);
    if (w_find && (w_pick || w_grasp)) {
        m.id = "find_and_pick_object_fr";
    } else if (w_pick && w_place) {
        m.id = fr ? "pick_and_place_object_fr" : "pick_and_place_object";
    } else if (w_pick) {
        m.id = fr ? "pick_object_fr" : "pick_object";
    } else if (w_grasp) {
        m.id = "grasp_object";
    } else if (w_find) {
        m.id = "find_object";
    } else if (w_approach) {
        m.id = "approach_object";
    }
    return m;
}

bt::node_id add_find_block(bt::graph_builder& b, const std::string& target) {
    // Search-then-confirm: already visible, or approach and confirm.
    const auto seen = b.condition("ObjectVisible", {{"target", target}});
    const auto go = b.action("Approach", {{"target", target}});
    const auto seen2 = b.condition("ObjectVisible", {{"target", target}});
    const auto walk = b.sequence({go, seen2});
    return b.fallback({seen, walk});
}

bt::node_id add_checked_grasp(bt::graph_builder& b, const std::string& target, bool retry) {
    const auto grasp = b.action("Grasp", {{"target", target}});
    const auto held = b.condition("IsObjectHeld", {{"target", target}});
    const auto attempt = b.sequence({grasp, held});
    return retry ? b.retry(3, attempt) : attempt;
}

bt::task_graph build_template(const std::string& id, const std::string& target) {
    bt::graph_builder b(id);
    if (id == "find_object") {
        return std::move(b).root(add_find_block(b, target));
    }
    if (id == "approach_object") {
        const auto go = b.action("Approach", {{"target", target}});
        const auto seen = b.condition("ObjectVisible", {{"target", target}});
        return std::move(b).root(b.sequence({go, seen}));
    }
    if (id == "grasp_object") {
        const auto go = b.action("Approach", {{"target", target}});
        const auto grasp = b.action("Grasp", {{"target", target}});
        return std::move(b).root(b.sequence({go, grasp}));
    }
    if (id == "pick_object" || id == "pick_object_fr") {
        const auto go = b.action("Approach", {{"target", target}});
        const auto grasp = add_checked_grasp(b, target, id == "pick_object_fr");
        const auto lift = b.action("Lift");
        return std::move(b).root(b.sequence({go, grasp, lift}));
    }
    if (id == "pick_and_place_object" || id == "pick_and_place_object_fr") {
        const auto go = b.action("Approach", {{"target", target}});
        const auto grasp = add_checked_grasp(b, target, id == "pick_and_place_object_fr");
        const auto lift = b.action("Lift");
        const auto place = b.action("Place");
        return std::move(b).root(b.sequence({go, grasp, lift, place}));
    }
    if (id == "find_and_pick_object_fr") {
        const auto found = add_find_block(b, target);
        const auto go = b.action("Approach", {{"target", target}});
        const auto grasp = add_checked_grasp(b, target, true);
        const auto lift = b.action("Lift");
        return std::move(b).root(b.sequence({found, go, grasp, lift}));
    }
    throw no_template_error("unknown template id: " + id);
}

}  // namespace

std::string match_template_id(std::string_view instruction) { return match(instruction).id; }

bt::task_graph template_plan(std::string_view instruction, const behavior::library& lib) {
    const template_match m = match(instruction);
    if (m.id.empty()) {
        throw no_template_error("no task template matches instruction: \"" +
                                std::string(instruction) + "\"");
    }
    if (m.target.empty()) {
        throw no_template_error("could not extract a target object from instruction: \"" +
                                std::string(instruction) + "\"");
    }
    bt::task_graph graph = build_template(m.id, m.target);
    const bt::validation_report report = bt::validate(graph, lib);
    if (!report.ok) {
        throw no_template_error("library lacks behaviors needed by template " + m.id + ": " +
                                report.summary());
    }
    return graph;
}

}  // namespace planner
