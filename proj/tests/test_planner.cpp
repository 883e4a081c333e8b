#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bt/xml.hpp"
#include "planner/generate.hpp"
#include "planner/template_plan.hpp"
#include "sim/behaviors.hpp"

namespace {

const char* const valid_pick_xml =
    "<TaskGraph name=\"pick\">\n"
    "  <Sequence>\n"
    "    <Action name=\"Approach\" target=\"soup_can\"/>\n"
    "    <Action name=\"Grasp\" target=\"soup_can\"/>\n"
    "    <Condition name=\"IsObjectHeld\" target=\"soup_can\"/>\n"
    "    <Action name=\"Lift\"/>\n"
    "  </Sequence>\n"
    "</TaskGraph>\n";

int count_nodes(const bt::task_graph& g, bt::node_kind kind, std::string_view name = {}) {
    int n = 0;
    for (const bt::node& node : g.nodes) {
        if (node.kind == kind && (name.empty() || node.name == name)) {
            ++n;
        }
    }
    return n;
}

}  // namespace

TEST_CASE("build_prompt assembles the four sections in order, deterministically") {
    const behavior::library lib = sim::standard_library();
    const planner::prompt_bundle a =
        planner::build_prompt("Find the soup can and pick it up", lib);
    const planner::prompt_bundle b =
        planner::build_prompt("Find the soup can and pick it up", lib);

    CHECK(a.text() == b.text());
    CHECK(a.library_block == lib.tags_prompt_block());
    CHECK(a.library_block.find(
              "Grasp | action | moving gripper to a given pose and close it") !=
          std::string::npos);

    const std::string text = a.text();
    const std::size_t robot_at = text.find("## Robot");
    const std::size_t lib_at = text.find("## Behavior library");
    const std::size_t format_at = text.find("## Output format");
    const std::size_t instr_at = text.find("## Instruction");
    REQUIRE(robot_at != std::string::npos);
    REQUIRE(lib_at != std::string::npos);
    REQUIRE(format_at != std::string::npos);
    REQUIRE(instr_at != std::string::npos);
    CHECK(robot_at < lib_at);
    CHECK(lib_at < format_at);
    CHECK(format_at < instr_at);
    // exactly one worked example tree
    CHECK(text.find("<TaskGraph name=\"pick_example\">") != std::string::npos);
    // the conditions are advertised
    CHECK(text.find("IsObjectHeld") != std::string::npos);
}

TEST_CASE("markup in the instruction is escaped in the rendered bundle") {
    const behavior::library lib = sim::standard_library();
    const std::string instruction = "Pick the <box> & lift it \"now\"";
    const planner::prompt_bundle bundle = planner::build_prompt(instruction, lib);
    const std::string text = bundle.text();
    CHECK(text.find("<box>") == std::string::npos);
    CHECK(text.find("&lt;box&gt; &amp; lift") != std::string::npos);
    // unescaping recovers the original instruction
    const std::size_t at = text.find("&lt;box&gt;");
    REQUIRE(at != std::string::npos);
    CHECK(bt::unescape_text("Pick the &lt;box&gt; &amp; lift it \"now\"") == instruction);
}

TEST_CASE("empty inputs are rejected") {
    const behavior::library lib = sim::standard_library();
    const behavior::library empty;
    CHECK_THROWS_AS(planner::build_prompt("  ", lib), std::invalid_argument);
    CHECK_THROWS_AS(planner::build_prompt("Pick the can", empty), std::invalid_argument);
}

TEST_CASE("template_plan emits the eight canonical shapes") {
    const behavior::library lib = sim::standard_library();

    SUBCASE("pick with recovery wraps the grasp in a retry") {
        const bt::task_graph g = planner::template_plan(
            "Pick the cracker, place it aside. Detect and recover the failure during the task.",
            lib);
        CHECK(g.name == "pick_and_place_object_fr");
        CHECK(count_nodes(g, bt::node_kind::retry) == 1);
        CHECK(count_nodes(g, bt::node_kind::action, "Grasp") == 1);
        CHECK(count_nodes(g, bt::node_kind::action, "Place") == 1);
        CHECK(count_nodes(g, bt::node_kind::condition, "IsObjectHeld") == 1);
        for (const bt::node& n : g.nodes) {
            if (n.kind == bt::node_kind::retry) {
                CHECK(n.max_attempts == 3);
            }
            if (n.name == "Grasp") {
                CHECK(n.params.at("target") == "cracker");
            }
        }
    }
    SUBCASE("find-and-pick starts with a search fallback and ends with a lift") {
        const bt::task_graph g =
            planner::template_plan("Find the soup can and pick it up", lib);
        CHECK(g.name == "find_and_pick_object_fr");
        CHECK(count_nodes(g, bt::node_kind::fallback) == 1);
        CHECK(count_nodes(g, bt::node_kind::retry) == 1);
        CHECK(count_nodes(g, bt::node_kind::condition, "ObjectVisible") == 2);
        CHECK(count_nodes(g, bt::node_kind::action, "Lift") == 1);
        for (const bt::node& n : g.nodes) {
            if (!n.params.count("target")) {
                continue;
            }
            CHECK(n.params.at("target") == "soup_can");
        }
    }
    SUBCASE("plain pick has the held-check but no retry") {
        const bt::task_graph g = planner::template_plan("Pick the soup can", lib);
        CHECK(g.name == "pick_object");
        CHECK(count_nodes(g, bt::node_kind::retry) == 0);
        CHECK(count_nodes(g, bt::node_kind::condition, "IsObjectHeld") == 1);
    }
    SUBCASE("the remaining templates validate ok") {
        for (const char* instruction :
             {"Find the mustard bottle", "Approach the sugar box",
              "Grasp the cracker box", "Pick the soup can and place it aside",
              "Pick the soup can. Detect and recover the failure during the task."}) {
            const bt::task_graph g = planner::template_plan(instruction, lib);
            CHECK(bt::validate(g, lib).ok);
        }
    }
    SUBCASE("out-of-library requests raise a no-template error") {
        CHECK_THROWS_AS(planner::template_plan("juggle three balls", lib),
                        planner::no_template_error);
        CHECK_THROWS_AS(planner::template_plan("pick it up", lib),
                        planner::no_template_error);  // no target
    }
}

TEST_CASE("span extraction takes the first well-formed TaskGraph element") {
    const std::string wrapped = "Sure! Here is the plan:\n\n```xml\n" +
                                std::string(valid_pick_xml) + "```\nLet me know.";
    const std::string span = planner::extract_task_graph_span(wrapped);
    CHECK(span.starts_with("<TaskGraph"));
    CHECK(span.ends_with("</TaskGraph>"));
    CHECK_NOTHROW(bt::parse_xml(span));

    CHECK_THROWS_AS(planner::extract_task_graph_span("no xml here"), bt::syntax_error);
    CHECK_THROWS_AS(planner::extract_task_graph_span("<TaskGraph name=\"x\"> unclosed"),
                    bt::syntax_error);
}

TEST_CASE("replay happy path: valid first response, zero repairs") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(std::vector<std::string>{valid_pick_xml});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 0);
    CHECK(outcome.raw_responses.size() == 1);
    CHECK(outcome.validation.ok);
    CHECK(outcome.round_latency.size() == 1);
}

TEST_CASE("malformed-then-valid fixture repairs in one round with the error in the prompt") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(
        std::vector<std::string>{"<TaskGraph name=\"oops\"><Sequence></TaskGraph>", valid_pick_xml});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 1);
    REQUIRE(outcome.conversation.size() == 4);  // user, assistant, repair user, assistant
    const std::string& repair_prompt = outcome.conversation[2].content;
    CHECK(repair_prompt.find("your XML failed to parse") != std::string::npos);
    CHECK(repair_prompt.find("mismatched closing tag") != std::string::npos);
    CHECK(repair_prompt.find("emit only corrected XML") != std::string::npos);
}

TEST_CASE("schema problems are repaired with the issue list") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(
        std::vector<std::string>{"<TaskGraph><Retry/></TaskGraph>", valid_pick_xml});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 1);
    CHECK(outcome.conversation[2].content.find("Retry requires num_attempts and one child") !=
          std::string::npos);
}

TEST_CASE("validation problems (unknown behavior) also drive repair") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(
        std::vector<std::string>{"<TaskGraph><Action name=\"Fly\"/></TaskGraph>", valid_pick_xml});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 1);
    CHECK(outcome.conversation[2].content.find("unknown behavior Fly") != std::string::npos);
}

TEST_CASE("exhausting the repair budget yields no graph and a non-ok report") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(std::vector<std::string>{"garbage one", "garbage two", "garbage three"});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend, 2);
    CHECK(!outcome.ok());
    CHECK(outcome.repair_rounds_used == 2);
    CHECK(outcome.raw_responses.size() == 3);
    CHECK(!outcome.validation.ok);
}

TEST_CASE("every repair round strictly extends the conversation") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(std::vector<std::string>{"junk", "more junk", valid_pick_xml});
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend, 2);
    REQUIRE(outcome.ok());
    // user, asst, user, asst, user, asst
    REQUIRE(outcome.conversation.size() == 6);
    for (std::size_t i = 0; i < outcome.conversation.size(); ++i) {
        CHECK(outcome.conversation[i].role == (i % 2 == 0 ? "user" : "assistant"));
    }
}

TEST_CASE("replay fixtures load from a directory of numbered files, in order") {
    const behavior::library lib = sim::standard_library();
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "btplan_fixture_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        out << text;
    };
    write("2.txt", valid_pick_xml);  // consumed second despite listing order
    write("10.txt", "never reached");
    write("1.txt", "garbage first response");

    planner::replay_backend backend(dir);
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 1);
    CHECK(outcome.raw_responses[0] == "garbage first response");

    CHECK_THROWS_AS(planner::replay_backend(dir / "missing"),
                    planner::backend_config_error);
    write("notes.md", "not a numbered fixture");
    CHECK_THROWS_AS(planner::replay_backend{std::filesystem::path(dir)},
                    planner::backend_config_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fixture exhaustion is a configuration error") {
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(std::vector<std::string>{"junk"});
    CHECK_THROWS_AS(planner::generate_task_graph("Pick the soup can", lib, backend, 2),
                    planner::backend_config_error);
}

TEST_CASE("adversarial responses never produce a graph that fails validation") {
    const behavior::library lib = sim::standard_library();
    const std::vector<std::string> adversarial = {
        "<TaskGraph><Action name=\"Fly\"/></TaskGraph>",
        "<TaskGraph><Sequence/></TaskGraph>",
        "prose only",
        "<TaskGraph name=\"ok\"><Action name=\"Homing\"/></TaskGraph>",
        "<TaskGraph><Condition name=\"Grasp\"/></TaskGraph>",
        "<TaskGraph><Retry num_attempts=\"2\"><Action name=\"Homing\"/></Retry></TaskGraph>",
        "<TaskGraph name=\"x\"><Sequence><Action name=\"Lift\"/><Unknown/></Sequence></TaskGraph>",
    };
    for (std::size_t skip = 0; skip < adversarial.size(); ++skip) {
        std::vector<std::string> rotated;
        for (std::size_t i = 0; i < adversarial.size(); ++i) {
            rotated.push_back(adversarial[(i + skip) % adversarial.size()]);
        }
        planner::replay_backend backend(rotated);
        const planner::plan_outcome outcome =
            planner::generate_task_graph("Pick the soup can", lib, backend, 2);
        if (outcome.ok()) {
            CHECK(outcome.validation.ok);
            CHECK(bt::validate(*outcome.graph, lib).ok);
        }
    }
}

TEST_CASE("template backend answers through the same pipeline") {
    const behavior::library lib = sim::standard_library();
    planner::template_backend backend(lib);
    const planner::plan_outcome outcome =
        planner::generate_task_graph("Pick the soup can", lib, backend);
    REQUIRE(outcome.ok());
    CHECK(outcome.repair_rounds_used == 0);
    CHECK(outcome.graph->name == "pick_object");

    const planner::plan_outcome none =
        planner::generate_task_graph("juggle three balls", lib, backend, 1);
    CHECK(!none.ok());
    CHECK(!none.validation.ok);
}

