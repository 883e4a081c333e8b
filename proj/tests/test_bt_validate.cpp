#include <doctest.h>

#include "bt/validate.hpp"
#include "bt/xml.hpp"
#include "sim/behaviors.hpp"

namespace {

bool has_error(const bt::validation_report& r, std::string_view needle) {
    for (const bt::issue& i : r.issues) {
        if (i.sev == bt::severity::error && i.message.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

bool has_warning(const bt::validation_report& r, std::string_view needle) {
    for (const bt::issue& i : r.issues) {
        if (i.sev == bt::severity::warning && i.message.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("a tree over standard action names validates ok") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph g = bt::parse_xml(
        "<TaskGraph name=\"pick\"><Sequence>"
        "<Action name=\"Approach\" target=\"soup_can\"/>"
        "<Action name=\"Grasp\" target=\"soup_can\"/>"
        "<Condition name=\"IsObjectHeld\" target=\"soup_can\"/>"
        "<Action name=\"Lift\"/>"
        "</Sequence></TaskGraph>");
    const bt::validation_report report = bt::validate(g, lib);
    CHECK(report.ok);
    CHECK(report.issues.empty());
}

TEST_CASE("unknown behaviors are errors") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph g =
        bt::parse_xml("<TaskGraph><Action name=\"Fly\"/></TaskGraph>");
    const bt::validation_report report = bt::validate(g, lib);
    CHECK(!report.ok);
    CHECK(has_error(report, "unknown behavior Fly"));
}

TEST_CASE("kind mismatches are errors with pointed messages") {
    const behavior::library lib = sim::standard_library();
    SUBCASE("action used as condition") {
        const bt::task_graph g =
            bt::parse_xml("<TaskGraph><Condition name=\"Grasp\"/></TaskGraph>");
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "Grasp is an action, not a condition"));
    }
    SUBCASE("perception used as action") {
        const bt::task_graph g =
            bt::parse_xml("<TaskGraph><Action name=\"GripForce\"/></TaskGraph>");
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "GripForce is a perception behavior, not an action"));
    }
    SUBCASE("raw perception used as condition") {
        const bt::task_graph g = bt::parse_xml(
            "<TaskGraph><Condition name=\"ObjectDetection\" target=\"x\"/></TaskGraph>");
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "ObjectDetection is a raw perception behavior"));
    }
    SUBCASE("condition used as action") {
        const bt::task_graph g =
            bt::parse_xml("<TaskGraph><Action name=\"IsObjectHeld\"/></TaskGraph>");
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "IsObjectHeld is a condition, not an action"));
    }
}

TEST_CASE("grasp without a later held-check is a warning, not an error") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph g = bt::parse_xml(
        "<TaskGraph name=\"grasp\"><Sequence>"
        "<Action name=\"Approach\" target=\"x\"/>"
        "<Action name=\"Grasp\" target=\"x\"/>"
        "</Sequence></TaskGraph>");
    const bt::validation_report report = bt::validate(g, lib);
    CHECK(report.ok);
    CHECK(has_warning(report, "no subsequent held-object check"));
}

TEST_CASE("held-check before the grasp does not count") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph g = bt::parse_xml(
        "<TaskGraph><Sequence>"
        "<Condition name=\"IsObjectHeld\" target=\"x\"/>"
        "<Action name=\"Grasp\" target=\"x\"/>"
        "</Sequence></TaskGraph>");
    CHECK(has_warning(bt::validate(g, lib), "no subsequent held-object check"));
}

TEST_CASE("retry around a perception-only subtree is a warning") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph g = bt::parse_xml(
        "<TaskGraph><Retry num_attempts=\"3\">"
        "<Condition name=\"ObjectVisible\" target=\"x\"/>"
        "</Retry></TaskGraph>");
    const bt::validation_report report = bt::validate(g, lib);
    CHECK(report.ok);
    CHECK(has_warning(report, "perception-only subtree"));
}

TEST_CASE("structural violations surface as errors on hand-built graphs") {
    const behavior::library lib = sim::standard_library();
    SUBCASE("orphan node") {
        bt::graph_builder b("t");
        const auto used = b.action("Homing");
        b.action("Grasp");  // never linked
        const bt::task_graph g = std::move(b).root(used);
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "not reachable"));
    }
    SUBCASE("node with two parents") {
        bt::graph_builder b("t");
        const auto leaf = b.action("Homing");
        const bt::task_graph g = std::move(b).root(b.sequence({leaf, leaf}));
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "more than one parent"));
    }
    SUBCASE("retry with bad attempt bound") {
        bt::graph_builder b("t");
        const auto leaf = b.action("Homing");
        const auto retry = b.retry(0, leaf);
        const bt::task_graph g = std::move(b).root(retry);
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
        CHECK(has_error(report, "Retry requires num_attempts and one child"));
    }
    SUBCASE("cycle") {
        bt::task_graph g;
        g.name = "loop";
        bt::node a;
        a.id = 0;
        a.kind = bt::node_kind::sequence;
        a.children = {1};
        bt::node c;
        c.id = 1;
        c.kind = bt::node_kind::sequence;
        c.children = {0};
        g.nodes = {a, c};
        g.root = 0;
        const bt::validation_report report = bt::validate(g, lib);
        CHECK(!report.ok);
    }
    SUBCASE("reserved param key") {
        bt::graph_builder b("t");
        const bt::task_graph g =
            std::move(b).root(b.action("Homing", {{"name", "sneaky"}}));
        CHECK(!bt::validate(g, lib).ok);
    }
}

TEST_CASE("report.ok is exactly the absence of error-severity issues") {
    const behavior::library lib = sim::standard_library();
    const bt::task_graph warn_only = bt::parse_xml(
        "<TaskGraph><Sequence><Action name=\"Grasp\" target=\"x\"/></Sequence></TaskGraph>");
    const bt::validation_report report = bt::validate(warn_only, lib);
    CHECK(report.ok);
    CHECK(!report.issues.empty());
    for (const bt::issue& i : report.issues) {
        CHECK(i.sev == bt::severity::warning);
    }
}
