#include "bt/validate.hpp"

#include <algorithm>

namespace bt {

std::string validation_report::summary() const {
    std::string out;
    for (severity want : {severity::error, severity::warning}) {
        for (const issue& i : issues) {
            if (i.sev != want) {
                continue;
            }
            if (!out.empty()) {
                out += "; ";
            }
            out += i.message;
        }
    }
    return out;
}

namespace {

std::string node_label(const node& n) {
    std::string out = to_string(n.kind);
    if (!n.name.empty()) {
        out += " \"" + n.name + "\"";
    }
    out += " (node " + std::to_string(n.id) + ")";
    return out;
}

struct shape_checker {
    const task_graph& graph;
    std::vector<issue> issues;
    std::vector<int> parents;  // parent count per node
    std::vector<char> on_path;

    void report(std::optional<node_id> id, std::string message) {
        issues.push_back({severity::error, id, std::move(message)});
    }

    void run() {
        if (graph.nodes.empty()) {
            report(std::nullopt, "graph has no nodes");
            return;
        }
        if (graph.root >= graph.nodes.size()) {
            report(std::nullopt, "root id " + std::to_string(graph.root) + " is out of range");
            return;
        }
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            if (graph.nodes[i].id != static_cast<node_id>(i)) {
                report(static_cast<node_id>(i), "node id does not match its index");
                return;
            }
        }
        parents.assign(graph.nodes.size(), 0);
        on_path.assign(graph.nodes.size(), 0);
        walk(graph.root);
        for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
            if (static_cast<node_id>(i) != graph.root && parents[i] == 0) {
                report(static_cast<node_id>(i),
                       node_label(graph.nodes[i]) + " is not reachable from the root");
            }
        }
        if (parents[graph.root] != 0) {
            report(graph.root, "root node has a parent");
        }
    }

    void walk(node_id id) {
        const node& n = graph.nodes[id];
        if (on_path[id]) {
            report(id, node_label(n) + " is part of a cycle");
            return;
        }
        on_path[id] = 1;
        check_node(n);
        for (node_id child : n.children) {
            if (child >= graph.nodes.size()) {
                report(id, node_label(n) + " references unknown child id " +
                               std::to_string(child));
                continue;
            }
            if (++parents[child] > 1) {
                report(child, node_label(graph.nodes[child]) + " has more than one parent");
                continue;  // already walked
            }
            walk(child);
        }
        on_path[id] = 0;
    }

    void check_node(const node& n) {
        switch (n.kind) {
            case node_kind::sequence:
            case node_kind::fallback:
                if (n.children.empty()) {
                    report(n.id, node_label(n) + " requires at least one child");
                }
                break;
            case node_kind::retry:
                if (n.children.size() != 1 || n.max_attempts < 1) {
                    report(n.id, "Retry requires num_attempts and one child");
                }
                break;
            case node_kind::action:
            case node_kind::condition:
                if (!n.children.empty()) {
                    report(n.id, node_label(n) + " must not have children");
                }
                if (n.name.empty()) {
                    report(n.id, node_label(n) + " requires a name");
                }
                if (n.params.count("name") || n.params.count("num_attempts")) {
                    report(n.id, node_label(n) + " uses a reserved param key");
                }
                break;
        }
        if (!is_leaf(n.kind) && !n.params.empty()) {
            report(n.id, node_label(n) + " must not carry params");
        }
        if (!is_leaf(n.kind) && !n.name.empty()) {
            report(n.id, node_label(n) + " must not carry a behavior name");
        }
    }
};

// Leaves in tick order (preorder).
void collect_leaves(const task_graph& graph, node_id id, std::vector<node_id>& out) {
    const node& n = graph.at(id);
    if (is_leaf(n.kind)) {
        out.push_back(id);
        return;
    }
    for (node_id child : n.children) {
        collect_leaves(graph, child, out);
    }
}

bool subtree_has_action(const task_graph& graph, node_id id) {
    const node& n = graph.at(id);
    if (n.kind == node_kind::action) {
        return true;
    }
    for (node_id child : n.children) {
        if (subtree_has_action(graph, child)) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<issue> structural_issues(const task_graph& graph) {
    shape_checker checker{graph, {}, {}, {}};
    checker.run();
    return checker.issues;
}

validation_report validate(const task_graph& graph, const behavior_catalog& catalog) {
    validation_report report;
    report.issues = structural_issues(graph);
    if (!report.issues.empty()) {
        report.ok = false;
        return report;
    }

    using leaf_kind = behavior_catalog::leaf_kind;
    std::vector<node_id> leaves;
    collect_leaves(graph, graph.root, leaves);

    for (node_id id : leaves) {
        const node& n = graph.nodes[id];
        const leaf_kind kind = catalog.lookup(n.name);
        if (n.kind == node_kind::action) {
            switch (kind) {
                case leaf_kind::action:
                    break;
                case leaf_kind::perception:
                    report.issues.push_back({severity::error, id,
                                             n.name + " is a perception behavior, not an action"});
                    break;
                case leaf_kind::condition:
                    report.issues.push_back(
                        {severity::error, id, n.name + " is a condition, not an action"});
                    break;
                case leaf_kind::missing:
                    report.issues.push_back(
                        {severity::error, id, "unknown behavior " + n.name});
                    break;
            }
        } else {
            switch (kind) {
                case leaf_kind::condition:
                    break;
                case leaf_kind::action:
                    report.issues.push_back(
                        {severity::error, id, n.name + " is an action, not a condition"});
                    break;
                case leaf_kind::perception:
                    report.issues.push_back(
                        {severity::error, id,
                         n.name + " is a raw perception behavior; conditions must name a "
                                  "registered condition"});
                    break;
                case leaf_kind::missing:
                    report.issues.push_back(
                        {severity::error, id, "unknown condition " + n.name});
                    break;
            }
        }
    }

    // A grasp without a later held-check is legal but worth flagging: slips
    // are invisible at the action level.
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const node& n = graph.nodes[leaves[i]];
        if (n.kind != node_kind::action || n.name != "Grasp") {
            continue;
        }
        bool checked = false;
        for (std::size_t j = i + 1; j < leaves.size() && !checked; ++j) {
            const node& later = graph.nodes[leaves[j]];
            checked = later.kind == node_kind::condition && catalog.is_held_check(later.name);
        }
        if (!checked) {
            report.issues.push_back({severity::warning, n.id,
                                     "Grasp (node " + std::to_string(n.id) +
                                         ") has no subsequent held-object check"});
        }
    }

    for (const node& n : graph.nodes) {
        if (n.kind == node_kind::retry && !subtree_has_action(graph, n.children[0])) {
            report.issues.push_back({severity::warning, n.id,
                                     "Retry (node " + std::to_string(n.id) +
                                         ") wraps a perception-only subtree"});
        }
    }

    report.ok = std::none_of(report.issues.begin(), report.issues.end(),
                             [](const issue& i) { return i.sev == severity::error; });
    return report;
}

}  // namespace bt
