#include "bt/types.hpp"

namespace bt {

const char* to_string(tick_status s) {
    switch (s) {
        case tick_status::success:
            return "success";
        case tick_status::failure:
            return "failure";
        case tick_status::running:
            return "running";
    }
    return "?";
}

std::optional<tick_status> tick_status_from(std::string_view s) {
    if (s == "success") {
        return tick_status::success;
    }
    if (s == "failure") {
        return tick_status::failure;
    }
    if (s == "running") {
        return tick_status::running;
    }
    return std::nullopt;
}

const char* to_string(node_kind k) {
    switch (k) {
        case node_kind::sequence:
            return "Sequence";
        case node_kind::fallback:
            return "Fallback";
        case node_kind::retry:
            return "Retry";
        case node_kind::action:
            return "Action";
        case node_kind::condition:
            return "Condition";
    }
    return "?";
}

const node& task_graph::at(node_id id) const {
    if (id >= nodes.size()) {
        throw graph_error("node id out of range: " + std::to_string(id));
    }
    return nodes[id];
}

namespace {

bool subtree_equal(const task_graph& a, node_id ia, const task_graph& b, node_id ib,
                   std::size_t depth) {
    if (depth > a.nodes.size() + 1) {
        throw graph_error("cycle while comparing graphs");
    }
    const node& na = a.at(ia);
    const node& nb = b.at(ib);
    if (na.kind != nb.kind || na.name != nb.name || na.params != nb.params ||
        na.max_attempts != nb.max_attempts || na.children.size() != nb.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < na.children.size(); ++i) {
        if (!subtree_equal(a, na.children[i], b, nb.children[i], depth + 1)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool structurally_equal(const task_graph& a, const task_graph& b) {
    if (a.name != b.name) {
        return false;
    }
    if (a.empty() || b.empty()) {
        return a.empty() == b.empty();
    }
    return subtree_equal(a, a.root, b, b.root, 0);
}

graph_builder::graph_builder(std::string name) { graph_.name = std::move(name); }

node_id graph_builder::add(node n) {
    n.id = static_cast<node_id>(graph_.nodes.size());
    graph_.nodes.push_back(std::move(n));
    return graph_.nodes.back().id;
}

node_id graph_builder::sequence(std::vector<node_id> children) {
    node n;
    n.kind = node_kind::sequence;
    n.children = std::move(children);
    return add(std::move(n));
}

node_id graph_builder::fallback(std::vector<node_id> children) {
    node n;
    n.kind = node_kind::fallback;
    n.children = std::move(children);
    return add(std::move(n));
}

node_id graph_builder::retry(int max_attempts, node_id child) {
    node n;
    n.kind = node_kind::retry;
    n.max_attempts = max_attempts;
    n.children = {child};
    return add(std::move(n));
}

node_id graph_builder::action(std::string name, param_map params) {
    node n;
    n.kind = node_kind::action;
    n.name = std::move(name);
    n.params = std::move(params);
    return add(std::move(n));
}

node_id graph_builder::condition(std::string name, param_map params) {
    node n;
    n.kind = node_kind::condition;
    n.name = std::move(name);
    n.params = std::move(params);
    return add(std::move(n));
}

task_graph graph_builder::root(node_id id) && {
    graph_.root = id;
    return std::move(graph_);
}

const node_memory* run_state::find(node_id id) const {
    const auto it = memory_.find(id);
    return it == memory_.end() ? nullptr : &it->second;
}

void run_state::reset_subtree(const task_graph& graph, node_id id) {
    memory_.erase(id);
    const node& n = graph.at(id);
    for (node_id child : n.children) {
        reset_subtree(graph, child);
    }
}

}  // namespace bt
