#include "bt/tick.hpp"

namespace bt {
namespace {

struct ticker {
    const task_graph& graph;
    run_state& state;
    const leaf_dispatch& dispatch;
    std::size_t depth = 0;

    tick_status visit(node_id id) {
        if (++depth > graph.nodes.size()) {
            throw graph_error("tick recursion exceeds node count (cycle?)");
        }
        const node& n = graph.at(id);
        const tick_status st = visit_node(n);
        --depth;
        return st;
    }

    tick_status visit_node(const node& n) {
        switch (n.kind) {
            case node_kind::sequence:
                return visit_sequence(n, /*pass_on=*/tick_status::success);
            case node_kind::fallback:
                return visit_sequence(n, /*pass_on=*/tick_status::failure);
            case node_kind::retry:
                return visit_retry(n);
            case node_kind::action:
            case node_kind::condition:
                return dispatch(n);
        }
        throw graph_error("unknown node kind");
    }

    // Sequence and Fallback share one shape: keep going while children return
    // `pass_on`, stop on the opposite terminal status or on running.
    tick_status visit_sequence(const node& n, tick_status pass_on) {
        node_memory& mem = state.memory(n.id);
        if (mem.resume_child >= n.children.size()) {
            throw graph_error("resume index " + std::to_string(mem.resume_child) +
                              " out of range for node " + std::to_string(n.id));
        }
        for (std::size_t i = mem.resume_child; i < n.children.size(); ++i) {
            const tick_status st = visit(n.children[i]);
            if (st == tick_status::running) {
                mem.resume_child = static_cast<std::uint32_t>(i);
                return tick_status::running;
            }
            if (st != pass_on) {
                mem.resume_child = 0;
                return st;
            }
        }
        mem.resume_child = 0;
        return pass_on;
    }

    tick_status visit_retry(const node& n) {
        if (n.children.size() != 1 || n.max_attempts < 1) {
            throw graph_error("malformed retry node " + std::to_string(n.id));
        }
        node_memory& mem = state.memory(n.id);
        if (mem.attempts_used > n.max_attempts) {
            throw graph_error("attempt count exceeds bound at node " + std::to_string(n.id));
        }
        const tick_status st = visit(n.children[0]);
        if (st == tick_status::success) {
            mem.attempts_used = 0;
            return tick_status::success;
        }
        if (st == tick_status::running) {
            return tick_status::running;
        }
        ++mem.attempts_used;
        if (mem.attempts_used < n.max_attempts) {
            state.reset_subtree(graph, n.children[0]);
            return tick_status::running;
        }
        mem.attempts_used = 0;
        return tick_status::failure;
    }
};

}  // namespace

tick_status tick(const task_graph& graph, run_state& state, const leaf_dispatch& dispatch) {
    if (graph.empty() || graph.root >= graph.nodes.size()) {
        throw graph_error("tick on a graph without a valid root");
    }
    ticker t{graph, state, dispatch};
    const tick_status st = t.visit(graph.root);
    state.last_status = st;
    return st;
}

}  // namespace bt
