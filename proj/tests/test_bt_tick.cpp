#include <doctest.h>

#include <map>

#include "bt/tick.hpp"
#include "generators.hpp"
#include "reference_bt.hpp"

namespace {

// Dispatch that replays a fixed per-leaf script and counts calls.
struct scripted_dispatch {
    const gen::leaf_scripts& scripts;
    std::map<bt::node_id, std::size_t> calls;
    std::vector<bt::node_id> order;

    bt::tick_status operator()(const bt::node& leaf) {
        order.push_back(leaf.id);
        return scripts.at(leaf.id, calls[leaf.id]++);
    }
};

bt::task_graph leaf_chain(bt::node_kind kind, int n_leaves) {
    bt::graph_builder b("chain");
    std::vector<bt::node_id> leaves;
    for (int i = 0; i < n_leaves; ++i) {
        leaves.push_back(b.action("L" + std::to_string(i)));
    }
    return std::move(b).root(kind == bt::node_kind::sequence ? b.sequence(leaves)
                                                             : b.fallback(leaves));
}

}  // namespace

TEST_CASE("sequence of two succeeding leaves succeeds") {
    const bt::task_graph g = leaf_chain(bt::node_kind::sequence, 2);
    bt::run_state state;
    const auto dispatch = [](const bt::node&) { return bt::tick_status::success; };
    CHECK(bt::tick(g, state, dispatch) == bt::tick_status::success);
    CHECK(state.last_status == bt::tick_status::success);
}

TEST_CASE("sequence resumes at the running child on the next tick") {
    const bt::task_graph g = leaf_chain(bt::node_kind::sequence, 2);
    gen::leaf_scripts scripts;
    scripts.by_leaf[0] = {bt::tick_status::success};
    scripts.by_leaf[1] = {bt::tick_status::running, bt::tick_status::success};
    scripted_dispatch dispatch{scripts, {}, {}};
    bt::run_state state;

    CHECK(bt::tick(g, state, std::ref(dispatch)) == bt::tick_status::running);
    CHECK(dispatch.order == std::vector<bt::node_id>{0, 1});

    dispatch.order.clear();
    CHECK(bt::tick(g, state, std::ref(dispatch)) == bt::tick_status::success);
    // only the second leaf is re-dispatched
    CHECK(dispatch.order == std::vector<bt::node_id>{1});
    CHECK(dispatch.calls[0] == 1);
}

TEST_CASE("retry turns failure-then-success into running-then-success") {
    bt::graph_builder b("retry");
    const auto leaf = b.action("L0");
    const bt::task_graph g = std::move(b).root(b.retry(2, leaf));

    gen::leaf_scripts scripts;
    scripts.by_leaf[leaf] = {bt::tick_status::failure, bt::tick_status::success};
    scripted_dispatch dispatch{scripts, {}, {}};
    bt::run_state state;

    CHECK(bt::tick(g, state, std::ref(dispatch)) == bt::tick_status::running);
    CHECK(bt::tick(g, state, std::ref(dispatch)) == bt::tick_status::success);
    CHECK(dispatch.calls[leaf] == 2);
}

TEST_CASE("retry dispatches its subtree at most max_attempts times, then fails") {
    for (int attempts = 1; attempts <= 4; ++attempts) {
        bt::graph_builder b("retry");
        const auto leaf = b.action("L0");
        const bt::task_graph g = std::move(b).root(b.retry(attempts, leaf));

        gen::leaf_scripts scripts;
        scripts.by_leaf[leaf] = {bt::tick_status::failure};
        scripted_dispatch dispatch{scripts, {}, {}};
        bt::run_state state;

        bt::tick_status st = bt::tick_status::running;
        int ticks = 0;
        while (st == bt::tick_status::running && ticks < 100) {
            st = bt::tick(g, state, std::ref(dispatch));
            ++ticks;
        }
        CHECK(st == bt::tick_status::failure);
        CHECK(dispatch.calls[leaf] == static_cast<std::size_t>(attempts));
        CHECK(ticks == attempts);

        // After the terminal failure the node's memory is reset: a fresh round
        // again dispatches max_attempts times.
        st = bt::tick_status::running;
        while (st == bt::tick_status::running) {
            st = bt::tick(g, state, std::ref(dispatch));
        }
        CHECK(dispatch.calls[leaf] == 2 * static_cast<std::size_t>(attempts));
    }
}

TEST_CASE("fallback mirrors sequence") {
    const bt::task_graph g = leaf_chain(bt::node_kind::fallback, 3);
    gen::leaf_scripts scripts;
    scripts.by_leaf[0] = {bt::tick_status::failure};
    scripts.by_leaf[1] = {bt::tick_status::success};
    scripts.by_leaf[2] = {bt::tick_status::failure};
    scripted_dispatch dispatch{scripts, {}, {}};
    bt::run_state state;

    CHECK(bt::tick(g, state, std::ref(dispatch)) == bt::tick_status::success);
    // third leaf never consulted
    CHECK(dispatch.calls.count(2) == 0);
}

TEST_CASE("memory soundness: completed prefix is not re-dispatched while running") {
    gen::rng_t rng(2024);
    int exercised = 0;
    for (int round = 0; round < 400 || exercised < 25; ++round) {
        REQUIRE(round < 4000);
        const bt::task_graph g = gen::random_tree(rng);
        const bt::node& root = g.at(g.root);
        if (root.kind != bt::node_kind::sequence || root.children.size() < 2) {
            continue;
        }
        gen::leaf_scripts scripts = gen::random_scripts(rng, g);
        scripted_dispatch dispatch{scripts, {}, {}};
        bt::run_state state;

        const bt::tick_status st = bt::tick(g, state, std::ref(dispatch));
        if (st != bt::tick_status::running) {
            continue;
        }
        const auto* mem = state.find(root.id);
        REQUIRE(mem != nullptr);
        if (mem->resume_child == 0) {
            continue;
        }
        ++exercised;
        // Leaves of subtrees strictly before the resume child are off-limits
        // on the next tick.
        std::vector<char> forbidden(g.nodes.size(), 0);
        for (std::uint32_t c = 0; c < mem->resume_child; ++c) {
            std::vector<bt::node_id> stack = {root.children[c]};
            while (!stack.empty()) {
                const bt::node_id id = stack.back();
                stack.pop_back();
                forbidden[id] = 1;
                for (bt::node_id child : g.at(id).children) {
                    stack.push_back(child);
                }
            }
        }
        dispatch.order.clear();
        bt::tick(g, state, std::ref(dispatch));
        for (bt::node_id dispatched : dispatch.order) {
            CHECK(!forbidden[dispatched]);
        }
    }
}

TEST_CASE("random trees agree with the reference interpreter over 20-tick runs") {
    gen::rng_t rng(7);
    for (int round = 0; round < 500; ++round) {
        const bt::task_graph g = gen::random_tree(rng);
        const gen::leaf_scripts scripts = gen::random_scripts(rng, g);

        scripted_dispatch impl_dispatch{scripts, {}, {}};
        bt::run_state state;

        auto ref_root = refbt::build(g, g.root);
        std::map<bt::node_id, std::size_t> ref_calls;
        std::vector<bt::node_id> ref_order;
        const auto ref_leaf = [&](bt::node_id id) {
            ref_order.push_back(id);
            return refbt::from_tick(scripts.at(id, ref_calls[id]++));
        };

        for (int t = 0; t < 20; ++t) {
            impl_dispatch.order.clear();
            ref_order.clear();
            const bt::tick_status impl = bt::tick(g, state, std::ref(impl_dispatch));
            const refbt::status ref = refbt::run_once(*ref_root, ref_leaf);
            REQUIRE(refbt::from_tick(impl) == ref);
            REQUIRE(impl_dispatch.order == ref_order);
        }
    }
}

TEST_CASE("dispatch faults abort the tick as errors, not failures") {
    const bt::task_graph g = leaf_chain(bt::node_kind::sequence, 1);
    bt::run_state state;
    const auto dispatch = [](const bt::node&) -> bt::tick_status {
        throw std::runtime_error("sensor exploded");
    };
    CHECK_THROWS_AS(bt::tick(g, state, dispatch), std::runtime_error);
}

TEST_CASE("corrupted resume index is an internal-consistency error") {
    const bt::task_graph g = leaf_chain(bt::node_kind::sequence, 2);
    bt::run_state state;
    state.memory(g.root).resume_child = 7;
    const auto dispatch = [](const bt::node&) { return bt::tick_status::success; };
    CHECK_THROWS_AS(bt::tick(g, state, dispatch), bt::graph_error);
}

TEST_CASE("ticking an empty graph is an error") {
    bt::task_graph g;
    bt::run_state state;
    const auto dispatch = [](const bt::node&) { return bt::tick_status::success; };
    CHECK_THROWS_AS(bt::tick(g, state, dispatch), bt::graph_error);
}
