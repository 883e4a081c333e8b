#pragma once

#include "bt/types.hpp"

namespace bt {

// Resolves a leaf to its status for this tick. A thrown exception aborts the
// tick and propagates (an execution fault, distinct from tick_status::failure).
using leaf_dispatch = std::function<tick_status(const node&)>;

// One evaluation pass from the root, with memory:
//  - Sequence resumes at the child that last returned running, fails on the
//    first failing child, succeeds when all children succeed.
//  - Fallback is the mirror: succeeds on the first success, fails when all
//    children fail.
//  - Retry ticks its single child; each child failure consumes one attempt,
//    resets the child's subtree memory and yields running until max_attempts
//    attempts have failed, which yields failure.
//  - A node that returns success or failure resets its own memory, so a later
//    tick re-enters it from scratch.
// Leaves return whatever `dispatch` returns.
tick_status tick(const task_graph& graph, run_state& state, const leaf_dispatch& dispatch);

}  // namespace bt
