#pragma once

#include <string>
#include <vector>

#include "bt/types.hpp"

namespace bt {

enum class severity { error, warning };

struct issue {
    severity sev = severity::error;
    std::optional<node_id> node;
    std::string message;
};

struct validation_report {
    bool ok = true;  // true iff no error-severity issues
    std::vector<issue> issues;

    std::string summary() const;  // "; "-joined messages, errors first
};

// What the validator needs to know about a behavior library. Implemented by
// behavior::library; keeps this module independent of the registry.
class behavior_catalog {
  public:
    enum class leaf_kind { action, perception, condition, missing };

    virtual ~behavior_catalog() = default;
    virtual leaf_kind lookup(const std::string& name) const = 0;
    // True when the named condition verifies a grasp (reads the grip sensor).
    virtual bool is_held_check(const std::string& condition_name) const = 0;
};

// Tree-shape invariants alone: single rooted tree, arity per kind,
// max_attempts >= 1, leaves named, no reserved param keys.
std::vector<issue> structural_issues(const task_graph& graph);

// Structural issues plus library resolution (unknown names, kind mismatches)
// as errors; unverified Grasp and perception-only Retry subtrees as warnings.
validation_report validate(const task_graph& graph, const behavior_catalog& catalog);

}  // namespace bt
