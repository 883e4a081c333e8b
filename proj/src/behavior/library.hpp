#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "bt/types.hpp"
#include "bt/validate.hpp"
#include "sim/world.hpp"

namespace behavior {

enum class kind { action, perception };

const char* to_string(kind k);

// Name, type, and the semantic description the planner prompt lists.
struct tag {
    std::string name;
    kind k = kind::action;
    std::string description;
};

// What a perception behavior read this call. monostate means "nothing seen"
// (e.g. a detection miss) as opposed to the sensor being unavailable.
using reading = std::variant<std::monostate, double, bool, sim::pose>;

std::string reading_repr(const reading& r);

struct perception_result {
    bool available = true;
    reading value;
    std::string detail;  // set when unavailable
};

using action_fn = std::function<bt::tick_status(const bt::param_map&, sim::world_state&)>;
using perception_fn = std::function<perception_result(const bt::param_map&, sim::world_state&)>;

struct binding {
    tag t;
    action_fn act;        // set for actions
    perception_fn sense;  // set for perceptions
};

using predicate_fn = std::function<bool(const reading&)>;

enum class fusion { all, any };

// One perception behavior inside a condition. Member params are merged over
// the condition leaf's params; "{key}" placeholders in member param values
// are substituted from the leaf params (e.g. a question template naming the
// target object).
struct condition_member {
    std::string behavior;
    bt::param_map params;
    predicate_fn pred;
};

struct condition_spec {
    std::string name;
    std::vector<condition_member> members;
    fusion mode = fusion::all;
    bool verifies_grasp = false;  // reads the grip sensor; see bt::behavior_catalog
};

// Raised on dispatch of unresolvable or kind-mismatched leaves. Distinct from
// tick_status::failure: this aborts the run.
struct execution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One record per dispatched leaf: behavior name, parameters, outcome, and the
// world step index it landed on.
struct dispatch_event {
    std::string behavior;
    bt::param_map params;
    bt::tick_status status = bt::tick_status::failure;
    std::uint64_t world_step = 0;
    std::string detail;
};

class library final : public bt::behavior_catalog {
  public:
    void register_action(tag t, action_fn fn);
    void register_perception(tag t, perception_fn fn);
    void register_condition(condition_spec spec);

    const binding* find(const std::string& name) const;
    const condition_spec* find_condition(const std::string& name) const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Deterministic prompt listing: header, then `name | kind | tag` lines,
    // actions first, each group alphabetical.
    std::string tags_prompt_block() const;

    std::vector<std::string> condition_names() const;
    const std::map<std::string, binding>& entries() const { return entries_; }

    // bt::behavior_catalog
    leaf_kind lookup(const std::string& name) const override;
    bool is_held_check(const std::string& condition_name) const override;

  private:
    void check_new_name(const std::string& name) const;

    std::map<std::string, binding> entries_;
    std::map<std::string, condition_spec> conditions_;
};

// Evaluates every member of a registered condition and fuses the results:
// all -> conjunction, any -> disjunction. Never returns running. Unavailable
// members count as false and are noted in `detail` rather than raised.
bt::tick_status evaluate_condition(const library& lib, const std::string& name,
                                   const bt::param_map& leaf_params, sim::world_state& world,
                                   std::string* detail = nullptr);

// Runs a validated Action or Condition leaf against the world and appends one
// dispatch_event to `trace`. Unresolvable names and kind mismatches throw
// execution_error (unreachable after bt::validate).
bt::tick_status dispatch(const library& lib, const bt::node& leaf, sim::world_state& world,
                         std::vector<dispatch_event>& trace);

// Library manifest: `name|kind|tag` per line, the byte format shared by the
// prompt block source and the CLI.
std::string manifest_text(const library& lib);

}  // namespace behavior
