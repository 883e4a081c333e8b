#include "behavior/library.hpp"

#include "util/strings.hpp"

namespace behavior {

const char* to_string(kind k) { return k == kind::action ? "action" : "perception"; }

std::string reading_repr(const reading& r) {
    if (std::holds_alternative<std::monostate>(r)) {
        return "miss";
    }
    if (const double* d = std::get_if<double>(&r)) {
        return util::format_double(*d);
    }
    if (const bool* b = std::get_if<bool>(&r)) {
        return *b ? "yes" : "no";
    }
    const sim::pose& p = std::get<sim::pose>(r);
    return "(" + util::format_double(p.x) + "," + util::format_double(p.y) + "," +
           util::format_double(p.z) + "," + util::format_double(p.yaw) + ")";
}

void library::check_new_name(const std::string& name) const {
    if (name.empty()) {
        throw std::invalid_argument("behavior name must be non-empty");
    }
    if (entries_.count(name) || conditions_.count(name)) {
        throw std::invalid_argument("behavior already registered: " + name);
    }
}

void library::register_action(tag t, action_fn fn) {
    check_new_name(t.name);
    if (t.description.empty()) {
        throw std::invalid_argument("behavior tag must be non-empty: " + t.name);
    }
    if (!fn) {
        throw std::invalid_argument("action binding must be callable: " + t.name);
    }
    t.k = kind::action;
    const std::string name = t.name;
    entries_[name] = binding{std::move(t), std::move(fn), nullptr};
}

void library::register_perception(tag t, perception_fn fn) {
    check_new_name(t.name);
    if (t.description.empty()) {
        throw std::invalid_argument("behavior tag must be non-empty: " + t.name);
    }
    if (!fn) {
        throw std::invalid_argument("perception binding must be callable: " + t.name);
    }
    t.k = kind::perception;
    const std::string name = t.name;
    entries_[name] = binding{std::move(t), nullptr, std::move(fn)};
}

void library::register_condition(condition_spec spec) {
    check_new_name(spec.name);
    if (spec.members.empty()) {
        throw std::invalid_argument("condition must have at least one member: " + spec.name);
    }
    for (const condition_member& m : spec.members) {
        const binding* b = find(m.behavior);
        if (b == nullptr || b->t.k != kind::perception) {
            throw std::invalid_argument("condition " + spec.name +
                                        " references a non-perception behavior: " + m.behavior);
        }
        if (!m.pred) {
            throw std::invalid_argument("condition member needs a predicate: " + m.behavior);
        }
    }
    const std::string name = spec.name;
    conditions_[name] = std::move(spec);
}

const binding* library::find(const std::string& name) const {
    const auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

const condition_spec* library::find_condition(const std::string& name) const {
    const auto it = conditions_.find(name);
    return it == conditions_.end() ? nullptr : &it->second;
}

std::string library::tags_prompt_block() const {
    std::string out = "name | kind | tag\n";
    for (kind want : {kind::action, kind::perception}) {
        for (const auto& [name, b] : entries_) {
            if (b.t.k == want) {
                out += name + " | " + to_string(b.t.k) + " | " + b.t.description + "\n";
            }
        }
    }
    return out;
}

std::vector<std::string> library::condition_names() const {
    std::vector<std::string> out;
    out.reserve(conditions_.size());
    for (const auto& [name, spec] : conditions_) {
        out.push_back(name);
    }
    return out;
}

library::leaf_kind library::lookup(const std::string& name) const {
    if (conditions_.count(name)) {
        return leaf_kind::condition;
    }
    const auto it = entries_.find(name);
    if (it == entries_.end()) {
        return leaf_kind::missing;
    }
    return it->second.t.k == kind::action ? leaf_kind::action : leaf_kind::perception;
}

bool library::is_held_check(const std::string& condition_name) const {
    const condition_spec* spec = find_condition(condition_name);
    return spec != nullptr && spec->verifies_grasp;
}

namespace {

// "{key}" placeholders in member param values, filled from the leaf params.
std::string substitute_placeholders(const std::string& value, const bt::param_map& leaf_params) {
    std::string out;
    std::size_t pos = 0;
    while (pos < value.size()) {
        const std::size_t open = value.find('{', pos);
        if (open == std::string::npos) {
            out += value.substr(pos);
            break;
        }
        const std::size_t close = value.find('}', open);
        if (close == std::string::npos) {
            out += value.substr(pos);
            break;
        }
        out += value.substr(pos, open - pos);
        const std::string key = value.substr(open + 1, close - open - 1);
        const auto it = leaf_params.find(key);
        if (it != leaf_params.end()) {
            out += it->second;
        } else {
            out += value.substr(open, close - open + 1);  // leave unresolved
        }
        pos = close + 1;
    }
    return out;
}

bt::param_map member_params(const condition_member& member, const bt::param_map& leaf_params) {
    bt::param_map merged = leaf_params;
    for (const auto& [key, value] : member.params) {
        merged[key] = substitute_placeholders(value, leaf_params);
    }
    return merged;
}

}  // namespace

bt::tick_status evaluate_condition(const library& lib, const std::string& name,
                                   const bt::param_map& leaf_params, sim::world_state& world,
                                   std::string* detail) {
    const condition_spec* spec = lib.find_condition(name);
    if (spec == nullptr) {
        throw execution_error("unknown condition: " + name);
    }
    bool all = true;
    bool any = false;
    std::vector<std::string> parts;
    for (const condition_member& member : spec->members) {
        bool ok = false;
        const binding* b = lib.find(member.behavior);
        if (b == nullptr || !b->sense) {
            parts.push_back(member.behavior + ":unavailable");
        } else {
            const perception_result res = b->sense(member_params(member, leaf_params), world);
            if (!res.available) {
                // Degraded sensing reads as false; the run recovers or fails,
                // it does not crash.
                parts.push_back(member.behavior + ":unavailable(" + res.detail + ")");
            } else {
                ok = member.pred(res.value);
                parts.push_back(member.behavior + ":" + reading_repr(res.value) +
                                (ok ? ":pass" : ":fail"));
            }
        }
        all = all && ok;
        any = any || ok;
    }
    if (detail != nullptr) {
        *detail = util::join(parts, " ");
    }
    const bool fused = spec->mode == fusion::all ? all : any;
    return fused ? bt::tick_status::success : bt::tick_status::failure;
}

bt::tick_status dispatch(const library& lib, const bt::node& leaf, sim::world_state& world,
                         std::vector<dispatch_event>& trace) {
    dispatch_event event;
    event.behavior = leaf.name;
    event.params = leaf.params;

    if (leaf.kind == bt::node_kind::action) {
        const binding* b = lib.find(leaf.name);
        if (b == nullptr) {
            throw execution_error("unknown behavior: " + leaf.name);
        }
        if (!b->act) {
            throw execution_error(leaf.name + " is not an action behavior");
        }
        event.status = b->act(leaf.params, world);
    } else if (leaf.kind == bt::node_kind::condition) {
        if (lib.find_condition(leaf.name) == nullptr) {
            const binding* b = lib.find(leaf.name);
            if (b != nullptr && b->t.k == kind::action) {
                throw execution_error(leaf.name + " is an action, not a condition");
            }
            throw execution_error("unknown condition: " + leaf.name);
        }
        event.status = evaluate_condition(lib, leaf.name, leaf.params, world, &event.detail);
    } else {
        throw execution_error("dispatch on a non-leaf node");
    }

    event.world_step = world.step_count;
    trace.push_back(event);
    return event.status;
}

std::string manifest_text(const library& lib) {
    std::string out;
    for (kind want : {kind::action, kind::perception}) {
        for (const auto& [name, b] : lib.entries()) {
            if (b.t.k == want) {
                out += name + "|" + to_string(b.t.k) + "|" + b.t.description + "\n";
            }
        }
    }
    return out;
}

}  // namespace behavior
