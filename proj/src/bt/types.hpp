#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bt {

enum class tick_status { success, failure, running };

const char* to_string(tick_status s);
std::optional<tick_status> tick_status_from(std::string_view s);

using node_id = std::uint32_t;
inline constexpr node_id invalid_node = std::numeric_limits<node_id>::max();

enum class node_kind { sequence, fallback, retry, action, condition };

const char* to_string(node_kind k);

inline bool is_leaf(node_kind k) { return k == node_kind::action || k == node_kind::condition; }

// Leaf parameters come from XML attributes; the ordered map gives canonical
// (alphabetical) serialization for free.
using param_map = std::map<std::string, std::string>;

struct node {
    node_id id = invalid_node;
    node_kind kind = node_kind::action;
    std::vector<node_id> children;  // control nodes only
    int max_attempts = 0;           // retry only, >= 1
    std::string name;               // leaf behavior / condition name
    param_map params;               // leaf attributes beyond `name`
};

// Internal-consistency failures (bad node ids, corrupted run state).
struct graph_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct task_graph {
    std::string name;
    node_id root = invalid_node;
    std::vector<node> nodes;  // indexed by id

    const node& at(node_id id) const;
    bool empty() const { return nodes.empty(); }
};

// Equality is structural from the roots; node numbering does not matter.
bool structurally_equal(const task_graph& a, const task_graph& b);
inline bool operator==(const task_graph& a, const task_graph& b) {
    return structurally_equal(a, b);
}

// Builds graphs bottom-up: create leaves first, then compose.
class graph_builder {
  public:
    explicit graph_builder(std::string name = {});

    node_id sequence(std::vector<node_id> children);
    node_id fallback(std::vector<node_id> children);
    node_id retry(int max_attempts, node_id child);
    node_id action(std::string name, param_map params = {});
    node_id condition(std::string name, param_map params = {});

    task_graph root(node_id id) &&;

  private:
    node_id add(node n);
    task_graph graph_;
};

struct node_memory {
    std::uint32_t resume_child = 0;  // sequence / fallback
    int attempts_used = 0;           // retry
};

class run_state {
  public:
    node_memory& memory(node_id id) { return memory_[id]; }
    const node_memory* find(node_id id) const;
    void reset_subtree(const task_graph& graph, node_id id);
    void clear() { memory_.clear(); }

    std::optional<tick_status> last_status;

  private:
    std::unordered_map<node_id, node_memory> memory_;
};

}  // namespace bt
