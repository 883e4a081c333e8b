#pragma once

#include <string>
#include <string_view>

#include "bt/types.hpp"

namespace bt {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed XML. Carries the 1-based position of the offending character.
struct syntax_error final : parse_error {
    syntax_error(std::string message, int line, int column);
    int line;
    int column;
};

// Well-formed XML that does not fit the task-graph schema. Carries the
// offending element so a repair prompt can point at it.
struct schema_error final : parse_error {
    schema_error(std::string message, std::string element);
    std::string element;
};

// Reads a task-graph document:
//   <TaskGraph name="...">      exactly one child element
//     <Sequence> / <Fallback>   one or more children
//     <Retry num_attempts="3">  exactly one child
//     <Action name="..." .../>  leaf; extra attributes become params
//     <Condition name="..."/>   leaf; extra attributes become params
//   </TaskGraph>
// Unknown elements and unknown attributes on non-leaf elements are schema
// errors. Node ids are assigned in document order.
task_graph parse_xml(std::string_view text);

// Canonical document: 2-space indent, LF endings, attributes ordered
// name, num_attempts, then params alphabetically. Byte-identical for
// structurally equal graphs. Throws std::invalid_argument if the graph
// violates structural invariants.
std::string serialize(const task_graph& graph);

// Escaping used by the canonical form; exposed for callers that embed
// free text next to markup.
std::string escape_attribute(std::string_view raw);
std::string escape_text(std::string_view raw);

// Decodes the entity references the parser accepts (test hook).
std::string unescape_text(std::string_view escaped);

}  // namespace bt
