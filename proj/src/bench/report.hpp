#pragma once

#include <filesystem>

#include "bench/bench.hpp"

namespace bench {

// Fixed CSV schema: header `task,executable,success,plan_time,exec_ticks`,
// one row per summary row, shortest round-trip number formatting.
std::string to_csv(const summary_table& table);

// Aligned text table with 99% confidence intervals on the rate columns.
// The success column is labelled oracle-success: plans are graded by
// fault-free execution, not by a human.
std::string to_text(const summary_table& table);

// Parses to_csv output back into rows (numbers round-trip exactly).
std::vector<summary_row> parse_csv(std::string_view csv);

// Writes <stem>.txt and <stem>.csv; byte-deterministic for equal tables.
void emit_report(const summary_table& table, const std::filesystem::path& stem);

}  // namespace bench
