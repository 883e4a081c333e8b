#include "bench/report.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "util/strings.hpp"

namespace bench {

namespace {

const char* const csv_header = "task,executable,success,plan_time,exec_ticks";

std::string rate_with_ci(double rate, std::uint64_t n) {
    const interval ci = wilson99(rate, n);
    return util::format_double(rate) + " [" + util::format_double(ci.lo) + "," +
           util::format_double(ci.hi) + "]";
}

}  // namespace

std::string to_csv(const summary_table& table) {
    std::string out = csv_header;
    out += "\n";
    for (const summary_row& row : table.rows) {
        out += row.key + "," + util::format_double(row.executable) + "," +
               util::format_double(row.success) + "," + util::format_double(row.plan_time) + "," +
               util::format_double(row.exec_ticks) + "\n";
    }
    return out;
}

std::string to_text(const summary_table& table) {
    std::vector<std::array<std::string, 5>> cells;
    cells.push_back({"task", "executable", "oracle-success", "plan_time_s", "exec_ticks"});
    for (const summary_row& row : table.rows) {
        cells.push_back({row.key, rate_with_ci(row.executable, table.trials),
                         rate_with_ci(row.success, table.trials),
                         util::format_double(row.plan_time), util::format_double(row.exec_ticks)});
    }
    std::array<std::size_t, 5> width{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 5; ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }

    std::string out = "# " + table.kind + " benchmark  backend=" + table.backend +
                      "  n=" + std::to_string(table.trials) +
                      "  base_seed=" + std::to_string(table.base_seed) + "\n";
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 5; ++c) {
            out += row[c];
            if (c + 1 < 5) {
                out.append(width[c] - row[c].size() + 2, ' ');
            }
        }
        out += "\n";
    }
    for (const std::string& note : table.notes) {
        out += "! " + note + "\n";
    }
    return out;
}

std::vector<summary_row> parse_csv(std::string_view csv) {
    std::vector<summary_row> rows;
    bool saw_header = false;
    int line_no = 0;
    for (std::string_view line : util::split(csv, '\n')) {
        ++line_no;
        if (util::trim(line).empty()) {
            continue;
        }
        if (!saw_header) {
            if (util::trim(line) != csv_header) {
                throw std::invalid_argument("csv line 1: unexpected header");
            }
            saw_header = true;
            continue;
        }
        const auto fields = util::split(line, ',');
        if (fields.size() != 5) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                        ": expected 5 fields");
        }
        summary_row row;
        row.key = std::string(fields[0]);
        const auto executable = util::parse_double(fields[1]);
        const auto success = util::parse_double(fields[2]);
        const auto plan_time = util::parse_double(fields[3]);
        const auto exec_ticks = util::parse_double(fields[4]);
        if (!executable || !success || !plan_time || !exec_ticks) {
            throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number");
        }
        row.executable = *executable;
        row.success = *success;
        row.plan_time = *plan_time;
        row.exec_ticks = *exec_ticks;
        rows.push_back(std::move(row));
    }
    if (!saw_header) {
        throw std::invalid_argument("csv has no header");
    }
    return rows;
}

void emit_report(const summary_table& table, const std::filesystem::path& stem) {
    const auto write_file = [](const std::filesystem::path& path, const std::string& bytes) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write report file: " + path.string());
        }
        out << bytes;
        if (!out) {
            throw std::runtime_error("short write to report file: " + path.string());
        }
    };
    std::filesystem::path txt = stem;
    txt += ".txt";
    std::filesystem::path csv = stem;
    csv += ".csv";
    write_file(txt, to_text(table));
    write_file(csv, to_csv(table));
}

}  // namespace bench
