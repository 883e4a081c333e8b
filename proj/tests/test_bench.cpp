#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "bench/report.hpp"
#include "sim/behaviors.hpp"
#include "sim/scene.hpp"

namespace {

struct temp_dir {
    std::filesystem::path path;
    temp_dir() {
        path = std::filesystem::temp_directory_path() /
               ("btplan_bench_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~temp_dir() { std::filesystem::remove_all(path); }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const char* const desk_scene =
    "robot|0,0,0,0\n"
    "object|soup_can_1|soup_can|2.0,0.3,0.75,0|1\n"
    "object|cracker_box_1|cracker_box|2.2,-0.2,0.75,0|1\n";

bench::task_suite small_suite(const temp_dir& dir) {
    write_file(dir.path / "desk.scene", desk_scene);
    const std::string suite_text =
        "pick_object|Pick the soup can|desk.scene|0.2,0,0|0\n"
        "pick_object_fr|Pick the soup can. Detect and recover the failure during the task."
        "|desk.scene|0.2,0,0|1\n";
    return bench::parse_suite(suite_text, dir.path);
}

const bench::summary_row& row_for(const bench::summary_table& t, std::string_view prefix) {
    for (const bench::summary_row& row : t.rows) {
        if (row.key.starts_with(prefix)) {
            return row;
        }
    }
    REQUIRE(false);
    return t.rows.front();
}

}  // namespace

TEST_CASE("suite parsing enforces the record shape") {
    CHECK_THROWS_AS(bench::parse_suite("", "."), bench::suite_error);
    CHECK_THROWS_AS(bench::parse_suite("a|b|c|0,0,0\n", "."), bench::suite_error);
    CHECK_THROWS_AS(bench::parse_suite("a|b|c|2,0,0|0\n", "."), bench::suite_error);
    CHECK_THROWS_AS(bench::parse_suite("a|b|c|0,0,0|maybe\n", "."), bench::suite_error);
    CHECK_THROWS_AS(bench::parse_suite("a|i|s|0,0,0|0\na|i|s|0,0,0|0\n", "."),
                    bench::suite_error);
    const bench::task_suite ok =
        bench::parse_suite("# comment\nt1|Pick the can|scene|0.1,0.2,0.3,7|1\n", "base");
    REQUIRE(ok.entries.size() == 1);
    CHECK(ok.entries[0].faults.p_vqa_error == 0.3);
    CHECK(ok.entries[0].faults.seed == 7);
    CHECK(ok.entries[0].expects_fr);
}

TEST_CASE("planning benchmark with the template backend is 100/100") {
    temp_dir dir;
    const bench::task_suite suite = small_suite(dir);
    const behavior::library lib = sim::standard_library();
    planner::template_backend backend(lib);
    const bench::summary_table table =
        bench::run_planning_benchmark(suite, lib, backend, 20);
    REQUIRE(table.rows.size() == 2);
    for (const bench::summary_row& row : table.rows) {
        CHECK(row.executable == 1.0);
        CHECK(row.success == 1.0);
        CHECK(row.exec_ticks > 0.0);
    }
    CHECK(table.kind == "plan");
    CHECK(table.backend == "template");
}

TEST_CASE("planning benchmark counts replay fixture validity (9 of 10 -> 0.9)") {
    temp_dir dir;
    write_file(dir.path / "desk.scene", desk_scene);
    const bench::task_suite suite =
        bench::parse_suite("pick_object|Pick the soup can|desk.scene|0,0,0|0\n", dir.path);
    const behavior::library lib = sim::standard_library();

    const std::string valid =
        "<TaskGraph name=\"pick\"><Sequence>"
        "<Action name=\"Approach\" target=\"soup_can\"/>"
        "<Action name=\"Grasp\" target=\"soup_can\"/>"
        "</Sequence></TaskGraph>";
    std::vector<std::string> fixtures(10, valid);
    fixtures[4] = "not xml";
    planner::replay_backend backend(fixtures);

    // max_repair_rounds = 0: one response per trial, exactly ten consumed
    const bench::summary_table table =
        bench::run_planning_benchmark(suite, lib, backend, 10, 0);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].executable == 0.9);
    CHECK(table.rows[0].success == 0.9);
}

TEST_CASE("backend failures mark trials non-executable without aborting the batch") {
    temp_dir dir;
    const bench::task_suite suite = small_suite(dir);
    const behavior::library lib = sim::standard_library();
    planner::replay_backend backend(std::vector<std::string>{"<TaskGraph><Action name=\"Homing\"/></TaskGraph>"});
    // second trial exhausts the fixtures -> backend_config_error -> noted
    const bench::summary_table table =
        bench::run_planning_benchmark(suite, lib, backend, 2, 0);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].executable == 0.5);
    CHECK(!table.notes.empty());
}

TEST_CASE("execution benchmark shows the recovery uplift at slip 0.2") {
    temp_dir dir;
    const bench::task_suite suite = small_suite(dir);
    const behavior::library lib = sim::standard_library();
    const bench::summary_table table = bench::run_execution_benchmark(suite, lib, 800);
    REQUIRE(table.rows.size() == 2);
    const bench::summary_row& plain = row_for(table, "pick_object@");
    const bench::summary_row& fr = row_for(table, "pick_object_fr@");
    // analytic: 1 - p vs 1 - p^3 at p = 0.2
    CHECK(std::abs(plain.success - 0.8) < 0.05);
    CHECK(std::abs(fr.success - 0.992) < 0.02);
    CHECK(fr.success > plain.success);
    CHECK(fr.exec_ticks >= plain.exec_ticks);
}

TEST_CASE("execution benchmark sweeps fault points and groups rows per point") {
    temp_dir dir;
    const bench::task_suite suite = small_suite(dir);
    const behavior::library lib = sim::standard_library();
    std::vector<sim::fault_profile> sweep(2);
    sweep[0].p_grasp_slip = 0.1;
    sweep[1].p_grasp_slip = 0.3;
    const bench::summary_table table =
        bench::run_execution_benchmark(suite, lib, 300, sweep);
    REQUIRE(table.rows.size() == 4);
    CHECK(table.rows[0].key == "pick_object@slip=0.1;miss=0;vqa=0");
    CHECK(table.rows[1].key == "pick_object_fr@slip=0.1;miss=0;vqa=0");
    CHECK(table.rows[2].key == "pick_object@slip=0.3;miss=0;vqa=0");
    CHECK(table.rows[3].key == "pick_object_fr@slip=0.3;miss=0;vqa=0");
    // degradation is monotone in the slip probability
    CHECK(table.rows[0].success >= table.rows[2].success);
    CHECK(table.rows[1].success >= table.rows[3].success);
}

TEST_CASE("success degrades monotonically over a 3x3 fault grid") {
    temp_dir dir;
    write_file(dir.path / "desk.scene", desk_scene);
    const bench::task_suite suite = bench::parse_suite(
        "pick_object_fr|Pick the soup can. Detect and recover the failure during the task."
        "|desk.scene|0,0,0|1\n",
        dir.path);
    const behavior::library lib = sim::standard_library();

    const double slips[3] = {0.1, 0.2, 0.3};
    const double vqas[3] = {0.0, 0.05, 0.1};
    std::vector<sim::fault_profile> sweep;
    for (const double slip : slips) {
        for (const double vqa : vqas) {
            sim::fault_profile p;
            p.p_grasp_slip = slip;
            p.p_vqa_error = vqa;
            sweep.push_back(p);
        }
    }
    const bench::summary_table table =
        bench::run_execution_benchmark(suite, lib, 5000, sweep, 3);
    REQUIRE(table.rows.size() == 9);
    double rate[3][3];
    for (int s = 0; s < 3; ++s) {
        for (int v = 0; v < 3; ++v) {
            rate[s][v] = table.rows[static_cast<std::size_t>(s * 3 + v)].success;
        }
    }
    // non-increasing along each axis; the slack absorbs sampling noise far
    // below the analytic slopes
    const double slack = 0.003;
    for (int s = 0; s < 3; ++s) {
        for (int v = 0; v < 2; ++v) {
            CHECK(rate[s][v] >= rate[s][v + 1] - slack);
        }
    }
    for (int v = 0; v < 3; ++v) {
        for (int s = 0; s < 2; ++s) {
            CHECK(rate[s][v] >= rate[s + 1][v] - slack);
        }
    }
    // and the corners drop overall
    CHECK(rate[0][0] > rate[2][2]);
}

TEST_CASE("all-zero fault profiles succeed everywhere") {
    temp_dir dir;
    write_file(dir.path / "desk.scene", desk_scene);
    const bench::task_suite suite = bench::parse_suite(
        "pick_object|Pick the soup can|desk.scene|0,0,0|0\n"
        "grasp_object|Grasp the cracker box|desk.scene|0,0,0|0\n",
        dir.path);
    const behavior::library lib = sim::standard_library();
    const bench::summary_table table = bench::run_execution_benchmark(suite, lib, 50);
    for (const bench::summary_row& row : table.rows) {
        CHECK(row.success == 1.0);
    }
}

TEST_CASE("reports are deterministic, round-trip through CSV, and hit the fixed header") {
    temp_dir dir;
    const bench::task_suite suite = small_suite(dir);
    const behavior::library lib = sim::standard_library();
    const bench::summary_table table = bench::run_execution_benchmark(suite, lib, 100);
    const bench::summary_table again = bench::run_execution_benchmark(suite, lib, 100);
    CHECK(table == again);

    const std::string csv = bench::to_csv(table);
    CHECK(csv.starts_with("task,executable,success,plan_time,exec_ticks\n"));
    CHECK(bench::to_csv(again) == csv);
    CHECK(bench::to_text(again) == bench::to_text(table));

    const std::vector<bench::summary_row> parsed = bench::parse_csv(csv);
    CHECK(parsed == table.rows);

    bench::emit_report(table, dir.path / "report");
    bench::emit_report(again, dir.path / "report2");
    const std::string a = sim::load_text_file(dir.path / "report.csv");
    const std::string b = sim::load_text_file(dir.path / "report2.csv");
    CHECK(a == b);
    CHECK(a == csv);
    CHECK(sim::load_text_file(dir.path / "report.txt") == bench::to_text(table));
}

TEST_CASE("wilson intervals contain the point estimate and stay in [0,1]") {
    for (const double rate : {0.0, 0.1, 0.5, 0.9, 1.0}) {
        for (const std::uint64_t n : {1ull, 10ull, 1000ull}) {
            const bench::interval ci = bench::wilson99(rate, n);
            CHECK(ci.lo >= 0.0);
            CHECK(ci.hi <= 1.0);
            CHECK(ci.lo <= rate + 1e-12);
            CHECK(ci.hi >= rate - 1e-12);
        }
    }
    const bench::interval degenerate = bench::wilson99(0.5, 0);
    CHECK(degenerate.lo == 0.0);
    CHECK(degenerate.hi == 1.0);
}

TEST_CASE("missing scenes are skipped with a note") {
    temp_dir dir;
    const bench::task_suite suite =
        bench::parse_suite("ghost|Pick the soup can|missing.scene|0,0,0|0\n", dir.path);
    const behavior::library lib = sim::standard_library();
    const bench::summary_table table = bench::run_execution_benchmark(suite, lib, 5);
    CHECK(table.rows.empty());
    REQUIRE(!table.notes.empty());
    CHECK(table.notes[0].find("ghost") != std::string::npos);
}
