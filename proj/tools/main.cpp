#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "bench/bench.hpp"
#include "bench/report.hpp"
#include "bt/validate.hpp"
#include "bt/xml.hpp"
#include "executor/trace.hpp"
#include "planner/generate.hpp"
#include "planner/template_plan.hpp"
#include "sim/behaviors.hpp"
#include "sim/scene.hpp"
#include "util/config.hpp"
#include "util/hash.hpp"
#include "util/strings.hpp"

namespace {

// Exit codes: 0 success, 1 task/plan failure, 2 usage/config error,
// 3 backend transport error.
constexpr int exit_ok = 0;
constexpr int exit_task_failure = 1;
constexpr int exit_usage = 2;
constexpr int exit_transport = 3;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) { return sim::load_text_file(path); }

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw usage_error("cannot write file: " + path);
    }
    out << bytes;
}

behavior::library load_library(const std::string& manifest_path) {
    return sim::library_from_manifest(read_file(manifest_path));
}

sim::fault_profile faults_from(const util::config& conf,
                               const std::vector<std::string>& overrides) {
    sim::fault_profile faults;
    faults.p_grasp_slip = conf.get_double("p_grasp_slip", 0.0);
    faults.p_detect_miss = conf.get_double("p_detect_miss", 0.0);
    faults.p_vqa_error = conf.get_double("p_vqa_error", 0.0);
    faults.seed = static_cast<std::uint64_t>(conf.get_int("seed", 0));
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw usage_error("--faults expects KEY=VALUE, got " + kv);
        }
        const std::string key(util::trim(kv.substr(0, eq)));
        const std::string value(util::trim(kv.substr(eq + 1)));
        if (key == "seed") {
            const auto v = util::parse_u64(value);
            if (!v) {
                throw usage_error("bad seed value: " + value);
            }
            faults.seed = *v;
            continue;
        }
        const auto v = util::parse_double(value);
        if (!v || *v < 0.0 || *v > 1.0) {
            throw usage_error("fault probability out of [0,1]: " + kv);
        }
        if (key == "p_grasp_slip") {
            faults.p_grasp_slip = *v;
        } else if (key == "p_detect_miss") {
            faults.p_detect_miss = *v;
        } else if (key == "p_vqa_error") {
            faults.p_vqa_error = *v;
        } else {
            throw usage_error("unknown fault key: " + key);
        }
    }
    return faults;
}

std::unique_ptr<planner::backend> make_backend(const std::string& kind,
                                               const behavior::library& lib,
                                               const util::config& conf,
                                               const std::string& replay_dir_flag) {
    if (kind == "template") {
        return std::make_unique<planner::template_backend>(lib);
    }
    if (kind == "replay") {
        const std::string dir =
            !replay_dir_flag.empty() ? replay_dir_flag : conf.get("planner.replay_dir");
        if (dir.empty()) {
            throw usage_error("replay backend needs --replay-dir or planner.replay_dir");
        }
        return std::make_unique<planner::replay_backend>(std::filesystem::path(dir));
    }
    if (kind == "http") {
        const std::string endpoint = conf.get("planner.endpoint");
        if (endpoint.empty()) {
            throw usage_error("http backend needs planner.endpoint in the config");
        }
        return std::make_unique<planner::http_backend>(
            endpoint, conf.get("planner.model", "gpt-4"),
            conf.get("planner.token_env", "OPENAI_API_KEY"),
            conf.get_double("planner.temperature", 0.0));
    }
    throw usage_error("unknown backend: " + kind);
}

std::vector<sim::fault_profile> sweep_from(const util::config& conf) {
    const auto list = [&conf](const std::string& key) {
        std::vector<double> out;
        for (std::string_view part : util::split(conf.get(key, "0"), ',')) {
            const auto v = util::parse_double(part);
            if (!v || *v < 0.0 || *v > 1.0) {
                throw usage_error("bad probability in " + key);
            }
            out.push_back(*v);
        }
        return out;
    };
    if (!conf.has("bench.sweep.p_grasp_slip") && !conf.has("bench.sweep.p_detect_miss") &&
        !conf.has("bench.sweep.p_vqa_error")) {
        return {};
    }
    std::vector<sim::fault_profile> points;
    for (double slip : list("bench.sweep.p_grasp_slip")) {
        for (double miss : list("bench.sweep.p_detect_miss")) {
            for (double vqa : list("bench.sweep.p_vqa_error")) {
                sim::fault_profile p;
                p.p_grasp_slip = slip;
                p.p_detect_miss = miss;
                p.p_vqa_error = vqa;
                points.push_back(p);
            }
        }
    }
    return points;
}

int cmd_plan(const std::string& instruction, const std::string& library_path,
             const std::string& backend_kind, int max_repair, const std::string& out_path,
             const util::config& conf, const std::string& replay_dir) {
    const behavior::library lib = load_library(library_path);
    const auto be = make_backend(backend_kind, lib, conf, replay_dir);
    const planner::plan_outcome outcome =
        planner::generate_task_graph(instruction, lib, *be, max_repair);
    if (!outcome.ok()) {
        std::cerr << "plan failed after " << outcome.repair_rounds_used
                  << " repair round(s): " << outcome.validation.summary() << "\n";
        return exit_task_failure;
    }
    const std::string xml = bt::serialize(*outcome.graph);
    if (out_path.empty()) {
        std::cout << xml;
    } else {
        write_file(out_path, xml);
    }
    std::cerr << "plan ok (repair rounds used: " << outcome.repair_rounds_used << ")\n";
    return exit_ok;
}

int cmd_validate(const std::string& graph_path, const std::string& library_path) {
    const behavior::library lib = load_library(library_path);
    const bt::task_graph graph = bt::parse_xml(read_file(graph_path));
    const bt::validation_report report = bt::validate(graph, lib);
    for (const bt::issue& issue : report.issues) {
        std::cout << (issue.sev == bt::severity::error ? "error" : "warning");
        if (issue.node) {
            std::cout << " [node " << *issue.node << "]";
        }
        std::cout << ": " << issue.message << "\n";
    }
    std::cout << (report.ok ? "ok" : "invalid") << "\n";
    return report.ok ? exit_ok : exit_task_failure;
}

int cmd_run(const std::string& graph_path, const std::string& scene_path,
            const std::string& library_path, std::uint64_t seed,
            const std::vector<std::string>& fault_overrides, const std::string& trace_path,
            std::uint64_t max_ticks, bool seed_set, const util::config& conf) {
    const behavior::library lib = load_library(library_path);
    const std::string graph_text = read_file(graph_path);
    const bt::task_graph graph = bt::parse_xml(graph_text);
    const std::string scene_text = read_file(scene_path);
    sim::fault_profile faults = faults_from(conf, fault_overrides);
    if (seed_set) {
        faults.seed = seed;
    }
    sim::world_state world = sim::world_from_scene(scene_text, faults);

    executor::run_limits limits;
    limits.max_ticks = max_ticks;
    const executor::run_result result = executor::run(graph, lib, world, limits);

    if (!trace_path.empty()) {
        const executor::trace_meta meta{util::fnv1a64(scene_text),
                                        util::fnv1a64(bt::serialize(graph)), faults.seed};
        write_file(trace_path, executor::trace_text(result, meta));
    }
    std::cout << "outcome: " << executor::to_string(result.out)
              << "  ticks: " << result.ticks_used << "  world steps: " << world.step_count
              << "\n";
    return result.out == executor::outcome::done ? exit_ok : exit_task_failure;
}

int cmd_bench(const std::string& mode, const std::string& suite_path,
              const std::string& library_path, std::uint64_t n, std::uint64_t base_seed,
              const std::string& report_path, const std::string& backend_kind, int max_repair,
              const util::config& conf, const std::string& replay_dir) {
    const behavior::library lib = load_library(library_path);
    const bench::task_suite suite = bench::load_suite(suite_path);
    bench::summary_table table;
    if (mode == "plan") {
        const auto be = make_backend(backend_kind, lib, conf, replay_dir);
        table = bench::run_planning_benchmark(suite, lib, *be, n, max_repair, base_seed);
    } else {
        const std::vector<sim::fault_profile> sweep = sweep_from(conf);
        table = bench::run_execution_benchmark(suite, lib, n, sweep, base_seed);
    }
    std::cout << bench::to_text(table);
    if (!report_path.empty()) {
        std::filesystem::path stem(report_path);
        if (stem.extension() == ".csv" || stem.extension() == ".txt") {
            stem.replace_extension();
        }
        bench::emit_report(table, stem);
        std::cerr << "report written to " << stem.string() << ".{txt,csv}\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavior-tree task planning and execution sandbox"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");

    // plan
    auto* plan = app.add_subcommand("plan", "turn an instruction into a task graph");
    std::string instruction;
    std::string library_path;
    std::string backend_kind = "template";
    std::string out_path;
    std::string replay_dir;
    int max_repair = 2;
    plan->add_option("--instruction", instruction, "task instruction")->required();
    plan->add_option("--library", library_path, "behavior library manifest")->required();
    plan->add_option("--backend", backend_kind, "template | replay | http")
        ->check(CLI::IsMember({"template", "replay", "http"}));
    plan->add_option("--max-repair", max_repair, "repair rounds after a bad response")
        ->check(CLI::NonNegativeNumber);
    plan->add_option("--out", out_path, "write the XML here instead of stdout");
    plan->add_option("--replay-dir", replay_dir, "fixture directory for the replay backend");

    // validate
    auto* validate = app.add_subcommand("validate", "check a task graph against a library");
    std::string graph_path;
    validate->add_option("--graph", graph_path, "task graph XML file")->required();
    validate->add_option("--library", library_path, "behavior library manifest")->required();

    // run
    auto* run = app.add_subcommand("run", "execute a task graph on a scene");
    std::string scene_path;
    std::string trace_path;
    std::uint64_t seed = 0;
    std::uint64_t max_ticks = 10000;
    std::vector<std::string> fault_overrides;
    run->add_option("--graph", graph_path, "task graph XML file")->required();
    run->add_option("--scene", scene_path, "scene file")->required();
    run->add_option("--library", library_path, "behavior library manifest")->required();
    auto* seed_opt = run->add_option("--seed", seed, "rng seed");
    run->add_option("--faults", fault_overrides,
                    "fault overrides, e.g. p_grasp_slip=0.2 (repeatable)");
    run->add_option("--trace", trace_path, "write the execution trace here");
    run->add_option("--max-ticks", max_ticks, "tick budget");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_mode;
    std::string suite_path;
    std::string report_path;
    std::uint64_t n = 0;
    std::uint64_t base_seed = 42;
    bench_cmd->add_option("mode", bench_mode, "plan | exec")
        ->required()
        ->check(CLI::IsMember({"plan", "exec"}));
    bench_cmd->add_option("--suite", suite_path, "task suite file")->required();
    bench_cmd->add_option("--library", library_path, "behavior library manifest")->required();
    bench_cmd->add_option("-n,--trials", n, "trials per task (default: 50 plan, 5000 exec)");
    bench_cmd->add_option("--seeds", base_seed, "base seed for derived trial seeds");
    bench_cmd->add_option("--report", report_path, "report stem; writes stem.txt and stem.csv");
    bench_cmd->add_option("--backend", backend_kind, "template | replay | http (plan mode)")
        ->check(CLI::IsMember({"template", "replay", "http"}));
    bench_cmd->add_option("--max-repair", max_repair, "repair rounds (plan mode)")
        ->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--replay-dir", replay_dir, "fixture directory for the replay backend");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        util::config conf;
        if (!config_path.empty()) {
            conf = util::config::load(config_path);
        }
        if (plan->parsed()) {
            return cmd_plan(instruction, library_path, backend_kind, max_repair, out_path, conf,
                            replay_dir);
        }
        if (validate->parsed()) {
            return cmd_validate(graph_path, library_path);
        }
        if (run->parsed()) {
            return cmd_run(graph_path, scene_path, library_path, seed, fault_overrides,
                           trace_path, max_ticks, seed_opt->count() > 0, conf);
        }
        if (bench_cmd->parsed()) {
            if (n == 0) {
                n = bench_mode == "plan" ? 50 : 5000;
            }
            return cmd_bench(bench_mode, suite_path, library_path, n, base_seed, report_path,
                             backend_kind, max_repair, conf, replay_dir);
        }
        return exit_usage;
    } catch (const planner::transport_error& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return exit_transport;
    } catch (const bt::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_task_failure;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const util::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const planner::backend_config_error& e) {
        std::cerr << "backend config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
