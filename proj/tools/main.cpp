#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ndsort/bench.hpp"
#include "ndsort/offline.hpp"
#include "ndsort/problems.hpp"
#include "ndsort/verify.hpp"

namespace fs = std::filesystem;
using namespace ndsort;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // verification or benchmark failure
constexpr int kExitUsage = 2;     // bad flags, bad inputs, parse errors

std::string self_executable(const char* argv0) {
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) return exe.string();
    return argv0;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    out += "'";
    return out;
}

struct SynthArgs {
    std::string problem;
    std::size_t k = 2;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t init = 5000;
    std::size_t ins = 1000;
};

int run_synth(const SynthArgs& args) {
    const Problem problem = Problem::make(parse_problem(args.problem), args.k);
    const Dataset dataset =
        synthesize_dataset(problem, args.seed, args.init, args.ins);
    save_dataset(dataset, args.out);
    std::cout << "wrote " << args.out << ": " << problem_title(problem.id())
              << " k=" << dataset.objectives << " init="
              << dataset.initial.size() << " ins=" << dataset.insertions.size()
              << " seed=" << dataset.seed << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string dataset_path;
    std::string strategy;
    std::size_t threads = 1;
    std::size_t warmup = 4;
    std::size_t iters = 4;
    std::size_t forks = 2;
    std::uint64_t seed = 1;
    double min_seconds = 1.0;
    std::string out;
    std::string label;
    std::string fork_mode = "process";
    bool debug_checks = false;
    // internal fork-child protocol
    bool emit_samples = false;
    std::size_t fork_index = 0;
    std::string self_exe;
};

BenchConfig to_config(const BenchArgs& args) {
    BenchConfig cfg;
    cfg.strategy = parse_strategy(args.strategy);
    cfg.threads = args.threads;
    cfg.warmup_iterations = args.warmup;
    cfg.measure_iterations = args.iters;
    cfg.min_iteration_seconds = args.min_seconds;
    cfg.forks = args.forks;
    cfg.seed = args.seed;
    cfg.debug_checks = args.debug_checks;
    return cfg;
}

void print_sample(const IterationSample& s) {
    std::printf("SAMPLE %zu %zu %.3f %.6f %.6f %llu %llu %d\n", s.fork,
                s.iteration, s.total_us, s.mean_insert_us, s.stddev_us,
                (unsigned long long)s.cas_retries, (unsigned long long)s.trims,
                s.verified ? 1 : 0);
    std::fflush(stdout);
}

bool parse_sample_line(const std::string& line, IterationSample& s) {
    std::istringstream is(line);
    std::string tag;
    int verified = 0;
    if (!(is >> tag >> s.fork >> s.iteration >> s.total_us >>
          s.mean_insert_us >> s.stddev_us >> s.cas_retries >> s.trims >>
          verified) ||
        tag != "SAMPLE") {
        return false;
    }
    s.verified = verified != 0;
    return true;
}

/// Spawns one fork as a separate process of this same binary and collects
/// its emitted samples.
std::vector<IterationSample> spawn_fork(const BenchArgs& args,
                                        std::size_t fork_index,
                                        bool& spawn_failed) {
    std::ostringstream cmd;
    cmd << shell_quote(args.self_exe) << " bench"
        << " --dataset " << shell_quote(args.dataset_path)
        << " --strategy " << args.strategy
        << " --threads " << args.threads
        << " --warmup " << args.warmup
        << " --iters " << args.iters
        << " --forks 1"
        << " --seed " << args.seed
        << " --min-seconds " << args.min_seconds
        << " --fork-index " << fork_index
        << " --emit-samples";
    if (args.debug_checks) cmd << " --debug-checks";

    std::vector<IterationSample> samples;
    FILE* pipe = popen(cmd.str().c_str(), "r");
    if (!pipe) {
        spawn_failed = true;
        return samples;
    }
    char buf[512];
    std::string line;
    while (std::fgets(buf, sizeof(buf), pipe)) {
        line = buf;
        IterationSample s;
        if (parse_sample_line(line, s)) {
            samples.push_back(s);
        } else {
            std::fputs(buf, stderr);  // pass through diagnostics
        }
    }
    const int rc = pclose(pipe);
    if (rc != 0 && samples.empty()) spawn_failed = true;
    return samples;
}

int run_bench(const BenchArgs& args) {
    const Dataset dataset = load_dataset(args.dataset_path);
    const BenchConfig cfg = to_config(args);
    if (cfg.strategy == Strategy::Inds && cfg.threads != 1) {
        throw std::invalid_argument(
            "the sequential baseline runs with exactly one thread");
    }

    if (args.emit_samples) {
        // fork child: run one fork and stream samples to the parent
        const auto samples = run_fork(cfg, dataset, args.fork_index);
        bool ok = true;
        for (const auto& s : samples) {
            print_sample(s);
            ok = ok && s.verified;
        }
        return ok ? kExitOk : kExitFailure;
    }

    std::vector<IterationSample> samples;
    if (args.fork_mode == "inprocess") {
        const BenchReport report = run_benchmark(cfg, dataset);
        samples = report.samples;
    } else {
        for (std::size_t f = 0; f < args.forks; ++f) {
            bool spawn_failed = false;
            auto fork_samples = spawn_fork(args, f, spawn_failed);
            if (spawn_failed) {
                std::cerr << "fork " << f
                          << " failed to run; falling back to in-process\n";
                fork_samples = run_fork(cfg, dataset, f);
            }
            samples.insert(samples.end(), fork_samples.begin(),
                           fork_samples.end());
        }
    }

    const std::string label =
        args.label.empty() ? fs::path(args.dataset_path).stem().string()
                           : args.label;
    std::vector<CsvRow> rows;
    bool all_verified = true;
    for (const auto& s : samples) {
        rows.push_back(make_csv_row(label, dataset, cfg, s));
        all_verified = all_verified && s.verified;
    }
    if (!args.out.empty()) append_csv(args.out, rows);

    const auto summary = summarize(rows);
    std::cout << format_summary_table(summary);
    if (!all_verified) {
        std::cerr << "FAILED: post-benchmark verification rejected the "
                     "resulting structure\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct VerifyArgs {
    std::string dataset_path;
    std::string strategy;
    std::size_t threads = 1;
    std::size_t repeats = 1;
    std::uint64_t seed = 1;
};

int run_verify(const VerifyArgs& args) {
    const Strategy strategy = parse_strategy(args.strategy);
    if (strategy == Strategy::Inds && args.threads != 1) {
        throw std::invalid_argument(
            "the sequential baseline runs with exactly one thread");
    }
    const Dataset dataset = load_dataset(args.dataset_path);
    const auto initial = dataset_initial_points(dataset);
    const auto stream = dataset_insertion_points(dataset);

    // insertion-only determinism: the final partition must equal the
    // offline oracle ranks of the full union, for every repeat
    std::vector<Point> all = initial;
    all.insert(all.end(), stream.begin(), stream.end());
    const RankAssignment oracle = brute_force_ranks(all);
    std::vector<int> expected_by_ordinal(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        expected_by_ordinal[all[i].ordinal] = oracle[i];
    }

    bool all_ok = true;
    for (std::size_t rep = 0; rep < args.repeats; ++rep) {
        ArchiveConfig acfg;
        acfg.strategy = strategy;
        acfg.capacity_policy = false;
        acfg.debug_checks = true;
        auto archive = make_archive(acfg, initial);
        const auto shares = partition_insertions(stream.size(), args.threads,
                                                 args.seed + rep);
        std::vector<std::thread> workers;
        for (std::size_t t = 0; t < args.threads; ++t) {
            workers.emplace_back([&, t] {
                for (const std::size_t idx : shares[t]) {
                    archive->add_point(stream[idx]);
                }
            });
        }
        for (auto& w : workers) w.join();

        bool ok = archive->size() == all.size();
        const auto levels = archive->snapshot_levels();
        for (std::size_t li = 0; ok && li < levels.size(); ++li) {
            for (const Point& p : levels[li].points()) {
                if (expected_by_ordinal[p.ordinal] != int(li)) {
                    ok = false;
                    break;
                }
            }
        }
        const InvariantReport sweep = check_invariants(levels);
        ok = ok && sweep.ok;
        const auto stats = archive->stats();
        ok = ok && stats.lock_order_violations == 0 &&
             stats.precondition_violations == 0;

        std::cout << "repeat " << rep << ": "
                  << (ok ? "OK" : "MISMATCH") << "\n";
        if (!sweep.ok) {
            for (const auto& v : sweep.violations) {
                std::cout << "  " << v << "\n";
            }
        }
        all_ok = all_ok && ok;
    }
    return all_ok ? kExitOk : kExitFailure;
}

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string csv_out;
};

int run_report(const ReportArgs& args) {
    std::vector<CsvRow> rows;
    for (const std::string& path : args.inputs) {
        const auto part = read_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const auto summary = summarize(rows);
    const std::string table = format_summary_table(summary);
    std::cout << table;
    if (!args.out.empty()) {
        std::ofstream os(args.out);
        if (!os) throw std::runtime_error("cannot write " + args.out);
        os << table;
    }
    if (!args.csv_out.empty()) write_summary_csv(args.csv_out, summary);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incremental non-dominated sorting workbench"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd =
        app.add_subcommand("synth", "synthesize a benchmark dataset");
    synth_cmd->add_option("--problem", synth.problem, "ZDT1..ZDT6, DTLZ1..DTLZ7")
        ->required();
    synth_cmd->add_option("--k", synth.k, "objective count")->required();
    synth_cmd->add_option("--seed", synth.seed, "generator seed")->required();
    synth_cmd->add_option("--out", synth.out, "output path")->required();
    synth_cmd->add_option("--init", synth.init, "initial population size");
    synth_cmd->add_option("--ins", synth.ins, "recorded insertions");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "measure insertion time");
    bench_cmd->add_option("--dataset", bench.dataset_path, "dataset file")
        ->required();
    bench_cmd
        ->add_option("--strategy", bench.strategy, "inds|sync|cas1|cas2|lock")
        ->required();
    bench_cmd->add_option("--threads", bench.threads, "worker threads");
    bench_cmd->add_option("--warmup", bench.warmup, "warm-up iterations");
    bench_cmd->add_option("--iters", bench.iters, "measured iterations");
    bench_cmd->add_option("--forks", bench.forks, "independent executions");
    bench_cmd->add_option("--seed", bench.seed, "partition seed");
    bench_cmd->add_option("--min-seconds", bench.min_seconds,
                          "minimum timed seconds per iteration");
    bench_cmd->add_option("--out", bench.out, "CSV to append results to");
    bench_cmd->add_option("--label", bench.label,
                          "problem label for the CSV (default: file stem)");
    bench_cmd
        ->add_option("--fork-mode", bench.fork_mode,
                     "process (default) or inprocess")
        ->check(CLI::IsMember({"process", "inprocess"}));
    bench_cmd->add_flag("--debug-checks", bench.debug_checks,
                        "enable lock-order and precondition instrumentation");
    bench_cmd->add_option("--fork-index", bench.fork_index)->group("");
    bench_cmd->add_flag("--emit-samples", bench.emit_samples)->group("");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand(
        "verify", "check a strategy against the offline oracle");
    verify_cmd->add_option("--dataset", verify.dataset_path, "dataset file")
        ->required();
    verify_cmd
        ->add_option("--strategy", verify.strategy, "inds|sync|cas1|cas2|lock")
        ->required();
    verify_cmd->add_option("--threads", verify.threads, "worker threads");
    verify_cmd->add_option("--repeats", verify.repeats, "independent repeats");
    verify_cmd->add_option("--seed", verify.seed, "partition seed");

    ReportArgs report;
    auto* report_cmd =
        app.add_subcommand("report", "merge benchmark CSVs into a table");
    report_cmd->add_option("--in", report.inputs, "input CSV files")
        ->required()
        ->expected(-1);
    report_cmd->add_option("--out", report.out, "write the table here");
    report_cmd->add_option("--csv-out", report.csv_out,
                           "write the aggregated rows as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    bench.self_exe = self_executable(argv[0]);
    try {
        if (*synth_cmd) return run_synth(synth);
        if (*bench_cmd) return run_bench(bench);
        if (*verify_cmd) return run_verify(verify);
        if (*report_cmd) return run_report(report);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
