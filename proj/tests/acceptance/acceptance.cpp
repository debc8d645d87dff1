// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "../helpers.hpp"
#include "ndsort/archive.hpp"
#include "ndsort/bench.hpp"
#include "ndsort/offline.hpp"
#include "ndsort/population.hpp"
#include "ndsort/problems.hpp"
#include "ndsort/rng.hpp"
#include "ndsort/verify.hpp"

using namespace ndsort;
namespace t = ndsort::test;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Gate {
    int failures = 0;

    void report(int index, const std::string& name, bool ok,
                const std::string& detail) {
        std::printf("[%d] %-34s %s  %s\n", index, name.c_str(),
                    ok ? "PASS" : "FAIL", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: sortRanks == bruteForceRanks on 1000 random instances
// ---------------------------------------------------------------------------
void criterion_1(Gate& gate) {
    const auto start = Clock::now();
    Rng rng(101);
    int mismatches = 0;
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 1 + rng.below(500);
        const std::size_t k = 2 + rng.below(5);
        const auto pts = t::random_points_with_duplicates(rng, n, k);
        if (sort_ranks(pts) != brute_force_ranks(pts)) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    gate.report(1, "offline oracle equivalence",
                mismatches == 0 && elapsed < 120.0,
                fmt("1000 instances, %d mismatches, %.1fs", mismatches,
                    elapsed));
}

// ---------------------------------------------------------------------------
// criteria 2+3: sequential replay with checkpoint oracles and per-update
// crowding recomputation
// ---------------------------------------------------------------------------
bool crowding_matches(const Level& level) {
    const auto expect = t::naive_crowding(level.points());
    for (std::size_t i = 0; i < level.size(); ++i) {
        const double got = level.crowding(i);
        if (std::isinf(expect[i]) || std::isinf(got)) {
            if (!(std::isinf(expect[i]) && std::isinf(got))) return false;
        } else if (std::abs(got - expect[i]) >
                   1e-12 * std::max(1.0, std::abs(expect[i]))) {
            return false;
        }
    }
    return true;
}

void criteria_2_3(Gate& gate, const std::map<std::string, Dataset>& datasets) {
    int partition_failures = 0;
    int crowding_failures = 0;
    for (const char* name : {"zdt1", "dtlz2"}) {
        const Dataset& ds = datasets.at(name);
        RankedPopulation pop(dataset_initial_points(ds));
        const auto stream = dataset_insertion_points(ds);
        const std::size_t capacity = ds.initial.size();

        auto check_crowding = [&] {
            for (const Level& level : pop.levels()) {
                if (!crowding_matches(level)) {
                    ++crowding_failures;
                    return;
                }
            }
        };

        for (std::size_t i = 0; i < stream.size(); ++i) {
            pop.insert(stream[i]);
            check_crowding();
            if (pop.size() > capacity) {
                pop.remove_worst();
                check_crowding();
            }
            if ((i + 1) % 50 == 0) {
                if (!partition_matches_oracle(pop.levels())) {
                    ++partition_failures;
                }
            }
        }
    }
    gate.report(2, "incremental equivalence", partition_failures == 0,
                fmt("40 checkpoints over zdt1+dtlz2, %d mismatches",
                    partition_failures));
    gate.report(3, "crowding correctness", crowding_failures == 0,
                fmt("every structural update checked, %d mismatches",
                    crowding_failures));
}

// ---------------------------------------------------------------------------
// criterion 4: insertion-only determinism across strategies/threads/seeds
// ---------------------------------------------------------------------------
void criterion_4(Gate& gate) {
    const Strategy strategies[] = {Strategy::GlobalLock, Strategy::Cas1,
                                   Strategy::Cas2, Strategy::LevelLock};
    int failures = 0;
    int runs = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(4000 + seed);
        const std::size_t k = 2 + seed % 2;
        const auto base = t::random_points(rng, 1000, k);
        const auto stream = t::random_points(rng, 1000, k, 100'000);

        std::vector<Point> all = base;
        all.insert(all.end(), stream.begin(), stream.end());
        const RankAssignment oracle = brute_force_ranks(all);
        std::vector<int> expected(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) {
            expected[all[i].ordinal % 100'000 == all[i].ordinal
                         ? all[i].ordinal
                         : 1000 + (all[i].ordinal - 100'000)] = oracle[i];
        }

        for (const Strategy s : strategies) {
            for (const std::size_t threads : {2u, 4u, 8u}) {
                ++runs;
                ArchiveConfig cfg;
                cfg.strategy = s;
                cfg.capacity_policy = false;
                auto archive = make_archive(cfg, base);
                const auto shares = partition_insertions(
                    stream.size(), threads, seed * 31 + threads);
                std::vector<std::thread> workers;
                for (std::size_t w = 0; w < threads; ++w) {
                    workers.emplace_back([&, w] {
                        for (const std::size_t idx : shares[w]) {
                            archive->add_point(stream[idx]);
                        }
                    });
                }
                for (auto& w : workers) w.join();

                bool ok = archive->size() == all.size();
                const auto levels = archive->snapshot_levels();
                for (std::size_t li = 0; ok && li < levels.size(); ++li) {
                    for (const Point& p : levels[li].points()) {
                        const std::size_t slot =
                            p.ordinal < 1000 ? p.ordinal
                                             : 1000 + (p.ordinal - 100'000);
                        if (expected[slot] != int(li)) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) ++failures;
            }
        }
    }
    gate.report(4, "concurrent insertion determinism", failures == 0,
                fmt("%d runs (4 strategies x {2,4,8} threads x 20 seeds), "
                    "%d failures",
                    runs, failures));
}

// ---------------------------------------------------------------------------
// criterion 5: quiescent invariants under the full insert+delete workload
// ---------------------------------------------------------------------------
void criterion_5(Gate& gate, const std::map<std::string, Dataset>& datasets) {
    const Dataset& ds = datasets.at("dtlz2");
    const auto initial = dataset_initial_points(ds);
    const auto stream = dataset_insertion_points(ds);
    const std::size_t n = initial.size();

    const Strategy strategies[] = {Strategy::GlobalLock, Strategy::Cas1,
                                   Strategy::Cas2, Strategy::LevelLock};
    int failures = 0;
    int runs = 0;
    for (const Strategy s : strategies) {
        for (const std::size_t threads : {3u, 6u, 12u, 24u}) {
            ++runs;
            ArchiveConfig cfg;
            cfg.strategy = s;
            cfg.capacity = n;
            auto archive = make_archive(cfg, initial);
            const auto shares =
                partition_insertions(stream.size(), threads, 500 + threads);
            std::vector<std::thread> workers;
            for (std::size_t w = 0; w < threads; ++w) {
                workers.emplace_back([&, w] {
                    for (const std::size_t idx : shares[w]) {
                        archive->add_point(stream[idx]);
                    }
                });
            }
            for (auto& w : workers) w.join();

            bool ok = check_invariants(archive->snapshot_levels()).ok;
            if (s == Strategy::LevelLock) {
                ok = ok && double(archive->size()) <=
                               std::ceil(1.2 * double(n)) + 0.5;
                archive->trim();
                ok = ok && archive->size() == n;
                ok = ok && check_invariants(archive->snapshot_levels()).ok;
            } else {
                ok = ok && archive->size() == n;
            }
            if (!ok) ++failures;
        }
    }
    gate.report(5, "quiescent invariants, full workload", failures == 0,
                fmt("%d runs (4 strategies x {3,6,12,24} threads), "
                    "%d failures",
                    runs, failures));
}

// ---------------------------------------------------------------------------
// criterion 6: qualitative performance ordering on this machine
// ---------------------------------------------------------------------------
struct Cell {
    double median_us = 0.0;
    double retries_per_insertion = 0.0;
};

Cell run_cell(const Dataset& ds, Strategy strategy, std::size_t threads) {
    BenchConfig cfg;
    cfg.strategy = strategy;
    cfg.threads = threads;
    cfg.warmup_iterations = 2;
    cfg.measure_iterations = 4;
    cfg.min_iteration_seconds = 0.3;
    cfg.forks = 1;
    cfg.seed = 1;
    cfg.verify = true;
    const auto samples = run_fork(cfg, ds, 0);

    Cell cell;
    std::vector<double> means;
    double retries = 0.0;
    double insertions = 0.0;
    for (const auto& s : samples) {
        if (!s.verified) {
            std::fprintf(stderr, "  verification failed: %s T=%zu\n",
                         strategy_name(strategy), threads);
        }
        means.push_back(s.mean_insert_us);
        retries += double(s.cas_retries);
        const double reps =
            s.total_us / (s.mean_insert_us * double(ds.insertions.size()));
        insertions += reps * double(ds.insertions.size());
    }
    std::sort(means.begin(), means.end());
    cell.median_us = 0.5 * (means[1] + means[2]);
    cell.retries_per_insertion = insertions > 0 ? retries / insertions : 0.0;
    return cell;
}

void criterion_6(Gate& gate, const std::map<std::string, Dataset>& datasets) {
    const std::vector<std::string> zdt = {"zdt1", "zdt2"};
    const std::vector<std::string> dtlz = {"dtlz1", "dtlz2"};
    const std::size_t grid[] = {3, 6, 12, 24};

    std::map<std::string, Cell> cells;
    auto key = [](const std::string& ds, Strategy s, std::size_t threads) {
        return ds + "/" + strategy_name(s) + "/" + std::to_string(threads);
    };
    auto measure = [&](const std::string& ds, Strategy s,
                       std::size_t threads) {
        const auto k = key(ds, s, threads);
        cells[k] = run_cell(datasets.at(ds), s, threads);
        std::printf("    %-18s median %10.2f us/insert  retries/ins %.3f\n",
                    k.c_str(), cells[k].median_us,
                    cells[k].retries_per_insertion);
        std::fflush(stdout);
    };

    std::printf("  measuring %zu benchmark cells...\n",
                zdt.size() * (1 + 2 * 4) + dtlz.size() * (2 + 4));
    for (const auto& ds : zdt) {
        measure(ds, Strategy::Inds, 1);
        for (const std::size_t threads : grid) {
            measure(ds, Strategy::GlobalLock, threads);
        }
        for (const std::size_t threads : grid) {
            measure(ds, Strategy::Cas1, threads);
        }
    }
    for (const auto& ds : dtlz) {
        measure(ds, Strategy::GlobalLock, 6);
        measure(ds, Strategy::LevelLock, 6);
        for (const std::size_t threads : grid) {
            measure(ds, Strategy::Cas1, threads);
        }
    }

    // 6a: the global lock is at least twice as slow as the baseline on ZDT
    bool ok_a = true;
    std::string detail_a;
    for (const auto& ds : zdt) {
        const double base = cells[key(ds, Strategy::Inds, 1)].median_us;
        for (const std::size_t threads : grid) {
            const double sync =
                cells[key(ds, Strategy::GlobalLock, threads)].median_us;
            if (sync < 2.0 * base) {
                ok_a = false;
                detail_a += fmt("%s T=%zu ratio %.2f; ", ds.c_str(), threads,
                                sync / base);
            }
        }
    }
    gate.report(6, "perf 6a: sync >= 2x inds on ZDT", ok_a,
                ok_a ? "all thread counts on both datasets" : detail_a);

    // 6b: cas1 medians decrease with threads on ZDT, one inversion allowed
    bool ok_b = true;
    std::string detail_b;
    for (const auto& ds : zdt) {
        int inversions = 0;
        std::string trend;
        double prev = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double m = cells[key(ds, Strategy::Cas1, grid[i])].median_us;
            trend += fmt("%.1f ", m);
            if (i > 0 && m > prev) ++inversions;
            prev = m;
        }
        detail_b += fmt("%s: [%s] %d inversions; ", ds.c_str(), trend.c_str(),
                        inversions);
        if (inversions > 1) ok_b = false;
    }
    gate.report(6, "perf 6b: cas1 scaling trend on ZDT", ok_b, detail_b);

    // 6c: on 3-D DTLZ the per-level locks beat sync at T=6 and cas1 anywhere
    bool ok_c = true;
    std::string detail_c;
    for (const auto& ds : dtlz) {
        const double lock = cells[key(ds, Strategy::LevelLock, 6)].median_us;
        const double sync = cells[key(ds, Strategy::GlobalLock, 6)].median_us;
        double best_cas1 = 1e300;
        for (const std::size_t threads : grid) {
            best_cas1 = std::min(
                best_cas1, cells[key(ds, Strategy::Cas1, threads)].median_us);
        }
        detail_c += fmt("%s: lock %.1f sync %.1f cas1* %.1f; ", ds.c_str(),
                        lock, sync, best_cas1);
        if (!(lock < sync && lock < best_cas1)) ok_c = false;
    }
    gate.report(6, "perf 6c: lock fastest on DTLZ k=3", ok_c, detail_c);

    // 6d: cas1 wastes more work per insertion in three dimensions
    double zdt_rpi = 0.0;
    double dtlz_rpi = 0.0;
    for (const auto& ds : zdt) {
        for (const std::size_t threads : grid) {
            zdt_rpi += cells[key(ds, Strategy::Cas1, threads)]
                           .retries_per_insertion;
        }
    }
    for (const auto& ds : dtlz) {
        for (const std::size_t threads : grid) {
            dtlz_rpi += cells[key(ds, Strategy::Cas1, threads)]
                            .retries_per_insertion;
        }
    }
    zdt_rpi /= double(zdt.size() * 4);
    dtlz_rpi /= double(dtlz.size() * 4);
    const double ratio = zdt_rpi > 0 ? dtlz_rpi / zdt_rpi : 1e300;
    gate.report(6, "perf 6d: cas1 retry ratio DTLZ/ZDT", ratio >= 1.5,
                fmt("zdt %.4f dtlz %.4f ratio %.2f (need >= 1.5)", zdt_rpi,
                    dtlz_rpi, ratio));
}

// ---------------------------------------------------------------------------
// criterion 7: dataset protocol fidelity
// ---------------------------------------------------------------------------
void criterion_7(Gate& gate, const std::map<std::string, Dataset>& datasets,
                 const fs::path& dir) {
    const Dataset& first = datasets.at("zdt1");
    const Problem problem = Problem::make(ProblemId::Zdt1, 2);
    const Dataset again = synthesize_dataset(problem, first.seed);

    bool ok = first.initial.size() == 5000 && first.insertions.size() == 1000;
    ok = ok && again.initial == first.initial &&
         again.insertions == first.insertions;

    const fs::path p1 = dir / "fidelity1.ds";
    const fs::path p2 = dir / "fidelity2.ds";
    save_dataset(first, p1.string());
    const Dataset loaded = load_dataset(p1.string());
    ok = ok && loaded.initial == first.initial &&
         loaded.insertions == first.insertions && loaded.seed == first.seed;
    save_dataset(loaded, p2.string());

    std::ifstream f1(p1), f2(p2);
    const std::string s1((std::istreambuf_iterator<char>(f1)),
                         std::istreambuf_iterator<char>());
    const std::string s2((std::istreambuf_iterator<char>(f2)),
                         std::istreambuf_iterator<char>());
    ok = ok && !s1.empty() && s1 == s2;

    gate.report(7, "dataset protocol fidelity", ok,
                "5000+1000 rows, repeat synthesis identical, byte-exact "
                "round-trip");
}

// ---------------------------------------------------------------------------
// criterion 8: the union of two antichains never needs a third rank
// ---------------------------------------------------------------------------
void criterion_8(Gate& gate) {
    Rng rng(801);
    int failures = 0;
    const int pairs = 100'000;
    for (int trial = 0; trial < pairs; ++trial) {
        const std::size_t k = 2 + rng.below(3);
        const auto a = t::random_antichain(rng, 4 + rng.below(28), k, 0);
        const auto b = t::random_antichain(rng, 4 + rng.below(28), k, 1000);
        const auto split = merge_two_antichains(a, b);

        std::vector<Point> unioned = a;
        unioned.insert(unioned.end(), b.begin(), b.end());
        const RankAssignment ranks = brute_force_ranks(unioned);
        bool ok = true;
        std::map<std::uint64_t, int> expect;
        for (std::size_t i = 0; i < unioned.size(); ++i) {
            if (ranks[i] > 1) ok = false;
            expect[unioned[i].ordinal] = ranks[i];
        }
        for (const Point& p : split.rank_zero) {
            if (expect[p.ordinal] != 0) ok = false;
        }
        for (const Point& p : split.rank_one) {
            if (expect[p.ordinal] != 1) ok = false;
        }
        if (split.rank_zero.size() + split.rank_one.size() != unioned.size()) {
            ok = false;
        }
        if (!ok) ++failures;
    }
    gate.report(8, "two-rank merge property", failures == 0,
                fmt("%d fuzzed antichain pairs, %d failures", pairs,
                    failures));
}

}  // namespace

int main() {
    std::printf("acceptance suite (hardware: %u threads)\n",
                std::thread::hardware_concurrency());
    const auto t0 = Clock::now();

    const fs::path dir =
        fs::temp_directory_path() / "ndsort_acceptance";
    fs::create_directories(dir);

    std::printf("synthesizing 5000+1000 datasets (zdt1, zdt2, dtlz1, dtlz2)...\n");
    std::fflush(stdout);
    std::map<std::string, Dataset> datasets;
    datasets.emplace("zdt1",
                     synthesize_dataset(Problem::make(ProblemId::Zdt1, 2), 1));
    datasets.emplace("zdt2",
                     synthesize_dataset(Problem::make(ProblemId::Zdt2, 2), 1));
    datasets.emplace("dtlz1",
                     synthesize_dataset(Problem::make(ProblemId::Dtlz1, 3), 1));
    datasets.emplace("dtlz2",
                     synthesize_dataset(Problem::make(ProblemId::Dtlz2, 3), 1));

    Gate gate;
    criterion_1(gate);
    criteria_2_3(gate, datasets);
    criterion_4(gate);
    criterion_5(gate, datasets);
    criterion_6(gate, datasets);
    criterion_7(gate, datasets, dir);
    criterion_8(gate);

    std::printf("acceptance total: %.1fs, %s\n", seconds_since(t0),
                gate.failures == 0 ? "ALL CRITERIA PASS"
                                   : fmt("%d FAILURES", gate.failures).c_str());
    return gate.failures == 0 ? 0 : 1;
}
