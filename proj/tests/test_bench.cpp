#include <filesystem>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "ndsort/bench.hpp"
#include "ndsort/verify.hpp"

using namespace ndsort;
namespace t = ndsort::test;
namespace fs = std::filesystem;

namespace {

Dataset small_dataset(ProblemId id, std::size_t k, std::uint64_t seed,
                      std::size_t init = 200, std::size_t ins = 100) {
    return synthesize_dataset(Problem::make(id, k), seed, init, ins);
}

}  // namespace

TEST_CASE("insertion partition is deterministic, even and complete") {
    const auto a = partition_insertions(1000, 6, 42);
    const auto b = partition_insertions(1000, 6, 42);
    CHECK(a == b);
    const auto c = partition_insertions(1000, 6, 43);
    CHECK(a != c);

    std::set<std::size_t> seen;
    std::size_t min_size = 1000, max_size = 0;
    for (const auto& share : a) {
        min_size = std::min(min_size, share.size());
        max_size = std::max(max_size, share.size());
        seen.insert(share.begin(), share.end());
    }
    CHECK(seen.size() == 1000);
    CHECK(max_size - min_size <= 1);
}

TEST_CASE("benchmark emits measureIterations x forks samples") {
    const Dataset ds = small_dataset(ProblemId::Zdt1, 2, 3);
    BenchConfig cfg;
    cfg.strategy = Strategy::GlobalLock;
    cfg.threads = 2;
    cfg.warmup_iterations = 1;
    cfg.measure_iterations = 3;
    cfg.min_iteration_seconds = 0.005;
    cfg.forks = 2;
    const BenchReport report = run_benchmark(cfg, ds);
    CHECK(report.samples.size() == 6);
    CHECK(report.all_verified);
    for (const auto& s : report.samples) {
        CHECK(s.total_us > 0.0);
        CHECK(s.mean_insert_us > 0.0);
    }
}

TEST_CASE("the sequential baseline refuses extra threads") {
    const Dataset ds = small_dataset(ProblemId::Zdt1, 2, 4);
    BenchConfig cfg;
    cfg.strategy = Strategy::Inds;
    cfg.threads = 3;
    CHECK_THROWS_AS(run_fork(cfg, ds, 0), std::invalid_argument);
}

TEST_CASE("one-thread sync run ends in the sequential structure") {
    const Dataset ds = small_dataset(ProblemId::Dtlz2, 3, 5);
    const auto initial = dataset_initial_points(ds);
    const auto stream = dataset_insertion_points(ds);
    const auto shares = partition_insertions(stream.size(), 1, 9);

    ArchiveConfig seq_cfg;
    seq_cfg.strategy = Strategy::Inds;
    auto seq = make_archive(seq_cfg, initial);
    ArchiveConfig sync_cfg;
    sync_cfg.strategy = Strategy::GlobalLock;
    auto sync = make_archive(sync_cfg, initial);
    for (const std::size_t idx : shares[0]) {
        seq->add_point(stream[idx]);
        sync->add_point(stream[idx]);
    }
    const auto a = seq->snapshot_levels();
    const auto b = sync->snapshot_levels();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].size() == b[i].size());
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            CHECK(a[i].point(j).ordinal == b[i].point(j).ordinal);
            CHECK(a[i].crowding(j) == b[i].crowding(j));
        }
    }
}

TEST_CASE("contended cas runs report retries") {
    // plenty of contention: one wide front, eight threads, repeated rounds
    const Dataset ds = small_dataset(ProblemId::Dtlz2, 3, 6, 400, 800);
    BenchConfig cfg;
    cfg.strategy = Strategy::Cas1;
    cfg.threads = 8;
    cfg.warmup_iterations = 0;
    cfg.measure_iterations = 1;
    cfg.min_iteration_seconds = 0.05;
    cfg.forks = 1;
    std::uint64_t retries = 0;
    for (int attempt = 0; attempt < 5 && retries == 0; ++attempt) {
        const BenchReport report = run_benchmark(cfg, ds);
        REQUIRE(report.all_verified);
        for (const auto& s : report.samples) retries += s.cas_retries;
    }
    CHECK(retries > 0);
}

TEST_CASE("summarize on hand-checked samples") {
    SUBCASE("single sample, single row") {
        CsvRow r;
        r.problem = "ZDT1";
        r.k = 2;
        r.dataset_seed = 1;
        r.strategy = "lock";
        r.threads = 6;
        r.mean_insert_us = 12.5;
        const auto rows = summarize(std::vector<CsvRow>{r});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].samples == 1);
        CHECK(rows[0].mean_us == doctest::Approx(12.5));
        CHECK(rows[0].stddev_us == 0.0);
        CHECK(rows[0].median_us == doctest::Approx(12.5));
    }
    SUBCASE("constant samples have zero deviation") {
        std::vector<CsvRow> rows(4);
        for (auto& r : rows) {
            r.problem = "ZDT1";
            r.k = 2;
            r.strategy = "cas1";
            r.threads = 3;
            r.mean_insert_us = 7.0;
        }
        const auto summary = summarize(rows);
        REQUIRE(summary.size() == 1);
        CHECK(summary[0].mean_us == doctest::Approx(7.0));
        CHECK(summary[0].stddev_us == doctest::Approx(0.0));
    }
    SUBCASE("textbook sample set") {
        const double values[] = {2, 4, 4, 4, 5, 5, 7, 9};
        std::vector<CsvRow> rows;
        for (double v : values) {
            CsvRow r;
            r.problem = "DTLZ2";
            r.k = 3;
            r.strategy = "sync";
            r.threads = 12;
            r.mean_insert_us = v;
            rows.push_back(r);
        }
        const auto summary = summarize(rows);
        REQUIRE(summary.size() == 1);
        CHECK(summary[0].samples == 8);
        CHECK(summary[0].mean_us == doctest::Approx(5.0));
        CHECK(summary[0].stddev_us == doctest::Approx(2.138).epsilon(1e-3));
        CHECK(summary[0].median_us == doctest::Approx(4.5));
    }
}

TEST_CASE("csv rows survive the append/read round trip") {
    const fs::path path = fs::temp_directory_path() / "ndsort_bench.csv";
    fs::remove(path);

    CsvRow r;
    r.problem = "ZDT3";
    r.k = 2;
    r.dataset_seed = 17;
    r.strategy = "cas2";
    r.threads = 24;
    r.fork = 1;
    r.iteration = 2;
    r.total_us = 123456.789;
    r.mean_insert_us = 12.25;
    r.stddev_us = 0.5;
    r.cas_retries = 42;
    r.trims = 3;
    append_csv(path.string(), std::vector<CsvRow>{r});
    append_csv(path.string(), std::vector<CsvRow>{r});

    const auto rows = read_csv(path.string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].problem == "ZDT3");
    CHECK(rows[1].k == 2);
    CHECK(rows[1].dataset_seed == 17);
    CHECK(rows[1].strategy == "cas2");
    CHECK(rows[1].threads == 24);
    CHECK(rows[1].fork == 1);
    CHECK(rows[1].iteration == 2);
    CHECK(rows[1].mean_insert_us == doctest::Approx(12.25));
    CHECK(rows[1].cas_retries == 42);
    CHECK(rows[1].trims == 3);
    fs::remove(path);
}

TEST_CASE("summary table renders one section per dataset") {
    std::vector<CsvRow> rows(2);
    rows[0].problem = "ZDT1";
    rows[0].k = 2;
    rows[0].dataset_seed = 1;
    rows[0].strategy = "inds";
    rows[0].threads = 1;
    rows[0].mean_insert_us = 3.0;
    rows[1] = rows[0];
    rows[1].problem = "DTLZ2";
    rows[1].k = 3;
    const auto table = format_summary_table(summarize(rows));
    CHECK(table.find("== ZDT1 k=2 seed=1 ==") != std::string::npos);
    CHECK(table.find("== DTLZ2 k=3 seed=1 ==") != std::string::npos);
}
