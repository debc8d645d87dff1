#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ndsort/archive.hpp"
#include "ndsort/problems.hpp"

namespace ndsort {

struct BenchConfig {
    Strategy strategy = Strategy::Inds;
    std::size_t threads = 1;  // must be 1 for the sequential baseline
    std::size_t warmup_iterations = 4;
    std::size_t measure_iterations = 4;
    double min_iteration_seconds = 1.0;
    std::size_t forks = 2;
    std::uint64_t seed = 1;
    bool verify = true;
    bool debug_checks = false;
};

struct IterationSample {
    std::size_t fork = 0;
    std::size_t iteration = 0;    // measured-iteration index within the fork
    double total_us = 0.0;        // timed insertion phases, summed over reps
    double mean_insert_us = 0.0;  // total / (reps * insertions)
    double stddev_us = 0.0;       // across the reps inside this iteration
    std::uint64_t cas_retries = 0;
    std::uint64_t trims = 0;
    bool verified = true;
};

struct BenchReport {
    std::vector<IterationSample> samples;  // measure_iterations * forks
    bool all_verified = true;
};

/// Deterministic workload split: insertion indices per thread, evenly and
/// randomly distributed. A fixed (count, threads, seed) triple always
/// produces the same partition.
std::vector<std::vector<std::size_t>> partition_insertions(
    std::size_t count, std::size_t threads, std::uint64_t seed);

/// One fork of the measurement protocol: every iteration repeats
/// (rebuild archive untimed; insert the stream from `threads` workers,
/// timed) until at least min_iteration_seconds of timed work accumulates.
/// Warm-up iterations run identically and are discarded.
std::vector<IterationSample> run_fork(const BenchConfig& config,
                                      const Dataset& dataset,
                                      std::size_t fork_index);

/// All forks in-process, each with fresh state.
BenchReport run_benchmark(const BenchConfig& config, const Dataset& dataset);

/// One emitted CSV row per measured iteration.
struct CsvRow {
    std::string problem;
    std::size_t k = 0;
    std::uint64_t dataset_seed = 0;
    std::string strategy;
    std::size_t threads = 0;
    std::size_t fork = 0;
    std::size_t iteration = 0;
    double total_us = 0.0;
    double mean_insert_us = 0.0;
    double stddev_us = 0.0;
    std::uint64_t cas_retries = 0;
    std::uint64_t trims = 0;
};

CsvRow make_csv_row(const std::string& problem_label, const Dataset& dataset,
                    const BenchConfig& config, const IterationSample& sample);

const char* csv_header();
void append_csv(const std::string& path, std::span<const CsvRow> rows);
std::vector<CsvRow> read_csv(const std::string& path);

/// Aggregated comparison cell: one row per (dataset, strategy, threads).
struct SummaryRow {
    std::string problem;
    std::size_t k = 0;
    std::uint64_t dataset_seed = 0;
    std::string strategy;
    std::size_t threads = 0;
    std::size_t samples = 0;
    double mean_us = 0.0;
    double stddev_us = 0.0;  // sample standard deviation over the samples
    double median_us = 0.0;
    double mean_retries = 0.0;
    double mean_trims = 0.0;
};

std::vector<SummaryRow> summarize(std::span<const CsvRow> rows);
std::string format_summary_table(std::span<const SummaryRow> rows);
void write_summary_csv(const std::string& path,
                       std::span<const SummaryRow> rows);

}  // namespace ndsort
