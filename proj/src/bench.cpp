#include "ndsort/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ndsort/rng.hpp"
#include "ndsort/verify.hpp"

namespace ndsort {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
}

bool verify_quiescent(const ConcurrentArchive& archive, std::size_t capacity,
                      double trim_threshold) {
    const std::vector<Level> levels = archive.snapshot_levels();
    if (!check_invariants(levels).ok) return false;
    std::size_t total = 0;
    for (const Level& level : levels) total += level.size();
    if (total != archive.size()) return false;
    if (archive.strategy() == Strategy::LevelLock) {
        return double(total) <=
               std::ceil(trim_threshold * double(capacity)) + 0.5;
    }
    return total == capacity;
}

}  // namespace

std::vector<std::vector<std::size_t>> partition_insertions(
    std::size_t count, std::size_t threads, std::uint64_t seed) {
    if (threads == 0) throw std::invalid_argument("threads must be positive");
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> shares(threads);
    const std::size_t base = count / threads;
    std::size_t next = 0;
    for (std::size_t t = 0; t < threads; ++t) {
        std::size_t take = base + (t < count % threads ? 1 : 0);
        auto& share = shares[t];
        share.reserve(take);
        while (take--) share.push_back(order[next++]);
    }
    return shares;
}

std::vector<IterationSample> run_fork(const BenchConfig& config,
                                      const Dataset& dataset,
                                      std::size_t fork_index) {
    if (config.strategy == Strategy::Inds && config.threads != 1) {
        throw std::invalid_argument(
            "the sequential baseline runs with exactly one thread");
    }
    if (config.threads == 0 || config.measure_iterations == 0) {
        throw std::invalid_argument("threads and iterations must be positive");
    }

    const std::vector<Point> initial = dataset_initial_points(dataset);
    const std::vector<Point> stream = dataset_insertion_points(dataset);
    const auto shares =
        partition_insertions(stream.size(), config.threads, config.seed);

    ArchiveConfig acfg;
    acfg.strategy = config.strategy;
    acfg.capacity = initial.size();
    acfg.capacity_policy = true;
    acfg.debug_checks = config.debug_checks;

    std::vector<IterationSample> samples;
    const std::size_t total_iterations =
        config.warmup_iterations + config.measure_iterations;

    for (std::size_t iter = 0; iter < total_iterations; ++iter) {
        const bool measured = iter >= config.warmup_iterations;
        double accumulated_us = 0.0;
        std::vector<double> rep_means;
        std::uint64_t retries = 0;
        std::uint64_t trims = 0;
        bool verified = true;

        while (true) {
            auto archive = make_archive(acfg, initial);  // untimed rebuild

            const auto start = Clock::now();
            std::vector<std::thread> workers;
            workers.reserve(config.threads);
            for (std::size_t t = 0; t < config.threads; ++t) {
                workers.emplace_back([&, t] {
                    for (const std::size_t idx : shares[t]) {
                        archive->add_point(stream[idx]);
                    }
                });
            }
            for (auto& w : workers) w.join();
            const auto stop = Clock::now();

            const double rep_us = elapsed_us(start, stop);
            accumulated_us += rep_us;
            rep_means.push_back(rep_us / double(stream.size()));
            const ArchiveStats stats = archive->stats();
            retries += stats.cas_retries;
            trims += stats.trims;

            if (accumulated_us >= config.min_iteration_seconds * 1e6) {
                if (measured && config.verify) {
                    verified = verify_quiescent(*archive, initial.size(),
                                                acfg.trim_threshold);
                }
                break;
            }
        }

        if (!measured) continue;
        IterationSample sample;
        sample.fork = fork_index;
        sample.iteration = iter - config.warmup_iterations;
        sample.total_us = accumulated_us;
        sample.mean_insert_us =
            accumulated_us / (double(rep_means.size()) * double(stream.size()));
        if (rep_means.size() > 1) {
            double mean = 0.0;
            for (double m : rep_means) mean += m;
            mean /= double(rep_means.size());
            double var = 0.0;
            for (double m : rep_means) var += (m - mean) * (m - mean);
            sample.stddev_us =
                std::sqrt(var / double(rep_means.size() - 1));
        }
        sample.cas_retries = retries;
        sample.trims = trims;
        sample.verified = verified;
        samples.push_back(sample);
    }
    return samples;
}

BenchReport run_benchmark(const BenchConfig& config, const Dataset& dataset) {
    BenchReport report;
    for (std::size_t fork = 0; fork < config.forks; ++fork) {
        const auto samples = run_fork(config, dataset, fork);
        for (const auto& sample : samples) {
            report.all_verified = report.all_verified && sample.verified;
            report.samples.push_back(sample);
        }
    }
    return report;
}

CsvRow make_csv_row(const std::string& problem_label, const Dataset& dataset,
                    const BenchConfig& config, const IterationSample& sample) {
    CsvRow row;
    row.problem = problem_label;
    row.k = dataset.objectives;
    row.dataset_seed = dataset.seed;
    row.strategy = strategy_name(config.strategy);
    row.threads = config.threads;
    row.fork = sample.fork;
    row.iteration = sample.iteration;
    row.total_us = sample.total_us;
    row.mean_insert_us = sample.mean_insert_us;
    row.stddev_us = sample.stddev_us;
    row.cas_retries = sample.cas_retries;
    row.trims = sample.trims;
    return row;
}

}  // namespace ndsort
