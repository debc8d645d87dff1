#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ndsort/level.hpp"
#include "ndsort/population.hpp"

namespace ndsort {

enum class Strategy {
    Inds,        // sequential structure, single-threaded callers only
    GlobalLock,  // one archive-wide mutex around the sequential structure
    Cas1,        // per-level atomic snapshot replacement, full merges
    Cas2,        // Cas1 plus time-stamps enabling the filtered fast path
    LevelLock,   // hand-over-hand per-level locks, deferred deletion
};

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws invalid_argument

struct ArchiveConfig {
    Strategy strategy = Strategy::GlobalLock;
    /// Target population size n; 0 means "size of the initial population".
    std::size_t capacity = 0;
    /// When set, GlobalLock/Cas1/Cas2 remove one worst point per insertion
    /// once the size exceeds the capacity; LevelLock defers deletions until
    /// the trim threshold is crossed.
    bool capacity_policy = true;
    /// LevelLock: batch deletions trigger once size > trim_threshold * n
    /// and remove back down to n.
    double trim_threshold = 1.2;
    /// Per-insertion publish-retry bound after which a diagnostic is
    /// surfaced (the insertion still continues).
    std::uint64_t retry_diagnostic_bound = 1'000'000;
    /// Enables lock-order assertions and fast-path precondition checks.
    bool debug_checks = false;
};

struct ArchiveStats {
    std::uint64_t cas_retries = 0;        // failed publish attempts
    std::uint64_t cas_published = 0;      // successful publish attempts
    std::uint64_t fast_path_merges = 0;   // Cas2 filtered merges
    std::uint64_t slow_path_merges = 0;   // full two-antichain merges
    std::uint64_t trims = 0;              // LevelLock batch deletions
    std::uint64_t trim_removed = 0;       // points removed by batch deletion
    std::uint64_t retry_diagnostics = 0;  // insertions that hit the bound
    std::uint64_t lock_order_violations = 0;
    std::uint64_t precondition_violations = 0;
};

/// Thread-safe view over one incrementally sorted population. addPoint may
/// be called from any number of threads; queryByOrdinal/size are safe
/// concurrently with insertions and see a consistent, possibly stale
/// state. snapshot_levels and trim are quiescent-only.
class ConcurrentArchive {
  public:
    virtual ~ConcurrentArchive() = default;

    virtual void add_point(const Point& p) = 0;
    virtual QueryResult query_by_ordinal(std::size_t index) const = 0;
    virtual std::size_t size() const = 0;
    virtual std::size_t level_count() const = 0;

    /// LevelLock: removes size - n worst points; no-op elsewhere.
    virtual std::size_t trim() = 0;

    virtual Strategy strategy() const = 0;
    virtual ArchiveStats stats() const = 0;

    /// Materialized copy of the level sequence for verification.
    virtual std::vector<Level> snapshot_levels() const = 0;
};

std::unique_ptr<ConcurrentArchive> make_archive(const ArchiveConfig& config,
                                                std::vector<Point> initial);

}  // namespace ndsort
