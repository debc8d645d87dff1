#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ndsort/level.hpp"
#include "ndsort/point.hpp"

namespace ndsort {

struct QueryResult {
    Point point;
    std::size_t rank = 0;
    double crowding = 0.0;
};

/// Test/instrumentation hook into the insertion cascade.
struct InsertObserver {
    virtual ~InsertObserver() = default;
    virtual void on_moving_set(std::size_t /*level_index*/,
                               std::span<const Point> /*moving*/) {}
    virtual void on_level_rebuilt(std::size_t /*level_index*/) {}
    virtual void on_level_added(std::size_t /*level_index*/) {}
};

/// Pre-filter of one level against the nadir of the moving set: points not
/// strictly dominated by the nadir cannot be dominated by any moving point
/// and stay untouched.
struct NadirSplit {
    std::vector<char> keep;               // per old position
    std::vector<Point> candidates;        // points the merge must look at
    std::vector<std::uint32_t> positions; // their old positions
};
NadirSplit split_by_nadir(const Level& level, std::span<const Point> moving);

/// The sequential incremental non-dominated sorting structure: levels in
/// rank order, each a lexicographically sorted antichain with maintained
/// per-coordinate views and crowding distances. Single-threaded by design;
/// thread-safe access goes through the archive strategies.
class RankedPopulation {
  public:
    /// Builds the level partition of a nonempty point set.
    explicit RankedPopulation(std::vector<Point> initial);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return size_; }
    std::size_t level_count() const { return levels_.size(); }
    const Level& level(std::size_t i) const { return levels_[i]; }
    const std::vector<Level>& levels() const { return levels_; }

    /// First level containing no strict dominator of p; the dominator
    /// predicate holds on a prefix of levels, so this is a binary search.
    std::size_t find_insertion_level(const Point& p) const;

    /// Ranks p into the structure, cascading displaced points downwards.
    void insert(Point p, InsertObserver* observer = nullptr);

    /// Removes the lowest-crowding point of the last level (ties towards
    /// the lexicographically largest) and returns it.
    Point remove_worst();

    /// The index-th point in iteration order (levels in rank order,
    /// lexicographic inside a level) with its rank and crowding distance.
    QueryResult query_by_ordinal(std::size_t index) const;

    bool contains_ordinal(std::uint64_t ordinal) const {
        return level_of_.count(ordinal) != 0;
    }
    std::size_t level_of_ordinal(std::uint64_t ordinal) const {
        return level_of_.at(ordinal);
    }

  private:
    void check_insertable(const Point& p) const;

    std::vector<Level> levels_;
    std::unordered_map<std::uint64_t, std::uint32_t> level_of_;
    std::size_t size_ = 0;
    std::size_t dimension_ = 0;
};

}  // namespace ndsort
