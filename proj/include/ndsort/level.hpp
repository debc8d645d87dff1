#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ndsort/point.hpp"

namespace ndsort {

/// One non-domination level: an antichain kept in lexicographic order plus
/// one index list per coordinate (sorted by that coordinate, ordinal ties)
/// and the crowding distance of every member. Levels are value types; the
/// concurrent strategies publish them as immutable snapshots, where the
/// timestamp identifies the version.
class Level {
  public:
    /// Sorts, builds the per-coordinate views and computes crowding from
    /// scratch in O(n k log n).
    static Level from_scratch(std::vector<Point> points,
                              std::uint64_t timestamp = 0);

    /// Incremental rebuild: keeps old points flagged true, merges in the
    /// inserted ones, and recomputes the per-coordinate views by merging
    /// rather than sorting: O(n k + m k log m) for m insertions.
    /// Produces exactly what from_scratch would on the same multiset.
    static Level rebuilt(const Level& old, const std::vector<char>& keep,
                         std::vector<Point> inserted,
                         std::uint64_t timestamp = 0);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    std::size_t dimension() const {
        return points_.empty() ? 0 : points_.front().dimension();
    }

    const std::vector<Point>& points() const { return points_; }
    const Point& point(std::size_t i) const { return points_[i]; }
    double crowding(std::size_t i) const { return crowding_[i]; }
    const std::vector<double>& crowding_values() const { return crowding_; }
    const std::vector<std::uint32_t>& coordinate_view(std::size_t c) const {
        return by_coord_[c];
    }
    std::uint64_t timestamp() const { return timestamp_; }

    /// True iff some member strictly dominates p. Only the lexicographic
    /// prefix of p needs scanning.
    bool contains_dominator_of(const Point& p) const;

    /// Index of the removal victim: minimal crowding distance, ties broken
    /// towards the largest (lex, ordinal) order.
    std::size_t worst_position() const;

  private:
    void build_views_and_crowding();
    void compute_crowding();

    std::vector<Point> points_;
    std::vector<std::vector<std::uint32_t>> by_coord_;
    std::vector<double> crowding_;
    std::uint64_t timestamp_ = 0;
};

}  // namespace ndsort
