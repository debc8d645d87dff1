#pragma once

#include <span>
#include <vector>

#include "ndsort/point.hpp"

namespace ndsort {

/// Non-domination ranks parallel to the input sequence: rank 0 for points
/// dominated by nobody, rank r+1 for points dominated only by points of
/// rank <= r. Duplicate vectors share a rank.
using RankAssignment = std::vector<int>;

/// O(n^2 k) reference ranking, written as plainly as possible: it is the
/// oracle the fast paths are tested against.
RankAssignment brute_force_ranks(std::span<const Point> points);

/// Divide-and-conquer non-dominated sorting over the first objective with
/// coordinate reduction; output is identical to brute_force_ranks.
RankAssignment sort_ranks(std::span<const Point> points);

struct MergeSplit {
    std::vector<Point> retained;   // candidates kept in the level
    std::vector<Point> displaced;  // candidates pushed to the next level
};

/// Given an antichain of known rank-0 points and candidate points that are
/// themselves an antichain and cannot dominate any known point, splits the
/// candidates into those dominated by a known point and the rest.
/// Preconditions are not checked; violating them yields unspecified output.
MergeSplit helper_b_merge(std::span<const Point> known,
                          std::span<const Point> candidates);

struct TwoRankSplit {
    std::vector<Point> rank_zero;
    std::vector<Point> rank_one;
};

/// Ranks the union of two antichains. Cross-domination may go both ways,
/// but no chain of length three exists in such a union, so the output is a
/// two-way partition.
TwoRankSplit merge_two_antichains(std::span<const Point> a,
                                  std::span<const Point> b);

namespace detail {

/// Flag-based variant used on the insertion path: flags[i] is set iff some
/// known point strictly dominates candidates[i]. Same preconditions as
/// helper_b_merge.
std::vector<char> dominated_flags(std::span<const Point> known,
                                  std::span<const Point> candidates);

/// Two-sided variant for merge_two_antichains: fills one flag vector per
/// side, set for points that end up with rank one.
void cross_dominated_flags(std::span<const Point> a, std::span<const Point> b,
                           std::vector<char>& a_displaced,
                           std::vector<char>& b_displaced);

}  // namespace detail

}  // namespace ndsort
