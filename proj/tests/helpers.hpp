#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ndsort/offline.hpp"
#include "ndsort/point.hpp"
#include "ndsort/rng.hpp"

namespace ndsort::test {

inline Point pt(const std::vector<double>& coords, std::uint64_t ordinal) {
    return Point(coords, ordinal);
}

inline std::vector<double> coords(const Point& p) {
    return {p.objectives.begin(), p.objectives.end()};
}

inline std::vector<Point> make_points(
    const std::vector<std::vector<double>>& rows, std::uint64_t first = 0) {
    std::vector<Point> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.emplace_back(rows[i], first + i);
    }
    return out;
}

inline std::vector<Point> random_points(Rng& rng, std::size_t n, std::size_t k,
                                        std::uint64_t first_ordinal = 0,
                                        double lo = 0.0, double hi = 1.0) {
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> c(k);
        for (auto& v : c) v = rng.uniform(lo, hi);
        out.emplace_back(std::move(c), first_ordinal + i);
    }
    return out;
}

/// Random points with a fair share of exact duplicates.
inline std::vector<Point> random_points_with_duplicates(Rng& rng,
                                                        std::size_t n,
                                                        std::size_t k,
                                                        std::uint64_t first = 0) {
    std::vector<Point> out = random_points(rng, n, k, first);
    for (std::size_t i = 0; i < n / 4 && n > 1; ++i) {
        const std::size_t src = rng.below(n);
        const std::size_t dst = rng.below(n);
        out[dst].objectives = out[src].objectives;
    }
    return out;
}

/// The rank-0 front of a random cloud: always an antichain.
inline std::vector<Point> random_antichain(Rng& rng, std::size_t target,
                                           std::size_t k,
                                           std::uint64_t first_ordinal = 0) {
    std::vector<Point> cloud = random_points(rng, target * 3 + 4, k);
    const RankAssignment ranks = brute_force_ranks(cloud);
    std::vector<Point> out;
    std::uint64_t ord = first_ordinal;
    for (std::size_t i = 0; i < cloud.size() && out.size() < target; ++i) {
        if (ranks[i] == 0) {
            out.push_back(cloud[i]);
            out.back().ordinal = ord++;
        }
    }
    return out;
}

inline bool is_antichain(std::span<const Point> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (i != j && strictly_dominates(pts[i], pts[j])) return false;
        }
    }
    return true;
}

/// Multiset comparison of point sets by (coordinates, ordinal).
inline bool same_point_set(std::vector<Point> a, std::vector<Point> b) {
    auto key = [](const Point& p) {
        return std::make_pair(p.objectives, p.ordinal);
    };
    auto less = [&](const Point& x, const Point& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (key(a[i]) != key(b[i])) return false;
    }
    return true;
}

/// Map ordinal -> rank for partition comparisons.
inline std::map<std::uint64_t, int> rank_map(std::span<const Point> pts,
                                             const RankAssignment& ranks) {
    std::map<std::uint64_t, int> out;
    for (std::size_t i = 0; i < pts.size(); ++i) out[pts[i].ordinal] = ranks[i];
    return out;
}

/// Naive crowding recomputation used as the independent oracle: sorts a
/// copy of the level by every coordinate and sums normalized neighbor gaps.
inline std::vector<double> naive_crowding(std::span<const Point> level) {
    const std::size_t n = level.size();
    std::vector<double> cd(n, 0.0);
    std::vector<char> boundary(n, 0);
    if (n == 0) return cd;
    const std::size_t k = level.front().dimension();
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            if (level[a][c] != level[b][c]) return level[a][c] < level[b][c];
            return level[a].ordinal < level[b].ordinal;
        });
        boundary[idx.front()] = 1;
        boundary[idx.back()] = 1;
        const double span = level[idx.back()][c] - level[idx.front()][c];
        if (span > 0.0) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                cd[idx[i]] += (level[idx[i + 1]][c] - level[idx[i - 1]][c]) / span;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary[i]) cd[i] = kInfiniteCrowding;
    }
    return cd;
}

}  // namespace ndsort::test
