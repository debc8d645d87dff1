#pragma once

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ndsort {

/// Objective vectors live inline up to ten coordinates (the largest k the
/// problem suite uses), so copying points during level rebuilds does not
/// allocate.
using Objectives = boost::container::small_vector<double, 10>;

/// A point in k-dimensional objective space (minimization in every
/// coordinate). The ordinal is a stable identity assigned at creation and
/// unique within one population; it also breaks ordering ties between
/// duplicate objective vectors.
struct Point {
    Objectives objectives;
    std::uint64_t ordinal = 0;

    Point() = default;
    Point(Objectives obj, std::uint64_t ord)
        : objectives(std::move(obj)), ordinal(ord) {}
    Point(const std::vector<double>& obj, std::uint64_t ord)
        : objectives(obj.begin(), obj.end()), ordinal(ord) {}

    std::size_t dimension() const { return objectives.size(); }
    double operator[](std::size_t i) const { return objectives[i]; }
    std::span<const double> view() const {
        return {objectives.data(), objectives.size()};
    }
};

enum class DominanceRelation {
    StrictlyDominates,   // p <= q everywhere, < somewhere
    Equal,               // weakly dominates only: identical vectors
    Dominated,           // q strictly dominates p
    Incomparable,
};

inline void require_same_dimension(std::span<const double> a,
                                   std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("objective vectors differ in dimension: " +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    }
}

/// True iff a[i] <= b[i] for every coordinate and a[i] < b[i] for at least
/// one. Dimensions must match (unchecked here; this is a hot path).
inline bool strictly_dominates(std::span<const double> a,
                               std::span<const double> b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

inline bool strictly_dominates(const Point& a, const Point& b) {
    return strictly_dominates(a.view(), b.view());
}

inline DominanceRelation compare_dominance(std::span<const double> p,
                                           std::span<const double> q) {
    require_same_dimension(p, q);
    bool p_better = false;
    bool q_better = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < q[i]) p_better = true;
        else if (q[i] < p[i]) q_better = true;
        if (p_better && q_better) return DominanceRelation::Incomparable;
    }
    if (p_better) return DominanceRelation::StrictlyDominates;
    if (q_better) return DominanceRelation::Dominated;
    return DominanceRelation::Equal;
}

inline DominanceRelation compare_dominance(const Point& p, const Point& q) {
    return compare_dominance(p.view(), q.view());
}

/// Lexicographic comparison of the coordinate sequences alone.
/// Returns -1, 0 or +1.
inline int lex_compare(std::span<const double> p, std::span<const double> q) {
    require_same_dimension(p, q);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < q[i]) return -1;
        if (q[i] < p[i]) return 1;
    }
    return 0;
}

inline int lex_compare(const Point& p, const Point& q) {
    return lex_compare(p.view(), q.view());
}

/// Coordinate-lexicographic order without the dimension check; hot path.
inline bool lex_less_coords(const Point& p, const Point& q) {
    for (std::size_t i = 0; i < p.objectives.size(); ++i) {
        if (p.objectives[i] < q.objectives[i]) return true;
        if (q.objectives[i] < p.objectives[i]) return false;
    }
    return false;
}

/// Strict total order used inside levels: lexicographic by coordinates,
/// ties broken by ordinal so duplicate vectors still have a unique order.
inline bool level_order_less(const Point& p, const Point& q) {
    for (std::size_t i = 0; i < p.objectives.size(); ++i) {
        if (p.objectives[i] < q.objectives[i]) return true;
        if (q.objectives[i] < p.objectives[i]) return false;
    }
    return p.ordinal < q.ordinal;
}

/// Coordinatewise minimum of a nonempty set of points.
inline std::vector<double> nadir(std::span<const Point> points) {
    if (points.empty()) {
        throw std::invalid_argument("nadir of an empty set is undefined");
    }
    std::vector<double> out(points.front().objectives.begin(),
                            points.front().objectives.end());
    for (std::size_t j = 1; j < points.size(); ++j) {
        const auto& obj = points[j].objectives;
        require_same_dimension(std::span<const double>(out),
                               std::span<const double>(obj.data(), obj.size()));
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (obj[i] < out[i]) out[i] = obj[i];
        }
    }
    return out;
}

constexpr double kInfiniteCrowding = std::numeric_limits<double>::infinity();

}  // namespace ndsort
