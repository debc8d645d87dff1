#include "ndsort/level.hpp"

#include <algorithm>
#include <cassert>

namespace ndsort {

namespace {

/// Order of the per-coordinate views: coordinate value, then ordinal.
bool coord_less(const Point& a, const Point& b, std::size_t c) {
    if (a[c] != b[c]) return a[c] < b[c];
    return a.ordinal < b.ordinal;
}

}  // namespace

Level Level::from_scratch(std::vector<Point> points, std::uint64_t timestamp) {
    Level level;
    level.points_ = std::move(points);
    level.timestamp_ = timestamp;
    std::sort(level.points_.begin(), level.points_.end(), level_order_less);

    const std::size_t n = level.points_.size();
    const std::size_t k = level.dimension();
    level.by_coord_.assign(k, {});
    for (std::size_t c = 0; c < k; ++c) {
        auto& view = level.by_coord_[c];
        view.resize(n);
        for (std::size_t i = 0; i < n; ++i) view[i] = std::uint32_t(i);
        std::sort(view.begin(), view.end(),
                  [&](std::uint32_t a, std::uint32_t b) {
                      return coord_less(level.points_[a], level.points_[b], c);
                  });
    }
    level.compute_crowding();
    return level;
}

Level Level::rebuilt(const Level& old, const std::vector<char>& keep,
                     std::vector<Point> inserted, std::uint64_t timestamp) {
    assert(keep.size() == old.size());
    std::sort(inserted.begin(), inserted.end(), level_order_less);

    Level level;
    level.timestamp_ = timestamp;
    const std::size_t k =
        old.size() ? old.dimension()
                   : (inserted.empty() ? 0 : inserted.front().dimension());

    // merge the surviving old points with the sorted insertions
    std::size_t kept = 0;
    for (char c : keep) kept += (c != 0);
    const std::size_t n = kept + inserted.size();
    level.points_.reserve(n);

    // old position -> new position (or npos when dropped), and the new
    // positions of the inserted points in insertion-sorted order
    constexpr std::uint32_t npos = ~std::uint32_t(0);
    std::vector<std::uint32_t> old_to_new(old.size(), npos);
    std::vector<std::uint32_t> ins_to_new(inserted.size(), npos);

    std::size_t oi = 0, ii = 0;
    while (oi < old.size() || ii < inserted.size()) {
        while (oi < old.size() && !keep[oi]) ++oi;
        const bool take_old =
            oi < old.size() &&
            (ii >= inserted.size() ||
             level_order_less(old.points_[oi], inserted[ii]));
        if (take_old) {
            old_to_new[oi] = std::uint32_t(level.points_.size());
            level.points_.push_back(old.points_[oi]);
            ++oi;
        } else if (ii < inserted.size()) {
            ins_to_new[ii] = std::uint32_t(level.points_.size());
            level.points_.push_back(inserted[ii]);
            ++ii;
        }
    }

    // per-coordinate views: merge the filtered old view with the sorted
    // insertions, translating indices as we go
    level.by_coord_.assign(k, {});
    std::vector<std::uint32_t> ins_order(inserted.size());
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < inserted.size(); ++i) {
            ins_order[i] = std::uint32_t(i);
        }
        std::sort(ins_order.begin(), ins_order.end(),
                  [&](std::uint32_t a, std::uint32_t b) {
                      return coord_less(inserted[a], inserted[b], c);
                  });

        auto& view = level.by_coord_[c];
        view.reserve(n);
        const auto& old_view = old.size() ? old.by_coord_[c] : ins_order;
        std::size_t vo = 0, vi = 0;
        while (vo < old.size() || vi < inserted.size()) {
            while (vo < old.size() && !keep[old_view[vo]]) ++vo;
            bool take_old = false;
            if (vo < old.size() && vi < inserted.size()) {
                take_old = coord_less(old.points_[old_view[vo]],
                                      inserted[ins_order[vi]], c);
            } else {
                take_old = vo < old.size();
            }
            if (take_old) {
                view.push_back(old_to_new[old_view[vo]]);
                ++vo;
            } else if (vi < inserted.size()) {
                view.push_back(ins_to_new[ins_order[vi]]);
                ++vi;
            } else {
                break;
            }
        }
    }

    level.compute_crowding();
    return level;
}

void Level::compute_crowding() {
    const std::size_t n = points_.size();
    const std::size_t k = dimension();
    crowding_.assign(n, 0.0);
    if (n == 0) return;
    std::vector<char> boundary(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& view = by_coord_[c];
        boundary[view.front()] = 1;
        boundary[view.back()] = 1;
        const double span =
            points_[view.back()][c] - points_[view.front()][c];
        if (span > 0.0) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                crowding_[view[i]] +=
                    (points_[view[i + 1]][c] - points_[view[i - 1]][c]) / span;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary[i]) crowding_[i] = kInfiniteCrowding;
    }
}

bool Level::contains_dominator_of(const Point& p) const {
    // a strict dominator is lexicographically before p
    const auto end = std::lower_bound(points_.begin(), points_.end(), p,
                                      lex_less_coords);
    for (auto it = points_.begin(); it != end; ++it) {
        if (strictly_dominates(*it, p)) return true;
    }
    return false;
}

std::size_t Level::worst_position() const {
    assert(!points_.empty());
    // scanning backwards keeps the largest (lex, ordinal) point among ties
    std::size_t best = points_.size() - 1;
    for (std::size_t i = points_.size() - 1; i-- > 0;) {
        if (crowding_[i] < crowding_[best]) best = i;
    }
    return best;
}

}  // namespace ndsort
