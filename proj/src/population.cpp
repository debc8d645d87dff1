#include "ndsort/population.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "ndsort/offline.hpp"

namespace ndsort {

NadirSplit split_by_nadir(const Level& level, std::span<const Point> moving) {
    NadirSplit out;
    const std::vector<double> nad = nadir(moving);
    const std::span<const double> nad_view(nad);
    out.keep.assign(level.size(), 1);
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (strictly_dominates(nad_view, level.point(i).view())) {
            out.keep[i] = 0;
            out.candidates.push_back(level.point(i));
            out.positions.push_back(std::uint32_t(i));
        }
    }
    return out;
}

RankedPopulation::RankedPopulation(std::vector<Point> initial) {
    if (initial.empty()) {
        throw std::invalid_argument("cannot build a population from nothing");
    }
    dimension_ = initial.front().dimension();
    for (const Point& p : initial) {
        if (p.dimension() != dimension_) {
            throw std::invalid_argument("initial points differ in dimension");
        }
    }

    const RankAssignment ranks = sort_ranks(initial);
    const int max_rank = *std::max_element(ranks.begin(), ranks.end());
    std::vector<std::vector<Point>> buckets(std::size_t(max_rank) + 1);
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (!level_of_.emplace(initial[i].ordinal, std::uint32_t(ranks[i]))
                 .second) {
            throw std::invalid_argument("duplicate ordinal in initial points");
        }
        buckets[std::size_t(ranks[i])].push_back(std::move(initial[i]));
    }
    levels_.reserve(buckets.size());
    for (auto& bucket : buckets) {
        levels_.push_back(Level::from_scratch(std::move(bucket)));
    }
    size_ = ranks.size();
}

std::size_t RankedPopulation::find_insertion_level(const Point& p) const {
    std::size_t lo = 0;
    std::size_t hi = levels_.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (levels_[mid].contains_dominator_of(p)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo;
}

void RankedPopulation::check_insertable(const Point& p) const {
    if (p.dimension() != dimension_) {
        throw std::invalid_argument("inserted point has wrong dimension");
    }
    if (level_of_.count(p.ordinal)) {
        throw std::invalid_argument("ordinal already present: " +
                                    std::to_string(p.ordinal));
    }
}

void RankedPopulation::insert(Point p, InsertObserver* observer) {
    check_insertable(p);

    std::size_t lvl = find_insertion_level(p);
    std::vector<Point> moving;
    moving.push_back(std::move(p));

    while (lvl < levels_.size()) {
        if (observer) observer->on_moving_set(lvl, moving);
        Level& cur = levels_[lvl];

        NadirSplit split = split_by_nadir(cur, moving);
        const std::vector<char> dominated =
            detail::dominated_flags(moving, split.candidates);

        std::vector<Point> displaced;
        for (std::size_t i = 0; i < split.candidates.size(); ++i) {
            if (dominated[i]) {
                displaced.push_back(std::move(split.candidates[i]));
            } else {
                split.keep[split.positions[i]] = 1;
            }
        }

        if (displaced.size() == cur.size()) {
            // the moving set dominates this level entirely: it becomes a
            // new level right here and everything deeper keeps its rank + 1
            for (const Point& m : moving) {
                level_of_[m.ordinal] = std::uint32_t(lvl);
            }
            for (std::size_t j = lvl; j < levels_.size(); ++j) {
                for (const Point& q : levels_[j].points()) {
                    level_of_[q.ordinal] = std::uint32_t(j + 1);
                }
            }
            levels_.insert(levels_.begin() + std::ptrdiff_t(lvl),
                           Level::from_scratch(std::move(moving)));
            if (observer) observer->on_level_added(lvl);
            ++size_;
            return;
        }

        for (const Point& m : moving) {
            level_of_[m.ordinal] = std::uint32_t(lvl);
        }
        levels_[lvl] = Level::rebuilt(cur, split.keep, std::move(moving));
        if (observer) observer->on_level_rebuilt(lvl);

        moving = std::move(displaced);
        if (moving.empty()) {
            ++size_;
            return;
        }
        ++lvl;
    }

    for (const Point& m : moving) {
        level_of_[m.ordinal] = std::uint32_t(levels_.size());
    }
    if (observer) observer->on_moving_set(lvl, moving);
    levels_.push_back(Level::from_scratch(std::move(moving)));
    if (observer) observer->on_level_added(levels_.size() - 1);
    ++size_;
}

Point RankedPopulation::remove_worst() {
    if (size_ == 0) {
        throw std::invalid_argument("cannot remove from an empty population");
    }
    Level& last = levels_.back();
    const std::size_t pos = last.worst_position();
    Point removed = last.point(pos);
    level_of_.erase(removed.ordinal);
    if (last.size() == 1) {
        levels_.pop_back();
    } else {
        std::vector<char> keep(last.size(), 1);
        keep[pos] = 0;
        levels_.back() = Level::rebuilt(last, keep, {});
    }
    --size_;
    return removed;
}

QueryResult RankedPopulation::query_by_ordinal(std::size_t index) const {
    if (index >= size_) {
        throw std::invalid_argument("query index out of range: " +
                                    std::to_string(index));
    }
    for (std::size_t rank = 0; rank < levels_.size(); ++rank) {
        const Level& level = levels_[rank];
        if (index < level.size()) {
            return {level.point(index), rank, level.crowding(index)};
        }
        index -= level.size();
    }
    assert(false && "size bookkeeping out of sync");
    return {};
}

}  // namespace ndsort
