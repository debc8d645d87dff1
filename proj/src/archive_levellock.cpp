#include <atomic>
#include <cassert>
#include <cmath>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include "archive_impl.hpp"
#include "ndsort/offline.hpp"

namespace ndsort::detail {

namespace {

/// Per-archive, per-thread record of held level locks, used by the debug
/// lock-order checker.
thread_local std::vector<std::pair<const void*, std::size_t>> tl_held_locks;

struct Slot {
    std::mutex mu;
    std::shared_ptr<const Level> snap;
};

/// Finer-grained locking: one lock per level, acquired hand-over-hand in
/// the direction of increasing level index, so threads updating the
/// structure follow each other in an unchanged order. Deletions are
/// deferred: nothing is removed until the size exceeds trim_threshold * n,
/// then the surplus worst points are removed in one batch while a
/// dedicated phase lock shuts out insertions and readers.
class LevelLockArchive final : public ConcurrentArchive {
  public:
    LevelLockArchive(const ArchiveConfig& cfg, std::vector<Point> initial)
        : cfg_(cfg) {
        RankedPopulation seq(std::move(initial));
        dimension_ = seq.dimension();
        for (const Level& level : seq.levels()) {
            auto slot = std::make_shared<Slot>();
            slot->snap = std::make_shared<const Level>(level);
            slots_.push_back(std::move(slot));
        }
        size_.store(seq.size(), std::memory_order_relaxed);
    }

    void add_point(const Point& p) override {
        if (p.dimension() != dimension_) {
            throw std::invalid_argument("inserted point has wrong dimension");
        }
        {
            std::shared_lock<std::shared_mutex> phase(phase_mu_);
            insert_cascade(p);
            size_.fetch_add(1, std::memory_order_relaxed);
        }
        if (cfg_.capacity_policy &&
            size_.load(std::memory_order_relaxed) > trim_trigger()) {
            std::unique_lock<std::shared_mutex> phase(phase_mu_);
            if (size_.load(std::memory_order_relaxed) > trim_trigger()) {
                trims_.fetch_add(1, std::memory_order_relaxed);
                trim_removed_.fetch_add(remove_surplus(),
                                        std::memory_order_relaxed);
            }
        }
    }

    QueryResult query_by_ordinal(std::size_t index) const override {
        std::shared_lock<std::shared_mutex> phase(phase_mu_);
        const std::size_t count = slot_count();
        for (std::size_t rank = 0; rank < count; ++rank) {
            const std::shared_ptr<Slot> slot = slot_at(rank);
            std::lock_guard<std::mutex> guard(slot->mu);
            const auto& snap = slot->snap;
            if (index < snap->size()) {
                return {snap->point(index), rank, snap->crowding(index)};
            }
            index -= snap->size();
        }
        throw std::invalid_argument("query index out of range");
    }

    std::size_t size() const override {
        return size_.load(std::memory_order_relaxed);
    }

    std::size_t level_count() const override { return slot_count(); }

    std::size_t trim() override {
        std::unique_lock<std::shared_mutex> phase(phase_mu_);
        const std::size_t removed = remove_surplus();
        if (removed) {
            trims_.fetch_add(1, std::memory_order_relaxed);
            trim_removed_.fetch_add(removed, std::memory_order_relaxed);
        }
        return removed;
    }

    Strategy strategy() const override { return Strategy::LevelLock; }

    ArchiveStats stats() const override {
        ArchiveStats s;
        s.trims = trims_.load(std::memory_order_relaxed);
        s.trim_removed = trim_removed_.load(std::memory_order_relaxed);
        s.lock_order_violations =
            lock_order_violations_.load(std::memory_order_relaxed);
        s.precondition_violations =
            precondition_violations_.load(std::memory_order_relaxed);
        return s;
    }

    std::vector<Level> snapshot_levels() const override {
        std::shared_lock<std::shared_mutex> phase(phase_mu_);
        std::vector<Level> out;
        const std::size_t count = slot_count();
        for (std::size_t i = 0; i < count; ++i) {
            const std::shared_ptr<Slot> slot = slot_at(i);
            std::lock_guard<std::mutex> guard(slot->mu);
            out.push_back(*slot->snap);
        }
        return out;
    }

  private:
    std::size_t slot_count() const {
        std::shared_lock<std::shared_mutex> guard(structure_mu_);
        return slots_.size();
    }

    std::shared_ptr<Slot> slot_at(std::size_t i) const {
        std::shared_lock<std::shared_mutex> guard(structure_mu_);
        return slots_[i];
    }

    /// Size above which the deferred deletion batch triggers ("exceeds
    /// threshold * n" with integer sizes).
    std::size_t trim_trigger() const {
        const double t = cfg_.trim_threshold * double(cfg_.capacity);
        const double rounded = std::round(t);
        if (std::abs(t - rounded) < 1e-6) return std::size_t(rounded);
        return std::size_t(std::floor(t));
    }

    void lock_slot(Slot& slot, std::size_t index) {
        if (cfg_.debug_checks) {
            for (const auto& [archive, held] : tl_held_locks) {
                if (archive == this && held >= index) {
                    lock_order_violations_.fetch_add(
                        1, std::memory_order_relaxed);
                }
            }
            slot.mu.lock();
            tl_held_locks.emplace_back(this, index);
        } else {
            slot.mu.lock();
        }
    }

    void unlock_slot(Slot& slot, std::size_t index) {
        if (cfg_.debug_checks) {
            for (auto it = tl_held_locks.rbegin(); it != tl_held_locks.rend();
                 ++it) {
                if (it->first == this && it->second == index) {
                    tl_held_locks.erase(std::next(it).base());
                    break;
                }
            }
        }
        slot.mu.unlock();
    }

    /// Lowest level whose snapshot holds no strict dominator of p. Probes
    /// lock one slot at a time, so acquisition order does not matter here;
    /// the result is validated again under the entry lock.
    std::size_t entry_level(const Point& p) const {
        std::size_t lo = 0;
        std::size_t hi = slot_count();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const std::shared_ptr<Slot> slot = slot_at(mid);
            bool dominated;
            {
                std::lock_guard<std::mutex> guard(slot->mu);
                dominated = slot->snap->contains_dominator_of(p);
            }
            if (dominated) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    }

    void insert_cascade(const Point& p) {
        std::vector<Point> moving{p};
        std::size_t lvl = entry_level(p);
        std::shared_ptr<Slot> cur;

        // acquire the entry slot; seats can only move deeper while we wait
        while (true) {
            if (lvl >= slot_count()) {
                std::unique_lock<std::shared_mutex> guard(structure_mu_);
                if (slots_.size() == lvl) {
                    append_locked(std::move(moving));
                    return;
                }
                continue;  // a level appeared meanwhile; lock it instead
            }
            cur = slot_at(lvl);
            lock_slot(*cur, lvl);
            if (cur->snap->contains_dominator_of(p)) {
                unlock_slot(*cur, lvl);
                ++lvl;
                continue;
            }
            break;
        }

        // hand-over-hand cascade: the next lock is taken before the current
        // one is released, so no thread can overtake this one
        while (true) {
            const Level& level = *cur->snap;
            if (cfg_.debug_checks) check_precondition(level, moving);

            NadirSplit split = split_by_nadir(level, moving);
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
            cur->snap = std::make_shared<const Level>(
                Level::rebuilt(level, split.keep, moving));

            if (displaced.empty()) {
                unlock_slot(*cur, lvl);
                return;
            }
            moving = std::move(displaced);

            const std::size_t next = lvl + 1;
            if (next >= slot_count()) {
                std::unique_lock<std::shared_mutex> guard(structure_mu_);
                if (slots_.size() == next) {
                    append_locked(std::move(moving));
                    guard.unlock();
                    unlock_slot(*cur, lvl);
                    return;
                }
                // another insertion appended first; merge into it below
            }
            const std::shared_ptr<Slot> nxt = slot_at(next);
            lock_slot(*nxt, next);
            unlock_slot(*cur, lvl);
            cur = nxt;
            lvl = next;
        }
    }

    /// Requires structure_mu_ held exclusively.
    void append_locked(std::vector<Point> moving) {
        auto slot = std::make_shared<Slot>();
        slot->snap = std::make_shared<const Level>(
            Level::from_scratch(std::move(moving)));
        slots_.push_back(std::move(slot));
    }

    /// Removes size - n worst points, last level upwards, dropping levels
    /// that empty out. Requires the phase lock held exclusively: no other
    /// operation is in flight, so slot locks are unnecessary.
    std::size_t remove_surplus() {
        std::size_t current = size_.load(std::memory_order_relaxed);
        if (current <= cfg_.capacity) return 0;
        std::size_t to_remove = current - cfg_.capacity;
        const std::size_t removed = to_remove;
        while (to_remove > 0) {
            assert(!slots_.empty());
            Slot& last = *slots_.back();
            const Level& level = *last.snap;
            if (level.size() <= to_remove) {
                to_remove -= level.size();
                slots_.pop_back();
                continue;
            }
            // drop the worst points of the final partial level one by one:
            // each removal changes the crowding of the remaining points
            std::shared_ptr<const Level> snap = last.snap;
            while (to_remove > 0) {
                std::vector<char> keep(snap->size(), 1);
                keep[snap->worst_position()] = 0;
                snap = std::make_shared<const Level>(
                    Level::rebuilt(*snap, keep, {}));
                --to_remove;
            }
            last.snap = std::move(snap);
        }
        size_.fetch_sub(removed, std::memory_order_relaxed);
        return removed;
    }

    void check_precondition(const Level& level, std::span<const Point> moving) {
        for (const Point& q : level.points()) {
            for (const Point& m : moving) {
                if (strictly_dominates(q, m)) {
                    precondition_violations_.fetch_add(
                        1, std::memory_order_relaxed);
                    return;
                }
            }
        }
    }

    ArchiveConfig cfg_;
    std::size_t dimension_ = 0;

    mutable std::shared_mutex phase_mu_;      // inserts shared, trim exclusive
    mutable std::shared_mutex structure_mu_;  // guards the slot vector itself
    std::vector<std::shared_ptr<Slot>> slots_;
    std::atomic<std::size_t> size_{0};

    std::atomic<std::uint64_t> trims_{0};
    std::atomic<std::uint64_t> trim_removed_{0};
    std::atomic<std::uint64_t> lock_order_violations_{0};
    std::atomic<std::uint64_t> precondition_violations_{0};
};

}  // namespace

std::unique_ptr<ConcurrentArchive> make_levellock_archive(
    const ArchiveConfig& config, std::vector<Point> initial) {
    return std::make_unique<LevelLockArchive>(config, std::move(initial));
}

}  // namespace ndsort::detail
