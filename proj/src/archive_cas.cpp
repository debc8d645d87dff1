#include <atomic>
#include <cassert>
#include <iostream>
#include <mutex>

#include "archive_impl.hpp"
#include "ndsort/offline.hpp"

namespace ndsort::detail {

namespace {

/// One non-domination level stored in its own atomically replaceable cell.
/// A published snapshot is immutable; replacement succeeds only when the
/// cell still holds the snapshot the writer started from. A null snapshot
/// is a tombstone: the level was removed and the cell list has moved on.
struct Cell {
    std::atomic<const Level*> snap;
    explicit Cell(const Level* level) : snap(level) {}
};

/// Copy-on-write sequence of cells. Replaced only under the structure
/// lock (level added or last level removed); readers grab the current
/// list and index it freely, skipping tombstoned cells.
struct CellList {
    std::vector<Cell*> cells;
};

class CasArchive final : public ConcurrentArchive {
  public:
    CasArchive(const ArchiveConfig& cfg, std::vector<Point> initial)
        : cfg_(cfg), timestamps_(cfg.strategy == Strategy::Cas2) {
        RankedPopulation seq(std::move(initial));
        dimension_ = seq.dimension();
        auto* list = new CellList;
        for (const Level& level : seq.levels()) {
            // initial snapshots keep timestamp 0: older than any insertion
            auto* cell = new Cell(new Level(level));
            cells_.emplace_back(cell);
            list->cells.push_back(cell);
        }
        list_.store(list, std::memory_order_release);
        size_.store(seq.size(), std::memory_order_relaxed);
    }

    ~CasArchive() override {
        const CellList* list = list_.load(std::memory_order_acquire);
        for (const auto& cell : cells_) {
            delete cell->snap.load(std::memory_order_acquire);
        }
        delete list;
        for (const Level* level : retired_levels_) delete level;
        for (const CellList* old : retired_lists_) delete old;
    }

    void add_point(const Point& p) override {
        if (p.dimension() != dimension_) {
            throw std::invalid_argument("inserted point has wrong dimension");
        }
        insert_cascade(p);
        size_.fetch_add(1, std::memory_order_relaxed);
        if (cfg_.capacity_policy) capacity_remove();
    }

    QueryResult query_by_ordinal(std::size_t index) const override {
        const CellList* list = list_.load(std::memory_order_acquire);
        std::size_t rank = 0;
        for (Cell* cell : list->cells) {
            const Level* snap = cell->snap.load(std::memory_order_acquire);
            if (!snap) continue;  // removed level, not a rank
            if (index < snap->size()) {
                return {snap->point(index), rank, snap->crowding(index)};
            }
            index -= snap->size();
            ++rank;
        }
        throw std::invalid_argument("query index out of range");
    }

    std::size_t size() const override {
        return size_.load(std::memory_order_relaxed);
    }

    std::size_t level_count() const override {
        const CellList* list = list_.load(std::memory_order_acquire);
        std::size_t n = 0;
        for (Cell* cell : list->cells) {
            if (cell->snap.load(std::memory_order_acquire)) ++n;
        }
        return n;
    }

    std::size_t trim() override { return 0; }

    Strategy strategy() const override { return cfg_.strategy; }

    ArchiveStats stats() const override {
        ArchiveStats s;
        s.cas_retries = retries_.load(std::memory_order_relaxed);
        s.cas_published = published_.load(std::memory_order_relaxed);
        s.fast_path_merges = fast_merges_.load(std::memory_order_relaxed);
        s.slow_path_merges = slow_merges_.load(std::memory_order_relaxed);
        s.retry_diagnostics = diagnostics_.load(std::memory_order_relaxed);
        s.precondition_violations =
            precondition_violations_.load(std::memory_order_relaxed);
        return s;
    }

    std::vector<Level> snapshot_levels() const override {
        const CellList* list = list_.load(std::memory_order_acquire);
        std::vector<Level> out;
        for (Cell* cell : list->cells) {
            const Level* snap = cell->snap.load(std::memory_order_acquire);
            if (snap) out.push_back(*snap);
        }
        return out;
    }

  private:
    std::uint64_t next_stamp() {
        return timestamps_ ? clock_.fetch_add(1, std::memory_order_relaxed) + 1
                           : 0;
    }

    /// Lowest level in which any moving point lacks a strict dominator.
    /// The probe may race with updates; every caller revalidates through
    /// the merge itself or through the structure lock.
    /// Returns SIZE_MAX when a tombstone forces a list reload.
    std::size_t entry_level(const CellList* list,
                            std::span<const Point> moving) const {
        std::size_t best = list->cells.size();
        for (const Point& m : moving) {
            std::size_t lo = 0;
            std::size_t hi = best;  // capped: only the minimum matters
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                const Level* snap =
                    list->cells[mid]->snap.load(std::memory_order_acquire);
                if (!snap) return SIZE_MAX;
                if (snap->contains_dominator_of(m)) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            best = lo;
        }
        return best;
    }

    void insert_cascade(const Point& p) {
        const std::uint64_t tau =
            timestamps_ ? clock_.fetch_add(1, std::memory_order_relaxed) + 1
                        : 0;
        std::vector<Point> moving{p};
        std::uint64_t attempts = 0;
        bool diagnosed = false;
        // The filtered fast path is sound only when every moving point was
        // a member of the level version this thread just replaced: then an
        // unmodified next level provably contains no dominator of them.
        // The first merge of an insertion never qualifies (the new point
        // has no such pedigree), so it always runs the full merge.
        bool displaced_members = false;

        const CellList* list = list_.load(std::memory_order_acquire);
        std::size_t lvl = entry_level(list, moving);

        while (true) {
            if (lvl == SIZE_MAX) {
                list = list_.load(std::memory_order_acquire);
                lvl = entry_level(list, moving);
                displaced_members = false;
                continue;
            }
            if (lvl >= list->cells.size()) {
                if (try_append(list, moving)) return;
                // structure changed: rescan from the current list
                list = list_.load(std::memory_order_acquire);
                lvl = entry_level(list, moving);
                displaced_members = false;
                continue;
            }

            Cell* cell = list->cells[lvl];
            const Level* old = cell->snap.load(std::memory_order_acquire);
            if (!old) {
                lvl = SIZE_MAX;  // tombstone: level removed, restart
                continue;
            }

            std::vector<Point> displaced;
            const Level* fresh = nullptr;

            if (timestamps_ && displaced_members && old->timestamp() < tau) {
                // the level was not republished since this insertion began,
                // so no level point can dominate a moving point
                fast_merges_.fetch_add(1, std::memory_order_relaxed);
                if (cfg_.debug_checks) check_fast_path(*old, moving);
                NadirSplit split = split_by_nadir(*old, moving);
                const std::vector<char> dominated =
                    detail::dominated_flags(moving, split.candidates);
                for (std::size_t i = 0; i < split.candidates.size(); ++i) {
                    if (dominated[i]) {
                        displaced.push_back(std::move(split.candidates[i]));
                    } else {
                        split.keep[split.positions[i]] = 1;
                    }
                }
                fresh = new Level(
                    Level::rebuilt(*old, split.keep, moving, next_stamp()));
            } else {
                // another thread may have improved this level after the
                // moving set was formed, so domination can go both ways
                slow_merges_.fetch_add(1, std::memory_order_relaxed);
                std::vector<char> old_disp, moving_disp;
                detail::cross_dominated_flags(old->points(), moving, old_disp,
                                              moving_disp);
                std::vector<Point> arriving;
                bool any_arrives = false;
                bool any_leaves = false;
                for (std::size_t i = 0; i < moving.size(); ++i) {
                    if (moving_disp[i]) {
                        displaced.push_back(moving[i]);
                    } else {
                        arriving.push_back(moving[i]);
                        any_arrives = true;
                    }
                }
                std::vector<char> keep(old->size(), 1);
                for (std::size_t i = 0; i < old->size(); ++i) {
                    if (old_disp[i]) {
                        keep[i] = 0;
                        displaced.push_back(old->point(i));
                        any_leaves = true;
                    }
                }
                if (!any_arrives && !any_leaves) {
                    // level content unchanged; the set just moves deeper,
                    // but without membership in a replaced version
                    displaced_members = false;
                    ++lvl;
                    continue;
                }
                fresh = new Level(Level::rebuilt(*old, keep,
                                                 std::move(arriving),
                                                 next_stamp()));
            }

            if (cell->snap.compare_exchange_strong(old, fresh,
                                                   std::memory_order_acq_rel,
                                                   std::memory_order_acquire)) {
                retire(old);
                published_.fetch_add(1, std::memory_order_relaxed);
                if (displaced.empty()) return;
                moving = std::move(displaced);
                displaced_members = true;
                ++lvl;
            } else {
                delete fresh;
                retries_.fetch_add(1, std::memory_order_relaxed);
                if (++attempts >= cfg_.retry_diagnostic_bound && !diagnosed) {
                    diagnosed = true;
                    diagnostics_.fetch_add(1, std::memory_order_relaxed);
                    std::cerr << "ndsort: " << strategy_name(cfg_.strategy)
                              << " insertion exceeded "
                              << cfg_.retry_diagnostic_bound
                              << " publish retries; still retrying\n";
                }
                // redo against the re-read snapshot of the same level
            }
        }
    }

    /// Appends the moving set as a new last level. Validated under the
    /// structure lock: a concurrent removal may have deleted the points
    /// that used to dominate the set, in which case the entry level moved
    /// and the caller must continue cascading instead.
    bool try_append(const CellList* seen,
                    std::vector<Point>& moving) {
        std::lock_guard<std::mutex> guard(structure_mu_);
        const CellList* cur = list_.load(std::memory_order_acquire);
        if (cur != seen || entry_level(cur, moving) != cur->cells.size()) {
            return false;
        }
        auto* level =
            new Level(Level::from_scratch(std::move(moving), next_stamp()));
        auto* cell = new Cell(level);
        cells_.emplace_back(cell);
        auto* next = new CellList{cur->cells};
        next->cells.push_back(cell);
        list_.store(next, std::memory_order_release);
        retire_list(cur);
        published_.fetch_add(1, std::memory_order_relaxed);
        return true;
    }

    /// One worst-point removal, serialized by the structure lock. Content
    /// replacement still races with inserters, so it goes through the same
    /// compare-and-set loop; emptying the last level tombstones its cell
    /// and publishes a shorter list.
    void capacity_remove() {
        if (size_.load(std::memory_order_relaxed) <= cfg_.capacity) return;
        std::lock_guard<std::mutex> guard(structure_mu_);
        if (size_.load(std::memory_order_relaxed) <= cfg_.capacity) return;
        while (true) {
            const CellList* list = list_.load(std::memory_order_acquire);
            assert(!list->cells.empty());
            Cell* cell = list->cells.back();
            const Level* old = cell->snap.load(std::memory_order_acquire);
            assert(old && "tombstones are only created under this lock");
            if (old->size() == 1) {
                if (cell->snap.compare_exchange_strong(
                        old, nullptr, std::memory_order_acq_rel,
                        std::memory_order_acquire)) {
                    retire(old);
                    auto* next = new CellList{list->cells};
                    next->cells.pop_back();
                    list_.store(next, std::memory_order_release);
                    retire_list(list);
                    size_.fetch_sub(1, std::memory_order_relaxed);
                    return;
                }
            } else {
                std::vector<char> keep(old->size(), 1);
                keep[old->worst_position()] = 0;
                const Level* fresh =
                    new Level(Level::rebuilt(*old, keep, {}, next_stamp()));
                if (cell->snap.compare_exchange_strong(
                        old, fresh, std::memory_order_acq_rel,
                        std::memory_order_acquire)) {
                    retire(old);
                    published_.fetch_add(1, std::memory_order_relaxed);
                    size_.fetch_sub(1, std::memory_order_relaxed);
                    return;
                }
                delete fresh;
                retries_.fetch_add(1, std::memory_order_relaxed);
            }
        }
    }

    void check_fast_path(const Level& level, std::span<const Point> moving) {
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

    /// Replaced snapshots stay allocated until the archive dies: readers
    /// may still hold them, and keeping them also rules out pointer reuse
    /// under the compare-and-set.
    void retire(const Level* level) {
        std::lock_guard<std::mutex> guard(retire_mu_);
        retired_levels_.push_back(level);
    }

    void retire_list(const CellList* list) {
        std::lock_guard<std::mutex> guard(retire_mu_);
        retired_lists_.push_back(list);
    }

    ArchiveConfig cfg_;
    bool timestamps_;
    std::size_t dimension_ = 0;

    std::atomic<const CellList*> list_{nullptr};
    std::vector<std::unique_ptr<Cell>> cells_;  // owns every cell ever made
    std::mutex structure_mu_;  // level count changes and capacity removals

    std::atomic<std::uint64_t> clock_{0};
    std::atomic<std::size_t> size_{0};

    std::atomic<std::uint64_t> retries_{0};
    std::atomic<std::uint64_t> published_{0};
    std::atomic<std::uint64_t> fast_merges_{0};
    std::atomic<std::uint64_t> slow_merges_{0};
    std::atomic<std::uint64_t> diagnostics_{0};
    std::atomic<std::uint64_t> precondition_violations_{0};

    std::mutex retire_mu_;
    std::vector<const Level*> retired_levels_;
    std::vector<const CellList*> retired_lists_;
};

}  // namespace

std::unique_ptr<ConcurrentArchive> make_cas_archive(const ArchiveConfig& config,
                                                    std::vector<Point> initial) {
    return std::make_unique<CasArchive>(config, std::move(initial));
}

}  // namespace ndsort::detail
