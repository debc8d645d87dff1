#include <mutex>

#include "archive_impl.hpp"

namespace ndsort::detail {

namespace {

/// The "Sync" strategy: every public operation runs under one archive-wide
/// mutex; inside the critical section this is exactly the sequential
/// structure.
class GlobalLockArchive final : public ConcurrentArchive {
  public:
    GlobalLockArchive(const ArchiveConfig& cfg, std::vector<Point> initial)
        : cfg_(cfg), pop_(std::move(initial)) {}

    void add_point(const Point& p) override {
        std::lock_guard<std::mutex> guard(mu_);
        pop_.insert(p);
        if (cfg_.capacity_policy && pop_.size() > cfg_.capacity) {
            pop_.remove_worst();
        }
    }

    QueryResult query_by_ordinal(std::size_t index) const override {
        std::lock_guard<std::mutex> guard(mu_);
        return pop_.query_by_ordinal(index);
    }

    std::size_t size() const override {
        std::lock_guard<std::mutex> guard(mu_);
        return pop_.size();
    }

    std::size_t level_count() const override {
        std::lock_guard<std::mutex> guard(mu_);
        return pop_.level_count();
    }

    std::size_t trim() override { return 0; }
    Strategy strategy() const override { return Strategy::GlobalLock; }
    ArchiveStats stats() const override { return {}; }

    std::vector<Level> snapshot_levels() const override {
        std::lock_guard<std::mutex> guard(mu_);
        return pop_.levels();
    }

  private:
    ArchiveConfig cfg_;
    mutable std::mutex mu_;
    RankedPopulation pop_;
};

}  // namespace

std::unique_ptr<ConcurrentArchive> make_globallock_archive(
    const ArchiveConfig& config, std::vector<Point> initial) {
    return std::make_unique<GlobalLockArchive>(config, std::move(initial));
}

}  // namespace ndsort::detail
