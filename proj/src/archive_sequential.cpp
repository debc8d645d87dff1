#include <stdexcept>

#include "archive_impl.hpp"

namespace ndsort {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Inds: return "inds";
        case Strategy::GlobalLock: return "sync";
        case Strategy::Cas1: return "cas1";
        case Strategy::Cas2: return "cas2";
        case Strategy::LevelLock: return "lock";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "inds") return Strategy::Inds;
    if (name == "sync") return Strategy::GlobalLock;
    if (name == "cas1") return Strategy::Cas1;
    if (name == "cas2") return Strategy::Cas2;
    if (name == "lock") return Strategy::LevelLock;
    throw std::invalid_argument("unknown strategy: " + name);
}

std::unique_ptr<ConcurrentArchive> make_archive(const ArchiveConfig& config,
                                                std::vector<Point> initial) {
    ArchiveConfig cfg = config;
    if (cfg.capacity == 0) cfg.capacity = initial.size();
    switch (cfg.strategy) {
        case Strategy::Inds:
            return detail::make_sequential_archive(cfg, std::move(initial));
        case Strategy::GlobalLock:
            return detail::make_globallock_archive(cfg, std::move(initial));
        case Strategy::Cas1:
        case Strategy::Cas2:
            return detail::make_cas_archive(cfg, std::move(initial));
        case Strategy::LevelLock:
            return detail::make_levellock_archive(cfg, std::move(initial));
    }
    throw std::invalid_argument("unknown strategy");
}

namespace detail {

namespace {

/// The sequential structure behind the archive interface. No locking at
/// all: the caller guarantees single-threaded use (the INDS baseline).
class SequentialArchive final : public ConcurrentArchive {
  public:
    SequentialArchive(const ArchiveConfig& cfg, std::vector<Point> initial)
        : cfg_(cfg), pop_(std::move(initial)) {}

    void add_point(const Point& p) override {
        pop_.insert(p);
        if (cfg_.capacity_policy && pop_.size() > cfg_.capacity) {
            pop_.remove_worst();
        }
    }

    QueryResult query_by_ordinal(std::size_t index) const override {
        return pop_.query_by_ordinal(index);
    }

    std::size_t size() const override { return pop_.size(); }
    std::size_t level_count() const override { return pop_.level_count(); }
    std::size_t trim() override { return 0; }
    Strategy strategy() const override { return Strategy::Inds; }
    ArchiveStats stats() const override { return {}; }

    std::vector<Level> snapshot_levels() const override {
        return pop_.levels();
    }

  private:
    ArchiveConfig cfg_;
    RankedPopulation pop_;
};

}  // namespace

std::unique_ptr<ConcurrentArchive> make_sequential_archive(
    const ArchiveConfig& config, std::vector<Point> initial) {
    return std::make_unique<SequentialArchive>(config, std::move(initial));
}

}  // namespace detail

}  // namespace ndsort
