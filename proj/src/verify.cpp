#include "ndsort/verify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ndsort/offline.hpp"

namespace ndsort {

namespace {

constexpr std::size_t kMaxViolations = 16;

bool crowding_close(double stored, double reference) {
    const bool si = std::isinf(stored);
    const bool ri = std::isinf(reference);
    if (si || ri) return si && ri;
    const double scale = std::max({std::abs(stored), std::abs(reference), 1.0});
    return std::abs(stored - reference) <= 1e-12 * scale;
}

}  // namespace

void InvariantReport::fail(std::string what) {
    ok = false;
    if (violations.size() < kMaxViolations) {
        violations.push_back(std::move(what));
    }
}

InvariantReport check_invariants(std::span<const Level> levels) {
    InvariantReport report;
    std::unordered_set<std::uint64_t> seen;
    std::size_t dim = 0;

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const Level& level = levels[li];
        const std::string tag = "level " + std::to_string(li);
        if (level.empty()) {
            report.fail(tag + " is empty");
            continue;
        }
        if (dim == 0) dim = level.dimension();

        for (const Point& p : level.points()) {
            if (p.dimension() != dim) {
                report.fail(tag + ": mixed dimensions");
            }
            if (!seen.insert(p.ordinal).second) {
                report.fail(tag + ": duplicate ordinal " +
                            std::to_string(p.ordinal));
            }
        }

        // lexicographic order with ordinal tie-break
        for (std::size_t i = 1; i < level.size(); ++i) {
            if (!level_order_less(level.point(i - 1), level.point(i))) {
                report.fail(tag + ": points out of order at " +
                            std::to_string(i));
                break;
            }
        }

        // antichain
        for (std::size_t i = 0; i < level.size() && report.ok; ++i) {
            for (std::size_t j = 0; j < level.size(); ++j) {
                if (i != j &&
                    strictly_dominates(level.point(i), level.point(j))) {
                    report.fail(tag + ": point " + std::to_string(i) +
                                " dominates point " + std::to_string(j));
                    break;
                }
            }
        }

        // dominator in the previous level
        if (li > 0) {
            const Level& prev = levels[li - 1];
            for (const Point& p : level.points()) {
                if (!prev.contains_dominator_of(p)) {
                    report.fail(tag + ": ordinal " + std::to_string(p.ordinal) +
                                " has no dominator one level up");
                    break;
                }
            }
        }

        // per-coordinate views: coordinate-sorted permutations
        for (std::size_t c = 0; c < dim; ++c) {
            const auto& view = level.coordinate_view(c);
            if (view.size() != level.size()) {
                report.fail(tag + ": view " + std::to_string(c) +
                            " has wrong size");
                continue;
            }
            std::vector<char> present(level.size(), 0);
            bool sorted = true;
            for (std::size_t i = 0; i < view.size(); ++i) {
                present[view[i]] = 1;
                if (i > 0) {
                    const Point& a = level.point(view[i - 1]);
                    const Point& b = level.point(view[i]);
                    if (a[c] > b[c] ||
                        (a[c] == b[c] && a.ordinal > b.ordinal)) {
                        sorted = false;
                    }
                }
            }
            if (!sorted) {
                report.fail(tag + ": view " + std::to_string(c) +
                            " not sorted");
            }
            if (std::count(present.begin(), present.end(), 1) !=
                std::ptrdiff_t(level.size())) {
                report.fail(tag + ": view " + std::to_string(c) +
                            " is not a permutation");
            }
        }

        // crowding against a from-scratch rebuild of the same multiset
        const Level fresh = Level::from_scratch(level.points());
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (!crowding_close(level.crowding(i), fresh.crowding(i))) {
                report.fail(tag + ": crowding mismatch at " +
                            std::to_string(i));
                break;
            }
        }
    }
    return report;
}

bool partition_matches_oracle(std::span<const Level> levels) {
    std::vector<Point> all;
    std::vector<int> expected;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (const Point& p : levels[li].points()) {
            all.push_back(p);
            expected.push_back(int(li));
        }
    }
    const RankAssignment ranks = brute_force_ranks(all);
    return ranks == expected;
}

}  // namespace ndsort
