#include "ndsort/offline.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace ndsort {

namespace {

using std::uint32_t;

void check_dimensions(std::span<const Point> points) {
    if (points.empty()) return;
    const std::size_t k = points.front().dimension();
    for (const Point& p : points) {
        if (p.dimension() != k) {
            throw std::invalid_argument(
                "points of mixed dimension in one sorting call");
        }
    }
}

/// Row-major coordinates of the distinct vectors under consideration.
struct Matrix {
    std::vector<double> data;
    std::size_t k = 0;
    const double* row(uint32_t i) const { return data.data() + std::size_t(i) * k; }
};

/// Prefix-maximum Fenwick tree over compressed coordinate values.
class MaxTree {
  public:
    void reset(std::size_t n) { tree_.assign(n + 1, -1); }

    void raise(std::size_t pos, int value) {
        for (std::size_t i = pos + 1; i < tree_.size(); i += i & (0 - i)) {
            if (tree_[i] < value) tree_[i] = value;
        }
    }

    int prefix_max(std::size_t pos) const {
        int best = -1;
        for (std::size_t i = pos + 1; i > 0; i -= i & (0 - i)) {
            if (tree_[i] > best) best = tree_[i];
        }
        return best;
    }

  private:
    std::vector<int> tree_;
};

/// Jensen-style divide-and-conquer rank assignment. Works on ids of
/// distinct points; id order is the coordinate-lexicographic order, so all
/// id sequences passed around stay sorted ascending. `obj` is the highest
/// coordinate index still compared; for every pair crossing a reduced call
/// the caller has established that the would-be dominator is no worse on
/// every higher coordinate.
class JfbSorter {
  public:
    JfbSorter(const Matrix& m, std::vector<int>& ranks)
        : m_(m), ranks_(ranks) {}

    void run_a(std::vector<uint32_t> ids, std::size_t obj) {
        while (true) {
            const std::size_t n = ids.size();
            if (n <= 1) return;
            if (n <= kSmall) {
                pairwise_a(ids, obj);
                return;
            }
            if (obj == 0) {
                scan_1d(ids);
                return;
            }
            if (obj == 1) {
                sweep_a(ids);
                return;
            }
            if (all_equal_at(ids, obj)) {
                --obj;
                continue;
            }
            const double med = median_at(ids, obj);
            std::vector<uint32_t> lo, eq, hi;
            split3(ids, obj, med, lo, eq, hi);
            run_a(lo, obj);
            run_b(lo, eq, obj - 1);
            run_a(eq, obj - 1);
            std::vector<uint32_t> low_and_eq;
            std::merge(lo.begin(), lo.end(), eq.begin(), eq.end(),
                       std::back_inserter(low_and_eq));
            run_b(low_and_eq, hi, obj - 1);
            ids = std::move(hi);
        }
    }

    void run_b(const std::vector<uint32_t>& good,
               const std::vector<uint32_t>& weak, std::size_t obj) {
        run_b_impl(good, weak, obj);
    }

  private:
    static constexpr std::size_t kSmall = 16;
    static constexpr std::size_t kSmallProduct = 64;

    bool weak_dom(uint32_t a, uint32_t b, std::size_t obj) const {
        const double* pa = m_.row(a);
        const double* pb = m_.row(b);
        for (std::size_t i = 0; i <= obj; ++i) {
            if (pa[i] > pb[i]) return false;
        }
        return true;
    }

    double at(uint32_t id, std::size_t c) const { return m_.row(id)[c]; }

    bool all_equal_at(const std::vector<uint32_t>& ids, std::size_t c) const {
        const double v = at(ids.front(), c);
        for (uint32_t id : ids) {
            if (at(id, c) != v) return false;
        }
        return true;
    }

    double median_at(const std::vector<uint32_t>& ids, std::size_t c) const {
        scratch_.clear();
        for (uint32_t id : ids) scratch_.push_back(at(id, c));
        auto mid = scratch_.begin() + scratch_.size() / 2;
        std::nth_element(scratch_.begin(), mid, scratch_.end());
        return *mid;
    }

    void split3(const std::vector<uint32_t>& ids, std::size_t c, double med,
                std::vector<uint32_t>& lo, std::vector<uint32_t>& eq,
                std::vector<uint32_t>& hi) const {
        for (uint32_t id : ids) {
            const double v = at(id, c);
            if (v < med) lo.push_back(id);
            else if (v > med) hi.push_back(id);
            else eq.push_back(id);
        }
    }

    void pairwise_a(const std::vector<uint32_t>& ids, std::size_t obj) {
        // ids ascend lexicographically, so dominators precede the dominated
        // point and their ranks are final when read.
        for (std::size_t j = 1; j < ids.size(); ++j) {
            int r = ranks_[ids[j]];
            for (std::size_t i = 0; i < j; ++i) {
                if (ranks_[ids[i]] >= r && weak_dom(ids[i], ids[j], obj)) {
                    r = ranks_[ids[i]] + 1;
                }
            }
            ranks_[ids[j]] = r;
        }
    }

    void pairwise_b(const std::vector<uint32_t>& good,
                    const std::vector<uint32_t>& weak, std::size_t obj) {
        for (uint32_t w : weak) {
            int r = ranks_[w];
            for (uint32_t g : good) {
                if (ranks_[g] >= r && weak_dom(g, w, obj)) {
                    r = ranks_[g] + 1;
                }
            }
            ranks_[w] = r;
        }
    }

    void scan_1d(const std::vector<uint32_t>& ids) {
        // Single coordinate: ascending value order, carry the running max.
        int best = -1;
        std::size_t i = 0;
        while (i < ids.size()) {
            std::size_t j = i;
            int group_best = -1;
            while (j < ids.size() && at(ids[j], 0) == at(ids[i], 0)) {
                if (best >= 0 && ranks_[ids[j]] < best + 1) {
                    ranks_[ids[j]] = best + 1;
                }
                group_best = std::max(group_best, ranks_[ids[j]]);
                ++j;
            }
            best = std::max(best, group_best);
            i = j;
        }
    }

    /// Second-coordinate compression over the given ids.
    std::vector<double> compress(const std::vector<uint32_t>& ids) const {
        std::vector<double> vals;
        vals.reserve(ids.size());
        for (uint32_t id : ids) vals.push_back(at(id, 1));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    }

    void sweep_a(const std::vector<uint32_t>& ids) {
        const std::vector<double> vals = compress(ids);
        tree_.reset(vals.size());
        for (uint32_t id : ids) {
            const double y = at(id, 1);
            const auto it = std::upper_bound(vals.begin(), vals.end(), y);
            const std::size_t pos = std::size_t(it - vals.begin()) - 1;
            const int best = tree_.prefix_max(pos);
            if (best >= 0 && ranks_[id] < best + 1) ranks_[id] = best + 1;
            tree_.raise(pos, ranks_[id]);
        }
    }

    void sweep_b(const std::vector<uint32_t>& good,
                 const std::vector<uint32_t>& weak) {
        const std::vector<double> vals = compress(good);
        tree_.reset(vals.size());
        // Any good point that can dominate a weak one precedes it in id
        // order, so a single ascending merge of both streams suffices.
        std::size_t gi = 0;
        for (uint32_t w : weak) {
            while (gi < good.size() && good[gi] < w) {
                const double y = at(good[gi], 1);
                const auto it = std::upper_bound(vals.begin(), vals.end(), y);
                tree_.raise(std::size_t(it - vals.begin()) - 1,
                            ranks_[good[gi]]);
                ++gi;
            }
            const auto it = std::upper_bound(vals.begin(), vals.end(), at(w, 1));
            if (it == vals.begin()) continue;
            const int best = tree_.prefix_max(std::size_t(it - vals.begin()) - 1);
            if (best >= 0 && ranks_[w] < best + 1) ranks_[w] = best + 1;
        }
    }

    void run_b_impl(const std::vector<uint32_t>& good,
                    const std::vector<uint32_t>& weak, std::size_t obj) {
        std::vector<uint32_t> g = good;
        std::vector<uint32_t> w = weak;
        while (true) {
            if (g.empty() || w.empty()) return;
            if (g.size() * w.size() <= kSmallProduct) {
                pairwise_b(g, w, obj);
                return;
            }
            if (obj == 0) {
                pairwise_b(g, w, obj);  // k = 1 inputs never recurse this deep
                return;
            }
            if (obj == 1) {
                sweep_b(g, w);
                return;
            }
            auto [gmin, gmax] = min_max_at(g, obj);
            auto [wmin, wmax] = min_max_at(w, obj);
            if (gmax <= wmin) {
                --obj;
                continue;
            }
            if (gmin > wmax) return;
            const double med = combined_median(g, w, obj);
            std::vector<uint32_t> g1, g2, g3, w1, w2, w3;
            split3(g, obj, med, g1, g2, g3);
            split3(w, obj, med, w1, w2, w3);
            run_b_impl(g1, w1, obj);
            run_b_impl(g1, w2, obj - 1);
            run_b_impl(g2, w2, obj - 1);
            std::vector<uint32_t> g12;
            std::merge(g1.begin(), g1.end(), g2.begin(), g2.end(),
                       std::back_inserter(g12));
            run_b_impl(g12, w3, obj - 1);
            g = std::move(g3);
            w = std::move(w3);
        }
    }

    std::pair<double, double> min_max_at(const std::vector<uint32_t>& ids,
                                         std::size_t c) const {
        double lo = at(ids.front(), c);
        double hi = lo;
        for (uint32_t id : ids) {
            const double v = at(id, c);
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        return {lo, hi};
    }

    double combined_median(const std::vector<uint32_t>& g,
                           const std::vector<uint32_t>& w,
                           std::size_t c) const {
        scratch_.clear();
        for (uint32_t id : g) scratch_.push_back(at(id, c));
        for (uint32_t id : w) scratch_.push_back(at(id, c));
        auto mid = scratch_.begin() + scratch_.size() / 2;
        std::nth_element(scratch_.begin(), mid, scratch_.end());
        return *mid;
    }

    const Matrix& m_;
    std::vector<int>& ranks_;
    MaxTree tree_;
    mutable std::vector<double> scratch_;
};

/// Deduplicated view of one or two point sequences: distinct vectors get
/// ids in coordinate-lexicographic order, every original point maps to its
/// id. Duplicate vectors share an id and therefore a rank.
struct Distinct {
    Matrix matrix;
    std::vector<uint32_t> id_of;  // parallel to the concatenated inputs
    std::size_t distinct_count = 0;
};

Distinct deduplicate(std::span<const Point> a, std::span<const Point> b) {
    const std::size_t n = a.size() + b.size();
    const Point& first = a.empty() ? b.front() : a.front();
    const std::size_t k = first.dimension();

    auto point_at = [&](std::size_t i) -> const Point& {
        return i < a.size() ? a[i] : b[i - a.size()];
    };

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
        return lex_less_coords(point_at(x), point_at(y));
    });

    Distinct d;
    d.matrix.k = k;
    d.id_of.assign(n, 0);
    uint32_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& cur = point_at(order[i]);
        const bool fresh =
            i == 0 || lex_less_coords(point_at(order[i - 1]), cur);
        if (fresh) {
            d.matrix.data.insert(d.matrix.data.end(), cur.objectives.begin(),
                                 cur.objectives.end());
            ++next;
        }
        d.id_of[order[i]] = next - 1;
    }
    d.distinct_count = next;
    return d;
}

std::vector<uint32_t> sorted_unique_ids(std::span<const uint32_t> ids) {
    std::vector<uint32_t> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

RankAssignment brute_force_ranks(std::span<const Point> points) {
    check_dimensions(points);
    const std::size_t n = points.size();
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    // A strict dominator always precedes the dominated point in
    // coordinate-lexicographic order, so one pass in that order sees every
    // dominator's final rank before it is needed.
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return lex_less_coords(points[a], points[b]);
    });
    RankAssignment ranks(n, 0);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const uint32_t j = order[jj];
        for (std::size_t ii = 0; ii < jj; ++ii) {
            const uint32_t i = order[ii];
            if (ranks[i] >= ranks[j] && strictly_dominates(points[i], points[j])) {
                ranks[j] = ranks[i] + 1;
            }
        }
    }
    return ranks;
}

RankAssignment sort_ranks(std::span<const Point> points) {
    check_dimensions(points);
    if (points.empty()) return {};
    Distinct d = deduplicate(points, {});
    std::vector<int> ranks(d.distinct_count, 0);
    std::vector<uint32_t> ids(d.distinct_count);
    std::iota(ids.begin(), ids.end(), 0u);
    JfbSorter sorter(d.matrix, ranks);
    sorter.run_a(std::move(ids), d.matrix.k - 1);
    RankAssignment out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = ranks[d.id_of[i]];
    return out;
}

namespace detail {

std::vector<char> dominated_flags(std::span<const Point> known,
                                  std::span<const Point> candidates) {
    std::vector<char> flags(candidates.size(), 0);
    if (known.empty() || candidates.empty()) return flags;

    // typical insertion steps filter a handful of candidates; direct
    // comparisons beat the divide-and-conquer setup there
    if (known.size() * candidates.size() <= 256) {
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            for (const Point& m : known) {
                if (strictly_dominates(m, candidates[i])) {
                    flags[i] = 1;
                    break;
                }
            }
        }
        return flags;
    }

    Distinct d = deduplicate(known, candidates);
    std::vector<char> is_known(d.distinct_count, 0);
    for (std::size_t i = 0; i < known.size(); ++i) is_known[d.id_of[i]] = 1;

    std::vector<uint32_t> good = sorted_unique_ids(
        std::span<const uint32_t>(d.id_of.data(), known.size()));
    std::vector<uint32_t> weak;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const uint32_t id = d.id_of[known.size() + i];
        // A candidate equal to a known vector cannot be strictly dominated:
        // its dominator would also dominate that known point.
        if (!is_known[id]) weak.push_back(id);
    }
    weak = sorted_unique_ids(weak);

    std::vector<int> ranks(d.distinct_count, 0);
    JfbSorter sorter(d.matrix, ranks);
    sorter.run_b(good, weak, d.matrix.k - 1);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const uint32_t id = d.id_of[known.size() + i];
        flags[i] = !is_known[id] && ranks[id] > 0;
    }
    return flags;
}

void cross_dominated_flags(std::span<const Point> a, std::span<const Point> b,
                           std::vector<char>& a_displaced,
                           std::vector<char>& b_displaced) {
    a_displaced.assign(a.size(), 0);
    b_displaced.assign(b.size(), 0);
    if (a.empty() || b.empty()) return;

    Distinct d = deduplicate(a, b);
    std::vector<char> in_a(d.distinct_count, 0), in_b(d.distinct_count, 0);
    for (std::size_t i = 0; i < a.size(); ++i) in_a[d.id_of[i]] = 1;
    for (std::size_t i = 0; i < b.size(); ++i) in_b[d.id_of[a.size() + i]] = 1;

    std::vector<uint32_t> ids_a = sorted_unique_ids(
        std::span<const uint32_t>(d.id_of.data(), a.size()));
    std::vector<uint32_t> ids_b = sorted_unique_ids(
        std::span<const uint32_t>(d.id_of.data() + a.size(), b.size()));

    // A vector present in both sets can displace others but can never be
    // displaced: a dominator of it would break one side's antichain.
    std::vector<uint32_t> weak_b, weak_a;
    for (uint32_t id : ids_b) {
        if (!in_a[id]) weak_b.push_back(id);
    }
    for (uint32_t id : ids_a) {
        if (!in_b[id]) weak_a.push_back(id);
    }

    {
        std::vector<int> ranks(d.distinct_count, 0);
        JfbSorter sorter(d.matrix, ranks);
        sorter.run_b(ids_a, weak_b, d.matrix.k - 1);
        for (std::size_t i = 0; i < b.size(); ++i) {
            const uint32_t id = d.id_of[a.size() + i];
            b_displaced[i] = !in_a[id] && ranks[id] > 0;
        }
    }
    {
        std::vector<int> ranks(d.distinct_count, 0);
        JfbSorter sorter(d.matrix, ranks);
        sorter.run_b(ids_b, weak_a, d.matrix.k - 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const uint32_t id = d.id_of[i];
            a_displaced[i] = !in_b[id] && ranks[id] > 0;
        }
    }
}

}  // namespace detail

MergeSplit helper_b_merge(std::span<const Point> known,
                          std::span<const Point> candidates) {
    const std::vector<char> flags = detail::dominated_flags(known, candidates);
    MergeSplit out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        (flags[i] ? out.displaced : out.retained).push_back(candidates[i]);
    }
    return out;
}

TwoRankSplit merge_two_antichains(std::span<const Point> a,
                                  std::span<const Point> b) {
    std::vector<char> a_disp, b_disp;
    detail::cross_dominated_flags(a, b, a_disp, b_disp);
    TwoRankSplit out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        (a_disp[i] ? out.rank_one : out.rank_zero).push_back(a[i]);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        (b_disp[i] ? out.rank_one : out.rank_zero).push_back(b[i]);
    }
    return out;
}

}  // namespace ndsort
