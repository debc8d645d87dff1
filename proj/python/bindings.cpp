#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <atomic>
#include <optional>

#include "ndsort/archive.hpp"
#include "ndsort/offline.hpp"
#include "ndsort/population.hpp"
#include "ndsort/problems.hpp"
#include "ndsort/verify.hpp"

namespace py = pybind11;
using namespace ndsort;

namespace {

using Rows = std::vector<std::vector<double>>;

std::vector<double> to_std(const Objectives& o) {
    return {o.begin(), o.end()};
}

std::vector<Point> to_points(const Rows& rows, std::uint64_t first = 0) {
    std::vector<Point> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.emplace_back(rows[i], first + i);
    }
    return out;
}

py::list levels_to_py(const std::vector<Level>& levels) {
    py::list out;
    for (const Level& level : levels) {
        py::list members;
        for (std::size_t i = 0; i < level.size(); ++i) {
            members.append(py::make_tuple(to_std(level.point(i).objectives),
                                          level.point(i).ordinal,
                                          level.crowding(i)));
        }
        out.append(members);
    }
    return out;
}

/// Sequential structure with python-friendly ordinal bookkeeping.
class PyPopulation {
  public:
    explicit PyPopulation(const Rows& initial)
        : pop_(to_points(initial)), next_ordinal_(initial.size()) {}

    void insert(const std::vector<double>& coords,
                std::optional<std::uint64_t> ordinal) {
        const std::uint64_t ord =
            ordinal.has_value() ? *ordinal : next_ordinal_;
        pop_.insert(Point(coords, ord));
        next_ordinal_ = std::max(next_ordinal_, ord + 1);
    }

    py::tuple remove_worst() {
        const Point p = pop_.remove_worst();
        return py::make_tuple(to_std(p.objectives), p.ordinal);
    }

    py::tuple query(std::size_t index) const {
        const QueryResult q = pop_.query_by_ordinal(index);
        return py::make_tuple(to_std(q.point.objectives), q.rank, q.crowding);
    }

    std::size_t size() const { return pop_.size(); }
    std::size_t level_count() const { return pop_.level_count(); }
    py::list levels() const { return levels_to_py(pop_.levels()); }
    bool check() const { return check_invariants(pop_.levels()).ok; }
    bool matches_oracle() const {
        return partition_matches_oracle(pop_.levels());
    }

  private:
    RankedPopulation pop_;
    std::uint64_t next_ordinal_;
};

class PyArchive {
  public:
    PyArchive(const std::string& strategy, const Rows& initial,
              std::size_t capacity, bool capacity_policy,
              double trim_threshold, bool debug_checks) {
        ArchiveConfig cfg;
        cfg.strategy = parse_strategy(strategy);
        cfg.capacity = capacity;
        cfg.capacity_policy = capacity_policy;
        cfg.trim_threshold = trim_threshold;
        cfg.debug_checks = debug_checks;
        archive_ = make_archive(cfg, to_points(initial));
        next_ordinal_.store(initial.size());
    }

    void add(const std::vector<double>& coords,
             std::optional<std::uint64_t> ordinal) {
        const std::uint64_t ord = ordinal.has_value()
                                      ? *ordinal
                                      : next_ordinal_.fetch_add(1);
        const Point p(coords, ord);
        py::gil_scoped_release release;
        archive_->add_point(p);
    }

    py::tuple query(std::size_t index) const {
        const QueryResult q = archive_->query_by_ordinal(index);
        return py::make_tuple(to_std(q.point.objectives), q.rank, q.crowding);
    }

    std::size_t size() const { return archive_->size(); }
    std::size_t level_count() const { return archive_->level_count(); }
    std::size_t trim() { return archive_->trim(); }
    std::string strategy() const {
        return strategy_name(archive_->strategy());
    }

    py::dict stats() const {
        const ArchiveStats s = archive_->stats();
        py::dict out;
        out["cas_retries"] = s.cas_retries;
        out["cas_published"] = s.cas_published;
        out["fast_path_merges"] = s.fast_path_merges;
        out["slow_path_merges"] = s.slow_path_merges;
        out["trims"] = s.trims;
        out["trim_removed"] = s.trim_removed;
        out["retry_diagnostics"] = s.retry_diagnostics;
        out["lock_order_violations"] = s.lock_order_violations;
        out["precondition_violations"] = s.precondition_violations;
        return out;
    }

    py::list levels() const {
        return levels_to_py(archive_->snapshot_levels());
    }
    bool check() const {
        return check_invariants(archive_->snapshot_levels()).ok;
    }
    bool matches_oracle() const {
        return partition_matches_oracle(archive_->snapshot_levels());
    }

  private:
    std::unique_ptr<ConcurrentArchive> archive_;
    std::atomic<std::uint64_t> next_ordinal_{0};
};

const char* relation_name(DominanceRelation r) {
    switch (r) {
        case DominanceRelation::StrictlyDominates: return "strictly_dominates";
        case DominanceRelation::Equal: return "equal";
        case DominanceRelation::Dominated: return "dominated";
        case DominanceRelation::Incomparable: return "incomparable";
    }
    return "unknown";
}

}  // namespace

PYBIND11_MODULE(_ndsort, m) {
    m.doc() = "incremental non-dominated sorting with concurrent strategies";

    m.def(
        "compare_dominance",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return relation_name(compare_dominance(
                std::span<const double>(a), std::span<const double>(b)));
        },
        py::arg("a"), py::arg("b"),
        "Relation of a to b: strictly_dominates, equal, dominated or "
        "incomparable.");

    m.def(
        "nadir",
        [](const Rows& rows) { return nadir(to_points(rows)); },
        py::arg("points"), "Coordinatewise minimum of a nonempty point set.");

    m.def(
        "lex_compare",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return lex_compare(std::span<const double>(a),
                               std::span<const double>(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "brute_force_ranks",
        [](const Rows& rows) { return brute_force_ranks(to_points(rows)); },
        py::arg("points"), "Quadratic reference non-dominated sorting.");

    m.def(
        "sort_ranks",
        [](const Rows& rows) { return sort_ranks(to_points(rows)); },
        py::arg("points"), "Divide-and-conquer non-dominated sorting.");

    m.def(
        "helper_b_merge",
        [](const Rows& known, const Rows& candidates) {
            const auto flags = detail::dominated_flags(
                to_points(known), to_points(candidates, known.size()));
            std::vector<std::size_t> retained, displaced;
            for (std::size_t i = 0; i < flags.size(); ++i) {
                (flags[i] ? displaced : retained).push_back(i);
            }
            return py::make_tuple(retained, displaced);
        },
        py::arg("known"), py::arg("candidates"),
        "Candidate indices split into (retained, displaced).");

    m.def(
        "merge_two_antichains",
        [](const Rows& a, const Rows& b) {
            std::vector<char> da, db;
            detail::cross_dominated_flags(to_points(a),
                                          to_points(b, a.size()), da, db);
            std::vector<bool> ba(da.begin(), da.end());
            std::vector<bool> bb(db.begin(), db.end());
            return py::make_tuple(ba, bb);
        },
        py::arg("a"), py::arg("b"),
        "Per-input rank-one flags for the union of two antichains.");

    py::class_<PyPopulation>(m, "RankedPopulation")
        .def(py::init<const Rows&>(), py::arg("initial"))
        .def("insert", &PyPopulation::insert, py::arg("coords"),
             py::arg("ordinal") = py::none())
        .def("remove_worst", &PyPopulation::remove_worst)
        .def("query", &PyPopulation::query, py::arg("index"))
        .def("size", &PyPopulation::size)
        .def("level_count", &PyPopulation::level_count)
        .def("levels", &PyPopulation::levels)
        .def("check_invariants", &PyPopulation::check)
        .def("matches_oracle", &PyPopulation::matches_oracle);

    py::class_<PyArchive>(m, "Archive")
        .def(py::init<const std::string&, const Rows&, std::size_t, bool,
                      double, bool>(),
             py::arg("strategy"), py::arg("initial"), py::arg("capacity") = 0,
             py::arg("capacity_policy") = true,
             py::arg("trim_threshold") = 1.2, py::arg("debug_checks") = false)
        .def("add", &PyArchive::add, py::arg("coords"),
             py::arg("ordinal") = py::none())
        .def("query", &PyArchive::query, py::arg("index"))
        .def("size", &PyArchive::size)
        .def("level_count", &PyArchive::level_count)
        .def("trim", &PyArchive::trim)
        .def("strategy", &PyArchive::strategy)
        .def("stats", &PyArchive::stats)
        .def("levels", &PyArchive::levels)
        .def("check_invariants", &PyArchive::check)
        .def("matches_oracle", &PyArchive::matches_oracle);

    m.def(
        "evaluate",
        [](const std::string& problem, std::size_t k,
           const std::vector<double>& x) {
            return Problem::make(parse_problem(problem), k).evaluate(x);
        },
        py::arg("problem"), py::arg("k"), py::arg("x"),
        "Standard objective values of a ZDT/DTLZ problem.");

    m.def(
        "problem_variables",
        [](const std::string& problem, std::size_t k) {
            return Problem::make(parse_problem(problem), k).variables();
        },
        py::arg("problem"), py::arg("k"));

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("objectives", &Dataset::objectives)
        .def_readonly("seed", &Dataset::seed)
        .def_readonly("initial", &Dataset::initial)
        .def_readonly("insertions", &Dataset::insertions);

    m.def(
        "synthesize_dataset",
        [](const std::string& problem, std::size_t k, std::uint64_t seed,
           std::size_t init, std::size_t ins) {
            return synthesize_dataset(Problem::make(parse_problem(problem), k),
                                      seed, init, ins);
        },
        py::arg("problem"), py::arg("k"), py::arg("seed"),
        py::arg("init") = 5000, py::arg("ins") = 1000,
        "Steady-state synthesis of a benchmark dataset.");

    m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
    m.def("load_dataset", &load_dataset, py::arg("path"));
}
