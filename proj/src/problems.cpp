#include "ndsort/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ndsort/population.hpp"
#include "ndsort/rng.hpp"

namespace ndsort {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_zdt(ProblemId id) {
    switch (id) {
        case ProblemId::Zdt1:
        case ProblemId::Zdt2:
        case ProblemId::Zdt3:
        case ProblemId::Zdt4:
        case ProblemId::Zdt6:
            return true;
        default:
            return false;
    }
}

std::size_t variable_count(ProblemId id, std::size_t k) {
    switch (id) {
        case ProblemId::Zdt1:
        case ProblemId::Zdt2:
        case ProblemId::Zdt3:
            return 30;
        case ProblemId::Zdt4:
        case ProblemId::Zdt6:
            return 10;
        case ProblemId::Dtlz1:
            return k + 4;
        case ProblemId::Dtlz2:
        case ProblemId::Dtlz3:
        case ProblemId::Dtlz4:
            return k + 9;
        case ProblemId::Dtlz7:
            return k + 19;
    }
    throw std::invalid_argument("unknown problem id");
}

/// Rastrigin-style distance function shared by DTLZ1 and DTLZ3.
double dtlz_g1(std::span<const double> x, std::size_t first) {
    const double n = double(x.size() - first);
    double sum = 0.0;
    for (std::size_t i = first; i < x.size(); ++i) {
        const double z = x[i] - 0.5;
        sum += z * z - std::cos(20.0 * kPi * z);
    }
    return 100.0 * (n + sum);
}

double dtlz_g2(std::span<const double> x, std::size_t first) {
    double sum = 0.0;
    for (std::size_t i = first; i < x.size(); ++i) {
        const double z = x[i] - 0.5;
        sum += z * z;
    }
    return sum;
}

}  // namespace

ProblemId parse_problem(const std::string& name) {
    std::string up = name;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (up == "ZDT1") return ProblemId::Zdt1;
    if (up == "ZDT2") return ProblemId::Zdt2;
    if (up == "ZDT3") return ProblemId::Zdt3;
    if (up == "ZDT4") return ProblemId::Zdt4;
    if (up == "ZDT6") return ProblemId::Zdt6;
    if (up == "DTLZ1") return ProblemId::Dtlz1;
    if (up == "DTLZ2") return ProblemId::Dtlz2;
    if (up == "DTLZ3") return ProblemId::Dtlz3;
    if (up == "DTLZ4") return ProblemId::Dtlz4;
    if (up == "DTLZ7") return ProblemId::Dtlz7;
    throw std::invalid_argument("unknown problem: " + name);
}

const char* problem_title(ProblemId id) {
    switch (id) {
        case ProblemId::Zdt1: return "ZDT1";
        case ProblemId::Zdt2: return "ZDT2";
        case ProblemId::Zdt3: return "ZDT3";
        case ProblemId::Zdt4: return "ZDT4";
        case ProblemId::Zdt6: return "ZDT6";
        case ProblemId::Dtlz1: return "DTLZ1";
        case ProblemId::Dtlz2: return "DTLZ2";
        case ProblemId::Dtlz3: return "DTLZ3";
        case ProblemId::Dtlz4: return "DTLZ4";
        case ProblemId::Dtlz7: return "DTLZ7";
    }
    return "unknown";
}

Problem Problem::make(ProblemId id, std::size_t objectives) {
    if (is_zdt(id)) {
        if (objectives != 2) {
            throw std::invalid_argument(
                std::string(problem_title(id)) + " is two-objective only");
        }
    } else {
        const bool ok = objectives == 3 || objectives == 4 || objectives == 6 ||
                        objectives == 8 || objectives == 10;
        if (!ok) {
            throw std::invalid_argument(
                std::string(problem_title(id)) +
                " accepts k in {3,4,6,8,10}, got " +
                std::to_string(objectives));
        }
    }
    return Problem(id, objectives, variable_count(id, objectives));
}

double Problem::lower_bound(std::size_t i) const {
    if (id_ == ProblemId::Zdt4 && i > 0) return -5.0;
    return 0.0;
}

double Problem::upper_bound(std::size_t i) const {
    if (id_ == ProblemId::Zdt4 && i > 0) return 5.0;
    return 1.0;
}

std::vector<double> Problem::evaluate(std::span<const double> x) const {
    if (x.size() != variables_) {
        throw std::invalid_argument("expected " + std::to_string(variables_) +
                                    " decision variables, got " +
                                    std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= lower_bound(i) && x[i] <= upper_bound(i))) {
            throw std::invalid_argument("variable " + std::to_string(i) +
                                        " out of bounds");
        }
    }

    const std::size_t d = variables_;
    const std::size_t k = objectives_;
    std::vector<double> f(k, 0.0);

    switch (id_) {
        case ProblemId::Zdt1:
        case ProblemId::Zdt2:
        case ProblemId::Zdt3: {
            double tail = 0.0;
            for (std::size_t i = 1; i < d; ++i) tail += x[i];
            const double g = 1.0 + 9.0 * tail / double(d - 1);
            const double f1 = x[0];
            double h = 0.0;
            if (id_ == ProblemId::Zdt1) {
                h = 1.0 - std::sqrt(f1 / g);
            } else if (id_ == ProblemId::Zdt2) {
                h = 1.0 - (f1 / g) * (f1 / g);
            } else {
                h = 1.0 - std::sqrt(f1 / g) -
                    (f1 / g) * std::sin(10.0 * kPi * f1);
            }
            f[0] = f1;
            f[1] = g * h;
            break;
        }
        case ProblemId::Zdt4: {
            double g = 1.0 + 10.0 * double(d - 1);
            for (std::size_t i = 1; i < d; ++i) {
                g += x[i] * x[i] - 10.0 * std::cos(4.0 * kPi * x[i]);
            }
            const double f1 = x[0];
            f[0] = f1;
            f[1] = g * (1.0 - std::sqrt(f1 / g));
            break;
        }
        case ProblemId::Zdt6: {
            const double f1 =
                1.0 - std::exp(-4.0 * x[0]) *
                          std::pow(std::sin(6.0 * kPi * x[0]), 6.0);
            double tail = 0.0;
            for (std::size_t i = 1; i < d; ++i) tail += x[i];
            const double g =
                1.0 + 9.0 * std::pow(tail / double(d - 1), 0.25);
            f[0] = f1;
            f[1] = g * (1.0 - (f1 / g) * (f1 / g));
            break;
        }
        case ProblemId::Dtlz1: {
            const double g = dtlz_g1(x, k - 1);
            for (std::size_t j = 0; j < k; ++j) {
                double v = 0.5 * (1.0 + g);
                for (std::size_t i = 0; i + j + 1 < k; ++i) v *= x[i];
                if (j > 0) v *= 1.0 - x[k - 1 - j];
                f[j] = v;
            }
            break;
        }
        case ProblemId::Dtlz2:
        case ProblemId::Dtlz3:
        case ProblemId::Dtlz4: {
            const double g = id_ == ProblemId::Dtlz3 ? dtlz_g1(x, k - 1)
                                                     : dtlz_g2(x, k - 1);
            const double alpha = id_ == ProblemId::Dtlz4 ? 100.0 : 1.0;
            auto angle = [&](std::size_t i) {
                const double xi =
                    alpha == 1.0 ? x[i] : std::pow(x[i], alpha);
                return xi * kPi / 2.0;
            };
            for (std::size_t j = 0; j < k; ++j) {
                double v = 1.0 + g;
                for (std::size_t i = 0; i + j + 1 < k; ++i) {
                    v *= std::cos(angle(i));
                }
                if (j > 0) v *= std::sin(angle(k - 1 - j));
                f[j] = v;
            }
            break;
        }
        case ProblemId::Dtlz7: {
            double tail = 0.0;
            for (std::size_t i = k - 1; i < d; ++i) tail += x[i];
            const double g = 1.0 + 9.0 * tail / double(d - k + 1);
            double h = double(k);
            for (std::size_t j = 0; j + 1 < k; ++j) {
                f[j] = x[j];
                h -= f[j] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * f[j]));
            }
            f[k - 1] = (1.0 + g) * h;
            break;
        }
    }
    return f;
}

namespace {

/// Simulated binary crossover, bounded variant, one child.
std::vector<double> sbx_child(const std::vector<double>& a,
                              const std::vector<double>& b, Rng& rng,
                              const Problem& problem) {
    constexpr double eta = 15.0;
    constexpr double crossover_probability = 0.9;
    std::vector<double> child = a;
    if (rng.uniform01() > crossover_probability) return child;

    for (std::size_t i = 0; i < child.size(); ++i) {
        if (rng.uniform01() > 0.5) continue;
        double y1 = a[i];
        double y2 = b[i];
        if (std::abs(y1 - y2) < 1e-14) continue;
        if (y1 > y2) std::swap(y1, y2);
        const double lo = problem.lower_bound(i);
        const double hi = problem.upper_bound(i);
        const double u = rng.uniform01();

        auto spread = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (u <= 1.0 / alpha) {
                return std::pow(u * alpha, 1.0 / (eta + 1.0));
            }
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };

        const double gap = y2 - y1;
        const double beta_low = 1.0 + 2.0 * (y1 - lo) / gap;
        const double beta_high = 1.0 + 2.0 * (hi - y2) / gap;
        const double c1 = 0.5 * ((y1 + y2) - spread(beta_low) * gap);
        const double c2 = 0.5 * ((y1 + y2) + spread(beta_high) * gap);
        double value = rng.uniform01() <= 0.5 ? c1 : c2;
        value = std::clamp(value, lo, hi);
        child[i] = value;
    }
    return child;
}

/// Polynomial mutation, bounded variant, probability 1/d per variable.
void mutate(std::vector<double>& x, Rng& rng, const Problem& problem) {
    constexpr double eta = 20.0;
    const double pm = 1.0 / double(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.uniform01() > pm) continue;
        const double lo = problem.lower_bound(i);
        const double hi = problem.upper_bound(i);
        const double range = hi - lo;
        const double y = x[i];
        const double d1 = (y - lo) / range;
        const double d2 = (hi - y) / range;
        const double u = rng.uniform01();
        const double mut_pow = 1.0 / (eta + 1.0);
        double deltaq = 0.0;
        if (u <= 0.5) {
            const double xy = 1.0 - d1;
            const double val =
                2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
            deltaq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double xy = 1.0 - d2;
            const double val = 2.0 * (1.0 - u) +
                               2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
            deltaq = 1.0 - std::pow(val, mut_pow);
        }
        x[i] = std::clamp(y + deltaq * range, lo, hi);
    }
}

/// Binary tournament on (rank, crowding distance); equal contestants keep
/// the first pick.
std::uint64_t tournament(const RankedPopulation& pop, Rng& rng) {
    const QueryResult a = pop.query_by_ordinal(rng.below(pop.size()));
    const QueryResult b = pop.query_by_ordinal(rng.below(pop.size()));
    if (b.rank < a.rank || (b.rank == a.rank && b.crowding > a.crowding)) {
        return b.point.ordinal;
    }
    return a.point.ordinal;
}

}  // namespace

Dataset synthesize_dataset(const Problem& problem, std::uint64_t seed,
                           std::size_t initial_size,
                           std::size_t insertion_count) {
    if (initial_size == 0) {
        throw std::invalid_argument("initial population must be nonempty");
    }
    Rng rng(seed);
    Dataset dataset;
    dataset.objectives = problem.objectives();
    dataset.seed = seed;
    dataset.initial.reserve(initial_size);
    dataset.insertions.reserve(insertion_count);

    std::vector<std::vector<double>> genotypes;
    genotypes.reserve(initial_size + insertion_count);
    std::vector<Point> points;
    points.reserve(initial_size);
    for (std::size_t i = 0; i < initial_size; ++i) {
        std::vector<double> x(problem.variables());
        for (std::size_t v = 0; v < x.size(); ++v) {
            x[v] = rng.uniform(problem.lower_bound(v), problem.upper_bound(v));
        }
        std::vector<double> fx = problem.evaluate(x);
        dataset.initial.push_back(fx);
        points.emplace_back(std::move(fx), i);
        genotypes.push_back(std::move(x));
    }

    RankedPopulation pop(std::move(points));
    for (std::size_t iter = 0; iter < insertion_count; ++iter) {
        const std::uint64_t pa = tournament(pop, rng);
        const std::uint64_t pb = tournament(pop, rng);
        std::vector<double> child =
            sbx_child(genotypes[pa], genotypes[pb], rng, problem);
        mutate(child, rng, problem);
        std::vector<double> fx = problem.evaluate(child);
        dataset.insertions.push_back(fx);

        const std::uint64_t ordinal = initial_size + iter;
        genotypes.push_back(std::move(child));
        pop.insert(Point(std::move(fx), ordinal));
        pop.remove_worst();
    }
    return dataset;
}

std::vector<Point> dataset_initial_points(const Dataset& dataset) {
    std::vector<Point> out;
    out.reserve(dataset.initial.size());
    for (std::size_t i = 0; i < dataset.initial.size(); ++i) {
        out.emplace_back(dataset.initial[i], i);
    }
    return out;
}

std::vector<Point> dataset_insertion_points(const Dataset& dataset) {
    std::vector<Point> out;
    out.reserve(dataset.insertions.size());
    for (std::size_t i = 0; i < dataset.insertions.size(); ++i) {
        out.emplace_back(dataset.insertions[i], dataset.initial.size() + i);
    }
    return out;
}

}  // namespace ndsort
