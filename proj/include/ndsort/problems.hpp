#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ndsort/point.hpp"

namespace ndsort {

enum class ProblemId {
    Zdt1,
    Zdt2,
    Zdt3,
    Zdt4,
    Zdt6,
    Dtlz1,
    Dtlz2,
    Dtlz3,
    Dtlz4,
    Dtlz7,
};

ProblemId parse_problem(const std::string& name);  // case-insensitive
const char* problem_title(ProblemId id);           // "ZDT1", "DTLZ7", ...

/// One benchmark problem instance: objective count, decision-variable
/// count and per-variable bounds. ZDT problems are two-objective only;
/// DTLZ problems accept k in {3,4,6,8,10}.
class Problem {
  public:
    static Problem make(ProblemId id, std::size_t objectives);

    ProblemId id() const { return id_; }
    std::size_t objectives() const { return objectives_; }
    std::size_t variables() const { return variables_; }
    double lower_bound(std::size_t i) const;
    double upper_bound(std::size_t i) const;

    /// Standard objective values; rejects out-of-bounds inputs.
    std::vector<double> evaluate(std::span<const double> x) const;

  private:
    Problem(ProblemId id, std::size_t objectives, std::size_t variables)
        : id_(id), objectives_(objectives), variables_(variables) {}

    ProblemId id_;
    std::size_t objectives_;
    std::size_t variables_;
};

/// A recorded benchmark workload: the initial population's objective
/// vectors plus the insertion stream, in the order a steady-state run
/// produced them.
struct Dataset {
    std::size_t objectives = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> initial;
    std::vector<std::vector<double>> insertions;
};

/// Runs the dataset synthesis protocol: a random population, then one
/// steady-state iteration per insertion (binary tournament on rank and
/// crowding, simulated binary crossover, polynomial mutation, insert and
/// remove-worst), recording each offspring's objectives at creation time.
/// Byte-identical output for a fixed seed.
Dataset synthesize_dataset(const Problem& problem, std::uint64_t seed,
                           std::size_t initial_size = 5000,
                           std::size_t insertion_count = 1000);

void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);  // parse errors carry line info

std::vector<Point> dataset_initial_points(const Dataset& dataset);
std::vector<Point> dataset_insertion_points(const Dataset& dataset);

}  // namespace ndsort
