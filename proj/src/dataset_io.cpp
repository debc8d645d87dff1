#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ndsort/problems.hpp"

namespace ndsort {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("dataset parse error, line " +
                             std::to_string(line) + ": " + what);
}

std::vector<double> parse_row(const std::string& text, std::size_t k,
                              std::size_t line, std::size_t row_index,
                              const char* section) {
    std::vector<double> out;
    out.reserve(k);
    const char* p = text.data();
    const char* end = p + text.size();
    while (p < end) {
        while (p < end && *p == ' ') ++p;
        if (p == end) break;
        double value = 0.0;
        const auto [next, ec] = std::from_chars(p, end, value);
        if (ec != std::errc()) {
            parse_fail(line, std::string("bad number in ") + section +
                                 " row " + std::to_string(row_index));
        }
        out.push_back(value);
        p = next;
    }
    if (out.size() != k) {
        parse_fail(line, std::string(section) + " row " +
                             std::to_string(row_index) + " has " +
                             std::to_string(out.size()) +
                             " values, header says k " + std::to_string(k));
    }
    return out;
}

void write_row(std::ostream& os, const std::vector<double>& row) {
    char buf[32];
    for (std::size_t i = 0; i < row.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
        if (i) os << ' ';
        os << buf;
    }
    os << '\n';
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    os << "k " << dataset.objectives << " init " << dataset.initial.size()
       << " ins " << dataset.insertions.size() << " seed " << dataset.seed
       << '\n';
    for (const auto& row : dataset.initial) write_row(os, row);
    os << "---\n";
    for (const auto& row : dataset.insertions) write_row(os, row);
    if (!os) {
        throw std::runtime_error("write failed: " + path);
    }
}

Dataset load_dataset(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open dataset: " + path);
    }
    std::string text;
    std::size_t line = 0;

    if (!std::getline(is, text)) parse_fail(1, "empty file, missing header");
    ++line;

    Dataset dataset;
    std::size_t init_count = 0;
    std::size_t ins_count = 0;
    {
        std::istringstream header(text);
        std::string kw_k, kw_init, kw_ins, kw_seed;
        if (!(header >> kw_k >> dataset.objectives >> kw_init >> init_count >>
              kw_ins >> ins_count >> kw_seed >> dataset.seed) ||
            kw_k != "k" || kw_init != "init" || kw_ins != "ins" ||
            kw_seed != "seed") {
            parse_fail(1, "malformed header, expected 'k K init N ins M seed S'");
        }
        if (dataset.objectives < 2) parse_fail(1, "k must be at least 2");
    }

    dataset.initial.reserve(init_count);
    for (std::size_t i = 0; i < init_count; ++i) {
        if (!std::getline(is, text)) {
            parse_fail(line + 1, "truncated file: initial section ends at row " +
                                     std::to_string(i) + " of " +
                                     std::to_string(init_count));
        }
        ++line;
        dataset.initial.push_back(
            parse_row(text, dataset.objectives, line, i, "initial"));
    }

    if (!std::getline(is, text)) {
        parse_fail(line + 1, "truncated file: missing '---' separator");
    }
    ++line;
    if (text != "---") parse_fail(line, "expected '---' separator");

    dataset.insertions.reserve(ins_count);
    for (std::size_t i = 0; i < ins_count; ++i) {
        if (!std::getline(is, text)) {
            parse_fail(line + 1,
                       "truncated file: insertion section ends at row " +
                           std::to_string(i) + " of " +
                           std::to_string(ins_count));
        }
        ++line;
        dataset.insertions.push_back(
            parse_row(text, dataset.objectives, line, i, "insertion"));
    }

    while (std::getline(is, text)) {
        ++line;
        if (!text.empty()) parse_fail(line, "unexpected trailing content");
    }
    return dataset;
}

}  // namespace ndsort
