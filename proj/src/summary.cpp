#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ndsort/bench.hpp"

namespace ndsort {

namespace {

std::string format_us(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    return out;
}

int strategy_order(const std::string& name) {
    if (name == "inds") return 0;
    if (name == "sync") return 1;
    if (name == "cas1") return 2;
    if (name == "cas2") return 3;
    if (name == "lock") return 4;
    return 5;
}

}  // namespace

const char* csv_header() {
    return "problem,k,dataset_seed,strategy,threads,fork,iteration,total_us,"
           "mean_insert_us,stddev_us,cas_retries,trims";
}

void append_csv(const std::string& path, std::span<const CsvRow> rows) {
    const bool fresh = !std::filesystem::exists(path) ||
                       std::filesystem::file_size(path) == 0;
    std::ofstream os(path, std::ios::app);
    if (!os) throw std::runtime_error("cannot open for append: " + path);
    if (fresh) os << csv_header() << '\n';
    for (const CsvRow& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%.3f,%.6f,%.6f", r.total_us,
                      r.mean_insert_us, r.stddev_us);
        os << r.problem << ',' << r.k << ',' << r.dataset_seed << ','
           << r.strategy << ',' << r.threads << ',' << r.fork << ','
           << r.iteration << ',' << buf << ',' << r.cas_retries << ','
           << r.trims << '\n';
    }
}

std::vector<CsvRow> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    std::vector<CsvRow> rows;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == csv_header()) continue;
        const auto f = split_fields(line);
        if (f.size() != 12) {
            throw std::runtime_error(path + " line " + std::to_string(lineno) +
                                     ": expected 12 fields, got " +
                                     std::to_string(f.size()));
        }
        CsvRow r;
        try {
            r.problem = f[0];
            r.k = std::stoul(f[1]);
            r.dataset_seed = std::stoull(f[2]);
            r.strategy = f[3];
            r.threads = std::stoul(f[4]);
            r.fork = std::stoul(f[5]);
            r.iteration = std::stoul(f[6]);
            r.total_us = std::stod(f[7]);
            r.mean_insert_us = std::stod(f[8]);
            r.stddev_us = std::stod(f[9]);
            r.cas_retries = std::stoull(f[10]);
            r.trims = std::stoull(f[11]);
        } catch (const std::exception&) {
            throw std::runtime_error(path + " line " + std::to_string(lineno) +
                                     ": malformed field");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summarize(std::span<const CsvRow> rows) {
    using Key = std::tuple<std::string, std::size_t, std::uint64_t, int,
                           std::string, std::size_t>;
    std::map<Key, std::vector<const CsvRow*>> groups;
    for (const CsvRow& r : rows) {
        groups[{r.problem, r.k, r.dataset_seed, strategy_order(r.strategy),
                r.strategy, r.threads}]
            .push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, members] : groups) {
        SummaryRow s;
        s.problem = std::get<0>(key);
        s.k = std::get<1>(key);
        s.dataset_seed = std::get<2>(key);
        s.strategy = std::get<4>(key);
        s.threads = std::get<5>(key);
        s.samples = members.size();

        std::vector<double> means;
        means.reserve(members.size());
        double retries = 0.0;
        double trims = 0.0;
        for (const CsvRow* r : members) {
            means.push_back(r->mean_insert_us);
            retries += double(r->cas_retries);
            trims += double(r->trims);
        }
        double mean = 0.0;
        for (double m : means) mean += m;
        mean /= double(means.size());
        double var = 0.0;
        for (double m : means) var += (m - mean) * (m - mean);
        s.mean_us = mean;
        s.stddev_us = means.size() > 1
                          ? std::sqrt(var / double(means.size() - 1))
                          : 0.0;
        std::sort(means.begin(), means.end());
        const std::size_t n = means.size();
        s.median_us = n % 2 ? means[n / 2]
                            : 0.5 * (means[n / 2 - 1] + means[n / 2]);
        s.mean_retries = retries / double(n);
        s.mean_trims = trims / double(n);
        out.push_back(std::move(s));
    }
    return out;
}

std::string format_summary_table(std::span<const SummaryRow> rows) {
    std::ostringstream os;
    std::string section;
    for (const SummaryRow& r : rows) {
        std::string key = r.problem + " k=" + std::to_string(r.k) +
                          " seed=" + std::to_string(r.dataset_seed);
        if (key != section) {
            section = key;
            os << "== " << section << " ==\n";
            char head[160];
            std::snprintf(head, sizeof(head), "%-8s %7s %8s %14s %14s %14s %12s %8s\n",
                          "strategy", "threads", "samples", "mean_us",
                          "stddev_us", "median_us", "retries", "trims");
            os << head;
        }
        char line[200];
        std::snprintf(line, sizeof(line),
                      "%-8s %7zu %8zu %14s %14s %14s %12.1f %8.1f\n",
                      r.strategy.c_str(), r.threads, r.samples,
                      format_us(r.mean_us).c_str(),
                      format_us(r.stddev_us).c_str(),
                      format_us(r.median_us).c_str(), r.mean_retries,
                      r.mean_trims);
        os << line;
    }
    return os.str();
}

void write_summary_csv(const std::string& path,
                       std::span<const SummaryRow> rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "problem,k,dataset_seed,strategy,threads,samples,mean_us,stddev_us,"
          "median_us,mean_retries,mean_trims\n";
    for (const SummaryRow& r : rows) {
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.1f,%.1f", r.mean_us,
                      r.stddev_us, r.median_us, r.mean_retries, r.mean_trims);
        os << r.problem << ',' << r.k << ',' << r.dataset_seed << ','
           << r.strategy << ',' << r.threads << ',' << r.samples << ',' << buf
           << '\n';
    }
}

}  // namespace ndsort
