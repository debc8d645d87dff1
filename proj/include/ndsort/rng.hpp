#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ndsort {

/// Seeded random source with hand-rolled value derivation. std::mt19937_64
/// output is pinned by the standard, but the distribution adaptors are not,
/// so everything downstream of the raw engine is implemented here to keep
/// datasets and partitions byte-identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). Modulo bias is negligible for the ranges
    /// used here and keeps the mapping platform-independent.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ndsort
