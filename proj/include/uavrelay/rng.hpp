#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace uavrelay {

// splitmix64 finalizer (Steele/Lea/Flood). Fixed across platforms; used for
// all seed derivation so per-run streams are independent of execution order.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point_index,
                                 std::uint64_t run_index) {
    std::uint64_t s = splitmix64(master ^ 0xA0761D6478BD642FULL);
    s = splitmix64(s ^ (point_index * 0xE7037ED1A0B428DBULL));
    s = splitmix64(s ^ (run_index * 0x8EBC6AF09C88C6E3ULL));
    return s;
}

// Deterministic RNG. mt19937_64 has a standardized output sequence; the
// uniform/normal/integer mappings are hand-rolled so results do not depend on
// implementation-defined <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal(double mean, double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(theta);
        have_spare_ = true;
        return mean + stddev * radius * std::cos(theta);
    }

    // Uniform integer in [0, n), n >= 1. Rejection sampling on the top bits.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return v % n;
    }

    // Draws k distinct elements from items uniformly (partial Fisher-Yates).
    template <typename T>
    std::vector<T> sample_without_replacement(std::vector<T> items, std::size_t k) {
        if (k > items.size()) k = items.size();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_int(items.size() - i));
            std::swap(items[i], items[j]);
        }
        items.resize(k);
        return items;
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace uavrelay
