#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace drlcox {

// SplitMix64 generator (Steele, Lea & Flood 2014). Chosen over std::mt19937
// because its output is fully specified by the reference constants below and
// therefore reproducible across standard libraries and platforms. All
// randomness in this project flows through this generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n) via Lemire's multiply-shift reduction.
    // Slightly biased for astronomically large n; exact enough here and,
    // unlike rejection sampling, consumes exactly one draw per call.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller. The spare value is cached, so a
    // sequence of normal() calls consumes one uniform pair per two values.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // in (0, 1], keeps log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// FNV-1a hash of a label, used to fold strings into seed derivations.
inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives a child seed from a parent seed and a list of components by
// mixing each component through one SplitMix64 step. Used to give every
// (purpose, cell, trial) combination in the benchmark its own independent
// stream: child streams never overlap and adding a new purpose never
// perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t parent,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = parent;
    for (std::uint64_t p : parts) {
        SplitMix64 mix(s ^ (p + 0x9e3779b97f4a7c15ULL));
        s = mix.next_u64();
    }
    return s;
}

// Draws k distinct indices from [0, n) by partial Fisher-Yates. Order of
// the result is the draw order; callers that need sorted output sort it.
inline std::vector<int> sample_without_replacement(int n, int k, SplitMix64& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k > n) k = n;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

}  // namespace drlcox
