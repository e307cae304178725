#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace monotone_ei {

// All randomness in the library flows through this wrapper. std::mt19937_64
// has a standardized output sequence, and every transformation below is
// written out explicitly (no std::*_distribution, whose algorithms are
// implementation-defined), so results are bit-identical across platforms
// for a given seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-stream seed derivation (seed-sequence splitting).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master ^ (0x5851f42d4c957f2dULL * (stream + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n). Modulo bias is irrelevant at the n used here.
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    long uniform_int(long a, long b) {  // inclusive range
        return a + static_cast<long>(below(static_cast<std::uint64_t>(b - a + 1)));
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; consumes two uniforms per draw.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Index draw with probability proportional to cum differences;
    // `cum` is the inclusive prefix sum of the weights (cum.back() = total).
    std::size_t pick_cumulative(const std::vector<double>& cum) {
        const double u = uniform() * cum.back();
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum[mid] > u) hi = mid; else lo = mid + 1;
        }
        return lo;
    }

    // Fisher-Yates with explicit index draws (std::shuffle is not portable).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace monotone_ei
