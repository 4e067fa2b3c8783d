#pragma once

#include <complex>
#include <cmath>
#include <cstdint>

namespace fol {

// Counter-based generator: the n-th draw of stream (seed, stream) is a pure
// function of (seed, stream, n). Identical seeds give identical sequences on
// every platform, and per-task streams can be forked without coordination.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    // Independent child stream; stable under reordering of fork calls.
    Rng fork(std::uint64_t substream) const {
        return Rng(mix(seed_, mix(stream_, 0x9e3779b97f4a7c15ull + substream)), 0);
    }

    std::uint64_t next_u64() { return mix(mix(seed_, stream_), counter_++); }

    double uniform() {
        // 53 random bits into [0,1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        // Box-Muller; draw pairs, cache the partner
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // CN(0,1): E|xi|^2 = 1
    std::complex<double> complex_gaussian() {
        const double s = 0.7071067811865475244;
        double re = gaussian(), im = gaussian();
        return {re * s, im * s};
    }

private:
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        // splitmix64 finalizer over a simple combine
        std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace fol
