#pragma once

// Deterministic RNG for tests, fixtures and the verification suite.
// splitmix64 keeps random-polynomial metrics byte-reproducible across
// platforms (std:: distributions are implementation-defined).

#include <cstdint>
#include <vector>

#include "curvclass/rational.hpp"

namespace curvclass {

struct SplitMix64 {
    explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    long long range(long long lo, long long hi) { // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    // small exact rational, numerator in [-max_num, max_num], denominator in [1, max_den]
    Rational small_rational(long long max_num = 9, long long max_den = 9) {
        return Rational(range(-max_num, max_num), range(1, max_den));
    }

    Rational nonzero_rational(long long max_num = 9, long long max_den = 9) {
        for (;;) {
            Rational r = small_rational(max_num, max_den);
            if (!r.is_zero()) return r;
        }
    }

    std::vector<double> point_in_box(const std::vector<double>& lo, const std::vector<double>& hi) {
        std::vector<double> p(lo.size());
        for (size_t i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
        return p;
    }

    std::uint64_t state;
};

} // namespace curvclass
