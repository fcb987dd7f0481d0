#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace binquest {

// Project-wide deterministic generator: SplitMix64 (Steele, Lea & Flood 2014).
// The generator identity and the derived draws below are part of the external
// contract: the same seed must reproduce the same artifacts on any platform.
//
//   next()      - advance state by the golden-gamma constant, mix, return 64 bits
//   uniform()   - (next() >> 11) * 2^-53, in [0, 1)
//   below(n)    - next() % n
//   bernoulli(p)- uniform() < p
//   weighted(w) - u = uniform() * sum(w), first index whose running sum exceeds u
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("SplitMix64::below: n must be positive");
        return next() % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    std::size_t weighted(std::span<const double> weights) {
        if (weights.empty()) throw std::invalid_argument("SplitMix64::weighted: empty weights");
        double total = 0.0;
        for (double w : weights) total += w;
        const double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    std::uint64_t state_;
};

}  // namespace binquest
