#pragma once

#include <cstdint>
#include <string_view>

#include "pulse/util/hash.hpp"

namespace pulse {

// Portable natural log. Argument reduction to [sqrt(1/2), sqrt(2)) plus an
// atanh series, so identical bit patterns come out on every libm. Used by the
// gaussian sampler to keep generator output byte-stable across platforms.
double portable_log(double x);

// SplitMix64 finalizer; a 64-bit permutation.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-mode SplitMix64. Output i of a stream with key k is
// mix64(k + i*golden), so streams are pure functions of (key, counter):
// cheap to fork per (task, split, index) and reproducible everywhere.
class CounterRng {
public:
    explicit CounterRng(uint64_t key) : key_(key) {}

    // Derive a child stream key from a text tag. Children are independent
    // streams for practical purposes.
    CounterRng fork(std::string_view tag) const {
        return CounterRng(mix64(key_ ^ fnv1a64(tag)));
    }
    CounterRng fork(uint64_t index) const {
        return CounterRng(mix64(key_ ^ (0x9e3779b97f4a7c15ULL + index)));
    }

    uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive integer range.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(next_u64() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal via Marsaglia's polar method; uses sqrt (IEEE-exact)
    // and portable_log only.
    double normal();
    double normal(double mu, double sd) { return mu + sd * normal(); }

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pulse
