#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace finsent {

// Deterministic random source. Wraps std::mt19937_64 (whose output sequence is
// fixed by the standard) and derives doubles/indices with explicit arithmetic
// instead of the implementation-defined std::*_distribution adaptors, so the
// same seed gives the same stream on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed = 1) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform index in [0, n). Modulo bias is negligible for n << 2^64.
    size_t index(size_t n) { return static_cast<size_t>(next() % n); }

    // Fisher-Yates; std::shuffle is not used because its draw sequence is
    // implementation-defined.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace finsent
