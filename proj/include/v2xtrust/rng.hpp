#pragma once

#include <cstdint>
#include <random>

namespace v2xtrust {

// Seeded random stream. The uniform helpers are implemented on the raw
// 64-bit outputs so traces do not depend on the standard library's
// distribution internals; identical seeds give identical streams on any
// conforming platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0, 1).
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t pick(std::uint64_t n) { return engine_() % n; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + u01() * (hi - lo); }

    bool bernoulli(double p) { return u01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace v2xtrust
