#pragma once

#include <cstdint>
#include <random>

namespace wsd {

/// Seedable RNG with fully specified draw functions. std::mt19937_64 is
/// bit-exact everywhere, but the standard distributions are not, so the
/// bounded draws are spelled out here; identical seeds must give identical
/// simulation transcripts on every platform.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long long>(engine_() % span);
    }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace wsd
