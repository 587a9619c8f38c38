// Deterministic per-path random streams. Path j draws from a splitmix64
// generator keyed on (seed, j), so adding paths or reordering work never
// reshuffles the noise of existing paths.
#pragma once

#include <cmath>
#include <cstdint>

namespace ambimerton {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double next_unit() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

/// Standard normals via Box-Muller, two per pair of uniforms.
struct NormalStream {
    SplitMix64 gen;
    bool has_spare = false;
    double spare = 0.0;

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        const double u1 = gen.next_unit();
        const double u2 = gen.next_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925287 * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

inline NormalStream path_stream(std::uint64_t seed, std::uint64_t path_index) {
    SplitMix64 mixer{seed ^ (0xA0761D6478BD642FULL * (path_index + 1))};
    mixer.next();
    return NormalStream{SplitMix64{mixer.next()}, false, 0.0};
}

}  // namespace ambimerton
