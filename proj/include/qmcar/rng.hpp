#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace qmcar {

// Seeded uniform stream over mt19937_64. The engine and the (x >> 11) * 2^-53
// mapping are both pinned by the standard, so a seed reproduces the same
// doubles on any platform.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    void fill(std::span<double> out) {
        for (double& v : out) v = next();
    }

    // Box-Muller (cosine branch only): exactly two uniforms per normal.
    double normal() {
        double u1 = next();
        double u2 = next();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586476925287 * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace qmcar
