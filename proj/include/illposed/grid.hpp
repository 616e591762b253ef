#pragma once

#include <string>

#include "illposed/common.hpp"

namespace illposed::spectral {

/// Periodic grid on [-L,L)^2 with N samples per axis and the matching
/// frequency lattice xi = (pi/L) * m, m in {-N/2,...,N/2-1}.
struct GridSpec {
    double half_width = 0.0;   // L
    int resolution = 0;        // N per axis, power of two
    double spacing = 0.0;      // h = 2L/N
    double freq_step = 0.0;    // dxi = pi/L

    int size() const { return resolution; }
    std::size_t cells() const { return static_cast<std::size_t>(resolution) * resolution; }

    // (i - N/2) h rather than -L + i h: negation is exact, so mirrored
    // indices give bitwise-opposite nodes and odd symmetry can hold exactly
    double node(int i) const { return spacing * (i - resolution / 2); }

    // Signed frequency index for storage index m in [0,N).
    int freq_index(int m) const { return m < resolution / 2 ? m : m - resolution; }
    double freq(int m) const { return freq_step * freq_index(m); }
    double nyquist() const { return freq_step * (resolution / 2); }

    bool operator==(const GridSpec& o) const {
        return half_width == o.half_width && resolution == o.resolution;
    }
};

inline GridSpec make_grid(double half_width, int resolution) {
    if (!(half_width > 0.0))
        throw ParameterError("make_grid: half_width must be positive");
    if (resolution < 16 || !is_power_of_two(static_cast<std::uint64_t>(resolution)))
        throw ParameterError("make_grid: resolution must be a power of two >= 16, got " +
                             std::to_string(resolution));
    GridSpec g;
    g.half_width = half_width;
    g.resolution = resolution;
    g.spacing = 2.0 * half_width / resolution;  // exact: division by a power of two
    g.freq_step = 3.14159265358979323846 / half_width;
    return g;
}

}  // namespace illposed::spectral
