#pragma once

#include <cmath>
#include <vector>

#include "illposed/field.hpp"

namespace illposed::spectral {

namespace detail {

template <typename Fn>
Field2D apply_multiplier(const Field2D& f, Fn&& m) {
    const GridSpec& g = f.grid();
    auto in = f.spectrum();
    std::vector<Complex> out(in.size());
    const int n = g.resolution;
    for (int i = 0; i < n; ++i) {
        double xi1 = g.freq(i);
        bool nyq1 = g.freq_index(i) == -n / 2;
        for (int j = 0; j < n; ++j) {
            std::size_t k = Field2D::idx(n, i, j);
            out[k] = m(xi1, g.freq(j), nyq1, g.freq_index(j) == -n / 2) * in[k];
        }
    }
    return Field2D::from_spectrum(g, std::move(out));
}

inline void require_mean_zero(const Field2D& f, const char* op) {
    double thresh = 1e-8 * f.l2();
    if (std::abs(f.mean()) > thresh && f.l2() > 0.0)
        throw ParameterError(std::string(op) + ": field must be mean-zero on the torus");
}

}  // namespace detail

/// d/dx_axis via the i*xi multiplier; Nyquist modes are zeroed so real input
/// stays real.
inline Field2D spectral_derivative(const Field2D& f, int axis) {
    if (axis != 1 && axis != 2) throw ParameterError("spectral_derivative: axis must be 1 or 2");
    return detail::apply_multiplier(f, [axis](double xi1, double xi2, bool nyq1, bool nyq2) {
        if (nyq1 || nyq2) return Complex{0.0, 0.0};
        return Complex{0.0, axis == 1 ? xi1 : xi2};
    });
}

/// Inverse Laplacian with the zero mode projected out. Requires mean-zero
/// input: on the torus the inverse exists only modulo constants.
inline Field2D inv_laplacian(const Field2D& f) {
    detail::require_mean_zero(f, "inv_laplacian");
    return detail::apply_multiplier(f, [](double xi1, double xi2, bool, bool) {
        double k2 = xi1 * xi1 + xi2 * xi2;
        return k2 == 0.0 ? Complex{0.0, 0.0} : Complex{-1.0 / k2, 0.0};
    });
}

/// |xi|^s multiplier. s = 0 is the identity; for s > 0 the zero mode maps to
/// zero.
inline Field2D frac_laplacian(const Field2D& f, double s) {
    if (s < 0.0) throw ParameterError("frac_laplacian: order must be >= 0");
    if (s == 0.0) return f;
    return detail::apply_multiplier(f, [s](double xi1, double xi2, bool, bool) {
        double k2 = xi1 * xi1 + xi2 * xi2;
        return k2 == 0.0 ? Complex{0.0, 0.0} : Complex{std::pow(k2, 0.5 * s), 0.0};
    });
}

/// u = (-d2, d1) invLap(omega): divergence-free velocity with curl(u) = omega
/// minus its mean.
inline Velocity2D biot_savart(const Field2D& omega) {
    detail::require_mean_zero(omega, "biot_savart");
    Field2D u1 = detail::apply_multiplier(omega, [](double xi1, double xi2, bool nyq1, bool nyq2) {
        double k2 = xi1 * xi1 + xi2 * xi2;
        if (k2 == 0.0 || nyq1 || nyq2) return Complex{0.0, 0.0};
        return Complex{0.0, xi2 / k2};
    });
    Field2D u2 = detail::apply_multiplier(omega, [](double xi1, double xi2, bool nyq1, bool nyq2) {
        double k2 = xi1 * xi1 + xi2 * xi2;
        if (k2 == 0.0 || nyq1 || nyq2) return Complex{0.0, 0.0};
        return Complex{0.0, -xi1 / k2};
    });
    return Velocity2D{std::move(u1), std::move(u2)};
}

inline Field2D divergence(const Velocity2D& v) {
    v.grid();
    Field2D a = spectral_derivative(v.u1, 1);
    Field2D b = spectral_derivative(v.u2, 2);
    auto sa = a.samples();
    auto sb = b.samples();
    std::vector<double> out(sa.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sa[k] + sb[k];
    return Field2D::from_samples(a.grid(), std::move(out));
}

inline Field2D curl(const Velocity2D& v) {
    v.grid();
    Field2D a = spectral_derivative(v.u2, 1);
    Field2D b = spectral_derivative(v.u1, 2);
    auto sa = a.samples();
    auto sb = b.samples();
    std::vector<double> out(sa.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sa[k] - sb[k];
    return Field2D::from_samples(a.grid(), std::move(out));
}

inline Field2D linear_combination(double a, const Field2D& f, double b, const Field2D& g) {
    if (!(f.grid() == g.grid())) throw ParameterError("linear_combination: grid mismatch");
    auto sf = f.samples();
    auto sg = g.samples();
    std::vector<double> out(sf.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * sf[k] + b * sg[k];
    return Field2D::from_samples(f.grid(), std::move(out));
}

inline Field2D pointwise_product(const Field2D& f, const Field2D& g) {
    if (!(f.grid() == g.grid())) throw ParameterError("pointwise_product: grid mismatch");
    auto sf = f.samples();
    auto sg = g.samples();
    std::vector<double> out(sf.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sf[k] * sg[k];
    return Field2D::from_samples(f.grid(), std::move(out));
}

/// Physical-side L2 norm (Riemann sum), the dual route to Field2D::l2().
inline Field2D scale(const Field2D& f, double a) {
    auto sf = f.samples();
    std::vector<double> out(sf.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * sf[k];
    return Field2D::from_samples(f.grid(), std::move(out));
}

inline double l2_physical(const Field2D& f) {
    KahanSum s;
    for (double v : f.samples()) s.add(v * v);
    double h2 = f.grid().spacing * f.grid().spacing;
    return std::sqrt(s.value() * h2);
}

}  // namespace illposed::spectral
