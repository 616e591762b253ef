#pragma once

#include <cmath>
#include <functional>
#include <mutex>
#include <vector>

#include "illposed/fft.hpp"

namespace illposed::initdata {

inline constexpr double kPi = 3.14159265358979323846;

/// C-infinity falloff: 1 for t <= 0, 0 for t >= 1.
inline double bump_falloff(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return b / (a + b);
}

/// The standard compactly supported radial profile
///   exp(1 - 1/(1 - |x/s|^2)) on |x| < s, 0 outside,
/// peak value 1 at the origin and all derivatives vanishing at |x| = s.
class RadialBump {
  public:
    explicit RadialBump(double radius_scale) : s_(radius_scale) {
        if (!(radius_scale > 0.0)) throw ParameterError("base_bump: scale must be positive");
        if (radius_scale > 0.25)
            throw ParameterError("base_bump: scale must be <= 1/4 to keep support in B(0,1/4)");
    }

    double radius() const { return s_; }

    double operator()(double x1, double x2) const {
        double r2 = (x1 * x1 + x2 * x2) / (s_ * s_);
        if (r2 >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - r2));
    }

  private:
    double s_;
};

inline RadialBump base_bump(double radius_scale) { return RadialBump(radius_scale); }

/// The Fourier-side mollifier chi_hat: a smooth radial plateau, identically
/// peaked on |xi| <= 1/2, falling to zero at |xi| = 1 (a mollified indicator
/// of B(0,3/4)), normalized so that chi(0) = 1 with the convention
/// f(x) = (2pi)^-2 int fhat exp(i x.xi) dxi.
///
/// The physical-side radial profile chi(r) is tabulated once through the
/// projection-slice identity: the 1D Fourier transform of the projection
/// P(t) = int chi_hat(t, s) ds equals the planar transform restricted to a
/// line through the origin. P is smooth and compactly supported, so a long
/// padded 1D FFT gives chi to near machine accuracy.
class ChiProfile {
  public:
    static const ChiProfile& instance() {
        static ChiProfile p;
        return p;
    }

    double hat(double rho) const { return norm_c_ * bump_falloff(2.0 * (rho - 0.5)); }

    /// chi(|x|); zero beyond the tabulated range (where the profile has
    /// decayed below 1e-13).
    double value(double r) const {
        if (r < 0) r = -r;
        double u = r / dx_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i + 2 >= table_.size()) return 0.0;
        double t = u - static_cast<double>(i);
        // Catmull-Rom cubic
        double ym = i == 0 ? table_[1] : table_[i - 1];
        double y0 = table_[i], y1 = table_[i + 1], y2 = table_[i + 2];
        double a = 0.5 * (-ym + 3 * y0 - 3 * y1 + y2);
        double b = ym - 2.5 * y0 + 2 * y1 - 0.5 * y2;
        double c = 0.5 * (y1 - ym);
        return ((a * t + b) * t + c) * t + y0;
    }

    /// sup_{r' >= r} |chi(r')|: a decay majorant used to bound periodization
    /// tails.
    double tail_majorant(double r) const {
        if (r < 0) r = 0;
        std::size_t i = static_cast<std::size_t>(r / dx_);
        if (i >= suffix_max_.size()) return 0.0;
        return suffix_max_[i];
    }

    double table_spacing() const { return dx_; }
    double table_range() const { return dx_ * static_cast<double>(table_.size()); }

  private:
    ChiProfile() {
        // projection of the unnormalized chi_hat
        const int np = 4096;                     // P samples on [-1, 1]
        const double dxi = 2.0 / np;
        const std::size_t m = 1u << 20;          // padded 1D transform length
        std::vector<std::complex<double>> a(m, {0.0, 0.0});
        auto hat_un = [](double rho) { return bump_falloff(2.0 * (rho - 0.5)); };
        auto projection = [&](double xi) {
            if (std::abs(xi) >= 1.0) return 0.0;
            double smax = std::sqrt(1.0 - xi * xi);
            // trapezoid; the integrand vanishes to all orders at the endpoints
            const int nq = 2048;
            double hq = smax / nq;
            double acc = 0.5 * hat_un(std::abs(xi));  // s = 0 term: |(xi,0)| = |xi|
            for (int i = 1; i < nq; ++i) {
                double s = i * hq;
                acc += hat_un(std::hypot(xi, s));
            }
            return 2.0 * acc * hq;  // both signs of s
        };
        for (int k = -np / 2 + 1; k < np / 2; ++k) {
            double xi = k * dxi;
            double v = projection(xi);
            std::size_t idx = static_cast<std::size_t>((k + static_cast<long>(m)) % m);
            a[idx] = v;
        }
        std::vector<std::complex<double>> out(m);
        spectral::Fft::inverse_1d(static_cast<int>(m), a.data(), out.data());
        dx_ = 2.0 * kPi / (static_cast<double>(m) * dxi);
        const double range = 420.0;
        std::size_t keep = std::min(m / 2, static_cast<std::size_t>(range / dx_));
        table_.resize(keep);
        double w = dxi / (4.0 * kPi * kPi);
        for (std::size_t j = 0; j < keep; ++j) table_[j] = out[j].real() * w;
        norm_c_ = 1.0 / table_[0];
        for (double& v : table_) v *= norm_c_;
        // trim where the profile has decayed for good
        std::size_t last = table_.size();
        while (last > 1000 && std::abs(table_[last - 1]) < 1e-13) --last;
        table_.resize(std::min(table_.size(), last + 64));
        suffix_max_.resize(table_.size());
        double running = 0.0;
        for (std::size_t j = table_.size(); j-- > 0;) {
            running = std::max(running, std::abs(table_[j]));
            suffix_max_[j] = running;
        }
    }

    std::vector<double> table_;
    std::vector<double> suffix_max_;
    double dx_ = 0.0;
    double norm_c_ = 1.0;
};

/// rho(y) = 2 chi(|y|) cos(2 y1), the inverse transform of
/// chi_hat(xi - xi0) + chi_hat(xi + xi0) with xi0 = (2, 0).
inline double rho_value(double y1, double y2) {
    return 2.0 * ChiProfile::instance().value(std::hypot(y1, y2)) * std::cos(2.0 * y1);
}

inline double rho_hat_value(double xi1, double xi2) {
    const ChiProfile& chi = ChiProfile::instance();
    return chi.hat(std::hypot(xi1 - 2.0, xi2)) + chi.hat(std::hypot(xi1 + 2.0, xi2));
}

}  // namespace illposed::initdata
