#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "illposed/fft.hpp"
#include "illposed/grid.hpp"

namespace illposed::spectral {

using Complex = std::complex<double>;

/// Scalar field on a periodic grid holding physical samples and Fourier
/// coefficients as a lazily synchronized pair.
///
/// Coefficients are stored in the continuous normalization
///     c[m] = h^2 * sum_j f(x_j) exp(-i xi_m . x_j),
/// i.e. trapezoidal approximations of the transform integral with the
/// convention fhat(xi) = int f(x) exp(-i x.xi) dx. A field is immutable after
/// construction; the representation cache is guarded so concurrent readers
/// are safe.
class Field2D {
  public:
    Field2D() = default;

    static Field2D from_samples(const GridSpec& g, std::vector<double> samples) {
        require_size(g, samples.size());
        Field2D f(g);
        f.phys_ = std::move(samples);
        f.has_phys_ = true;
        return f;
    }

    static Field2D from_spectrum(const GridSpec& g, std::vector<Complex> coeffs) {
        require_size(g, coeffs.size());
        Field2D f(g);
        f.spec_ = std::move(coeffs);
        f.has_spec_ = true;
        return f;
    }

    static Field2D zero(const GridSpec& g) {
        return from_samples(g, std::vector<double>(g.cells(), 0.0));
    }

    /// Evaluate f(x1, x2) at the grid nodes.
    template <typename F>
    static Field2D sampled(const GridSpec& g, F&& fn) {
        std::vector<double> v(g.cells());
        const int n = g.resolution;
        for (int i = 0; i < n; ++i) {
            double x1 = g.node(i);
            for (int j = 0; j < n; ++j) v[idx(n, i, j)] = fn(x1, g.node(j));
        }
        return from_samples(g, std::move(v));
    }

    /// Evaluate fhat(xi1, xi2) on the frequency lattice.
    template <typename F>
    static Field2D from_spectrum_fn(const GridSpec& g, F&& fn) {
        std::vector<Complex> v(g.cells());
        const int n = g.resolution;
        for (int i = 0; i < n; ++i) {
            double xi1 = g.freq(i);
            for (int j = 0; j < n; ++j) v[idx(n, i, j)] = fn(xi1, g.freq(j));
        }
        return from_spectrum(g, std::move(v));
    }

    Field2D(const Field2D& o) { copy_from(o); }
    Field2D& operator=(const Field2D& o) {
        if (this != &o) copy_from(o);
        return *this;
    }
    Field2D(Field2D&& o) noexcept { move_from(std::move(o)); }
    Field2D& operator=(Field2D&& o) noexcept {
        if (this != &o) move_from(std::move(o));
        return *this;
    }

    const GridSpec& grid() const { return grid_; }
    bool empty() const { return grid_.resolution == 0; }

    std::span<const double> samples() const {
        ensure_phys();
        return phys_;
    }
    std::span<const Complex> spectrum() const {
        ensure_spec();
        return spec_;
    }

    double sample(int i, int j) const { return samples()[idx(grid_.resolution, i, j)]; }
    Complex coeff(int m1, int m2) const { return spectrum()[idx(grid_.resolution, m1, m2)]; }

    double mean() const {
        Complex c0 = spectrum()[0];
        double area = 4.0 * grid_.half_width * grid_.half_width;
        return c0.real() / area;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : samples()) m = std::max(m, std::abs(v));
        return m;
    }

    /// L2 norm from the spectral side (discrete Parseval, exact).
    double l2() const {
        KahanSum s;
        for (const Complex& c : spectrum()) s.add(std::norm(c));
        double w = grid_.freq_step / (2.0 * 3.14159265358979323846);
        return std::sqrt(s.value()) * w;
    }

    static std::size_t idx(int n, int i, int j) {
        return static_cast<std::size_t>(i) * n + j;
    }

  private:
    explicit Field2D(const GridSpec& g) : grid_(g) {}

    static void require_size(const GridSpec& g, std::size_t got) {
        if (g.resolution == 0) throw ParameterError("Field2D: empty grid");
        if (got != g.cells()) throw ParameterError("Field2D: data size does not match grid");
    }

    void copy_from(const Field2D& o) {
        std::lock_guard<std::mutex> lk(o.mu_);
        grid_ = o.grid_;
        phys_ = o.phys_;
        spec_ = o.spec_;
        has_phys_ = o.has_phys_;
        has_spec_ = o.has_spec_;
    }
    void move_from(Field2D&& o) {
        std::lock_guard<std::mutex> lk(o.mu_);
        grid_ = o.grid_;
        phys_ = std::move(o.phys_);
        spec_ = std::move(o.spec_);
        has_phys_ = o.has_phys_;
        has_spec_ = o.has_spec_;
        o.has_phys_ = o.has_spec_ = false;
        o.grid_ = GridSpec{};
    }

    void ensure_spec() const {
        if (has_spec_) return;
        std::lock_guard<std::mutex> lk(mu_);
        if (has_spec_) return;
        const int n = grid_.resolution;
        std::vector<Complex> in(grid_.cells());
        for (std::size_t k = 0; k < in.size(); ++k) in[k] = phys_[k];
        spec_.assign(grid_.cells(), Complex{});
        Fft::forward(n, in.data(), spec_.data());
        const double h2 = grid_.spacing * grid_.spacing;
        apply_twist_scale(spec_, n, h2);
        has_spec_ = true;
    }

    void ensure_phys() const {
        if (has_phys_) return;
        std::lock_guard<std::mutex> lk(mu_);
        if (has_phys_) return;
        const int n = grid_.resolution;
        std::vector<Complex> in(spec_);
        apply_twist_scale(in, n, 1.0);
        std::vector<Complex> out(grid_.cells());
        Fft::inverse(n, in.data(), out.data());
        double area = 4.0 * grid_.half_width * grid_.half_width;
        phys_.resize(grid_.cells());
        for (std::size_t k = 0; k < out.size(); ++k) phys_[k] = out[k].real() / area;
        has_phys_ = true;
    }

    // (-1)^(m1+m2) twist carries the x-origin at -L; scale folds in h^2.
    static void apply_twist_scale(std::vector<Complex>& a, int n, double scale) {
        for (int i = 0; i < n; ++i) {
            double si = (i & 1) ? -scale : scale;
            Complex* row = a.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) row[j] *= (j & 1) ? -si : si;
        }
    }

    GridSpec grid_{};
    mutable std::vector<double> phys_;
    mutable std::vector<Complex> spec_;
    mutable bool has_phys_ = false;
    mutable bool has_spec_ = false;
    mutable std::mutex mu_;
};

/// Two velocity components on a shared grid.
struct Velocity2D {
    Field2D u1;
    Field2D u2;

    const GridSpec& grid() const {
        if (!(u1.grid() == u2.grid())) throw ParameterError("Velocity2D: component grid mismatch");
        return u1.grid();
    }
};

}  // namespace illposed::spectral
