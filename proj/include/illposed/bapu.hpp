#pragma once

#include <cmath>
#include <vector>

#include "illposed/covering.hpp"
#include "illposed/fft.hpp"

namespace illposed::funcspace {

/// Bounded admissible partition of unity subordinate to an alpha-covering:
/// squared-cosine bumps in patch-normalized coordinates, normalized by their
/// pointwise sum so that sum_Q psi_Q = 1 exactly on the covered lattice.
struct Bapu {
    AlphaCovering covering;
    double order_p = 2.0;                    // the p of the kernel bound
    std::vector<std::vector<double>> psi;    // per patch, aligned with patch.cells
    double partition_max_err = 0.0;          // recorded |sum psi - 1| on covered cells
    double kernel_bound = 0.0;               // recorded sup_Q |Q|^{1/p-1} ||Finv psi_Q||_p
    std::vector<double> kernel_norms;        // per patch |Q|^{1/p-1} ||Finv psi_Q||_p
};

namespace detail {

inline double window_raw(const Patch& p, double r, double th) {
    if (!p.contains(r, th)) return 0.0;
    double w;
    if (p.kind == Patch::Kind::Ball) {
        double u = r / p.r_hi;
        double c = std::cos(1.57079632679489661923 * u);
        w = c * c;
    } else {
        double u = (r - p.r_lo) / (p.r_hi - p.r_lo);
        double s = std::sin(3.14159265358979323846 * u);
        w = s * s;
        if (p.kind == Patch::Kind::Sector) {
            double d = std::fmod(th - p.th_lo, kTwoPi);
            if (d < 0) d += kTwoPi;
            double v = d / p.th_wd;
            double sv = std::sin(3.14159265358979323846 * v);
            w *= sv * sv;
        }
    }
    return w;
}

/// || Finv psi_Q ||_Lp on the original torus, computed on a reduced grid.
/// Translating the window to the frequency origin only modulates the kernel,
/// so |Finv psi_Q| is unchanged; the shifted window fits in a small lattice
/// box and the kernel is then sampled on the same physical domain at a
/// coarser spacing, which is enough because the kernel's scale is set by the
/// patch extent.
inline double kernel_lp_local(const GridSpec& grid, const Patch& p,
                              const std::vector<double>& psi, double lp) {
    if (p.cells.empty()) return 0.0;
    const int n = grid.resolution;
    const double dxi = grid.freq_step;
    long c1 = std::lround(p.xi_q[0] / dxi);
    long c2 = std::lround(p.xi_q[1] / dxi);
    long ext = 1;
    std::vector<std::pair<long, long>> offsets(p.cells.size());
    for (std::size_t k = 0; k < p.cells.size(); ++k) {
        int i = static_cast<int>(p.cells[k] / n), j = static_cast<int>(p.cells[k] % n);
        long o1 = grid.freq_index(i) - c1, o2 = grid.freq_index(j) - c2;
        offsets[k] = {o1, o2};
        ext = std::max({ext, std::labs(o1), std::labs(o2)});
    }
    int m = 32;
    while (m < 4 * (2 * ext + 1) && m < 4096) m *= 2;
    std::vector<spectral::Complex> w(static_cast<std::size_t>(m) * m, spectral::Complex{0, 0});
    for (std::size_t k = 0; k < p.cells.size(); ++k) {
        long i = ((offsets[k].first % m) + m) % m;
        long j = ((offsets[k].second % m) + m) % m;
        w[static_cast<std::size_t>(i) * m + j] = psi[k];
    }
    std::vector<spectral::Complex> out(w.size());
    spectral::Fft::inverse(m, w.data(), out.data());
    const double pi = 3.14159265358979323846;
    double amp = dxi * dxi / (4.0 * pi * pi);  // Riemann weight of the inverse transform
    double h_loc = 2.0 * pi / (m * dxi);
    if (std::isinf(lp)) {
        double worst = 0.0;
        for (const auto& z : out) worst = std::max(worst, std::abs(z));
        return worst * amp;
    }
    KahanSum s;
    for (const auto& z : out) s.add(std::pow(std::abs(z) * amp, lp));
    return std::pow(s.value() * h_loc * h_loc, 1.0 / lp);
}

}  // namespace detail

inline Bapu build_bapu(const AlphaCovering& cov, double order_p) {
    if (!(order_p >= 1.0)) throw ParameterError("build_bapu: order p must be >= 1");
    Bapu b;
    b.covering = cov;
    b.order_p = order_p;
    const AlphaCovering& c = b.covering;
    const GridSpec& g = c.grid;
    const int n = g.resolution;

    b.psi.resize(c.patches.size());
    std::vector<double> sum(g.cells(), 0.0);
    for (std::size_t q = 0; q < c.patches.size(); ++q) {
        const Patch& p = c.patches[q];
        auto& vals = b.psi[q];
        vals.resize(p.cells.size());
        for (std::size_t k = 0; k < p.cells.size(); ++k) {
            int i = static_cast<int>(p.cells[k] / n), j = static_cast<int>(p.cells[k] % n);
            double xi1 = g.freq(i), xi2 = g.freq(j);
            double r = std::hypot(xi1, xi2);
            double th = std::atan2(xi2, xi1);
            if (th < 0) th += kTwoPi;
            vals[k] = detail::window_raw(p, r, th);
            sum[p.cells[k]] += vals[k];
        }
    }
    // normalize on the covered disc; outside it the raw (smoothly decaying)
    // values are kept so windows stay in [0,1] with the same support
    for (std::size_t q = 0; q < c.patches.size(); ++q) {
        const Patch& p = c.patches[q];
        for (std::size_t k = 0; k < p.cells.size(); ++k) {
            std::uint32_t cell = p.cells[k];
            int i = static_cast<int>(cell / n), j = static_cast<int>(cell % n);
            double r = std::hypot(g.freq(i), g.freq(j));
            if (r > c.xi_max) continue;
            if (sum[cell] <= 1e-14)
                throw ConstructionError("build_bapu: covering gap at a lattice frequency");
            b.psi[q][k] /= sum[cell];
        }
    }

    // recorded partition defect over the covered disc
    {
        std::vector<double> check(g.cells(), 0.0);
        for (std::size_t q = 0; q < c.patches.size(); ++q)
            for (std::size_t k = 0; k < c.patches[q].cells.size(); ++k)
                check[c.patches[q].cells[k]] += b.psi[q][k];
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double r = std::hypot(g.freq(i), g.freq(j));
                if (r > c.xi_max) continue;
                worst = std::max(worst, std::abs(check[Field2D::idx(n, i, j)] - 1.0));
            }
        b.partition_max_err = worst;
    }

    // kernel bound record
    b.kernel_norms.assign(c.patches.size(), 0.0);
    parallel_for(c.patches.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t q = lo; q < hi; ++q) {
            const Patch& p = c.patches[q];
            double lp = detail::kernel_lp_local(g, p, b.psi[q], order_p);
            double w = std::isinf(order_p) ? 1.0 / p.area : std::pow(p.area, 1.0 / order_p - 1.0);
            b.kernel_norms[q] = w * lp;
        }
    });
    double worst = 0.0;
    for (double v : b.kernel_norms) worst = std::max(worst, v);
    b.kernel_bound = worst;
    return b;
}

struct BapuAudit {
    bool support = false;
    bool partition = false;
    bool kernel_bound = false;
    double partition_max_err = 0.0;
    double kernel_bound_value = 0.0;
    bool pass() const { return support && partition && kernel_bound; }
};

/// The three partition-of-unity invariants. The kernel bound is checked
/// against a caller-supplied cap (a recorded regression constant).
inline BapuAudit audit_bapu(const Bapu& b, double kernel_cap) {
    BapuAudit a;
    a.support = true;
    for (std::size_t q = 0; q < b.psi.size(); ++q) {
        for (double v : b.psi[q])
            if (v < -1e-15 || v > 1.0 + 1e-12) a.support = false;
    }
    a.partition_max_err = b.partition_max_err;
    a.partition = b.partition_max_err <= 1e-10;
    a.kernel_bound_value = b.kernel_bound;
    a.kernel_bound = std::isfinite(b.kernel_bound) && b.kernel_bound <= kernel_cap;
    return a;
}

inline nlohmann::json bapu_to_json(const Bapu& b) {
    nlohmann::json j;
    j["order_p"] = std::isinf(b.order_p) ? 1e308 : b.order_p;
    j["partition_max_err"] = b.partition_max_err;
    j["kernel_bound"] = b.kernel_bound;
    j["covering"] = covering_to_json(b.covering);
    return j;
}

}  // namespace illposed::funcspace
