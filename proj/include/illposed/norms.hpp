#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "illposed/bapu.hpp"
#include "illposed/spectral_ops.hpp"

namespace illposed::funcspace {

using spectral::Complex;
using spectral::Field2D;
using spectral::GridSpec;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Which norm, with the exponents that apply to it.
struct NormSpec {
    enum class Space { Lp, W1r, Holder, Besov, AlphaMod };
    Space space = Space::Lp;
    double s = 0.0;      // smoothness weight (Besov / alpha-modulation)
    double sigma = 0.5;  // Hoelder exponent
    double p = 2.0;
    double q = 2.0;
    double r = 2.5;      // Sobolev integrability, 2 < r < inf
    double alpha = 1.0;  // modulation parameter, 0 < alpha <= 1

    void validate() const {
        if (!(p >= 1.0) || !(q >= 1.0))
            throw ParameterError("NormSpec: p and q must be >= 1 (inf allowed)");
        switch (space) {
            case Space::Holder:
                if (!(sigma > 0.0 && sigma < 1.0))
                    throw ParameterError("NormSpec: sigma must lie in (0,1)");
                break;
            case Space::W1r:
                if (!(r > 2.0 && std::isfinite(r)))
                    throw ParameterError("NormSpec: r must lie in (2,inf)");
                break;
            case Space::AlphaMod:
                if (!(alpha > 0.0 && alpha <= 1.0))
                    throw ParameterError("NormSpec: alpha must lie in (0,1]");
                break;
            default:
                break;
        }
    }

    /// Sufficient condition for M^{1+sigma,alpha}_{p,q} to embed in C^1:
    /// sigma > 2 (1-alpha)(1-1/q).
    bool embeds_in_c1() const {
        double qq = std::isinf(q) ? 0.0 : 1.0 / q;
        return sigma > 2.0 * (1.0 - alpha) * (1.0 - qq);
    }
};

/// Lp norm with grid weights; p = inf is the sample maximum.
inline double lp_norm(const Field2D& f, double p) {
    if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.max_abs();
    double h2 = f.grid().spacing * f.grid().spacing;
    KahanSum s;
    if (p == 2.0) {
        for (double v : f.samples()) s.add(v * v);
    } else {
        for (double v : f.samples()) s.add(std::pow(std::abs(v), p));
    }
    return std::pow(s.value() * h2, 1.0 / p);
}

/// W^{1,r}: ||f||_r + ||d1 f||_r + ||d2 f||_r with spectral derivatives.
inline double w1r_norm(const Field2D& f, double r) {
    if (!(r > 1.0)) throw ParameterError("w1r_norm: r must be > 1");
    return lp_norm(f, r) + lp_norm(spectral::spectral_derivative(f, 1), r) +
           lp_norm(spectral::spectral_derivative(f, 2), r);
}

namespace detail {

/// Hoelder-sigma seminorm lower estimate: exact pair maximization inside a
/// square window of the given cell radius around every point, plus a seeded
/// global random pair sample. Distances are plain Euclidean.
inline double holder_seminorm_grid(std::span<const double> v, const GridSpec& g, double sigma,
                                   int window, int stride) {
    const int n = g.resolution / stride;
    const double h = g.spacing * stride;
    auto at = [&](int i, int j) { return v[Field2D::idx(g.resolution, i * stride, j * stride)]; };

    std::vector<double> best_per_offset;
    std::vector<std::pair<int, int>> offsets;
    for (int di = 0; di <= window; ++di)
        for (int dj = (di == 0 ? 1 : -window); dj <= window; ++dj) {
            if (std::hypot(double(di), double(dj)) > window + 1e-9) continue;
            offsets.emplace_back(di, dj);
        }
    best_per_offset.assign(offsets.size(), 0.0);

    parallel_for(offsets.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t o = lo; o < hi; ++o) {
            auto [di, dj] = offsets[o];
            double invd = 1.0 / std::pow(h * std::hypot(double(di), double(dj)), sigma);
            double worst = 0.0;
            int i0 = std::max(0, -di), i1 = n - std::max(0, di);
            int j0 = std::max(0, -dj), j1 = n - std::max(0, dj);
            for (int i = i0; i < i1; ++i)
                for (int j = j0; j < j1; ++j)
                    worst = std::max(worst, std::abs(at(i, j) - at(i + di, j + dj)));
            best_per_offset[o] = worst * invd;
        }
    });
    double best = 0.0;
    for (double b : best_per_offset) best = std::max(best, b);

    // global sample pairs, deterministic seed
    std::mt19937_64 rng(0x484F4C44u);
    for (int t = 0; t < 100000; ++t) {
        int i = static_cast<int>(uniform01(rng) * n), j = static_cast<int>(uniform01(rng) * n);
        int k = static_cast<int>(uniform01(rng) * n), l = static_cast<int>(uniform01(rng) * n);
        if (i == k && j == l) continue;
        double d = h * std::hypot(double(i - k), double(j - l));
        best = std::max(best, std::abs(at(i, j) - at(k, l)) / std::pow(d, sigma));
    }
    return best;
}

}  // namespace detail

struct HolderResult {
    double value = 0.0;
    /// full-grid estimate over half-grid estimate; near 1 when converged
    double refinement_ratio = 1.0;
};

/// C^sigma (order 0) or C^{1+sigma} (order 1) norm lower estimate. Order 1
/// adds the sup norms of the spectral gradient and the Hoelder seminorms of
/// its components.
inline HolderResult holder_norm_detailed(const Field2D& f, double sigma, int order,
                                         int window = 64) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw ParameterError("holder_norm: sigma not in (0,1)");
    if (order != 0 && order != 1) throw ParameterError("holder_norm: order must be 0 or 1");
    const GridSpec& g = f.grid();
    auto semi_both = [&](const Field2D& u, double& fine, double& coarse) {
        fine = detail::holder_seminorm_grid(u.samples(), g, sigma, window, 1);
        coarse = detail::holder_seminorm_grid(u.samples(), g, sigma, window, 2);
    };
    HolderResult res;
    if (order == 0) {
        double fine, coarse;
        semi_both(f, fine, coarse);
        res.value = f.max_abs() + fine;
        res.refinement_ratio = coarse > 0 ? fine / coarse : 1.0;
        return res;
    }
    Field2D d1 = spectral::spectral_derivative(f, 1);
    Field2D d2 = spectral::spectral_derivative(f, 2);
    double f1, c1, f2, c2;
    semi_both(d1, f1, c1);
    semi_both(d2, f2, c2);
    res.value = f.max_abs() + d1.max_abs() + d2.max_abs() + f1 + f2;
    double fine = f1 + f2, coarse = c1 + c2;
    res.refinement_ratio = coarse > 0 ? fine / coarse : 1.0;
    return res;
}

inline double holder_norm(const Field2D& f, double sigma, int order, int window = 64) {
    return holder_norm_detailed(f, sigma, order, window).value;
}

// ---------------------------------------------------------------------------
// Littlewood-Paley family for the Besov norm. S_j(r) falls smoothly from 1 to
// 0 as r crosses [2^j, 2^{j+1}]; psi_j = S_{j+1} - S_j is supported on the
// shell [2^j, 2^{j+2}] and the family telescopes to an exact partition.
// ---------------------------------------------------------------------------

inline double lp_cutoff_profile(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double c = std::cos(1.57079632679489661923 * t);
    return c * c;
}

inline double besov_window(int j, double r) {
    auto S = [](int lvl, double rr) {
        if (rr <= 0.0) return 1.0;
        return lp_cutoff_profile(std::log2(rr) - lvl);
    };
    if (j < 0) return S(0, r);
    return S(j + 1, r) - S(j, r);
}

/// (sum_j (w_j ||Delta_j f||_p)^q)^{1/q} with w_{-1} = 1 and w_j = 2^{(j+1)s}
/// (the shell peak frequency), max over j when q = inf.
inline double besov_norm(const Field2D& f, double s, double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("besov_norm: p,q must be >= 1");
    const GridSpec& g = f.grid();
    const int n = g.resolution;
    int jmax = static_cast<int>(std::ceil(std::log2(g.nyquist() * 1.4142135623730951))) + 1;
    auto spec = f.spectrum();

    KahanSum acc;
    double worst = 0.0;
    for (int j = -1; j <= jmax; ++j) {
        std::vector<Complex> piece(spec.size(), Complex{0, 0});
        bool any = false;
        for (int i = 0; i < n; ++i) {
            double xi1 = g.freq(i);
            for (int jj = 0; jj < n; ++jj) {
                std::size_t k = Field2D::idx(n, i, jj);
                if (spec[k] == Complex{0, 0}) continue;
                double w = besov_window(j, std::hypot(xi1, g.freq(jj)));
                if (w != 0.0) {
                    piece[k] = w * spec[k];
                    any = true;
                }
            }
        }
        if (!any) continue;
        double term = lp_norm(Field2D::from_spectrum(g, std::move(piece)), p);
        double weight = j < 0 ? 1.0 : std::pow(2.0, (j + 1) * s);
        double wt = weight * term;
        if (std::isinf(q))
            worst = std::max(worst, wt);
        else
            acc.add(std::pow(wt, q));
    }
    return std::isinf(q) ? worst : std::pow(acc.value(), 1.0 / q);
}

/// alpha-modulation norm: weighted l^q sum over covering patches of the Lp
/// norms of the frequency-localized pieces Finv[psi_Q fhat].
inline double alpha_mod_norm(const Field2D& f, const NormSpec& spec, const Bapu& bapu) {
    if (spec.space != NormSpec::Space::AlphaMod)
        throw ParameterError("alpha_mod_norm: spec.space must be AlphaMod");
    spec.validate();
    const AlphaCovering& cov = bapu.covering;
    const GridSpec& g = f.grid();
    if (!(g == cov.grid))
        throw ParameterError("alpha_mod_norm: field and covering live on different grids");

    auto coeffs = f.spectrum();
    const int n = g.resolution;

    // spectral tail outside the covered footprints must be negligible
    {
        KahanSum tail, total;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::size_t k = Field2D::idx(n, i, j);
                double m = std::norm(coeffs[k]);
                total.add(m);
                if (cov.cover_count[k] == 0) tail.add(m);
            }
        if (total.value() > 0.0 && std::sqrt(tail.value()) > 1e-8 * std::sqrt(total.value()))
            throw CoverageError("alpha_mod_norm: spectrum not covered by the bapu");
    }

    std::vector<double> terms(cov.patches.size(), 0.0);
    parallel_for(cov.patches.size(), [&](std::size_t lo, std::size_t hi) {
        std::vector<Complex> piece;
        for (std::size_t qi = lo; qi < hi; ++qi) {
            const Patch& patch = cov.patches[qi];
            bool any = false;
            for (std::uint32_t cell : patch.cells)
                if (coeffs[cell] != Complex{0, 0}) {
                    any = true;
                    break;
                }
            if (!any) continue;  // exact zero term
            piece.assign(coeffs.size(), Complex{0, 0});
            const auto& psi = bapu.psi[qi];
            for (std::size_t k = 0; k < patch.cells.size(); ++k)
                piece[patch.cells[k]] = psi[k] * coeffs[patch.cells[k]];
            double term = lp_norm(Field2D::from_spectrum(g, piece), spec.p);
            double xq2 = patch.xi_q[0] * patch.xi_q[0] + patch.xi_q[1] * patch.xi_q[1];
            terms[qi] = std::pow(1.0 + xq2, 0.5 * spec.s) * term;
        }
    });

    if (std::isinf(spec.q)) {
        double worst = 0.0;
        for (double t : terms) worst = std::max(worst, t);
        return worst;
    }
    KahanSum acc;
    for (double t : terms)
        if (t != 0.0) acc.add(std::pow(t, spec.q));
    return std::pow(acc.value(), 1.0 / spec.q);
}

}  // namespace illposed::funcspace
