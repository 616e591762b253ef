#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "illposed/field.hpp"

#include <nlohmann/json.hpp>

namespace illposed::funcspace {

using spectral::Field2D;
using spectral::GridSpec;

inline constexpr double kTwoPi = 6.28318530717958647692;

/// One frequency patch of an alpha-covering: a disc, a full annulus, or an
/// annular sector, stored with both its core (tiling) bounds and the inflated
/// bounds that create the overlap.
struct Patch {
    enum class Kind { Ball, Annulus, Sector };
    Kind kind = Kind::Ball;
    double r_lo = 0.0, r_hi = 0.0;        // inflated radial bounds
    double th_lo = 0.0, th_wd = kTwoPi;   // inflated angular origin/width
    double core_r_lo = 0.0, core_r_hi = 0.0;
    double xi_q[2] = {0.0, 0.0};          // representative frequency in Q
    double area = 0.0;                    // geometric area of Q (inflated)
    double inradius = 0.0;
    double circumradius = 0.0;
    std::vector<std::uint32_t> cells;     // lattice footprint, linear indices

    bool contains(double r, double th) const {
        if (r < r_lo || r > r_hi) return false;
        if (th_wd >= kTwoPi) return true;
        double d = std::fmod(th - th_lo, kTwoPi);
        if (d < 0) d += kTwoPi;
        return d <= th_wd;
    }
};

struct CoveringOptions {
    double radius_step = 0.5;   // c in r_{m+1} = r_m + c (1+r_m^2)^{alpha/2}
    double inflate = 1.25;      // patch widening factor for overlap
    double angular_offset = 0.0;  // sector stagger, used by the variant covering
};

/// Frequency patches {Q, xi_Q} covering the disc |xi| <= xi_max on the grid's
/// frequency lattice, with the size law |Q| ~ (1+|xi_Q|^2)^alpha.
struct AlphaCovering {
    double alpha = 1.0;
    double xi_max = 0.0;
    GridSpec grid;
    CoveringOptions options;
    int overlap_cap = 16;      // n0
    double ecc_cap = 8.0;      // K
    double area_c1 = 0.0, area_c2 = 0.0;  // recorded size-law constants
    int max_overlap = 0;
    std::vector<Patch> patches;
    std::vector<std::uint8_t> cover_count;  // per lattice cell

    std::size_t footprint_cells() const {
        std::size_t n = 0;
        for (const auto& p : patches) n += p.cells.size();
        return n;
    }
};

namespace detail {

inline double sector_centroid_radius(double r1, double r2) {
    double num = r2 * r2 * r2 - r1 * r1 * r1;
    double den = r2 * r2 - r1 * r1;
    return den > 0 ? (2.0 / 3.0) * num / den : 0.5 * (r1 + r2);
}

inline void finish_ring_patch(Patch& p) {
    double rc = 0.5 * (p.r_lo + p.r_hi);
    double dr = p.r_hi - p.r_lo;
    if (p.kind == Patch::Kind::Ball) {
        p.area = 3.14159265358979323846 * p.r_hi * p.r_hi;
        p.inradius = p.r_hi;
        p.circumradius = p.r_hi;
        p.xi_q[0] = p.xi_q[1] = 0.0;
        return;
    }
    if (p.kind == Patch::Kind::Annulus) {
        p.area = 3.14159265358979323846 * (p.r_hi * p.r_hi - p.r_lo * p.r_lo);
        p.inradius = 0.5 * dr;
        p.circumradius = p.r_hi;
        p.xi_q[0] = sector_centroid_radius(p.core_r_lo, p.core_r_hi);
        p.xi_q[1] = 0.0;
        return;
    }
    p.area = 0.5 * p.th_wd * (p.r_hi * p.r_hi - p.r_lo * p.r_lo);
    double half = 0.5 * std::min(p.th_wd, 3.14159265358979323846);
    p.inradius = 0.5 * std::min(dr, 2.0 * p.r_lo * std::sin(half));
    // circumradius about the patch midpoint; corners dominate the arcs
    double mid_th = p.th_lo + 0.5 * p.th_wd;
    double cx = rc * std::cos(mid_th), cy = rc * std::sin(mid_th);
    double worst = 0.0;
    for (double r : {p.r_lo, p.r_hi}) {
        for (double t : {p.th_lo, p.th_lo + p.th_wd}) {
            double dx = r * std::cos(t) - cx, dy = r * std::sin(t) - cy;
            worst = std::max(worst, std::hypot(dx, dy));
        }
    }
    p.circumradius = worst;
    double rq = sector_centroid_radius(p.core_r_lo, p.core_r_hi);
    double tq = p.th_lo + 0.5 * p.th_wd;
    p.xi_q[0] = rq * std::cos(tq);
    p.xi_q[1] = rq * std::sin(tq);
}

}  // namespace detail

/// Build the polar alpha-covering: a center disc plus annular rings with
/// radii r_{m+1} = r_m + c (1+r_m^2)^{alpha/2}; for alpha < 1 each ring is
/// split into ceil(2 pi r_m / (1+r_m^2)^{alpha/2}) sectors, and at alpha = 1
/// the rings degenerate to dyadic annuli. All patches are inflated for
/// overlap, and lattice footprints are attached.
inline AlphaCovering build_alpha_covering(double alpha, double xi_max, const GridSpec& grid,
                                          const CoveringOptions& opt = {}) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ParameterError("build_alpha_covering: alpha must be in (0,1]");
    if (!(xi_max > 2.0)) throw ParameterError("build_alpha_covering: xi_max too small");
    if (xi_max > grid.nyquist() * (1.0 + 1e-12))
        throw ParameterError("build_alpha_covering: xi_max exceeds the grid Nyquist frequency");

    AlphaCovering cov;
    cov.alpha = alpha;
    cov.xi_max = xi_max;
    cov.grid = grid;
    cov.options = opt;

    const double widen = 0.5 * (opt.inflate - 1.0);

    // ring boundaries; ring 0 is the center ball [0, 1]
    std::vector<double> edges{1.0};
    if (alpha >= 1.0) {
        double r = 1.0;
        while (r < xi_max) {
            r *= 2.0;
            edges.push_back(r);
        }
    } else {
        double r = 1.0;
        while (r < xi_max) {
            r += opt.radius_step * std::pow(1.0 + r * r, 0.5 * alpha);
            edges.push_back(r);
        }
    }

    struct Ring {
        double r_lo, r_hi;      // inflated
        double core_lo, core_hi;
        int sectors;            // 0 = full annulus / ball
        double th0, dth;
        std::size_t first_patch;
    };
    std::vector<Ring> rings;

    {   // center ball
        Patch ball;
        ball.kind = Patch::Kind::Ball;
        ball.core_r_lo = 0.0;
        ball.core_r_hi = 1.0;
        ball.r_lo = 0.0;
        ball.r_hi = 1.0 + 2.0 * widen;
        detail::finish_ring_patch(ball);
        rings.push_back(Ring{0.0, ball.r_hi, 0.0, 1.0, 0, 0.0, kTwoPi, 0});
        cov.patches.push_back(std::move(ball));
    }

    for (std::size_t m = 0; m + 1 < edges.size(); ++m) {
        double lo = edges[m], hi = edges[m + 1];
        double w = (hi - lo) * widen;
        Ring ring;
        ring.core_lo = lo;
        ring.core_hi = hi;
        ring.r_lo = std::max(lo - w, 0.0);
        ring.r_hi = hi + w;
        ring.first_patch = cov.patches.size();
        if (alpha >= 1.0) {
            ring.sectors = 0;
            ring.th0 = 0.0;
            ring.dth = kTwoPi;
            Patch p;
            p.kind = Patch::Kind::Annulus;
            p.core_r_lo = lo;
            p.core_r_hi = hi;
            p.r_lo = ring.r_lo;
            p.r_hi = ring.r_hi;
            detail::finish_ring_patch(p);
            cov.patches.push_back(std::move(p));
        } else {
            int s = static_cast<int>(std::ceil(kTwoPi * lo / std::pow(1.0 + lo * lo, 0.5 * alpha)));
            s = std::max(s, 4);
            ring.sectors = s;
            ring.dth = kTwoPi / s;
            ring.th0 = opt.angular_offset * ring.dth;
            double wt = ring.dth * widen;
            for (int k = 0; k < s; ++k) {
                Patch p;
                p.kind = Patch::Kind::Sector;
                p.core_r_lo = lo;
                p.core_r_hi = hi;
                p.r_lo = ring.r_lo;
                p.r_hi = ring.r_hi;
                p.th_lo = ring.th0 + k * ring.dth - wt;
                p.th_wd = ring.dth + 2.0 * wt;
                detail::finish_ring_patch(p);
                cov.patches.push_back(std::move(p));
            }
        }
        rings.push_back(ring);
    }

    // lattice footprints
    const int n = grid.resolution;
    cov.cover_count.assign(grid.cells(), 0);
    const double outermost = rings.back().r_hi;
    for (int i = 0; i < n; ++i) {
        double xi1 = grid.freq(i);
        if (std::abs(xi1) > outermost) continue;
        for (int j = 0; j < n; ++j) {
            double xi2 = grid.freq(j);
            double r = std::hypot(xi1, xi2);
            if (r > outermost) continue;
            double th = std::atan2(xi2, xi1);
            if (th < 0) th += kTwoPi;
            std::uint32_t cell = static_cast<std::uint32_t>(Field2D::idx(n, i, j));
            int hits = 0;
            for (const Ring& ring : rings) {
                if (r < ring.r_lo || r > ring.r_hi) continue;
                if (ring.sectors == 0) {
                    cov.patches[ring.first_patch].cells.push_back(cell);
                    ++hits;
                    continue;
                }
                int base = static_cast<int>(std::floor((th - ring.th0) / ring.dth));
                for (int dk = -1; dk <= 1; ++dk) {
                    int k = ((base + dk) % ring.sectors + ring.sectors) % ring.sectors;
                    Patch& p = cov.patches[ring.first_patch + k];
                    if (p.contains(r, th)) {
                        p.cells.push_back(cell);
                        ++hits;
                    }
                }
            }
            if (r <= xi_max && hits > 255) hits = 255;
            if (r <= outermost)
                cov.cover_count[cell] = static_cast<std::uint8_t>(std::min(hits, 255));
        }
    }

    // recorded size-law constants and the measured overlap
    double c1 = 1e300, c2 = 0.0;
    for (const Patch& p : cov.patches) {
        double xq2 = p.xi_q[0] * p.xi_q[0] + p.xi_q[1] * p.xi_q[1];
        double ratio = p.area / std::pow(1.0 + xq2, alpha);
        c1 = std::min(c1, ratio);
        c2 = std::max(c2, ratio);
    }
    cov.area_c1 = c1;
    cov.area_c2 = c2;
    int worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double r = std::hypot(grid.freq(i), grid.freq(j));
            if (r <= xi_max)
                worst = std::max(worst, static_cast<int>(cov.cover_count[Field2D::idx(n, i, j)]));
        }
    cov.max_overlap = worst;
    return cov;
}

struct CoveringAudit {
    bool coverage = false;
    bool overlap = false;
    bool size_law = false;
    bool eccentricity = false;
    int max_overlap = 0;
    double worst_eccentricity = 0.0;
    double area_c1 = 0.0, area_c2 = 0.0;
    std::size_t uncovered = 0;
    bool pass() const { return coverage && overlap && size_law && eccentricity; }
};

/// Exhaustive check of the four covering invariants on the lattice.
inline CoveringAudit audit_covering(const AlphaCovering& cov) {
    CoveringAudit a;
    const GridSpec& g = cov.grid;
    const int n = g.resolution;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double r = std::hypot(g.freq(i), g.freq(j));
            if (r > cov.xi_max) continue;
            if (cov.cover_count[Field2D::idx(n, i, j)] == 0) ++a.uncovered;
        }
    a.coverage = a.uncovered == 0;
    a.max_overlap = cov.max_overlap;
    a.overlap = cov.max_overlap <= cov.overlap_cap && cov.max_overlap >= 1;
    for (const Patch& p : cov.patches)
        a.worst_eccentricity =
            std::max(a.worst_eccentricity, p.circumradius / std::max(p.inradius, 1e-300));
    a.eccentricity = a.worst_eccentricity <= cov.ecc_cap;
    a.area_c1 = cov.area_c1;
    a.area_c2 = cov.area_c2;
    a.size_law = cov.area_c1 > 0.0 && cov.area_c2 / cov.area_c1 <= 16.0;
    return a;
}

inline nlohmann::json covering_to_json(const AlphaCovering& cov) {
    nlohmann::json j;
    j["alpha"] = cov.alpha;
    j["xi_max"] = cov.xi_max;
    j["grid"] = {{"half_width", cov.grid.half_width}, {"resolution", cov.grid.resolution}};
    j["area_constants"] = {cov.area_c1, cov.area_c2};
    j["max_overlap"] = cov.max_overlap;
    j["patch_count"] = cov.patches.size();
    nlohmann::json list = nlohmann::json::array();
    for (const Patch& p : cov.patches) {
        nlohmann::json e;
        e["kind"] = p.kind == Patch::Kind::Ball     ? "ball"
                    : p.kind == Patch::Kind::Annulus ? "annulus"
                                                     : "sector";
        e["center"] = {p.xi_q[0], p.xi_q[1]};
        e["r"] = {p.r_lo, p.r_hi};
        if (p.kind == Patch::Kind::Sector) e["theta"] = {p.th_lo, p.th_lo + p.th_wd};
        e["area"] = p.area;
        e["footprint_cells"] = p.cells.size();
        if (!p.cells.empty())
            e["footprint_range"] = {*std::min_element(p.cells.begin(), p.cells.end()),
                                    *std::max_element(p.cells.begin(), p.cells.end())};
        list.push_back(std::move(e));
    }
    j["patches"] = std::move(list);
    return j;
}

}  // namespace illposed::funcspace
