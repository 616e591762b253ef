/// Function-space tests: Lp/Sobolev/Hoelder/Besov/alpha-modulation norms,
/// alpha-coverings and their partitions of unity. Equivalence constants
/// marked "recorded" were measured once on the seeded suites below and are
/// pinned as regression bounds.

#include <catch2/catch_amalgamated.hpp>

#include "illposed/initdata.hpp"
#include "illposed/norms.hpp"
#include "oracles.hpp"

using namespace illposed;
using namespace illposed::funcspace;
using namespace illposed::spectral;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("lp_norm basics and quadrature oracle") {
    GridSpec g = make_grid(kPi, 64);

    SECTION("constant on [-pi,pi)^2, p=2 -> 2 pi") {
        Field2D one = Field2D::sampled(g, [](double, double) { return 1.0; });
        CHECK(lp_norm(one, 2.0) == Catch::Approx(2.0 * kPi).epsilon(1e-12));
    }
    SECTION("sup norm of sin") {
        Field2D f = Field2D::sampled(g, [](double x, double) { return std::sin(x); });
        CHECK(lp_norm(f, kInf) == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("p < 1 rejected") {
        CHECK_THROWS_AS(lp_norm(Field2D::zero(g), 0.5), ParameterError);
    }
    SECTION("quadrupole L2 matches adaptive quadrature of the closed form") {
        GridSpec fine = make_grid(2.0, 512);
        Field2D phi0 = initdata::quadrupole(0, 2.5, fine);
        double grid_val = lp_norm(phi0, 2.0);
        // four disjoint bumps; radial closed form integrates one of them
        double s = 0.25;
        double integral = oracles::adaptive_simpson(
            [s](double r) {
                double t = (r / s) * (r / s);
                double b = t >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - t));
                return b * b * 2.0 * kPi * r;
            },
            0.0, s, 1e-12);
        double oracle = std::sqrt(4.0 * integral);
        CHECK(grid_val == Catch::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("w1r_norm") {
    GridSpec g = make_grid(kPi, 64);
    CHECK(w1r_norm(Field2D::zero(g), 2.5) == 0.0);
    Field2D f = Field2D::sampled(g, [](double x, double) { return std::sin(x); });
    // ||sin||_2 = ||cos||_2 = sqrt(2) pi on this torus
    CHECK(w1r_norm(f, 2.0) == Catch::Approx(2.0 * std::sqrt(2.0) * kPi).epsilon(1e-10));
}

TEST_CASE("holder_norm") {
    GridSpec g = make_grid(1.0, 256);

    SECTION("constants have zero seminorm") {
        Field2D f = Field2D::sampled(g, [](double, double) { return -2.25; });
        CHECK(holder_norm(f, 0.5, 0) == Catch::Approx(2.25).margin(1e-12));
    }
    SECTION("sqrt cusp has seminorm 1 and matches the 1D brute-force oracle") {
        // plateau-localized cusp: sqrt growth capped at |x1| = 1/4, so the
        // quotient is maximized by pairs against the origin
        auto cusp = [](double x, double) { return std::sqrt(std::min(std::abs(x), 0.25)); };
        Field2D f = Field2D::sampled(g, cusp);
        HolderResult res = holder_norm_detailed(f, 0.5, 0);
        double semi = res.value - f.max_abs();
        double oracle = oracles::holder_seminorm_1d(
            [&](double x) { return cusp(x, 0.0); }, -0.5, 0.5, 0.5, 4000);
        CHECK(semi == Catch::Approx(oracle).epsilon(2e-2));
        CHECK(semi == Catch::Approx(1.0).epsilon(2e-2));
        CHECK(res.refinement_ratio == Catch::Approx(1.0).epsilon(0.1));
    }
    SECTION("difference of identical fields is zero") {
        Field2D f = oracles::random_band_limited(g, 3, 0.0, 40.0);
        Field2D d = linear_combination(1.0, f, -1.0, f);
        CHECK(holder_norm(d, 0.5, 1) == 0.0);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(holder_norm(Field2D::zero(g), 1.5, 0), ParameterError);
        CHECK_THROWS_AS(holder_norm(Field2D::zero(g), 0.5, 2), ParameterError);
    }
}

TEST_CASE("besov_norm") {
    GridSpec g = make_grid(kPi, 256);

    SECTION("single-shell field sits at the shell weight") {
        for (int m : {3, 5}) {
            double target = std::pow(2.0, m);
            Field2D f = oracles::random_band_limited(g, 7, target - 0.5, target + 0.5);
            double s = 1.3;
            double b = besov_norm(f, s, 2.0, 2.0);
            double ref = std::pow(2.0, m * s) * lp_norm(f, 2.0);
            CHECK(b >= 0.5 * ref);
            CHECK(b <= 2.0 * ref);
        }
    }
    SECTION("s=0, p=q=2 equals L2 within the window family's recorded bounds") {
        // sum_j psi_j(xi)^2 over the lattice bounds the Parseval ratio exactly
        double lo = 1.0, hi = 0.0;
        for (double r = 0.0; r <= g.nyquist() * 1.5; r += 0.01) {
            double s2 = 0.0;
            for (int j = -1; j <= 12; ++j) {
                double w = besov_window(j, r);
                s2 += w * w;
            }
            lo = std::min(lo, s2);
            hi = std::max(hi, s2);
        }
        Field2D f = oracles::random_band_limited(g, 11, 0.0, 100.0);
        double ratio = besov_norm(f, 0.0, 2.0, 2.0) / lp_norm(f, 2.0);
        CHECK(ratio * ratio >= lo - 1e-9);
        CHECK(ratio * ratio <= hi + 1e-9);
    }
}

TEST_CASE("alpha covering construction and audit") {
    GridSpec g = make_grid(kPi, 256);  // Nyquist 128

    SECTION("alpha = 1 reduces to dyadic annuli") {
        AlphaCovering cov = build_alpha_covering(1.0, 128.0, g);
        // ball + log2(128) shells
        CHECK(cov.patches.size() == 8);
        CHECK(audit_covering(cov).pass());
        for (const Patch& p : cov.patches)
            CHECK((p.kind == Patch::Kind::Ball || p.kind == Patch::Kind::Annulus));
    }
    SECTION("alpha = 0.5 satisfies every invariant at xi_max = 128") {
        AlphaCovering cov = build_alpha_covering(0.5, 128.0, g);
        CoveringAudit a = audit_covering(cov);
        INFO("overlap " << a.max_overlap << " ecc " << a.worst_eccentricity << " area ["
                        << a.area_c1 << "," << a.area_c2 << "]");
        CHECK(a.coverage);
        CHECK(a.overlap);
        CHECK(a.max_overlap <= 16);
        CHECK(a.size_law);
        CHECK(a.eccentricity);
        CHECK(a.worst_eccentricity <= 8.0);
    }
    SECTION("union of footprints covers the whole disc for several alphas") {
        for (double alpha : {0.3, 0.8, 1.0}) {
            AlphaCovering cov = build_alpha_covering(alpha, 100.0, g);
            CHECK(audit_covering(cov).uncovered == 0);
        }
    }
    SECTION("xi_max beyond Nyquist rejected") {
        CHECK_THROWS_AS(build_alpha_covering(0.5, 200.0, g), ParameterError);
    }
    SECTION("json export carries the audit surface") {
        AlphaCovering cov = build_alpha_covering(0.8, 64.0, g);
        auto j = covering_to_json(cov);
        CHECK(j["patch_count"].get<std::size_t>() == cov.patches.size());
        CHECK(j["patches"].size() == cov.patches.size());
    }
}

TEST_CASE("bapu construction") {
    GridSpec g = make_grid(kPi, 256);

    SECTION("partition of unity holds to 1e-10 on the covered disc") {
        for (double alpha : {0.5, 1.0}) {
            Bapu b = build_bapu(build_alpha_covering(alpha, 96.0, g), 2.0);
            CHECK(b.partition_max_err <= 1e-10);
            BapuAudit a = audit_bapu(b, 1e4);
            CHECK(a.support);
            CHECK(a.partition);
        }
    }
    SECTION("kernel bound is stable under lattice refinement") {
        Bapu b1 = build_bapu(build_alpha_covering(0.5, 64.0, make_grid(kPi, 128)), 2.0);
        Bapu b2 = build_bapu(build_alpha_covering(0.5, 64.0, make_grid(2.0 * kPi, 256)), 2.0);
        CHECK(b2.kernel_bound == Catch::Approx(b1.kernel_bound).epsilon(0.2));
    }
}

TEST_CASE("alpha_mod_norm") {
    GridSpec g = make_grid(kPi, 256);
    NormSpec spec;
    spec.space = NormSpec::Space::AlphaMod;
    spec.s = 1.5;
    spec.p = 2.0;
    spec.q = 2.0;

    SECTION("field inside a single patch sits at that patch's weight") {
        spec.alpha = 0.5;
        Bapu b = build_bapu(build_alpha_covering(0.5, 96.0, g), spec.p);
        // pick a mid-frequency sector and excite only its core cells
        const AlphaCovering& cov = b.covering;
        std::size_t pick = 0;
        for (std::size_t q = 0; q < cov.patches.size(); ++q) {
            double rq = std::hypot(cov.patches[q].xi_q[0], cov.patches[q].xi_q[1]);
            if (cov.patches[q].kind == Patch::Kind::Sector && rq > 20 && rq < 30) {
                pick = q;
                break;
            }
        }
        const Patch& patch = cov.patches[pick];
        const int n = g.resolution;
        std::vector<Complex> c(g.cells(), Complex{0, 0});
        for (std::uint32_t cell : patch.cells) {
            int i = static_cast<int>(cell / n), j = static_cast<int>(cell % n);
            double r = std::hypot(g.freq(i), g.freq(j));
            if (r >= patch.core_r_lo && r <= patch.core_r_hi) c[cell] = Complex{1.0, 0.0};
        }
        // symmetrize to keep the field real
        std::vector<Complex> sym(c.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                sym[Field2D::idx(n, i, j)] =
                    0.5 * (c[Field2D::idx(n, i, j)] +
                           std::conj(c[Field2D::idx(n, (n - i) % n, (n - j) % n)]));
        Field2D f = Field2D::from_spectrum(g, std::move(sym));
        double xq2 = patch.xi_q[0] * patch.xi_q[0] + patch.xi_q[1] * patch.xi_q[1];
        double ref = std::pow(1.0 + xq2, 0.5 * spec.s) * lp_norm(f, spec.p);
        double got = alpha_mod_norm(f, spec, b);
        CHECK(got >= 0.5 * ref);
        CHECK(got <= 2.0 * ref);
    }

    SECTION("spectrum outside the covering raises a coverage error") {
        spec.alpha = 0.5;
        Bapu b = build_bapu(build_alpha_covering(0.5, 32.0, g), spec.p);
        Field2D f = oracles::random_band_limited(g, 5, 50.0, 60.0);
        CHECK_THROWS_AS(alpha_mod_norm(f, spec, b), CoverageError);
    }
}

TEST_CASE("norm properties on the seeded random suite") {
    GridSpec g = make_grid(kPi, 128);
    Field2D f = oracles::random_band_limited(g, 101, 0.0, 24.0);
    Field2D h = oracles::random_band_limited(g, 102, 0.0, 24.0);
    NormSpec ms;
    ms.space = NormSpec::Space::AlphaMod;
    ms.s = 1.5;
    ms.alpha = 0.6;
    ms.p = 2.0;
    ms.q = 1.0;
    Bapu bp = build_bapu(build_alpha_covering(0.6, 48.0, g), ms.p);

    SECTION("absolute 1-homogeneity") {
        const double c = -3.7;
        Field2D cf = scale(f, c);
        CHECK(lp_norm(cf, 3.0) == Catch::Approx(std::abs(c) * lp_norm(f, 3.0)).epsilon(1e-10));
        CHECK(w1r_norm(cf, 2.5) == Catch::Approx(std::abs(c) * w1r_norm(f, 2.5)).epsilon(1e-10));
        CHECK(besov_norm(cf, 1.2, 2, 2) ==
              Catch::Approx(std::abs(c) * besov_norm(f, 1.2, 2, 2)).epsilon(1e-10));
        CHECK(alpha_mod_norm(cf, ms, bp) ==
              Catch::Approx(std::abs(c) * alpha_mod_norm(f, ms, bp)).epsilon(1e-10));
        CHECK(holder_norm(cf, 0.5, 0, 16) ==
              Catch::Approx(std::abs(c) * holder_norm(f, 0.5, 0, 16)).epsilon(1e-10));
    }
    SECTION("triangle inequality") {
        Field2D sum = linear_combination(1.0, f, 1.0, h);
        double slack = 1e-9;
        CHECK(lp_norm(sum, 3.0) <= (lp_norm(f, 3.0) + lp_norm(h, 3.0)) * (1 + slack));
        CHECK(w1r_norm(sum, 2.5) <= (w1r_norm(f, 2.5) + w1r_norm(h, 2.5)) * (1 + slack));
        CHECK(besov_norm(sum, 1.2, 2, 2) <=
              (besov_norm(f, 1.2, 2, 2) + besov_norm(h, 1.2, 2, 2)) * (1 + slack));
        CHECK(alpha_mod_norm(sum, ms, bp) <=
              (alpha_mod_norm(f, ms, bp) + alpha_mod_norm(h, ms, bp)) * (1 + slack));
    }
}

TEST_CASE("besov and alpha-modulation agree at alpha = 1 within recorded constants") {
    GridSpec g = make_grid(kPi, 128);
    NormSpec ms;
    ms.space = NormSpec::Space::AlphaMod;
    ms.s = 1.5;
    ms.alpha = 1.0;
    ms.p = 2.0;
    ms.q = 2.0;
    Bapu bp = build_bapu(build_alpha_covering(1.0, 48.0, g), ms.p);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Field2D f = oracles::random_band_limited(g, seed, 0.0, 32.0);
        double ratio = alpha_mod_norm(f, ms, bp) / besov_norm(f, ms.s, ms.p, ms.q);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    INFO("ratio range [" << lo << ", " << hi << "]");
    // recorded from this frozen 25-field suite
    const double kRatioLo = 0.25, kRatioHi = 4.0;
    CHECK(lo >= kRatioLo);
    CHECK(hi <= kRatioHi);
}

TEST_CASE("embedding monotonicity across alpha at q = 1") {
    GridSpec g = make_grid(kPi, 128);
    NormSpec lospec, hispec;
    for (NormSpec* s : {&lospec, &hispec}) {
        s->space = NormSpec::Space::AlphaMod;
        s->s = 1.2;
        s->p = 2.0;
        s->q = 1.0;
    }
    lospec.alpha = 0.4;
    hispec.alpha = 0.8;
    Bapu blo = build_bapu(build_alpha_covering(0.4, 48.0, g), 2.0);
    Bapu bhi = build_bapu(build_alpha_covering(0.8, 48.0, g), 2.0);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Field2D f = oracles::random_band_limited(g, 1000 + seed, 0.0, 24.0);
        double a2 = alpha_mod_norm(f, hispec, bhi);
        double a1 = alpha_mod_norm(f, lospec, blo);
        worst = std::max(worst, a2 / a1);
    }
    INFO("embedding constant " << worst);
    // recorded from this frozen 50-field suite
    CHECK(worst <= 2.0);
}

TEST_CASE("holder and besov C^sigma cross-check") {
    GridSpec g = make_grid(kPi, 128);
    double lo = 1e300, hi = 0.0;
    for (std::uint64_t seed = 31; seed <= 40; ++seed) {
        Field2D f = oracles::random_band_limited(g, seed, 0.0, 20.0);
        double hn = holder_norm(f, 0.5, 0, 24);
        double bn = besov_norm(f, 0.5, kInf, kInf);
        double ratio = hn / bn;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    INFO("holder/besov ratio range [" << lo << ", " << hi << "]");
    // recorded equivalence interval for the frozen suite
    CHECK(lo >= 0.2);
    CHECK(hi <= 5.0);
}

TEST_CASE("NormSpec validation and the C1-embedding predicate") {
    NormSpec s;
    s.space = NormSpec::Space::Holder;
    s.sigma = 0.5;
    CHECK_NOTHROW(s.validate());
    s.sigma = 1.2;
    CHECK_THROWS_AS(s.validate(), ParameterError);

    NormSpec m;
    m.space = NormSpec::Space::AlphaMod;
    m.sigma = 0.9;
    m.alpha = 0.5;
    m.q = 1.0;  // (1 - 1/q) = 0: embeds for any sigma > 0
    CHECK(m.embeds_in_c1());
    m.q = kInf;
    m.sigma = 0.9;
    m.alpha = 0.5;  // needs sigma > 1
    CHECK_FALSE(m.embeds_in_c1());
}
