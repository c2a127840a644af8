#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qscat/cylinder2d.hpp"
#include "qscat/layer1d.hpp"

using namespace qscat;

namespace {

const cplx I(0.0, 1.0);
const CylinderConfig kCanon{2.25, 1.0, 2.0, 0}; // ka = 2, eps = 2.25

std::vector<cplx> gaussian_source(const PolarGrid& g) {
    std::vector<cplx> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.rho[i] * std::cos(g.phi[i]);
        const double y = g.rho[i] * std::sin(g.phi[i]);
        s[i] = std::exp(-(std::pow(x - 0.25, 2) + std::pow(y + 0.1, 2)) /
                        (2.0 * 0.12 * 0.12));
    }
    return s;
}

PolarGrid canon_grid(const CylinderConfig& cfg) {
    return make_polar_grid(cfg.radius, 48, std::max(64, 4 * cfg.mode_cutoff()));
}

} // namespace

TEST_CASE("green_free_2d: imaginary part, symmetry, Helmholtz residual") {
    const PolarPoint p{0.4, 0.3}, q{0.8, 2.0};
    const double k = 2.0;
    const cplx g = green_free_2d(p, q, k);
    const double d = chord(p, q);
    CHECK(g.imag() ==
          doctest::Approx(-0.25 * specfun::bessel_j(0, {k * d, 0.0}).real())
              .epsilon(1e-14));
    CHECK(green_free_2d(q, p, k) == g);
    CHECK_THROWS_AS(green_free_2d(p, p, k), singularity_error);

    //5-point Laplacian in Cartesian coordinates away from the source
    const double h = 1e-3;
    auto gx = [&](double x, double y) {
        const PolarPoint pt{std::hypot(x, y), std::atan2(y, x)};
        return green_free_2d(pt, q, k);
    };
    const double x0 = 0.35, y0 = 0.1;
    const cplx lap = (gx(x0 + h, y0) + gx(x0 - h, y0) + gx(x0, y0 + h) +
                      gx(x0, y0 - h) - 4.0 * gx(x0, y0)) /
                     (h * h);
    const cplx res = lap + k * k * gx(x0, y0);
    CHECK(std::abs(res) / std::abs(k * k * gx(x0, y0)) < 1e-5);
}

TEST_CASE("wn vanishes in the no-contrast limit") {
    const CylinderConfig cfg{1.0 + 1e-10, 1.0, 3.0, 0};
    for (int n : {0, 1, 4}) CHECK(std::abs(wn(n, cfg)) < 1e-6);
}

TEST_CASE("wn reflection relation W_{-n}(x) = -W_n*(e^{i pi} x)") {
    const CylinderConfig cfg{2.25, 1.0, 3.0, 0};
    const cplx rot = cfg.k * std::exp(cplx(0.0, M_PI));
    for (int n : {0, 1, 2, 5}) {
        const cplx lhs = wn(-n, cfg);
        const cplx rhs = -std::conj(wn(n, cfg, rot));
        CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-8);
    }
}

TEST_CASE("wn decays along an upper-half-plane ray") {
    const CylinderConfig cfg{2.25, 1.0, 1.0, 64};
    double prev = 1e300;
    for (double mag : {20.0, 40.0, 80.0}) {
        const cplx k = mag * std::exp(cplx(0.0, M_PI / 4.0));
        const double w = std::abs(wn(2, cfg, k));
        CHECK(w < 1e-15);
        CHECK(w < prev * 1e-10); // super-exponential decay between samples
        prev = w;
    }
}

TEST_CASE("delta_g: no-contrast limit, symmetry, branch relation") {
    const PolarPoint p{0.4, 0.0}, q{0.6, M_PI / 3.0};
    SUBCASE("eps -> 1 limit") {
        const CylinderConfig cfg{1.0 + 1e-10, 1.0, 2.0, 0};
        CHECK(std::abs(delta_g(p, q, cfg)) < 1e-8);
    }
    SUBCASE("point-swap symmetry is exact") {
        CHECK(delta_g(p, q, kCanon) == delta_g(q, p, kCanon));
    }
    SUBCASE("two-branch relation dg*(k) = dg(e^{i pi} k)") {
        const cplx dg = delta_g(p, q, kCanon);
        const cplx rot = delta_g(p, q, kCanon, kCanon.k * std::exp(cplx(0.0, M_PI)));
        CHECK(std::abs(std::conj(dg) - rot) / std::abs(dg) < 1e-8);
    }
    SUBCASE("the lower branch side differs by the cut jump") {
        const cplx dg = delta_g(p, q, kCanon);
        const cplx low = delta_g(p, q, kCanon, kCanon.k * std::exp(cplx(0.0, -M_PI)));
        CHECK(std::abs(std::conj(dg) - low) > 0.1 * std::abs(dg));
    }
}

TEST_CASE("cylinder_resolvent: free-space reduction, symmetry, guard radius") {
    const PolarPoint p{0.4, 0.0}, q{0.6, M_PI / 3.0};
    SUBCASE("eps -> 1 reduces to the interior free kernel") {
        const CylinderConfig cfg{1.0 + 1e-10, 1.0, 2.0, 0};
        const double se = std::sqrt(cfg.epsilon);
        const cplx free =
            -0.25 * I * specfun::hankel1(0, cplx(cfg.k * se * chord(p, q), 0.0));
        CHECK(std::abs(cylinder_resolvent(p, q, cfg) - free) < 1e-8);
    }
    SUBCASE("symmetric in its points") {
        CHECK(cylinder_resolvent(p, q, kCanon) == cylinder_resolvent(q, p, kCanon));
    }
    SUBCASE("coincident and near-coincident points are rejected") {
        CHECK_THROWS_AS(cylinder_resolvent(p, p, kCanon), singularity_error);
        const PolarPoint close{p.rho + 1e-8, p.phi};
        CHECK_THROWS_AS(cylinder_resolvent(p, close, kCanon), singularity_error);
    }
}

TEST_CASE("mode_coefficients: orthogonality zeros and the zero source") {
    const PolarGrid grid = canon_grid(kCanon);
    SUBCASE("azimuthally symmetric source excites only n = 0") {
        std::vector<cplx> src(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            src[i] = std::exp(-4.0 * grid.rho[i] * grid.rho[i]);
        const ModeCoefficients mc = mode_coefficients(kCanon, grid, src);
        const double f0 = std::abs(mc.F(0));
        REQUIRE(f0 > 0.0);
        for (int n = -mc.cutoff; n <= mc.cutoff; ++n)
            if (n != 0) CHECK(std::abs(mc.F(n)) < 1e-13 * f0);
    }
    SUBCASE("zero source gives zero coefficients") {
        const std::vector<cplx> src(grid.size(), 0.0);
        const ModeCoefficients mc = mode_coefficients(kCanon, grid, src);
        for (int n = -mc.cutoff; n <= mc.cutoff; ++n) {
            CHECK(std::abs(mc.A(n)) == 0.0);
            CHECK(std::abs(mc.B(n)) == 0.0);
        }
    }
}

TEST_CASE("dual construction: mode route equals resolvent route") {
    const PolarGrid grid = canon_grid(kCanon);
    const std::vector<cplx> src = gaussian_source(grid);
    const ModeCoefficients mc = mode_coefficients(kCanon, grid, src);
    for (const PolarPoint p : {PolarPoint{0.3, 0.5}, PolarPoint{0.55, 2.0},
                               PolarPoint{0.1, 4.0}}) {
        const cplx um = field_from_modes(kCanon, mc, grid, src, p);
        const cplx ur = field_from_resolvent(kCanon, grid, src, p);
        CHECK(std::abs(um - ur) / std::abs(um) < 1e-6);
    }
}

TEST_CASE("boundary continuity residuals") {
    const PolarGrid grid = canon_grid(kCanon);
    SUBCASE("zero source") {
        const std::vector<cplx> src(grid.size(), 0.0);
        const auto [v, d] = boundary_continuity_residual(kCanon, grid, src);
        CHECK(v == 0.0);
        CHECK(d == 0.0);
    }
    SUBCASE("Gaussian source meets the 1e-8 target at the default cutoff") {
        const std::vector<cplx> src = gaussian_source(grid);
        const auto [v, d] = boundary_continuity_residual(kCanon, grid, src);
        CHECK(v < 1e-8);
        CHECK(d < 1e-8);
    }
    SUBCASE("residuals drop when the cutoff is raised by 8") {
        CylinderConfig lo = kCanon;
        lo.modes = lo.mode_cutoff() - 8; // still >= the invariant floor
        const PolarGrid glo = make_polar_grid(lo.radius, 48, std::max(64, 4 * lo.modes));
        const auto [v1, d1] = boundary_continuity_residual(lo, glo, gaussian_source(glo));
        CylinderConfig hi = kCanon;
        const PolarGrid ghi = canon_grid(hi);
        const auto [v2, d2] = boundary_continuity_residual(hi, ghi, gaussian_source(ghi));
        CHECK(v2 < v1);
        CHECK(d2 < d1);
    }
}

TEST_CASE("cylinder noise integral: limits and persistence") {
    const PolarPoint p{0.4, 0.0}, q{0.6, M_PI / 3.0};
    SUBCASE("no-contrast limit is numerically zero") {
        const CylinderConfig cfg{1.0 + 1e-12, 1.0, 2.0, 0};
        const NoiseTail t = cylinder_noise_integral(p, q, cfg, 100.0, 0.4);
        CHECK(std::abs(t.value) / t.reference < 1e-9);
    }
    SUBCASE("bounded away from zero while the layer analog dies") {
        // Frozen oracle ratios: cylinder 0.2324 (eta = 0.4) and 0.1622
        // (eta = 0.2); the layer's are already 1.6e-2 / 4.9e-3 there.
        double cyl_min = 1e300, layer_max = 0.0;
        const LayerConfig lcfg{2.25, 1.0, 2.0};
        const double frozen[] = {0.2324, 0.1622};
        const double etas[] = {0.4, 0.2};
        for (int i = 0; i < 2; ++i) {
            const double K = 40.0 / etas[i];
            const NoiseTail ct = cylinder_noise_integral(p, q, kCanon, K, etas[i]);
            const double ratio = std::abs(ct.value) / ct.reference;
            CHECK(ratio == doctest::Approx(frozen[i]).epsilon(0.05));
            cyl_min = std::min(cyl_min, ratio);
            const NoiseTail lt = layer_noise_integral(lcfg, 0.4, 0.6, K, etas[i]);
            layer_max = std::max(layer_max, std::abs(lt.value) / lt.reference);
        }
        CHECK(cyl_min > 1e-2);
        CHECK(layer_max < cyl_min / 5.0);
    }
}

TEST_CASE("addition theorem") {
    SUBCASE("coincident points recover the J_n^2 sum rule") {
        const PolarPoint p{2.0, 0.7};
        CHECK(addition_theorem_residual(1.0, p, p, 12) < 1e-12);
    }
    SUBCASE("k rho = 2, k rho' = 3, dphi = 1, N = 40") {
        CHECK(addition_theorem_residual(1.0, PolarPoint{2.0, 0.0}, PolarPoint{3.0, 1.0},
                                        40) < 1e-12);
    }
    SUBCASE("residual decays at least geometrically beyond the turning point") {
        const PolarPoint p{2.0, 0.0}, q{3.0, 1.0};
        double prev = addition_theorem_residual(1.0, p, q, 6);
        for (int N : {8, 10, 12, 14}) {
            const double r = addition_theorem_residual(1.0, p, q, N);
            CHECK(r < 0.5 * prev);
            prev = r;
            if (r < 1e-15) break;
        }
    }
}

TEST_CASE("free commutator delta identity (weak sense)") {
    SUBCASE("sigma = 0.1, K = 400") {
        const DeltaCheck dc = free_commutator_delta_check(0.1, 400.0);
        CHECK(dc.deviation < 1e-2);
        CHECK(std::abs(dc.total_weight - 1.0) < 1e-2);
    }
    SUBCASE("deviation shrinks as the cutoff grows") {
        // e^{-K^2 sigma^2 / 2} law: 3.4e-4 at K = 40, ~1e-8 at K = 60.
        double prev = 1e300;
        for (double K : {40.0, 60.0, 400.0}) {
            const DeltaCheck dc = free_commutator_delta_check(0.1, K);
            CHECK(dc.deviation <= prev);
            prev = dc.deviation;
        }
        CHECK(free_commutator_delta_check(0.1, 40.0).deviation ==
              doctest::Approx(3.36e-4).epsilon(0.1));
    }
    SUBCASE("insufficient cutoff raises a convergence error") {
        CHECK_THROWS_AS(free_commutator_delta_check(0.1, 25.0), convergence_error);
    }
}

TEST_CASE("property: random configurations keep the branch relations") {
    std::mt19937 rng(73u);
    std::uniform_real_distribution<double> ueps(1.2, 4.0), ua(0.5, 2.0), uk(0.5, 3.5),
        ur(0.05, 0.9), uphi(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 12; ++trial) {
        const CylinderConfig cfg{ueps(rng), ua(rng), uk(rng), 0};
        const cplx rot = cfg.k * std::exp(cplx(0.0, M_PI));
        for (int n : {0, 1, 3}) {
            const cplx lhs = wn(-n, cfg);
            CHECK(std::abs(lhs + std::conj(wn(n, cfg, rot))) / std::abs(lhs) < 1e-9);
            CHECK(wn(-n, cfg) == wn(n, cfg)); // even in the order index
        }
        const PolarPoint p{ur(rng) * cfg.radius, uphi(rng)};
        const PolarPoint q{ur(rng) * cfg.radius, uphi(rng)};
        const cplx dg = delta_g(p, q, cfg);
        CHECK(delta_g(q, p, cfg) == dg);
        if (std::abs(dg) > 1e-12)
            CHECK(std::abs(std::conj(dg) - delta_g(p, q, cfg, rot)) / std::abs(dg) <
                  1e-8);
    }
}

TEST_CASE("property: addition theorem across random geometries") {
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> ur(0.1, 3.0), uphi(0.0, 2.0 * M_PI),
        uk(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const PolarPoint p{ur(rng), uphi(rng)}, q{ur(rng), uphi(rng)};
        const double k = uk(rng);
        const int N = static_cast<int>(std::ceil(k * (p.rho + q.rho))) + 24;
        CHECK(addition_theorem_residual(k, p, q, N) < 1e-12);
    }
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(CylinderConfig({0.9, 1.0, 2.0, 0}).validate(), domain_error);
    CHECK_THROWS_AS(CylinderConfig({2.25, -1.0, 2.0, 0}).validate(), domain_error);
    // cutoff below the invariant floor ceil(k se a) + 8
    CHECK_THROWS_AS(CylinderConfig({2.25, 1.0, 2.0, 4}).validate(), domain_error);
    // exterior-point evaluation is rejected for the interior kernel
    CHECK_THROWS_AS(delta_g(PolarPoint{1.5, 0.0}, PolarPoint{0.5, 0.0}, kCanon),
                    domain_error);
}
