#include "qscat/cylinder2d.hpp"

#include <algorithm>
#include <cmath>

namespace qscat {

namespace {

const cplx I(0.0, 1.0);

using specfun::bessel_j_array;
using specfun::hankel1_array;

// f'_n for n = 0..nmax from values f_0..f_{nmax+1} (f_{-1} = -f_1).
std::vector<cplx> deriv_from_values(const std::vector<cplx>& f, int nmax) {
    std::vector<cplx> d(nmax + 1);
    d[0] = -f[1];
    for (int n = 1; n <= nmax; ++n) d[n] = 0.5 * (f[n - 1] - f[n + 1]);
    return d;
}

struct WnTables {
    std::vector<cplx> upper; // W_n(k), n = 0..N
    std::vector<cplx> lower; // W_n(k e^{-i pi}), n = 0..N
};

// Both branch sides from one set of real-argument arrays.
WnTables wn_tables(const CylinderConfig& cfg, double k, int N) {
    const double se = std::sqrt(cfg.epsilon);
    const cplx ka(k * cfg.radius, 0.0), kea(k * se * cfg.radius, 0.0);
    const auto H_ka = hankel1_array(N + 1, ka);
    const auto H_kea = hankel1_array(N + 1, kea);
    const auto J_ka = bessel_j_array(N + 1, ka);
    const auto J_kea = bessel_j_array(N + 1, kea);
    const auto Hd_ka = deriv_from_values(H_ka, N);
    const auto Hd_kea = deriv_from_values(H_kea, N);
    const auto Jd_ka = deriv_from_values(J_ka, N);
    const auto Jd_kea = deriv_from_values(J_kea, N);

    WnTables t;
    t.upper.resize(N + 1);
    t.lower.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        t.upper[n] = (Hd_ka[n] * H_kea[n] - se * H_ka[n] * Hd_kea[n]) /
                     (Hd_ka[n] * J_kea[n] - se * H_ka[n] * Jd_kea[n]);
        // Lower side via H1_n(x e^{-i pi}) = (-1)^n (2 J_n + H1_n)(x); the
        // (-1)^n factors cancel pairwise, leaving real-argument combinations.
        const cplx Hl = H_ka[n] + 2.0 * J_ka[n];
        const cplx Hle = H_kea[n] + 2.0 * J_kea[n];
        const cplx Hdl = Hd_ka[n] + 2.0 * Jd_ka[n];
        const cplx Hdle = Hd_kea[n] + 2.0 * Jd_kea[n];
        t.lower[n] = (-Hdl * Hle + se * Hl * Hdle) / (-Hdl * J_kea[n] + se * Hl * Jd_kea[n]);
    }
    return t;
}

cplx wn_at(const CylinderConfig& cfg, int n, cplx k) {
    const double se = std::sqrt(cfg.epsilon);
    const int m = std::abs(n);
    const cplx ka = k * cfg.radius, kea = k * se * cfg.radius;
    const auto H_ka = hankel1_array(m + 1, ka);
    const auto H_kea = hankel1_array(m + 1, kea);
    const auto J_kea = bessel_j_array(m + 1, kea);
    const cplx Hd_ka = (m == 0) ? -H_ka[1] : 0.5 * (H_ka[m - 1] - H_ka[m + 1]);
    const cplx Hd_kea = (m == 0) ? -H_kea[1] : 0.5 * (H_kea[m - 1] - H_kea[m + 1]);
    const cplx Jd_kea = (m == 0) ? -J_kea[1] : 0.5 * (J_kea[m - 1] - J_kea[m + 1]);
    const cplx num = Hd_ka * H_kea[m] - se * H_ka[m] * Hd_kea;
    const cplx t1 = Hd_ka * J_kea[m], t2 = se * H_ka[m] * Jd_kea;
    const cplx den = t1 - t2;
    if (std::abs(den) < 1e-12 * (std::abs(t1) + std::abs(t2)))
        throw resonance_error("wn: internal resonance, denominator collapsed");
    return num / den; // W_{-n} = W_n for integer order
}

} // namespace

double chord(const PolarPoint& p, const PolarPoint& q) {
    return std::sqrt(std::max(0.0, p.rho * p.rho + q.rho * q.rho -
                                       2.0 * p.rho * q.rho * std::cos(p.phi - q.phi)));
}

int CylinderConfig::mode_cutoff() const {
    if (modes > 0) return modes;
    return static_cast<int>(std::ceil(k * std::sqrt(epsilon) * radius)) + 16;
}

void CylinderConfig::validate() const {
    if (!(epsilon > 1.0)) throw domain_error("CylinderConfig: epsilon > 1 required");
    if (!(radius > 0.0)) throw domain_error("CylinderConfig: radius > 0 required");
    if (!(k > 0.0)) throw domain_error("CylinderConfig: k > 0 required");
    const int floor_n = static_cast<int>(std::ceil(k * std::sqrt(epsilon) * radius)) + 8;
    if (mode_cutoff() < floor_n)
        throw domain_error("CylinderConfig: mode cutoff below ceil(k sqrt(eps) a) + 8");
}

PolarGrid make_polar_grid(double radius, int n_radial, int n_azimuthal) {
    if (!(radius > 0.0) || n_radial < 1 || n_azimuthal < 4)
        throw domain_error("make_polar_grid: bad parameters");
    const QuadratureGrid radial = gauss_legendre(n_radial, 0.0, radius);
    PolarGrid g;
    g.n_radial = n_radial;
    g.n_azimuthal = n_azimuthal;
    const double wphi = 2.0 * M_PI / n_azimuthal;
    g.rho.reserve(static_cast<std::size_t>(n_radial) * n_azimuthal);
    for (int ir = 0; ir < n_radial; ++ir)
        for (int ip = 0; ip < n_azimuthal; ++ip) {
            g.rho.push_back(radial.nodes[ir]);
            g.phi.push_back(wphi * ip);
            g.weight.push_back(radial.weights[ir] * radial.nodes[ir] * wphi);
        }
    return g;
}

cplx green_free_2d(const PolarPoint& p, const PolarPoint& q, double k) {
    if (!(k > 0.0)) throw domain_error("green_free_2d: k > 0 required");
    const double d = chord(p, q);
    if (d == 0.0) throw singularity_error("green_free_2d: coincident points");
    return -0.25 * I * specfun::hankel1(0, cplx(k * d, 0.0));
}

cplx wn(int n, const CylinderConfig& cfg) {
    cfg.validate();
    return wn_at(cfg, n, cplx(cfg.k, 0.0));
}

cplx wn(int n, const CylinderConfig& cfg, cplx k) {
    cfg.validate();
    return wn_at(cfg, n, k);
}

namespace {

// Paired mode sum (i/4) [t_0 + 2 sum_{n>=1} t_n cos(n dphi)] with
// t_n = W_n J_n(k se rho) J_n(k se rho'), plus the tail check / auto-raise.
// Points are put in canonical order first so the point-swap symmetry holds
// bitwise (float products are commutative but not associative).
cplx delta_g_sum(const CylinderConfig& cfg, PolarPoint p, PolarPoint q, cplx k) {
    if (q.rho < p.rho || (q.rho == p.rho && q.phi < p.phi)) std::swap(p, q);
    const double se = std::sqrt(cfg.epsilon);
    const double dphi = std::abs(p.phi - q.phi);
    int N = cfg.mode_cutoff();
    const int Nmax = N + 64;
    for (;; N += 8) {
        const auto Jr = bessel_j_array(N, k * se * p.rho);
        const auto Jq = bessel_j_array(N, k * se * q.rho);
        std::vector<cplx> W(N + 1);
        for (int n = 0; n <= N; ++n) W[n] = wn_at(cfg, n, k);
        cplx sum = W[0] * Jr[0] * Jq[0];
        for (int n = 1; n <= N; ++n)
            sum += 2.0 * W[n] * Jr[n] * Jq[n] * std::cos(n * dphi);
        const double tail = std::abs(2.0 * W[N] * Jr[N] * Jq[N]) +
                            std::abs(2.0 * W[N - 1] * Jr[N - 1] * Jq[N - 1]);
        if (tail <= 1e-10 * std::max(std::abs(sum), 1e-300)) return 0.25 * I * sum;
        if (N >= Nmax)
            throw truncation_error("delta_g: mode sum failed its tail estimate");
    }
}

} // namespace

cplx delta_g(const PolarPoint& p, const PolarPoint& q, const CylinderConfig& cfg) {
    return delta_g(p, q, cfg, cplx(cfg.k, 0.0));
}

cplx delta_g(const PolarPoint& p, const PolarPoint& q, const CylinderConfig& cfg,
             cplx k) {
    cfg.validate();
    if (!(p.rho <= cfg.radius && q.rho <= cfg.radius))
        throw domain_error("delta_g: points must lie inside the cylinder");
    return delta_g_sum(cfg, p, q, k);
}

cplx cylinder_resolvent(const PolarPoint& p, const PolarPoint& q,
                        const CylinderConfig& cfg) {
    cfg.validate();
    const double d = chord(p, q);
    if (d == 0.0) throw singularity_error("cylinder_resolvent: coincident points");
    if (d < 1e-6 * cfg.radius)
        throw singularity_error("cylinder_resolvent: points within the guard radius");
    const double se = std::sqrt(cfg.epsilon);
    const cplx free = -0.25 * I * specfun::hankel1(0, cplx(cfg.k * se * d, 0.0));
    return free + delta_g(p, q, cfg);
}

ModeCoefficients mode_coefficients(const CylinderConfig& cfg, const PolarGrid& grid,
                                   const std::vector<cplx>& incident) {
    cfg.validate();
    if (incident.size() != grid.size())
        throw validation_error("mode_coefficients: incident field not on the grid");
    const int N = cfg.mode_cutoff();
    if (grid.n_azimuthal < 4 * N)
        throw domain_error("mode_coefficients: azimuthal sampling below 4N");
    const double se = std::sqrt(cfg.epsilon);
    const double a = cfg.radius, k = cfg.k;

    ModeCoefficients mc;
    mc.cutoff = N;
    mc.a.resize(2 * N + 1);
    mc.b.resize(2 * N + 1);
    mc.f.resize(2 * N + 1);

    // f_n = int J_n(k se rho') e^{-i n phi'} U0 dA. J arrays per grid point.
    std::vector<std::vector<cplx>> Jcache(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        Jcache[j] = bessel_j_array(N, cplx(k * se * grid.rho[j], 0.0));

    const auto H_ka = hankel1_array(N + 1, cplx(k * a, 0.0));
    const auto H_kea = hankel1_array(N + 1, cplx(k * se * a, 0.0));
    const auto J_kea = bessel_j_array(N + 1, cplx(k * se * a, 0.0));
    const auto Hd_ka = deriv_from_values(H_ka, N);
    const auto Hd_kea = deriv_from_values(H_kea, N);
    const auto Jd_kea = deriv_from_values(J_kea, N);

    for (int n = -N; n <= N; ++n) {
        const int m = std::abs(n);
        const double sgn = (n < 0 && (m & 1)) ? -1.0 : 1.0; // J_{-m} = (-1)^m J_m
        cplx f = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            f += grid.weight[j] * sgn * Jcache[j][m] *
                 std::exp(-I * double(n) * grid.phi[j]) * incident[j];
        mc.f[n + N] = f;

        // A_n J_n(k se a) - B_n H1_n(k a)       = (i/4) f_n H1_n(k se a)
        // A_n se J'_n(k se a) - B_n H1'_n(k a)  = (i/4) f_n se H1'_n(k se a)
        const double dsgn = (n < 0 && (m & 1)) ? -1.0 : 1.0;
        const cplx a11 = sgn * J_kea[m], a12 = -sgn * H_ka[m];
        const cplx a21 = se * dsgn * Jd_kea[m], a22 = -dsgn * Hd_ka[m];
        const cplx r1 = 0.25 * I * f * sgn * H_kea[m];
        const cplx r2 = 0.25 * I * f * se * dsgn * Hd_kea[m];
        const cplx det = a11 * a22 - a12 * a21;
        const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
        if (std::abs(det) < 1e-12 * scale)
            throw resonance_error("mode_coefficients: boundary system near-singular");
        mc.a[n + N] = (r1 * a22 - a12 * r2) / det;
        mc.b[n + N] = (a11 * r2 - r1 * a21) / det;
    }
    return mc;
}

namespace {

// Free-kernel quadrature piece of the interior scattered field,
// P(p) = -(i nu / 4) sum_j w_j H1_0(k se |p - p_j|) U0_j.
cplx free_field_piece(const CylinderConfig& cfg, const PolarGrid& grid,
                      const std::vector<cplx>& incident, const PolarPoint& p) {
    const double se = std::sqrt(cfg.epsilon);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double d = chord(p, grid.point(j));
        if (d < 1e-12 * cfg.radius)
            throw singularity_error("field evaluation at a quadrature node");
        acc += grid.weight[j] * specfun::hankel1(0, cplx(cfg.k * se * d, 0.0)) *
               incident[j];
    }
    return -0.25 * I * cfg.nu() * acc;
}

} // namespace

cplx field_from_modes(const CylinderConfig& cfg, const ModeCoefficients& mc,
                      const PolarGrid& grid, const std::vector<cplx>& incident,
                      const PolarPoint& p) {
    const double se = std::sqrt(cfg.epsilon);
    const int N = mc.cutoff;
    if (p.rho >= cfg.radius) {
        const auto H = hankel1_array(N, cplx(cfg.k * p.rho, 0.0));
        cplx s = 0.0;
        for (int n = -N; n <= N; ++n) {
            const int m = std::abs(n);
            const double sgn = (n < 0 && (m & 1)) ? -1.0 : 1.0;
            s += mc.B(n) * sgn * H[m] * std::exp(I * double(n) * p.phi);
        }
        return cfg.nu() * s;
    }
    const auto J = bessel_j_array(N, cplx(cfg.k * se * p.rho, 0.0));
    cplx s = 0.0;
    for (int n = -N; n <= N; ++n) {
        const int m = std::abs(n);
        const double sgn = (n < 0 && (m & 1)) ? -1.0 : 1.0;
        s += mc.A(n) * sgn * J[m] * std::exp(I * double(n) * p.phi);
    }
    return free_field_piece(cfg, grid, incident, p) + cfg.nu() * s;
}

cplx field_from_resolvent(const CylinderConfig& cfg, const PolarGrid& grid,
                          const std::vector<cplx>& incident, const PolarPoint& p) {
    if (p.rho > cfg.radius)
        throw domain_error("field_from_resolvent: interior evaluation only");
    cplx acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        acc += grid.weight[j] * delta_g(p, grid.point(j), cfg) * incident[j];
    return free_field_piece(cfg, grid, incident, p) + cfg.nu() * acc;
}

std::pair<double, double> boundary_continuity_residual(const CylinderConfig& cfg,
                                                       const PolarGrid& grid,
                                                       const std::vector<cplx>& incident) {
    const ModeCoefficients mc = mode_coefficients(cfg, grid, incident);
    const double se = std::sqrt(cfg.epsilon);
    const double a = cfg.radius, k = cfg.k, nu = cfg.nu();
    const int N = mc.cutoff;

    const auto H_ka = hankel1_array(N + 1, cplx(k * a, 0.0));
    const auto J_kea = bessel_j_array(N + 1, cplx(k * se * a, 0.0));
    const auto Hd_ka = deriv_from_values(H_ka, N);
    const auto Jd_kea = deriv_from_values(J_kea, N);

    const int nphi = 36;
    double vmax = 0.0, dmax = 0.0, vscale = 0.0, dscale = 0.0;
    for (int ip = 0; ip < nphi; ++ip) {
        const double phi0 = 2.0 * M_PI * ip / nphi;
        const PolarPoint pb{a, phi0};
        // interior: free piece + A-sum; exterior: B-sum
        cplx uin = free_field_piece(cfg, grid, incident, pb);
        cplx duin = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double d = chord(pb, grid.point(j));
            const double ddrho =
                (a - grid.rho[j] * std::cos(phi0 - grid.phi[j])) / d;
            duin += grid.weight[j] *
                    (-specfun::hankel1(1, cplx(k * se * d, 0.0))) * k * se * ddrho *
                    incident[j];
        }
        duin *= -0.25 * I * nu;
        cplx uout = 0.0, duout = 0.0;
        for (int n = -N; n <= N; ++n) {
            const int m = std::abs(n);
            const double sgn = (n < 0 && (m & 1)) ? -1.0 : 1.0;
            const cplx ph = std::exp(I * double(n) * phi0);
            uin += nu * mc.A(n) * sgn * J_kea[m] * ph;
            duin += nu * mc.A(n) * k * se * sgn * Jd_kea[m] * ph;
            uout += nu * mc.B(n) * sgn * H_ka[m] * ph;
            duout += nu * mc.B(n) * k * sgn * Hd_ka[m] * ph;
        }
        vmax = std::max(vmax, std::abs(uin - uout));
        dmax = std::max(dmax, std::abs(duin - duout));
        vscale = std::max(vscale, std::abs(uin));
        dscale = std::max(dscale, std::abs(duin));
    }
    if (vscale == 0.0 && dscale == 0.0) return {0.0, 0.0};
    return {vmax / std::max(vscale, 1e-300), dmax / std::max(dscale, 1e-300)};
}

namespace {

// Both branch sides of delta_g at real k > 0 from shared tables. In the
// lower-side sum the (-1)^n factors of the rotated J products cancel, so
// only W_n differs between the sides.
std::pair<cplx, cplx> delta_g_two_sided(const CylinderConfig& cfg, const PolarPoint& p,
                                        const PolarPoint& q, double k, int N) {
    const double se = std::sqrt(cfg.epsilon);
    const double dphi = p.phi - q.phi;
    const WnTables t = wn_tables(cfg, k, N);
    const auto Jr = bessel_j_array(N, cplx(k * se * p.rho, 0.0));
    const auto Jq = bessel_j_array(N, cplx(k * se * q.rho, 0.0));
    cplx up = t.upper[0] * Jr[0] * Jq[0];
    cplx low = t.lower[0] * Jr[0] * Jq[0];
    for (int n = 1; n <= N; ++n) {
        const cplx jj = 2.0 * Jr[n] * Jq[n] * std::cos(n * dphi);
        up += t.upper[n] * jj;
        low += t.lower[n] * jj;
    }
    return {0.25 * I * up, 0.25 * I * low};
}

template <class F>
cplx panel_integral_c(F&& f, double a, double b, int panels, const QuadratureGrid& base) {
    cplx tot = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < base.size(); ++q)
            tot += 0.5 * h * base.weights[q] * f(mid + 0.5 * h * base.nodes[q]);
    }
    return tot;
}

} // namespace

NoiseTail cylinder_noise_integral(const PolarPoint& p, const PolarPoint& q,
                                  const CylinderConfig& cfg, double cutoff,
                                  double damping) {
    cfg.validate();
    if (!(cutoff > 0.0) || !(damping > 0.0))
        throw domain_error("cylinder_noise_integral: cutoff and damping must be positive");
    if (!(p.rho <= cfg.radius && q.rho <= cfg.radius))
        throw domain_error("cylinder_noise_integral: points must lie inside");

    const double se = std::sqrt(cfg.epsilon);
    const double d = chord(p, q);
    if (d == 0.0) throw singularity_error("cylinder_noise_integral: coincident points");

    auto integrand = [&](double k) -> cplx {
        const int N = static_cast<int>(std::ceil(k * se * cfg.radius)) + 16;
        const auto [up, low] = delta_g_two_sided(cfg, p, q, k, N);
        return (up - low) * k * std::exp(-damping * k);
    };
    // Oscillation scale ~ 2 se a per unit k.
    const double osc = std::max(1.0, 2.0 * se * cfg.radius);
    if (cutoff * osc / 1.5 > 1e5)
        throw convergence_error("cylinder_noise_integral: cutoff too large to resolve");
    const int panels = std::max(64, static_cast<int>(std::ceil(cutoff * osc / 1.5)));
    static const QuadratureGrid g6 = gauss_legendre(6, -1.0, 1.0);
    static const QuadratureGrid g12 = gauss_legendre(12, -1.0, 1.0);
    const cplx coarse = panel_integral_c(integrand, 1e-9, cutoff, panels, g6);
    const cplx fine = panel_integral_c(integrand, 1e-9, cutoff, panels, g12);

    NoiseTail out;
    out.value = fine;
    out.error_estimate = std::abs(fine - coarse);

    auto ref_integrand = [&](double k) -> cplx {
        return 0.25 * std::abs(specfun::hankel1(0, cplx(k * d, 0.0))) * k *
               std::exp(-damping * k);
    };
    out.reference =
        2.0 * panel_integral_c(ref_integrand, 1e-9, cutoff, panels, g6).real();
    if (out.error_estimate > 0.1 * std::abs(out.value))
        throw convergence_error("cylinder_noise_integral: quadrature estimate above 10%");
    return out;
}

double addition_theorem_residual(double k, const PolarPoint& p, const PolarPoint& q,
                                 int N) {
    if (!(k > 0.0) || N < 0) throw domain_error("addition_theorem_residual: bad args");
    const auto Jr = bessel_j_array(N, cplx(k * p.rho, 0.0));
    const auto Jq = bessel_j_array(N, cplx(k * q.rho, 0.0));
    cplx s = Jr[0] * Jq[0];
    for (int n = 1; n <= N; ++n)
        s += 2.0 * Jr[n] * Jq[n] * std::cos(n * (p.phi - q.phi));
    const double dd = chord(p, q);
    const cplx j0 = (dd == 0.0) ? cplx(1.0, 0.0)
                                : specfun::bessel_j(0, cplx(k * dd, 0.0));
    return std::abs(s - j0);
}

DeltaCheck free_commutator_delta_check(double sigma, double cutoff) {
    if (!(sigma > 0.0) || !(cutoff > 0.0))
        throw domain_error("free_commutator_delta_check: bad args");
    const double K = cutoff;

    DeltaCheck out;
    out.tail_estimate = std::exp(-0.5 * K * K * sigma * sigma);
    if (out.tail_estimate > 0.01)
        throw convergence_error(
            "free_commutator_delta_check: cutoff too small for this test width");

    // int_0^K Im(g) k dk has the exact antiderivative -K J1(K r)/(4 r)
    // (Im g = -J0(kr)/4 and (x J1)' = x J0); the weak integrals below are
    // real-space quadratures against the Gaussian. The outer weight integral
    // reaches K r ~ 2.6e4, where the asymptotic branch is the accurate one.
    auto j1_real = [](double x) -> double {
        if (x <= 1e4) return specfun::bessel_j(1, cplx(x, 0.0)).real();
        cplx j0, j1, y0, y1;
        specfun::detail::jy01_asymptotic(cplx(x, 0.0), j0, j1, y0, y1);
        return j1.real();
    };
    auto kernel = [&](double r) -> double { return -K * j1_real(K * r) / (4.0 * r); };

    static const QuadratureGrid g16 = gauss_legendre(16, -1.0, 1.0);
    const double Rmax = 10.0 * sigma;
    const int panels = std::max(64, static_cast<int>(std::ceil(K * Rmax / M_PI)));
    auto f = [&](double r) -> cplx {
        const double gauss = std::exp(-0.5 * r * r / (sigma * sigma)) /
                             (2.0 * M_PI * sigma * sigma);
        return kernel(r) * gauss * 2.0 * M_PI * r;
    };
    const double Iweak = panel_integral_c(f, 1e-12, Rmax, panels, g16).real();
    const double target = -0.25 / (sigma * sigma); // -(pi/2) * gauss(0)
    out.deviation = std::abs(Iweak - target) / std::abs(target);

    // Total recovered weight: -(2/pi) int_0^{Rw} kernel(r) 2 pi r dr = 1 - J0(K Rw).
    const double Rw = std::max(64.0, 26000.0 / K);
    const int wpanels = std::max(256, static_cast<int>(std::ceil(K * Rw / M_PI)));
    auto fw = [&](double r) -> cplx { return (-2.0 / M_PI) * kernel(r) * 2.0 * M_PI * r; };
    out.total_weight = panel_integral_c(fw, 1e-12, Rw, wpanels, g16).real();
    return out;
}

} // namespace qscat
