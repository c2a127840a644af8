#ifndef QSCAT_CYLINDER2D_HPP
#define QSCAT_CYLINDER2D_HPP

// Resolvent of the circular dielectric cylinder: W_n spectral weights, the
// delta-g correction kernel, mode-coefficient boundary solves, the branch-cut
// relation, and the damped contour integral showing that the cylinder's
// noise term survives where the layer's vanishes.

#include <complex>
#include <utility>
#include <vector>

#include "qscat/errors.hpp"
#include "qscat/noise_tail.hpp"
#include "qscat/specfun.hpp"

namespace qscat {

struct PolarPoint {
    double rho = 0.0; // radial coordinate, >= 0
    double phi = 0.0; // azimuth (radians)
};

// Euclidean chord between two polar points.
double chord(const PolarPoint& p, const PolarPoint& q);

struct CylinderConfig {
    double epsilon = 2.25; // relative permittivity, > 1
    double radius = 1.0;   // cylinder radius a
    double k = 1.0;        // free-space wavenumber
    int modes = 0;         // azimuthal cutoff N; 0 -> ceil(k sqrt(eps) a) + 16

    double nu() const { return -k * k * (epsilon - 1.0); }
    int mode_cutoff() const;
    void validate() const;
};

// Polar quadrature: Gauss-Legendre radial nodes (rho drho absorbed into the
// weights) crossed with a uniform azimuthal grid. Index = ir * n_azimuthal + iphi.
struct PolarGrid {
    std::vector<double> rho;
    std::vector<double> phi;
    std::vector<double> weight;
    int n_radial = 0;
    int n_azimuthal = 0;

    std::size_t size() const { return weight.size(); }
    PolarPoint point(std::size_t i) const { return {rho[i], phi[i]}; }
};
PolarGrid make_polar_grid(double radius, int n_radial, int n_azimuthal);

// -(i/4) H1_0(k |p - q|); throws singularity_error at coincident points.
cplx green_free_2d(const PolarPoint& p, const PolarPoint& q, double k);

// Per-mode spectral weight W_n(k) of the interior resolvent correction.
// Throws resonance_error when the denominator collapses (never for real k
// with eps > 1). The complex overload follows the principal branch with the
// continuation identities of specfun.
cplx wn(int n, const CylinderConfig& cfg);
cplx wn(int n, const CylinderConfig& cfg, cplx k);

// delta g = (i/4) sum_{|n|<=N} W_n J_n(k se rho) J_n(k se rho') e^{in dphi}.
// The cutoff starts at cfg.mode_cutoff() and is raised by 8 (up to +64) until
// the last two paired terms fall below 1e-10 of the partial sum; failing
// that, truncation_error.
cplx delta_g(const PolarPoint& p, const PolarPoint& q, const CylinderConfig& cfg);
cplx delta_g(const PolarPoint& p, const PolarPoint& q, const CylinderConfig& cfg, cplx k);

// Interior resolvent kernel: -(i/4) H1_0(k se |p-q|) + delta_g.
cplx cylinder_resolvent(const PolarPoint& p, const PolarPoint& q,
                        const CylinderConfig& cfg);

// Mode coefficients of the scattered field for an incident field sampled on
// a polar grid: f_n by quadrature, (A_n, B_n) from the per-mode 2x2 boundary
// systems (solved directly, not through W_n).
struct ModeCoefficients {
    int cutoff = 0;                   // n runs over -cutoff..cutoff
    std::vector<cplx> a, b, f;        // index n + cutoff

    cplx A(int n) const { return a[static_cast<std::size_t>(n + cutoff)]; }
    cplx B(int n) const { return b[static_cast<std::size_t>(n + cutoff)]; }
    cplx F(int n) const { return f[static_cast<std::size_t>(n + cutoff)]; }
};
ModeCoefficients mode_coefficients(const CylinderConfig& cfg, const PolarGrid& grid,
                                   const std::vector<cplx>& incident);

// Scattered field at `p` from the mode route (free-kernel quadrature plus
// the A_n / B_n sums) and from the resolvent-kernel route (interior only).
cplx field_from_modes(const CylinderConfig& cfg, const ModeCoefficients& mc,
                      const PolarGrid& grid, const std::vector<cplx>& incident,
                      const PolarPoint& p);
cplx field_from_resolvent(const CylinderConfig& cfg, const PolarGrid& grid,
                          const std::vector<cplx>& incident, const PolarPoint& p);

// Max mismatch of the scattered field and its radial derivative across
// rho = a, relative to the boundary field / derivative magnitude.
std::pair<double, double> boundary_continuity_residual(const CylinderConfig& cfg,
                                                       const PolarGrid& grid,
                                                       const std::vector<cplx>& incident);

// Damped contour integral of the delta-g term,
//   I(eta, K) = int_0^K [delta_g(k) - delta_g(k e^{-i pi})] k e^{-eta k} dk,
// with the negative-axis values taken on the lower side of the branch cut
// (the contour of the commutator integral passes below it). The branch-cut
// jump keeps this bounded away from zero for eps > 1; the layer analog
// vanishes. The per-k mode cutoff scales as ceil(k se a) + 16.
NoiseTail cylinder_noise_integral(const PolarPoint& p, const PolarPoint& q,
                                  const CylinderConfig& cfg, double cutoff,
                                  double damping);

// | sum_{|n|<=N} J_n(k rho) J_n(k rho') e^{in dphi} - J_0(k |p-q|) |
double addition_theorem_residual(double k, const PolarPoint& p, const PolarPoint& q,
                                 int N);

// Weak-sense check of the k-integral delta identity: the free commutator
// density integrated against a normalized Gaussian of width sigma recovers
// -(pi/2) times the test function. `deviation` is relative at the Gaussian
// center; `total_weight` integrates the recovered density (should be 1).
struct DeltaCheck {
    double deviation = 0.0;
    double total_weight = 0.0;
    double tail_estimate = 0.0;
};
DeltaCheck free_commutator_delta_check(double sigma, double cutoff);

} // namespace qscat

#endif
