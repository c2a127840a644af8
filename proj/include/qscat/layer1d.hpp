#ifndef QSCAT_LAYER1D_HPP
#define QSCAT_LAYER1D_HPP

// Closed-form resolvent of the planar dielectric layer: boundary-condition
// solve, five-term resolvent kernel, slab pole structure, and the damped
// commutator-tail integral whose vanishing demonstrates that the layer's
// noise components disappear.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qscat/errors.hpp"
#include "qscat/noise_tail.hpp"
#include "qscat/specfun.hpp"

namespace qscat {

struct LayerConfig {
    double epsilon = 1.0; // relative permittivity, >= 1
    double length = 1.0;  // slab thickness l
    double k = 1.0;       // free-space wavenumber

    double nu() const { return -k * k * (epsilon - 1.0); }
    double phi() const { return k * length; }
    double phi_eps() const { return k * std::sqrt(epsilon) * length; }
    double fresnel_r() const {
        const double se = std::sqrt(epsilon);
        return (1.0 - se) / (1.0 + se);
    }
    void validate() const {
        if (!(epsilon >= 1.0)) throw domain_error("LayerConfig: epsilon >= 1 required");
        if (!(length > 0.0)) throw domain_error("LayerConfig: length > 0 required");
        if (!(k > 0.0)) throw domain_error("LayerConfig: k > 0 required");
    }
};

// Interior (+/-)-going and exterior outgoing amplitudes of the slab ansatz.
struct BoundaryCoefficients {
    cplx A, B, C, D;
};

struct LayerPole {
    int n = 0;
    cplx k;
    double residual = 0.0; // |r^2 e^{2ik sqrt(eps) l} - 1|
};

struct PoleSet {
    std::vector<LayerPole> poles;
};

// e^{ik|x-x'|} / (2ik)
cplx green_free_1d(double x, double xp, double k);

// Four-equation boundary solve for sources entering through the projections
// f_± = (nu/2ik) \int e^{±ik sqrt(eps) x'} U0(x') dx'. Closed forms for A, B;
// C, D recovered from the remaining equations.
BoundaryCoefficients boundary_solve(const LayerConfig& cfg, cplx f_plus, cplx f_minus);

// Five-term closed-form resolvent kernel, x, x' in [0, l].
cplx layer_resolvent_kernel(const LayerConfig& cfg, double x, double xp);

// Kernel formula at an explicit (possibly negative) wavenumber, for the
// conjugation diagnostic Gamma(x, x'; -k) = Gamma*(x, x'; k).
cplx layer_resolvent_kernel(const LayerConfig& cfg, double x, double xp, double k_signed);

// Slab poles k_n = n pi/(sqrt(eps) l) + i ln|r|/(sqrt(eps) l) refined by
// Newton iteration on r^2 e^{2ik sqrt(eps) l} = 1 to residual < 1e-12.
PoleSet layer_poles(const LayerConfig& cfg, int n_min, int n_max);

// Damped tail integral of the reflection part of the kernel,
//   I(eta, K) = \int_{-K}^{K} dGamma(x,x'; k) k e^{-eta|k|} dk
//             = 2i \int_0^K Im(dGamma) k e^{-eta k} dk,
// folded with Gamma(-k) = Gamma*(k); dGamma = Gamma - first term of the
// kernel. `reference` is the same damped integral of |g k| = 1/2 for the
// free kernel, over the same two-sided range.
NoiseTail layer_noise_integral(const LayerConfig& cfg, double x, double xp,
                               double cutoff, double damping);

// Total field produced by a current f sampled on `grid` (inside the slab).
// Interior values come from the interior-wavenumber representation
// (particular integral over e^{ik se |x-x'|}/(2ik se) plus the slab-reflected
// plane waves of boundary_solve); exterior values are C e^{ikx} / D e^{-ikx}.
// Equivalent to U0 plus the resolvent-kernel correction, but satisfies the
// dielectric Helmholtz operator pointwise between quadrature nodes.
std::vector<cplx> scattered_field(const LayerConfig& cfg, const QuadratureGrid& grid,
                                  const std::vector<cplx>& source,
                                  const std::vector<double>& eval_points);

} // namespace qscat

#endif
