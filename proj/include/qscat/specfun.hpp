#ifndef QSCAT_SPECFUN_HPP
#define QSCAT_SPECFUN_HPP

// Cylindrical special functions (integer order, complex argument) and
// Gauss-Legendre quadrature. Everything here is pure and thread-safe.
//
// Branch convention: principal branch, cut along the negative real axis,
// -pi < arg z <= pi. Values at Re z < 0 are defined through the standard
// continuation identities
//     H1_n(e^{+i pi} x) = -(-1)^n H2_n(x),
//     H2_n(e^{-i pi} x) = -(-1)^n H1_n(x),
//     J_n(e^{+-i pi} x) = (-1)^n J_n(x),
// with the cut itself (arg z = pi) attached to the upper side.
//
// Validated accuracy: 1e-10 relative for |n| <= 200, |z| <= 1e4 away from
// zeros of the target function (power series below |z| = 12, Hankel P/Q
// asymptotics above; both branches agree to ~1e-12 on the overlap ring).

#include <complex>
#include <cstddef>
#include <vector>

#include "qscat/errors.hpp"

namespace qscat {

using cplx = std::complex<double>;

// Nodes and weights discretizing an interval [a, b].
// Invariants: weights positive and summing to b - a (1e-12), nodes strictly
// increasing inside (a, b).
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return nodes.size(); }
    void validate() const; // throws domain_error on a broken invariant
};

// Grid exact for polynomials up to degree 2*order - 1.
QuadratureGrid gauss_legendre(int order, double a, double b);

namespace specfun {

// Single-order evaluations. Preconditions: |n| <= 200, |z| <= 1e4;
// Hankel/Y additionally z != 0. Out-of-range -> domain_error, z = 0 pole
// -> singularity_error, overflow past double range -> domain_error.
cplx bessel_j(int n, cplx z);
cplx bessel_y(int n, cplx z);
cplx hankel1(int n, cplx z);
cplx hankel2(int n, cplx z);

// Derivatives via f'_n = (f_{n-1} - f_{n+1})/2 (f_{-1} = -f_1).
cplx bessel_j_deriv(int n, cplx z);
cplx hankel1_deriv(int n, cplx z);

// Array evaluations for orders 0..nmax in one sweep (Miller backward
// recurrence for J, forward recurrence for H1). Used by the cylinder mode
// sums, which legitimately need orders beyond the single-order cap; the
// supported range here is nmax <= 4096.
std::vector<cplx> bessel_j_array(int nmax, cplx z);
std::vector<cplx> hankel1_array(int nmax, cplx z);

// Lower-side continuation arrays: values of J_n and H1_n at z = x e^{-i pi}
// for real x > 0, computed by reflection (used for the contour fold of the
// cylinder noise integral, where the path passes below the branch cut).
std::vector<cplx> bessel_j_array_lower(int nmax, double x);
std::vector<cplx> hankel1_array_lower(int nmax, double x);

namespace detail {
// Exposed for the overlap-ring accuracy test and for internal evaluations
// beyond the public |z| cap (the expansions only get better out there).
void jy01_series(cplx z, cplx& j0, cplx& j1, cplx& y0, cplx& y1);
void jy01_asymptotic(cplx z, cplx& j0, cplx& j1, cplx& y0, cplx& y1);
void hankel01_asymptotic(cplx z, cplx& h0, cplx& h1);
} // namespace detail

} // namespace specfun
} // namespace qscat

#endif
