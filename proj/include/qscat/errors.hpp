#ifndef QSCAT_ERRORS_HPP
#define QSCAT_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace qscat {

// Base for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument or order outside the validated range of a special function,
// or a parameter violating a type invariant.
struct domain_error : error {
    using error::error;
};

// Input fails a contract check (asymmetric kernel, non-unitary S-matrix, ...).
// `detail` names the violated relation.
struct validation_error : error {
    validation_error(const std::string& what, std::string detail_ = {})
        : error(what), detail(std::move(detail_)) {}
    std::string detail;
};

// Evaluation at a singular point (Hankel at z = 0, coincident kernel points).
struct singularity_error : error {
    using error::error;
};

// Spectral parameter too close to an eigenvalue; carries the offender.
struct singular_resolvent_error : error {
    singular_resolvent_error(const std::string& what, std::complex<double> nearest_)
        : error(what), nearest(nearest_) {}
    std::complex<double> nearest;
};

// Quadrature or iteration failed to reach its target.
struct convergence_error : error {
    using error::error;
};

// Mode sum failed its tail estimate even after raising the cutoff.
struct truncation_error : error {
    using error::error;
};

// Fock-space occupation exceeding the configured truncation.
struct capacity_error : error {
    using error::error;
};

// Near-singular 2x2 boundary system or slab resonance denominator.
struct resonance_error : error {
    using error::error;
};

} // namespace qscat

#endif
