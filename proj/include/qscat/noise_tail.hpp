#ifndef QSCAT_NOISE_TAIL_HPP
#define QSCAT_NOISE_TAIL_HPP

#include <complex>

namespace qscat {

// Result of a damped commutator-tail integral. `reference` is the damped
// integral of |g k| for the module's free kernel over the same two-sided
// range; `error_estimate` compares two quadrature resolutions.
struct NoiseTail {
    std::complex<double> value;
    double reference = 0.0;
    double error_estimate = 0.0;
};

} // namespace qscat

#endif
