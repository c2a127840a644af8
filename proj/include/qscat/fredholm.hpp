#ifndef QSCAT_FREDHOLM_HPP
#define QSCAT_FREDHOLM_HPP

// Nystrom-discretized Fredholm engine for symmetric (non-Hermitian) kernels:
// spectra, resolvents, the Hilbert-Schmidt relation, and the quantum-side
// commutator identities that force the ancillary noise field.
//
// Discrete conventions. For a kernel matrix G (G_ij = g(x_i, x_j)) and the
// diagonal weight matrix W of the grid:
//   * eigenproblem:   (G W) u_n = (1/nu_n) u_n, eigenvectors rescaled to
//     bilinear orthonormality  sum_i u_n(x_i) u_m(x_i) w_i = delta_nm
//     (no conjugation -- the kernel is symmetric, not Hermitian);
//   * resolvent:      Gamma = (I - nu G W)^{-1} G, so the discrete solution
//     E = E0 + nu Gamma W E0 solves E - nu G W E = E0.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qscat/errors.hpp"
#include "qscat/specfun.hpp"

namespace qscat {

// hbar c k^2 / (pi eps) prefactor of the field commutator. The delta(k-k')
// factor of the continuous relations is carried symbolically (all commutators
// are evaluated at fixed k); epsilon is the constant interior permittivity.
struct CommutatorScale {
    double hbar = 1.0;
    double c = 1.0;
    double epsilon = 1.0;
    double k = 1.0;

    double kappa() const { return hbar * c * k * k / (M_PI * epsilon); }
    void validate() const {
        if (!(hbar > 0 && c > 0 && epsilon > 0 && k > 0))
            throw domain_error("CommutatorScale: all fields must be positive");
    }
};

// Eigenvalue pair closer than the 1e-8 relative separation threshold; such
// pairs are flagged, not resolved. `condition` estimates 1/separation.
struct DegeneratePair {
    int i = 0;
    int j = 0;
    double separation = 0.0;
    double condition = 0.0;
};

struct SpectralData {
    Eigen::VectorXcd eigenvalues;        // nu_n = 1/lambda_n, |lambda| descending
    Eigen::MatrixXcd modes;              // discretized eigenfunctions (columns)
    std::vector<DegeneratePair> degenerate_pairs;
    std::vector<int> clean;              // mode indices not in any flagged pair

    int count() const { return static_cast<int>(eigenvalues.size()); }
};

using KernelFn = std::function<cplx(double, double, double)>; // g(x, x'; k)

class KernelMatrix {
  public:
    KernelMatrix() = default;
    KernelMatrix(QuadratureGrid grid, Eigen::MatrixXcd entries, double k);

    const QuadratureGrid& grid() const { return grid_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    double wavenumber() const { return k_; }
    Eigen::VectorXd weights() const;
    int size() const { return static_cast<int>(entries_.rows()); }

    // Spectral data, computed once on demand and shared between copies.
    const SpectralData& spectral() const;

  private:
    QuadratureGrid grid_;
    Eigen::MatrixXcd entries_;
    double k_ = 0.0;
    std::shared_ptr<struct SpectralCache> cache_;
};

struct ResolventMatrix {
    Eigen::MatrixXcd entries; // symmetric; equals the kernel at nu = 0
    cplx nu;
    QuadratureGrid grid;
    double k = 0.0;
};

// G_ij = green(x_i, x_j; k); throws validation_error if the sampled kernel is
// asymmetric beyond 1e-12 (relative to its largest entry).
KernelMatrix build_kernel(const KernelFn& green, const QuadratureGrid& grid, double k);

SpectralData eigen_decompose(const KernelMatrix& kernel);

// Gamma = (I - nu G W)^{-1} G. Throws singular_resolvent_error (reporting the
// nearest nu_n) if nu is within 1e-8 relative distance of an eigenvalue.
ResolventMatrix resolvent_matrix(const KernelMatrix& kernel, cplx nu);

// E = E0 + nu Gamma W E0; residual of E - nu G W E - E0 is ~1e-10 or better.
Eigen::VectorXcd solve_fredholm(const KernelMatrix& kernel, cplx nu,
                                const Eigen::VectorXcd& rhs);

// max-norm of (I + nu Gamma W) Im(G) (I + nu Gamma W)^dagger - Im(Gamma):
// the finite-matrix form of the commutator-closure calculation. Vanishes
// identically (to roundoff) for real nu; the value is the absolute residual.
double commutator_closure_residual(const KernelMatrix& kernel, double nu);

// N_ij = -kappa Im(Gamma_ij - G_ij): the noise-field commutator at fixed k
// (the delta(k-k') factor is carried symbolically).
Eigen::MatrixXd noise_commutator_matrix(const KernelMatrix& kernel, double nu,
                                        const CommutatorScale& scale);

// c_n = -kappa nu Im(1/((nu_n - nu) nu_n)) per retained mode.
std::vector<double> noise_mode_commutators(const SpectralData& spec, double nu,
                                           const CommutatorScale& scale);

// Both orderings of <F^+ F>_0 are reported: under normal ordering only the
// negative-commutator (creation-like) noise modes contribute |c_n| |u_n|^2;
// under anti-normal ordering the positive modes contribute. `coherent` is
// |(R E0)(x_i)|^2 for the supplied incident samples (zero if omitted), and
// total = coherent + noise_normal, reproducing the additive split of the
// intensity observable.
struct VacuumIntensity {
    Eigen::VectorXd noise_normal;
    Eigen::VectorXd noise_antinormal;
    Eigen::VectorXd coherent;
    Eigen::VectorXd total;
};
VacuumIntensity vacuum_noise_intensity(const KernelMatrix& kernel, double nu,
                                       const CommutatorScale& scale,
                                       const Eigen::VectorXcd& incident = {});

// max over retained mode pairs (n, m) of
// |(1/nu_n - 1/nu_m^*) sum_i u_n u_m^* w_i
//      - 2i sum_ij Im(G_ij) u_n(x_i) u_m^*(x_j) w_i w_j|.
double spectral_identity_residual(const SpectralData& spec, const KernelMatrix& kernel);

// Discrepancy between the noise commutator matrix and its reconstruction
// through the eigenmode expansion with diagonal mode commutators c_n:
// max_ij |N_ij - sum_n c_n u_n(x_i) u_n(x_j)^*|. Zero only when the
// eigenbasis has constant phase; reported, not resolved.
double noise_expansion_residual(const KernelMatrix& kernel, double nu,
                                const CommutatorScale& scale);

} // namespace qscat

#endif
