#ifndef QSCAT_ANTENNA_HPP
#define QSCAT_ANTENNA_HPP

// Two-element quantum dipole antenna: unitary four-port scattering algebra,
// block decomposition with noise operators, truncated-Fock-space state
// transformation, far-zone picture and angular correlation patterns.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qscat/errors.hpp"

namespace qscat {

using cplx = std::complex<double>;

// Residuals of the unitarity relations tying the four port parameters.
struct UnitarityReport {
    double norm_residual = 0.0; // | |r|^2+|t1|^2+|t2|^2+|t3|^2 - 1 |
    double ortho_rt1 = 0.0;     // | Re(r t1* + t2 t3*) |
    double ortho_rt2 = 0.0;     // | Re(r t2* + t1 t3*) |
    double ortho_rt3 = 0.0;     // | Re(r t3* + t1 t2*) |
    double full = 0.0;        // max-norm of S S^dagger - I
    std::string violated;     // first relation exceeding tolerance, if any

    bool valid() const { return violated.empty(); }
};
UnitarityReport check_smatrix(cplx r, cplx t1, cplx t2, cplx t3, double tol = 1e-10);

// Four-port scattering parameters arranged in the bisymmetric pattern
//   [ r  t1 t2 t3 ]
//   [ t1 r  t3 t2 ]
//   [ t2 t3 r  t1 ]
//   [ t3 t2 t1 r  ].
struct SMatrix4 {
    cplx r, t1, t2, t3;

    Eigen::Matrix4cd matrix() const;
    Eigen::Matrix2cd block_a() const; // feed-side block [[r,t1],[t1,r]]
    Eigen::Matrix2cd block_b() const; // emitter-side block [[t2,t3],[t3,t2]]
};

// Validates the four relations plus full unitarity (tolerance 1e-10);
// throws validation_error naming the first violated relation.
SMatrix4 make_smatrix(cplx r, cplx t1, cplx t2, cplx t3);

// Noise-operator commutators [f_i, f_j^+] = (A A^dagger)_ij for f = A y_i:
// diagonal 1 - |t2|^2 - |t3|^2, off-diagonal -t2 t3* - t3 t2*.
Eigen::Matrix2d noise_commutators(const SMatrix4& s);

// Truncated multimode photon-number state. Occupation tuples map to
// amplitudes; the mode count is fixed at construction.
class FockState {
  public:
    FockState() = default;
    FockState(int mode_count, int n_max = 4);
    static FockState vacuum(int mode_count, int n_max = 4);
    static FockState basis(const std::vector<int>& occupation, int n_max = 4);

    int mode_count() const { return mode_count_; }
    int n_max() const { return n_max_; }
    const std::map<std::vector<int>, cplx>& amplitudes() const { return amp_; }

    cplx amplitude(const std::vector<int>& occupation) const;
    void add(const std::vector<int>& occupation, cplx amplitude); // accumulates
    double norm() const;
    FockState& normalize();
    void prune(double cutoff = 1e-300);

    // Annihilation operator on one mode: sqrt(n) ladder factors.
    FockState annihilate(int mode) const;

  private:
    int mode_count_ = 0;
    int n_max_ = 4;
    std::map<std::vector<int>, cplx> amp_;
};

cplx inner_product(const FockState& a, const FockState& b); // <a|b>

// Rewrites incoming creation operators through the inverse (= conjugate, by
// symmetry + unitarity) scattering matrix and expands over the outgoing
// vacuum. Photon number and norm are conserved; occupations beyond n_max
// raise capacity_error. Input and output are 4-mode states over
// (x1, x2, y1, y2).
FockState transform_state(const SMatrix4& s, const FockState& input);

// Two-mode emission state with the x-sector in vacuum, extracted from a
// 4-mode output (amplitudes of |0 0 m n>). Normalized when requested.
FockState project_x_vacuum(const FockState& four_mode, bool renormalize = true);

// Far-zone picture: amplitude of |m n> multiplied by e^{i (m-n) phi_half},
// phi_half = (kd cos(theta) + beta)/2. Norm preserving.
FockState to_far_zone(const FockState& two_mode, double theta, double kd, double beta);

struct AngularPattern {
    std::vector<double> theta;
    std::vector<double> g1;
    std::vector<double> g2;
    double kd = 0.0;
    double beta = 0.0;
};

// First/second-order correlation patterns of a two-mode emission state,
//   G1 = sin^2(theta) <AF^+ AF>,  G2 = sin^4(theta) <AF^+ AF^+ AF AF>,
// with AF = y1 + y2 and the angular phases carried by the state. The phase
// convention reproduces the printed closed forms: for the matched two-photon
// state, G1 = 2 sin^2(theta) and G2 = 4 sin^4(theta) cos^2((kd cos(theta)+beta)/2).
AngularPattern g1_pattern(const FockState& state, const std::vector<double>& thetas,
                          double kd, double beta);
AngularPattern g2_pattern(const FockState& state, const std::vector<double>& thetas,
                          double kd, double beta);
AngularPattern correlation_patterns(const FockState& state,
                                    const std::vector<double>& thetas, double kd,
                                    double beta);

// Mean emitted intensity split per the observable's decomposition: the
// coherent term sum_i <(B x)_i^+ (B x)_i> over the feed-line state, and the
// flat noise term 1 - |r|^2 - |t1|^2 (= |t2|^2 + |t3|^2).
struct MeanIntensity {
    double coherent = 0.0;
    double noise = 0.0;
    double total = 0.0;
};
MeanIntensity mean_output_intensity(const SMatrix4& s, const FockState& x_state);

} // namespace qscat

#endif
