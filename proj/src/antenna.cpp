#include "qscat/antenna.hpp"

#include <algorithm>
#include <cmath>

namespace qscat {

namespace {
const cplx I(0.0, 1.0);

double sq(double x) { return x * x; }
} // namespace

UnitarityReport check_smatrix(cplx r, cplx t1, cplx t2, cplx t3, double tol) {
    UnitarityReport rep;
    rep.norm_residual = std::abs(std::norm(r) + std::norm(t1) + std::norm(t2) + std::norm(t3) - 1.0);
    rep.ortho_rt1 = std::abs(std::real(r * std::conj(t1) + t2 * std::conj(t3)));
    rep.ortho_rt2 = std::abs(std::real(r * std::conj(t2) + t1 * std::conj(t3)));
    rep.ortho_rt3 = std::abs(std::real(r * std::conj(t3) + t1 * std::conj(t2)));
    SMatrix4 s{r, t1, t2, t3};
    const Eigen::Matrix4cd m = s.matrix();
    rep.full = (m * m.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
    if (rep.norm_residual > tol) rep.violated = "norm relation (|r|^2+|t1|^2+|t2|^2+|t3|^2 = 1)";
    else if (rep.ortho_rt1 > tol) rep.violated = "orthogonality relation Re(r t1* + t2 t3*) = 0";
    else if (rep.ortho_rt2 > tol) rep.violated = "orthogonality relation Re(r t2* + t1 t3*) = 0";
    else if (rep.ortho_rt3 > tol) rep.violated = "orthogonality relation Re(r t3* + t1 t2*) = 0";
    else if (rep.full > tol) rep.violated = "full 4x4 unitarity";
    return rep;
}

Eigen::Matrix4cd SMatrix4::matrix() const {
    Eigen::Matrix4cd m;
    m << r, t1, t2, t3,
         t1, r, t3, t2,
         t2, t3, r, t1,
         t3, t2, t1, r;
    return m;
}

Eigen::Matrix2cd SMatrix4::block_a() const {
    Eigen::Matrix2cd m;
    m << r, t1, t1, r;
    return m;
}

Eigen::Matrix2cd SMatrix4::block_b() const {
    Eigen::Matrix2cd m;
    m << t2, t3, t3, t2;
    return m;
}

SMatrix4 make_smatrix(cplx r, cplx t1, cplx t2, cplx t3) {
    const UnitarityReport rep = check_smatrix(r, t1, t2, t3);
    if (!rep.valid())
        throw validation_error("make_smatrix: scattering matrix is not unitary",
                               rep.violated);
    return SMatrix4{r, t1, t2, t3};
}

Eigen::Matrix2d noise_commutators(const SMatrix4& s) {
    const Eigen::Matrix2cd a = s.block_a();
    const Eigen::Matrix2cd c = a * a.adjoint();
    Eigen::Matrix2d out;
    out << c(0, 0).real(), c(0, 1).real(), c(1, 0).real(), c(1, 1).real();
    return out;
}

FockState::FockState(int mode_count, int n_max) : mode_count_(mode_count), n_max_(n_max) {
    if (mode_count < 1 || n_max < 0) throw domain_error("FockState: bad dimensions");
}

FockState FockState::vacuum(int mode_count, int n_max) {
    FockState s(mode_count, n_max);
    s.amp_[std::vector<int>(mode_count, 0)] = 1.0;
    return s;
}

FockState FockState::basis(const std::vector<int>& occupation, int n_max) {
    FockState s(static_cast<int>(occupation.size()), n_max);
    for (int n : occupation)
        if (n < 0 || n > n_max) throw capacity_error("FockState: occupation beyond n_max");
    s.amp_[occupation] = 1.0;
    return s;
}

cplx FockState::amplitude(const std::vector<int>& occ) const {
    const auto it = amp_.find(occ);
    return it == amp_.end() ? cplx(0.0) : it->second;
}

void FockState::add(const std::vector<int>& occ, cplx amplitude) {
    if (static_cast<int>(occ.size()) != mode_count_)
        throw domain_error("FockState::add: wrong mode count");
    for (int n : occ)
        if (n < 0 || n > n_max_) throw capacity_error("FockState: occupation beyond n_max");
    amp_[occ] += amplitude;
}

double FockState::norm() const {
    double s = 0.0;
    for (const auto& [occ, a] : amp_) s += std::norm(a);
    return std::sqrt(s);
}

FockState& FockState::normalize() {
    const double n = norm();
    if (n == 0.0) throw domain_error("FockState::normalize: zero state");
    for (auto& [occ, a] : amp_) a /= n;
    return *this;
}

void FockState::prune(double cutoff) {
    for (auto it = amp_.begin(); it != amp_.end();)
        it = (std::abs(it->second) <= cutoff) ? amp_.erase(it) : std::next(it);
}

FockState FockState::annihilate(int mode) const {
    if (mode < 0 || mode >= mode_count_) throw domain_error("annihilate: bad mode");
    FockState out(mode_count_, n_max_);
    for (const auto& [occ, a] : amp_) {
        if (occ[mode] == 0) continue;
        std::vector<int> o = occ;
        const double f = std::sqrt(static_cast<double>(o[mode]));
        o[mode] -= 1;
        out.amp_[o] += f * a;
    }
    return out;
}

cplx inner_product(const FockState& a, const FockState& b) {
    if (a.mode_count() != b.mode_count())
        throw domain_error("inner_product: mode counts differ");
    cplx s = 0.0;
    for (const auto& [occ, amp] : a.amplitudes()) s += std::conj(amp) * b.amplitude(occ);
    return s;
}

FockState transform_state(const SMatrix4& s, const FockState& input) {
    if (input.mode_count() != 4)
        throw domain_error("transform_state: expects the 4-mode (x1,x2,y1,y2) space");
    const UnitarityReport rep = check_smatrix(s.r, s.t1, s.t2, s.t3);
    if (!rep.valid())
        throw validation_error("transform_state: invalid scattering matrix", rep.violated);

    // Incoming creation operators rewritten through the inverse matrix; for
    // the symmetric unitary pattern the inverse is the entrywise conjugate.
    const Eigen::Matrix4cd M = s.matrix().conjugate();

    // Operator polynomials over outgoing creation operators: multi-index
    // power -> coefficient.
    using Poly = std::map<std::vector<int>, cplx>;
    FockState out(4, input.n_max());
    for (const auto& [occ, c] : input.amplitudes()) {
        double fact = 1.0;
        for (int j = 0; j < 4; ++j)
            for (int t = 2; t <= occ[j]; ++t) fact *= t;
        Poly poly{{std::vector<int>(4, 0), c / std::sqrt(fact)}};
        for (int j = 0; j < 4; ++j) {
            for (int rep_i = 0; rep_i < occ[j]; ++rep_i) {
                Poly next;
                for (const auto& [pw, pc] : poly) {
                    for (int m = 0; m < 4; ++m) {
                        if (M(j, m) == cplx(0.0)) continue;
                        std::vector<int> np = pw;
                        np[m] += 1;
                        next[np] += pc * M(j, m);
                    }
                }
                poly.swap(next);
            }
        }
        for (const auto& [pw, pc] : poly) {
            double f = 1.0;
            for (int m = 0; m < 4; ++m)
                for (int t = 2; t <= pw[m]; ++t) f *= t;
            out.add(pw, pc * std::sqrt(f));
        }
    }
    out.prune(1e-14 * std::max(1.0, out.norm()));
    return out;
}

FockState project_x_vacuum(const FockState& four_mode, bool renormalize) {
    if (four_mode.mode_count() != 4)
        throw domain_error("project_x_vacuum: expects a 4-mode state");
    FockState out(2, four_mode.n_max());
    for (const auto& [occ, a] : four_mode.amplitudes())
        if (occ[0] == 0 && occ[1] == 0) out.add({occ[2], occ[3]}, a);
    if (renormalize) out.normalize();
    return out;
}

FockState to_far_zone(const FockState& two_mode, double theta, double kd, double beta) {
    if (two_mode.mode_count() != 2)
        throw domain_error("to_far_zone: expects a two-mode state");
    const double phi_half = 0.5 * (kd * std::cos(theta) + beta);
    FockState out(2, two_mode.n_max());
    for (const auto& [occ, a] : two_mode.amplitudes())
        out.add(occ, a * std::exp(I * (double(occ[0] - occ[1]) * phi_half)));
    return out;
}

namespace {

// Per-photon element phase chi = (kd cos(theta) + beta)/4, so a |2 0> - |0 2>
// pair carries e^{+-i (kd cos(theta)+beta)/2}; this reproduces the printed
// closed forms of the matched-state patterns.
FockState pattern_phase(const FockState& s, double theta, double kd, double beta) {
    const double chi = 0.25 * (kd * std::cos(theta) + beta);
    FockState out(2, s.n_max());
    for (const auto& [occ, a] : s.amplitudes())
        out.add(occ, a * std::exp(I * (double(occ[0] - occ[1]) * chi)));
    return out;
}

FockState af_apply(const FockState& s) {
    FockState a = s.annihilate(0);
    const FockState b = s.annihilate(1);
    for (const auto& [occ, amp] : b.amplitudes()) a.add(occ, amp);
    return a;
}

} // namespace

AngularPattern correlation_patterns(const FockState& state,
                                    const std::vector<double>& thetas, double kd,
                                    double beta) {
    if (state.mode_count() != 2)
        throw domain_error("correlation_patterns: expects a two-mode emission state");
    AngularPattern out;
    out.kd = kd;
    out.beta = beta;
    out.theta = thetas;
    out.g1.reserve(thetas.size());
    out.g2.reserve(thetas.size());
    for (const double th : thetas) {
        const FockState ph = pattern_phase(state, th, kd, beta);
        const FockState af1 = af_apply(ph);
        const FockState af2 = af_apply(af1);
        const double n1 = af1.norm(), n2 = af2.norm();
        out.g1.push_back(sq(std::sin(th)) * n1 * n1);
        out.g2.push_back(sq(sq(std::sin(th))) * n2 * n2);
    }
    return out;
}

AngularPattern g1_pattern(const FockState& state, const std::vector<double>& thetas,
                          double kd, double beta) {
    AngularPattern p = correlation_patterns(state, thetas, kd, beta);
    p.g2.clear();
    return p;
}

AngularPattern g2_pattern(const FockState& state, const std::vector<double>& thetas,
                          double kd, double beta) {
    AngularPattern p = correlation_patterns(state, thetas, kd, beta);
    p.g1.clear();
    return p;
}

MeanIntensity mean_output_intensity(const SMatrix4& s, const FockState& x_state) {
    if (x_state.mode_count() != 2)
        throw domain_error("mean_output_intensity: expects the two feed modes");
    const UnitarityReport rep = check_smatrix(s.r, s.t1, s.t2, s.t3);
    if (!rep.valid())
        throw validation_error("mean_output_intensity: invalid scattering matrix",
                               rep.violated);

    // N_jk = <x_j^+ x_k> from ladder action.
    Eigen::Matrix2cd N;
    const FockState a0 = x_state.annihilate(0), a1 = x_state.annihilate(1);
    N(0, 0) = inner_product(a0, a0);
    N(0, 1) = inner_product(a0, a1);
    N(1, 0) = inner_product(a1, a0);
    N(1, 1) = inner_product(a1, a1);

    const Eigen::Matrix2cd B = s.block_b();
    MeanIntensity out;
    out.coherent = std::real((B.adjoint() * B * N.transpose()).trace());
    out.noise = 1.0 - std::norm(s.r) - std::norm(s.t1);
    out.total = out.coherent + out.noise;
    return out;
}

} // namespace qscat
