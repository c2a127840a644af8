#include "qscat/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

namespace qscat {

namespace {
constexpr double kRetentionCut = 1e-12;   // keep |lambda| > cut * max|lambda|
constexpr double kDegenerateSep = 1e-8;   // relative eigenvalue separation
constexpr double kPoleGuard = 1e-8;       // relative pole-distance guard
} // namespace

struct SpectralCache {
    std::once_flag once;
    SpectralData data;
};

KernelMatrix::KernelMatrix(QuadratureGrid grid, Eigen::MatrixXcd entries, double k)
    : grid_(std::move(grid)), entries_(std::move(entries)), k_(k),
      cache_(std::make_shared<SpectralCache>()) {}

Eigen::VectorXd KernelMatrix::weights() const {
    return Eigen::Map<const Eigen::VectorXd>(grid_.weights.data(),
                                             static_cast<long>(grid_.weights.size()));
}

const SpectralData& KernelMatrix::spectral() const {
    std::call_once(cache_->once, [this] { cache_->data = eigen_decompose(*this); });
    return cache_->data;
}

KernelMatrix build_kernel(const KernelFn& green, const QuadratureGrid& grid, double k) {
    grid.validate();
    const int n = static_cast<int>(grid.size());
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = green(grid.nodes[i], grid.nodes[j], k);

    const double scale = G.cwiseAbs().maxCoeff();
    const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(scale, 1e-300))
        throw validation_error("build_kernel: sampled kernel is not symmetric",
                               "max |G_ij - G_ji| = " + std::to_string(asym));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!std::isfinite(G(i, j).real()) || !std::isfinite(G(i, j).imag()))
                throw validation_error("build_kernel: non-finite kernel sample");
    return KernelMatrix(grid, std::move(G), k);
}

SpectralData eigen_decompose(const KernelMatrix& kernel) {
    const int n = kernel.size();
    const Eigen::VectorXd w = kernel.weights();
    const Eigen::MatrixXcd A = kernel.entries() * w.asDiagonal();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.info() != Eigen::Success)
        throw convergence_error("eigen_decompose: eigensolver failed");

    Eigen::VectorXcd lam = es.eigenvalues();
    Eigen::MatrixXcd V = es.eigenvectors();

    // Sort by |lambda| descending and retain the numerically supported part
    // of the compact-operator spectrum.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(lam(a)) > std::abs(lam(b)); });
    const double lmax = std::abs(lam(order[0]));
    int kept = 0;
    while (kept < n && std::abs(lam(order[kept])) > kRetentionCut * lmax) ++kept;
    if (kept == 0) throw convergence_error("eigen_decompose: kernel is numerically zero");

    SpectralData out;
    out.eigenvalues.resize(kept);
    out.modes.resize(n, kept);
    for (int m = 0; m < kept; ++m) {
        const int src = order[m];
        out.eigenvalues(m) = 1.0 / lam(src);
        Eigen::VectorXcd u = V.col(src);
        // Bilinear normalization sum u^2 w = 1. A quasi-defective pair can
        // make the bilinear norm collapse; leave such columns unscaled, they
        // are flagged below.
        const cplx s = (u.array().square() * w.array().cast<cplx>()).sum();
        const double hermitian_norm = (u.array().abs2() * w.array()).sum();
        if (std::abs(s) > 1e-13 * hermitian_norm)
            u /= std::sqrt(s);
        out.modes.col(m) = u;
    }

    for (int i = 0; i < kept; ++i) {
        for (int j = i + 1; j < kept; ++j) {
            const double sep = std::abs(1.0 / out.eigenvalues(i) - 1.0 / out.eigenvalues(j)) /
                               std::abs(1.0 / out.eigenvalues(i));
            if (sep <= kDegenerateSep)
                out.degenerate_pairs.push_back(
                    {i, j, sep, 1.0 / std::max(sep, 1e-300)});
        }
    }
    std::vector<bool> flagged(kept, false);
    for (const auto& p : out.degenerate_pairs) flagged[p.i] = flagged[p.j] = true;
    for (int m = 0; m < kept; ++m)
        if (!flagged[m]) out.clean.push_back(m);
    return out;
}

namespace {

void pole_guard(const KernelMatrix& kernel, cplx nu) {
    const auto& spec = kernel.spectral();
    double best = std::numeric_limits<double>::max();
    cplx nearest = 0.0;
    for (int m = 0; m < spec.count(); ++m) {
        const cplx nun = spec.eigenvalues(m);
        const double d = std::abs(nu - nun) / std::abs(nun);
        if (d < best) {
            best = d;
            nearest = nun;
        }
    }
    if (best < kPoleGuard)
        throw singular_resolvent_error(
            "resolvent: nu within the pole guard radius of an eigenvalue", nearest);
}

Eigen::MatrixXcd resolvent_entries(const KernelMatrix& kernel, cplx nu) {
    const int n = kernel.size();
    const Eigen::VectorXd w = kernel.weights();
    const Eigen::MatrixXcd& G = kernel.entries();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) - nu * (G * w.asDiagonal());
    Eigen::MatrixXcd Gam = A.partialPivLu().solve(G);
    // Exactly symmetric in exact arithmetic; enforce the invariant.
    Gam = 0.5 * (Gam + Gam.transpose()).eval();
    return Gam;
}

} // namespace

ResolventMatrix resolvent_matrix(const KernelMatrix& kernel, cplx nu) {
    if (nu != cplx(0.0)) pole_guard(kernel, nu);
    return ResolventMatrix{resolvent_entries(kernel, nu), nu, kernel.grid(),
                           kernel.wavenumber()};
}

Eigen::VectorXcd solve_fredholm(const KernelMatrix& kernel, cplx nu,
                                const Eigen::VectorXcd& rhs) {
    if (rhs.size() != kernel.size())
        throw validation_error("solve_fredholm: rhs not sampled on the kernel grid");
    const auto R = resolvent_matrix(kernel, nu);
    const Eigen::VectorXd w = kernel.weights();
    return rhs + nu * (R.entries * w.asDiagonal() * rhs);
}

double commutator_closure_residual(const KernelMatrix& kernel, double nu) {
    const int n = kernel.size();
    const Eigen::VectorXd w = kernel.weights();
    const Eigen::MatrixXcd& G = kernel.entries();
    const Eigen::MatrixXcd Gam = resolvent_matrix(kernel, nu).entries;
    const Eigen::MatrixXcd R =
        Eigen::MatrixXcd::Identity(n, n) + nu * (Gam * w.asDiagonal());
    const Eigen::MatrixXcd lhs =
        R * G.imag().cast<cplx>() * R.adjoint();
    return (lhs - Gam.imag().cast<cplx>()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd noise_commutator_matrix(const KernelMatrix& kernel, double nu,
                                        const CommutatorScale& scale) {
    scale.validate();
    const Eigen::MatrixXcd Gam = resolvent_matrix(kernel, nu).entries;
    return (-scale.kappa()) * (Gam - kernel.entries()).imag();
}

std::vector<double> noise_mode_commutators(const SpectralData& spec, double nu,
                                           const CommutatorScale& scale) {
    scale.validate();
    std::vector<double> c(spec.count());
    for (int m = 0; m < spec.count(); ++m) {
        const cplx nun = spec.eigenvalues(m);
        if (std::abs(nu - nun) < kPoleGuard * std::abs(nun))
            throw singular_resolvent_error("noise_mode_commutators: nu at a pole", nun);
        c[m] = -scale.kappa() * nu * std::imag(1.0 / ((nun - nu) * nun));
    }
    return c;
}

VacuumIntensity vacuum_noise_intensity(const KernelMatrix& kernel, double nu,
                                       const CommutatorScale& scale,
                                       const Eigen::VectorXcd& incident) {
    const int n = kernel.size();
    const auto& spec = kernel.spectral();
    const auto c = noise_mode_commutators(spec, nu, scale);

    VacuumIntensity out;
    out.noise_normal = Eigen::VectorXd::Zero(n);
    out.noise_antinormal = Eigen::VectorXd::Zero(n);
    for (int m = 0; m < spec.count(); ++m) {
        const Eigen::VectorXd dens = spec.modes.col(m).cwiseAbs2();
        if (c[m] < 0.0)
            out.noise_normal += (-c[m]) * dens;
        else
            out.noise_antinormal += c[m] * dens;
    }
    out.coherent = Eigen::VectorXd::Zero(n);
    if (incident.size() != 0) {
        const Eigen::VectorXcd E = solve_fredholm(kernel, nu, incident);
        out.coherent = E.cwiseAbs2();
    }
    out.total = out.coherent + out.noise_normal;
    return out;
}

double spectral_identity_residual(const SpectralData& spec, const KernelMatrix& kernel) {
    const Eigen::VectorXd w = kernel.weights();
    const Eigen::MatrixXcd& U = spec.modes;
    const Eigen::MatrixXcd WU = w.asDiagonal() * U;
    // S_nm = sum_i u_n u_m^* w_i ; R_nm = sum_ij Im(G) u_n(x_i) u_m^*(x_j) w_i w_j
    const Eigen::MatrixXcd S = U.transpose() * (w.asDiagonal() * U.conjugate());
    const Eigen::MatrixXcd R =
        WU.transpose() * kernel.entries().imag().cast<cplx>() * WU.conjugate();
    double worst = 0.0;
    for (int nn = 0; nn < spec.count(); ++nn)
        for (int mm = 0; mm < spec.count(); ++mm) {
            const cplx lhs = (1.0 / spec.eigenvalues(nn) -
                              std::conj(1.0 / spec.eigenvalues(mm))) * S(nn, mm);
            worst = std::max(worst, std::abs(lhs - cplx(0, 2) * R(nn, mm)));
        }
    return worst;
}

double noise_expansion_residual(const KernelMatrix& kernel, double nu,
                                const CommutatorScale& scale) {
    const auto& spec = kernel.spectral();
    const auto c = noise_mode_commutators(spec, nu, scale);
    const Eigen::MatrixXd N = noise_commutator_matrix(kernel, nu, scale);
    Eigen::MatrixXcd recon = Eigen::MatrixXcd::Zero(kernel.size(), kernel.size());
    for (int m = 0; m < spec.count(); ++m)
        recon += c[m] * (spec.modes.col(m) * spec.modes.col(m).adjoint());
    return (N.cast<cplx>() - recon).cwiseAbs().maxCoeff();
}

} // namespace qscat
