#include "qscat/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qscat/cylinder2d.hpp"
#include "qscat/fredholm.hpp"
#include "qscat/layer1d.hpp"

namespace qscat::verify {

namespace {

SuiteResult bound(std::string name, double measured, double threshold,
                  std::string note = {}) {
    SuiteResult r{std::move(name), measured, threshold, '<', measured < threshold,
                  std::move(note)};
    return r;
}

SuiteResult floor_check(std::string name, double measured, double threshold,
                        std::string note = {}) {
    SuiteResult r{std::move(name), measured, threshold, '>', measured > threshold,
                  std::move(note)};
    return r;
}

} // namespace

std::vector<SuiteResult> run_all(const Options& opt) {
    std::vector<SuiteResult> out;

    // Canonical layer configuration of the closed-form demonstrations.
    const LayerConfig lcfg{2.25, 1.0, 2.0};
    const QuadratureGrid grid = gauss_legendre(opt.grid_order, 0.0, lcfg.length);
    const KernelMatrix kernel = build_kernel(
        [](double x, double xp, double k) { return green_free_1d(x, xp, k); }, grid,
        lcfg.k);
    const double nu = lcfg.nu();

    {
        const Eigen::MatrixXcd Gam = resolvent_matrix(kernel, nu).entries;
        const double rel = commutator_closure_residual(kernel, nu) /
                           Gam.imag().cwiseAbs().maxCoeff();
        out.push_back(bound("commutator_closure", rel, 1e-10,
                            "relative max-norm residual, layer kernel kl=2, eps=2.25"));

        const Eigen::VectorXd w = kernel.weights();
        const double hs = ((Gam - kernel.entries()) -
                           nu * Gam * w.asDiagonal() * kernel.entries())
                              .cwiseAbs()
                              .maxCoeff();
        out.push_back(bound("hilbert_schmidt", hs, 1e-10, "max-norm residual"));

        out.push_back(bound("spectral_identity",
                            spectral_identity_residual(kernel.spectral(), kernel), 1e-8,
                            "bilinear spectral identity over retained modes"));
    }

    out.push_back(bound(
        "addition_theorem",
        addition_theorem_residual(1.0, PolarPoint{2.0, 0.0}, PolarPoint{3.0, 1.0}, 40),
        1e-12, "k rho = 2, k rho' = 3, dphi = 1, N = 40"));

    {
        // Branch relations: W reflection and the delta-g two-branch relation.
        // Residuals are relative (|W_n| spans many decades over the n range).
        double worst = 0.0;
        for (double ka : {1.0, 2.0, 3.0}) {
            const CylinderConfig ccfg{2.25, 1.0, ka, 0};
            for (int n = 0; n <= 10; ++n) {
                const cplx lhs = wn(-n, ccfg);
                const cplx rot = wn(n, ccfg, ccfg.k * std::exp(cplx(0.0, M_PI)));
                worst = std::max(worst,
                                 std::abs(lhs + std::conj(rot)) / std::abs(lhs));
            }
            const PolarPoint p{0.4, 0.0}, q{0.6, M_PI / 3.0};
            const cplx dg = delta_g(p, q, ccfg);
            const cplx dgrot = delta_g(p, q, ccfg, ccfg.k * std::exp(cplx(0.0, M_PI)));
            worst = std::max(worst, std::abs(std::conj(dg) - dgrot) / std::abs(dg));
        }
        out.push_back(bound("branch_relation", worst, 1e-8,
                            "W reflection and delta-g two-branch relation, |n| <= 10"));
    }

    {
        // Layer vs cylinder noise-tail contrast along the damping schedule.
        std::vector<double> lr, cr;
        const CylinderConfig ccfg{2.25, 1.0, 2.0, 0};
        const PolarPoint p{0.4, 0.0}, q{0.6, M_PI / 3.0};
        for (double eta : opt.eta_schedule) {
            const double K = opt.cutoff_scale / eta;
            const NoiseTail lt = layer_noise_integral(lcfg, 0.4, 0.6, K, eta);
            lr.push_back(std::abs(lt.value) / lt.reference);
            const NoiseTail ct = cylinder_noise_integral(p, q, ccfg, K, eta);
            cr.push_back(std::abs(ct.value) / ct.reference);
        }
        double quot = 0.0;
        for (std::size_t i = 1; i < lr.size(); ++i)
            quot = std::max(quot, lr[i] / lr[i - 1]);
        out.push_back(bound("layer_noise_monotone", quot, 1.0,
                            "successive ratio quotient along the eta schedule"));
        out.push_back(bound("layer_noise_vanishing", lr.back(), 1e-3,
                            "final |integral| / reference at the smallest damping"));
        out.push_back(floor_check("cylinder_noise_persistence",
                                  *std::min_element(cr.begin(), cr.end()), 1e-2,
                                  "min |integral| / reference along the schedule"));
    }

    {
        const DeltaCheck dc = free_commutator_delta_check(0.1, 400.0);
        out.push_back(bound("delta_identity", dc.deviation, 1e-2,
                            "weak-sense deviation at sigma = 0.1, K = 400"));
    }

    if (opt.tolerance_override > 0.0)
        for (auto& r : out)
            if (r.comparison == '<') {
                r.threshold = opt.tolerance_override;
                r.pass = r.measured < r.threshold;
            }
    return out;
}

io::ordered_json report_json(const std::vector<SuiteResult>& results) {
    io::ordered_json suites = io::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        suites.push_back({{"name", r.name},
                          {"measured", r.measured},
                          {"threshold", r.threshold},
                          {"comparison", std::string(1, r.comparison)},
                          {"pass", r.pass},
                          {"note", r.note}});
    }
    return io::ordered_json{{"all_pass", all}, {"suites", suites}};
}

} // namespace qscat::verify
