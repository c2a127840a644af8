// Python bindings for the main workbench operations.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qscat/antenna.hpp"
#include "qscat/cylinder2d.hpp"
#include "qscat/fredholm.hpp"
#include "qscat/layer1d.hpp"
#include "qscat/verify.hpp"

namespace py = pybind11;
using namespace qscat;

namespace {

KernelMatrix layer_free_kernel(int order, double length, double k) {
    return build_kernel(
        [](double x, double xp, double kk) { return green_free_1d(x, xp, kk); },
        gauss_legendre(order, 0.0, length), k);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "resolvent workbench for quantum light scattering";

    py::register_exception<domain_error>(m, "DomainError");
    py::register_exception<validation_error>(m, "ValidationError");
    py::register_exception<singularity_error>(m, "SingularityError");
    py::register_exception<singular_resolvent_error>(m, "SingularResolventError");
    py::register_exception<convergence_error>(m, "ConvergenceError");
    py::register_exception<truncation_error>(m, "TruncationError");
    py::register_exception<capacity_error>(m, "CapacityError");
    py::register_exception<resonance_error>(m, "ResonanceError");

    // ---- quadrature and special functions ----
    py::class_<QuadratureGrid>(m, "QuadratureGrid")
        .def_readonly("nodes", &QuadratureGrid::nodes)
        .def_readonly("weights", &QuadratureGrid::weights)
        .def_readonly("a", &QuadratureGrid::a)
        .def_readonly("b", &QuadratureGrid::b);
    m.def("gauss_legendre", &gauss_legendre, py::arg("order"), py::arg("a"),
          py::arg("b"));

    m.def("bessel_j", &specfun::bessel_j, py::arg("n"), py::arg("z"));
    m.def("bessel_y", &specfun::bessel_y, py::arg("n"), py::arg("z"));
    m.def("hankel1", &specfun::hankel1, py::arg("n"), py::arg("z"));
    m.def("hankel2", &specfun::hankel2, py::arg("n"), py::arg("z"));
    m.def("bessel_j_deriv", &specfun::bessel_j_deriv, py::arg("n"), py::arg("z"));
    m.def("hankel1_deriv", &specfun::hankel1_deriv, py::arg("n"), py::arg("z"));

    // ---- Fredholm engine ----
    py::class_<KernelMatrix>(m, "KernelMatrix")
        .def_property_readonly("entries", &KernelMatrix::entries)
        .def_property_readonly("nodes",
                               [](const KernelMatrix& k) { return k.grid().nodes; })
        .def_property_readonly("weights",
                               [](const KernelMatrix& k) { return k.grid().weights; })
        .def_property_readonly("k", &KernelMatrix::wavenumber);
    m.def("layer_free_kernel", &layer_free_kernel, py::arg("order"), py::arg("length"),
          py::arg("k"), "Nystrom kernel matrix of e^{ik|x-x'|}/(2ik) on [0, length]");

    py::class_<SpectralData>(m, "SpectralData")
        .def_property_readonly("eigenvalues",
                               [](const SpectralData& s) { return s.eigenvalues; })
        .def_property_readonly("modes", [](const SpectralData& s) { return s.modes; })
        .def_readonly("clean", &SpectralData::clean)
        .def_property_readonly("degenerate_pairs", [](const SpectralData& s) {
            std::vector<std::tuple<int, int, double>> out;
            for (const auto& p : s.degenerate_pairs)
                out.emplace_back(p.i, p.j, p.separation);
            return out;
        });
    m.def("eigen_decompose", &eigen_decompose, py::arg("kernel"));

    m.def(
        "resolvent_matrix",
        [](const KernelMatrix& k, cplx nu) { return resolvent_matrix(k, nu).entries; },
        py::arg("kernel"), py::arg("nu"));
    m.def("solve_fredholm", &solve_fredholm, py::arg("kernel"), py::arg("nu"),
          py::arg("rhs"));
    m.def("commutator_closure_residual", &commutator_closure_residual,
          py::arg("kernel"), py::arg("nu"));

    py::class_<CommutatorScale>(m, "CommutatorScale")
        .def(py::init([](double hbar, double c, double epsilon, double k) {
                 CommutatorScale s{hbar, c, epsilon, k};
                 s.validate();
                 return s;
             }),
             py::arg("hbar") = 1.0, py::arg("c") = 1.0, py::arg("epsilon") = 1.0,
             py::arg("k") = 1.0)
        .def_property_readonly("kappa", &CommutatorScale::kappa);
    m.def("noise_commutator_matrix", &noise_commutator_matrix, py::arg("kernel"),
          py::arg("nu"), py::arg("scale"));
    m.def("noise_mode_commutators", &noise_mode_commutators, py::arg("spectral"),
          py::arg("nu"), py::arg("scale"));
    m.def(
        "vacuum_noise_intensity",
        [](const KernelMatrix& k, double nu, const CommutatorScale& s,
           const Eigen::VectorXcd& incident) {
            const VacuumIntensity v = vacuum_noise_intensity(k, nu, s, incident);
            return py::dict(py::arg("noise_normal") = v.noise_normal,
                            py::arg("noise_antinormal") = v.noise_antinormal,
                            py::arg("coherent") = v.coherent,
                            py::arg("total") = v.total);
        },
        py::arg("kernel"), py::arg("nu"), py::arg("scale"),
        py::arg("incident") = Eigen::VectorXcd());
    m.def("spectral_identity_residual", &spectral_identity_residual, py::arg("spectral"),
          py::arg("kernel"));
    m.def("noise_expansion_residual", &noise_expansion_residual, py::arg("kernel"),
          py::arg("nu"), py::arg("scale"));

    // ---- planar layer ----
    py::class_<LayerConfig>(m, "LayerConfig")
        .def(py::init([](double epsilon, double length, double k) {
                 LayerConfig c{epsilon, length, k};
                 c.validate();
                 return c;
             }),
             py::arg("epsilon"), py::arg("length"), py::arg("k"))
        .def_readonly("epsilon", &LayerConfig::epsilon)
        .def_readonly("length", &LayerConfig::length)
        .def_readonly("k", &LayerConfig::k)
        .def_property_readonly("nu", &LayerConfig::nu)
        .def_property_readonly("fresnel_r", &LayerConfig::fresnel_r);
    m.def("green_free_1d", &green_free_1d, py::arg("x"), py::arg("xp"), py::arg("k"));
    m.def(
        "layer_resolvent_kernel",
        [](const LayerConfig& c, double x, double xp) {
            return layer_resolvent_kernel(c, x, xp);
        },
        py::arg("cfg"), py::arg("x"), py::arg("xp"));
    m.def(
        "layer_poles",
        [](const LayerConfig& c, int n_min, int n_max) {
            std::vector<std::tuple<int, cplx, double>> out;
            for (const auto& p : layer_poles(c, n_min, n_max).poles)
                out.emplace_back(p.n, p.k, p.residual);
            return out;
        },
        py::arg("cfg"), py::arg("n_min"), py::arg("n_max"));
    m.def(
        "layer_noise_integral",
        [](const LayerConfig& c, double x, double xp, double cutoff, double damping) {
            const NoiseTail t = layer_noise_integral(c, x, xp, cutoff, damping);
            return py::dict(py::arg("value") = t.value,
                            py::arg("reference") = t.reference,
                            py::arg("error_estimate") = t.error_estimate);
        },
        py::arg("cfg"), py::arg("x"), py::arg("xp"), py::arg("cutoff"),
        py::arg("damping"));
    m.def("scattered_field", &scattered_field, py::arg("cfg"), py::arg("grid"),
          py::arg("source"), py::arg("eval_points"));

    // ---- cylinder ----
    py::class_<PolarPoint>(m, "PolarPoint")
        .def(py::init<double, double>(), py::arg("rho"), py::arg("phi"))
        .def_readonly("rho", &PolarPoint::rho)
        .def_readonly("phi", &PolarPoint::phi);
    py::class_<CylinderConfig>(m, "CylinderConfig")
        .def(py::init([](double epsilon, double radius, double k, int modes) {
                 CylinderConfig c{epsilon, radius, k, modes};
                 c.validate();
                 return c;
             }),
             py::arg("epsilon"), py::arg("radius"), py::arg("k"), py::arg("modes") = 0)
        .def_readonly("epsilon", &CylinderConfig::epsilon)
        .def_readonly("radius", &CylinderConfig::radius)
        .def_readonly("k", &CylinderConfig::k)
        .def_property_readonly("mode_cutoff", &CylinderConfig::mode_cutoff);
    py::class_<PolarGrid>(m, "PolarGrid")
        .def_readonly("rho", &PolarGrid::rho)
        .def_readonly("phi", &PolarGrid::phi)
        .def_readonly("weight", &PolarGrid::weight);
    m.def("make_polar_grid", &make_polar_grid, py::arg("radius"), py::arg("n_radial"),
          py::arg("n_azimuthal"));
    m.def("green_free_2d", &green_free_2d, py::arg("p"), py::arg("q"), py::arg("k"));
    m.def("wn", py::overload_cast<int, const CylinderConfig&>(&wn), py::arg("n"),
          py::arg("cfg"));
    m.def("wn_at", py::overload_cast<int, const CylinderConfig&, cplx>(&wn),
          py::arg("n"), py::arg("cfg"), py::arg("k"));
    m.def("delta_g",
          py::overload_cast<const PolarPoint&, const PolarPoint&, const CylinderConfig&>(
              &delta_g),
          py::arg("p"), py::arg("q"), py::arg("cfg"));
    m.def("delta_g_at",
          py::overload_cast<const PolarPoint&, const PolarPoint&, const CylinderConfig&,
                            cplx>(&delta_g),
          py::arg("p"), py::arg("q"), py::arg("cfg"), py::arg("k"));
    m.def("cylinder_resolvent", &cylinder_resolvent, py::arg("p"), py::arg("q"),
          py::arg("cfg"));
    m.def(
        "mode_coefficients",
        [](const CylinderConfig& c, const PolarGrid& g, const std::vector<cplx>& s) {
            const ModeCoefficients mc = mode_coefficients(c, g, s);
            return py::dict(py::arg("cutoff") = mc.cutoff, py::arg("a") = mc.a,
                            py::arg("b") = mc.b, py::arg("f") = mc.f);
        },
        py::arg("cfg"), py::arg("grid"), py::arg("incident"));
    m.def("boundary_continuity_residual", &boundary_continuity_residual,
          py::arg("cfg"), py::arg("grid"), py::arg("incident"));
    m.def(
        "cylinder_noise_integral",
        [](const PolarPoint& p, const PolarPoint& q, const CylinderConfig& c,
           double cutoff, double damping) {
            const NoiseTail t = cylinder_noise_integral(p, q, c, cutoff, damping);
            return py::dict(py::arg("value") = t.value,
                            py::arg("reference") = t.reference,
                            py::arg("error_estimate") = t.error_estimate);
        },
        py::arg("p"), py::arg("q"), py::arg("cfg"), py::arg("cutoff"),
        py::arg("damping"));
    m.def("addition_theorem_residual", &addition_theorem_residual, py::arg("k"),
          py::arg("p"), py::arg("q"), py::arg("N"));
    m.def(
        "free_commutator_delta_check",
        [](double sigma, double cutoff) {
            const DeltaCheck d = free_commutator_delta_check(sigma, cutoff);
            return py::dict(py::arg("deviation") = d.deviation,
                            py::arg("total_weight") = d.total_weight,
                            py::arg("tail_estimate") = d.tail_estimate);
        },
        py::arg("sigma"), py::arg("cutoff"));

    // ---- antenna ----
    py::class_<SMatrix4>(m, "SMatrix4")
        .def_readonly("r", &SMatrix4::r)
        .def_readonly("t1", &SMatrix4::t1)
        .def_readonly("t2", &SMatrix4::t2)
        .def_readonly("t3", &SMatrix4::t3)
        .def_property_readonly("matrix", &SMatrix4::matrix);
    m.def("make_smatrix", &make_smatrix, py::arg("r"), py::arg("t1"), py::arg("t2"),
          py::arg("t3"));
    m.def(
        "check_smatrix",
        [](cplx r, cplx t1, cplx t2, cplx t3) {
            const UnitarityReport rep = check_smatrix(r, t1, t2, t3);
            return py::dict(py::arg("norm_residual") = rep.norm_residual, py::arg("ortho_rt1") = rep.ortho_rt1,
                            py::arg("ortho_rt2") = rep.ortho_rt2, py::arg("ortho_rt3") = rep.ortho_rt3,
                            py::arg("full") = rep.full,
                            py::arg("violated") = rep.violated);
        },
        py::arg("r"), py::arg("t1"), py::arg("t2"), py::arg("t3"));
    m.def("noise_commutators", &noise_commutators, py::arg("s"));

    py::class_<FockState>(m, "FockState")
        .def(py::init<int, int>(), py::arg("mode_count"), py::arg("n_max") = 4)
        .def_static("vacuum", &FockState::vacuum, py::arg("mode_count"),
                    py::arg("n_max") = 4)
        .def_static("basis", &FockState::basis, py::arg("occupation"),
                    py::arg("n_max") = 4)
        .def("amplitude", &FockState::amplitude, py::arg("occupation"))
        .def("add", &FockState::add, py::arg("occupation"), py::arg("amplitude"))
        .def("norm", &FockState::norm)
        .def("normalize", &FockState::normalize)
        .def_property_readonly("mode_count", &FockState::mode_count)
        .def_property_readonly(
            "amplitudes", [](const FockState& s) { return s.amplitudes(); });
    m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));
    m.def("transform_state", &transform_state, py::arg("s"), py::arg("input"));
    m.def("project_x_vacuum", &project_x_vacuum, py::arg("state"),
          py::arg("renormalize") = true);
    m.def("to_far_zone", &to_far_zone, py::arg("state"), py::arg("theta"),
          py::arg("kd"), py::arg("beta"));
    m.def(
        "correlation_patterns",
        [](const FockState& st, const std::vector<double>& thetas, double kd,
           double beta) {
            const AngularPattern p = correlation_patterns(st, thetas, kd, beta);
            return py::dict(py::arg("theta") = p.theta, py::arg("g1") = p.g1,
                            py::arg("g2") = p.g2);
        },
        py::arg("state"), py::arg("thetas"), py::arg("kd"), py::arg("beta"));
    m.def(
        "mean_output_intensity",
        [](const SMatrix4& s, const FockState& x) {
            const MeanIntensity mi = mean_output_intensity(s, x);
            return py::dict(py::arg("coherent") = mi.coherent,
                            py::arg("noise") = mi.noise, py::arg("total") = mi.total);
        },
        py::arg("s"), py::arg("x_state"));

    // ---- verification ----
    m.def(
        "run_verification",
        [](double tolerance_override) {
            verify::Options opt;
            opt.tolerance_override = tolerance_override;
            std::vector<py::dict> out;
            for (const auto& r : verify::run_all(opt))
                out.push_back(py::dict(
                    py::arg("name") = r.name, py::arg("measured") = r.measured,
                    py::arg("threshold") = r.threshold,
                    py::arg("comparison") = std::string(1, r.comparison),
                    py::arg("pass") = r.pass));
            return out;
        },
        py::arg("tolerance_override") = 0.0);
}
