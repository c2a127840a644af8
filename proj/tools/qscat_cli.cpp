// Command-line front end: configuration parsing, solver dispatch,
// verification suites, and plot-ready artifact emission.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical non-convergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qscat/antenna.hpp"
#include "qscat/cylinder2d.hpp"
#include "qscat/fredholm.hpp"
#include "qscat/io.hpp"
#include "qscat/layer1d.hpp"
#include "qscat/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using qscat::cplx;
using qscat::io::ordered_json;

namespace {

struct RunConfig {
    fs::path out_dir = "out";
    int grid_order = 64;
    int modes = 0; // 0 -> automatic cutoff
    std::vector<double> eta_schedule = {0.2, 0.1, 0.05};
    double cutoff_scale = 40.0;
    int theta_points = 721;
    double tolerance_override = 0.0;

    // layer / cylinder geometry
    double epsilon = 2.25;
    double length = 1.0;
    double radius = 1.0;
    double k = 2.0;

    // antenna parameters (default: matched feed, uncoupled lines)
    cplx r = 0.0, t1 = 0.0;
    cplx t2 = cplx(1.0 / std::sqrt(2.0), 0.0);
    cplx t3 = cplx(0.0, -1.0 / std::sqrt(2.0));
    double kd = M_PI;
    double beta = 0.0;
};

cplx read_cplx(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2)
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw qscat::validation_error("config: complex values are numbers or [re, im]");
}

void load_config(RunConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw qscat::validation_error("config file not found: " + path.string());
    json j = json::parse(in);
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("grid_order")) cfg.grid_order = j["grid_order"].get<int>();
    if (j.contains("modes")) cfg.modes = j["modes"].get<int>();
    if (j.contains("eta_schedule"))
        cfg.eta_schedule = j["eta_schedule"].get<std::vector<double>>();
    if (j.contains("cutoff_scale")) cfg.cutoff_scale = j["cutoff_scale"].get<double>();
    if (j.contains("theta_points")) cfg.theta_points = j["theta_points"].get<int>();
    if (j.contains("tolerance_override"))
        cfg.tolerance_override = j["tolerance_override"].get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("length")) cfg.length = j["length"].get<double>();
    if (j.contains("radius")) cfg.radius = j["radius"].get<double>();
    if (j.contains("k")) cfg.k = j["k"].get<double>();
    if (j.contains("kd")) cfg.kd = j["kd"].get<double>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
    if (j.contains("r")) cfg.r = read_cplx(j["r"]);
    if (j.contains("t1")) cfg.t1 = read_cplx(j["t1"]);
    if (j.contains("t2")) cfg.t2 = read_cplx(j["t2"]);
    if (j.contains("t3")) cfg.t3 = read_cplx(j["t3"]);
}

void prepare_out(RunConfig& cfg) {
    if (const char* env = std::getenv("QSCAT_OUT")) cfg.out_dir = env; // env override
    fs::create_directories(cfg.out_dir);
}

ordered_json noise_schedule_json(
    const std::vector<double>& etas, double cutoff_scale,
    const std::function<qscat::NoiseTail(double, double)>& eval) {
    ordered_json arr = ordered_json::array();
    for (double eta : etas) {
        const double K = cutoff_scale / eta;
        const qscat::NoiseTail t = eval(eta, K);
        arr.push_back({{"eta", eta},
                       {"cutoff", K},
                       {"value_re", t.value.real()},
                       {"value_im", t.value.imag()},
                       {"magnitude", std::abs(t.value)},
                       {"reference", t.reference},
                       {"ratio", std::abs(t.value) / t.reference},
                       {"error_estimate", t.error_estimate}});
    }
    return arr;
}

int run_layer(RunConfig cfg) {
    prepare_out(cfg);
    const qscat::LayerConfig lc{cfg.epsilon, cfg.length, cfg.k};
    lc.validate();

    const qscat::QuadratureGrid grid =
        qscat::gauss_legendre(cfg.grid_order, 0.0, lc.length);

    qscat::io::CsvWriter csv(cfg.out_dir / "layer_kernel.csv");
    csv.header({"x", "xp", "re", "im"});
    for (double x : grid.nodes)
        for (double xp : grid.nodes) {
            const cplx g = qscat::layer_resolvent_kernel(lc, x, xp);
            csv.numeric_row({x, xp, g.real(), g.imag()});
        }

    ordered_json poles = ordered_json::array();
    if (lc.epsilon > 1.0) {
        const qscat::PoleSet ps = qscat::layer_poles(lc, -10, 10);
        for (const auto& p : ps.poles)
            poles.push_back({{"n", p.n},
                             {"re_k", p.k.real()},
                             {"im_k", p.k.imag()},
                             {"residual", p.residual}});
    }
    qscat::io::write_json(cfg.out_dir / "layer_poles.json", poles);

    // Nystrom cross-check on the same grid, plus the conjugation spot check.
    const qscat::KernelMatrix kernel = qscat::build_kernel(
        [](double x, double xp, double k) { return qscat::green_free_1d(x, xp, k); },
        grid, lc.k);
    const Eigen::MatrixXcd Gam = qscat::resolvent_matrix(kernel, lc.nu()).entries;
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < kernel.size(); ++i)
        for (int j = 0; j < kernel.size(); ++j) {
            const cplx exact =
                qscat::layer_resolvent_kernel(lc, grid.nodes[i], grid.nodes[j]);
            scale = std::max(scale, std::abs(exact));
            err = std::max(err, std::abs(Gam(i, j) - exact));
        }

    const double xa = 0.3 * lc.length, xb = 0.7 * lc.length;
    const cplx gp = qscat::layer_resolvent_kernel(lc, xa, xb, lc.k);
    const cplx gm = qscat::layer_resolvent_kernel(lc, xa, xb, -lc.k);
    const double conj_res = std::abs(gm - std::conj(gp));

    ordered_json report{
        {"config",
         {{"epsilon", lc.epsilon},
          {"length", lc.length},
          {"k", lc.k},
          {"grid_order", cfg.grid_order}}},
        {"nystrom_vs_closed_form_max_rel_error", err / scale},
        {"conjugation_check",
         {{"result", conj_res < 1e-12 ? "PASS" : "FAIL"}, {"residual", conj_res}}},
        {"noise_tail",
         noise_schedule_json(cfg.eta_schedule, cfg.cutoff_scale,
                             [&](double eta, double K) {
                                 return qscat::layer_noise_integral(
                                     lc, 0.4 * lc.length, 0.6 * lc.length, K, eta);
                             })}};
    qscat::io::write_json(cfg.out_dir / "layer_noise_report.json", report);
    std::cout << "layer: wrote layer_kernel.csv, layer_poles.json, "
                 "layer_noise_report.json\n";
    return 0;
}

int run_cylinder(RunConfig cfg) {
    prepare_out(cfg);
    qscat::CylinderConfig cc{cfg.epsilon, cfg.radius, cfg.k, cfg.modes};
    cc.validate();

    qscat::io::CsvWriter csv(cfg.out_dir / "cylinder_kernel.csv");
    csv.header({"rho", "phi", "rhop", "phip", "re", "im"});
    const int nr = 6, np = 8;
    const qscat::PolarPoint q{0.5 * cc.radius, M_PI / 3.0};
    for (int ir = 1; ir <= nr; ++ir)
        for (int ip = 0; ip < np; ++ip) {
            const qscat::PolarPoint p{cc.radius * ir / (nr + 1.0), 2.0 * M_PI * ip / np};
            if (qscat::chord(p, q) < 1e-6 * cc.radius) continue;
            const cplx g = qscat::cylinder_resolvent(p, q, cc);
            csv.numeric_row({p.rho, p.phi, q.rho, q.phi, g.real(), g.imag()});
        }

    ordered_json wn_table = ordered_json::array();
    const double se = std::sqrt(cc.epsilon);
    for (int n = 0; n <= cc.mode_cutoff(); ++n) {
        const cplx w = qscat::wn(n, cc);
        const cplx hd = qscat::specfun::hankel1_deriv(n, cplx(cc.k * cc.radius, 0.0));
        const cplx h = qscat::specfun::hankel1(n, cplx(cc.k * cc.radius, 0.0));
        const cplx jv = qscat::specfun::bessel_j(n, cplx(cc.k * se * cc.radius, 0.0));
        const cplx jd =
            qscat::specfun::bessel_j_deriv(n, cplx(cc.k * se * cc.radius, 0.0));
        wn_table.push_back({{"n", n},
                            {"re", w.real()},
                            {"im", w.imag()},
                            {"denominator_magnitude", std::abs(hd * jv - se * h * jd)}});
    }
    qscat::io::write_json(cfg.out_dir / "cylinder_wn.json", wn_table);

    const qscat::PolarPoint p{0.4 * cc.radius, 0.0}, q2{0.6 * cc.radius, M_PI / 3.0};
    ordered_json report{
        {"config",
         {{"epsilon", cc.epsilon},
          {"radius", cc.radius},
          {"k", cc.k},
          {"modes", cc.mode_cutoff()}}},
        {"noise_tail",
         noise_schedule_json(cfg.eta_schedule, cfg.cutoff_scale,
                             [&](double eta, double K) {
                                 return qscat::cylinder_noise_integral(p, q2, cc, K, eta);
                             })}};
    qscat::io::write_json(cfg.out_dir / "cylinder_noise_report.json", report);
    std::cout << "cylinder: wrote cylinder_kernel.csv, cylinder_wn.json, "
                 "cylinder_noise_report.json\n";
    return 0;
}

int run_antenna(RunConfig cfg) {
    prepare_out(cfg);
    const qscat::SMatrix4 s = qscat::make_smatrix(cfg.r, cfg.t1, cfg.t2, cfg.t3);

    // Single photon in each feed line, emitters in vacuum.
    const qscat::FockState input = qscat::FockState::basis({1, 1, 0, 0});
    const qscat::FockState output = qscat::transform_state(s, input);
    const qscat::FockState emission = qscat::project_x_vacuum(output);

    std::vector<double> thetas(cfg.theta_points);
    for (int i = 0; i < cfg.theta_points; ++i)
        thetas[i] = M_PI * i / (cfg.theta_points - 1.0);
    const qscat::AngularPattern pat =
        qscat::correlation_patterns(emission, thetas, cfg.kd, cfg.beta);

    qscat::io::CsvWriter csv(cfg.out_dir / "antenna_pattern.csv");
    csv.header({"theta_rad", "g1", "g2"});
    for (std::size_t i = 0; i < thetas.size(); ++i)
        csv.numeric_row({pat.theta[i], pat.g1[i], pat.g2[i]});

    ordered_json state = ordered_json::array();
    for (const auto& [occ, amp] : output.amplitudes())
        state.push_back({{"occupation", occ}, {"re", amp.real()}, {"im", amp.imag()}});
    qscat::io::write_json(cfg.out_dir / "antenna_state.json", state);

    const Eigen::Matrix2d nc = qscat::noise_commutators(s);
    const qscat::MeanIntensity mi =
        qscat::mean_output_intensity(s, qscat::FockState::basis({1, 1}));
    ordered_json noise{{"commutator",
                        {{"d11", nc(0, 0)},
                         {"d12", nc(0, 1)},
                         {"d21", nc(1, 0)},
                         {"d22", nc(1, 1)}}},
                       {"mean_intensity",
                        {{"coherent", mi.coherent},
                         {"noise", mi.noise},
                         {"total", mi.total}}}};
    qscat::io::write_json(cfg.out_dir / "antenna_noise.json", noise);
    std::cout << "antenna: wrote antenna_pattern.csv, antenna_state.json, "
                 "antenna_noise.json\n";
    return 0;
}

int run_verify(RunConfig cfg) {
    prepare_out(cfg);
    qscat::verify::Options opt;
    opt.grid_order = cfg.grid_order;
    opt.eta_schedule = cfg.eta_schedule;
    opt.cutoff_scale = cfg.cutoff_scale;
    opt.tolerance_override = cfg.tolerance_override;
    const auto results = qscat::verify::run_all(opt);
    qscat::io::write_json(cfg.out_dir / "verify_report.json",
                          qscat::verify::report_json(results));
    for (const auto& r : results)
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": measured "
                  << qscat::io::fmt17(r.measured) << " (" << r.comparison << " "
                  << qscat::io::fmt17(r.threshold) << ")\n";
    // FAIL entries do not change the exit code; the report is the product.
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qscat: resolvent workbench for quantum light scattering"};
    app.require_subcommand(1);

    // Flag values land in a staging struct so that flags given on the command
    // line override the config file.
    RunConfig flags;
    std::string config_path, out_dir, eta_csv;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--grid-order", flags.grid_order, "quadrature order");
        sub->add_option("--modes", flags.modes, "azimuthal mode cutoff (0 = auto)");
        sub->add_option("--eta-schedule", eta_csv, "comma-separated damping schedule");
        sub->add_option("--theta-points", flags.theta_points, "pattern sample count");
    };

    CLI::App* layer = app.add_subcommand("layer", "planar dielectric layer resolvent");
    CLI::App* cyl = app.add_subcommand("cylinder", "dielectric cylinder resolvent");
    CLI::App* ant = app.add_subcommand("antenna", "two-element quantum antenna");
    CLI::App* ver = app.add_subcommand("verify", "run the verification suites");
    for (CLI::App* sub : {layer, cyl, ant, ver}) add_common(sub);

    layer->add_option("--epsilon", flags.epsilon, "relative permittivity");
    layer->add_option("--length", flags.length, "slab thickness");
    layer->add_option("--k", flags.k, "wavenumber");
    cyl->add_option("--epsilon", flags.epsilon, "relative permittivity");
    cyl->add_option("--radius", flags.radius, "cylinder radius");
    cyl->add_option("--k", flags.k, "wavenumber");
    ant->add_option("--kd", flags.kd, "element spacing times wavenumber");
    ant->add_option("--beta", flags.beta, "feed phase shift");
    ver->add_option("--tolerance", flags.tolerance_override,
                    "override every upper-bound suite tolerance");

    CLI11_PARSE(app, argc, argv);
    CLI::App* active = app.get_subcommands().front();

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config(cfg, config_path);

        auto given = [&](const std::string& name) {
            const CLI::Option* opt = active->get_option_no_throw(name);
            return opt && opt->count() > 0;
        };
        if (given("--grid-order")) cfg.grid_order = flags.grid_order;
        if (given("--modes")) cfg.modes = flags.modes;
        if (given("--theta-points")) cfg.theta_points = flags.theta_points;
        if (given("--epsilon")) cfg.epsilon = flags.epsilon;
        if (given("--length")) cfg.length = flags.length;
        if (given("--radius")) cfg.radius = flags.radius;
        if (given("--k")) cfg.k = flags.k;
        if (given("--kd")) cfg.kd = flags.kd;
        if (given("--beta")) cfg.beta = flags.beta;
        if (given("--tolerance")) cfg.tolerance_override = flags.tolerance_override;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!eta_csv.empty()) {
            cfg.eta_schedule.clear();
            std::stringstream ss(eta_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.eta_schedule.push_back(std::stod(tok));
        }

        if (active == layer) return run_layer(cfg);
        if (active == cyl) return run_cylinder(cfg);
        if (active == ant) return run_antenna(cfg);
        if (active == ver) return run_verify(cfg);
    } catch (const qscat::validation_error& e) {
        std::cerr << "validation failure: " << e.what();
        if (!e.detail.empty()) std::cerr << " [" << e.detail << "]";
        std::cerr << "\n";
        return 2;
    } catch (const qscat::domain_error& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    } catch (const qscat::singularity_error& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    } catch (const qscat::convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const qscat::truncation_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const qscat::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
