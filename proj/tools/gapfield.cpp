// Command-line driver: solve a single configuration, run an eps sweep with
// rate fits, tabulate the quadrature oracle, execute the acceptance suite, or
// render a stored result set.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gapfield/asymptotics.hpp"
#include "gapfield/auxiliary.hpp"
#include "gapfield/coefficients.hpp"
#include "gapfield/conductivity.hpp"
#include "gapfield/config.hpp"
#include "gapfield/kernels.hpp"
#include "gapfield/mesh.hpp"
#include "gapfield/store.hpp"
#include "gapfield/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitAcceptance = 3;

using namespace gapfield;

RunConfig load_config_or_die(const std::string& path, const std::string& out_override,
                             int workers_override) {
    ParseResult parsed = parse_config(path);
    if (!parsed.ok()) {
        std::cerr << "config errors in " << path << ":\n";
        for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
        std::exit(kExitConfig);
    }
    RunConfig cfg = parsed.config;
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (workers_override > 0) cfg.workers = workers_override;
    return cfg;
}

void apply_worker_mode(const RunConfig& cfg) {
    // one worker: thread the kernels; several workers: thread across eps
    if (cfg.workers <= 1 && kernels::openmp_available())
        kernels::set_backend(kernels::Backend::OpenMP);
}

int cmd_solve(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    const GapDomain dom = build_domain(cfg.geometry);
    const Mesh mesh = triangulate(dom, build_mesh_params(cfg.mesh));
    if (cfg.dump_mesh) export_mesh(mesh, cfg.output_dir + "/mesh.txt");
    LinearSystem sys = assemble(mesh, build_coefficients(cfg.coefficients));
    sys.required_tol = cfg.tol;
    const BoundaryData bd = make_boundary_data(dom, build_phi(cfg.boundary));
    const DecompositionResult res = solve_decomposition(sys, bd);

    const MeshQuality q = mesh_quality_report(mesh);
    std::ostringstream os;
    os << "geometry        " << dom.name << " (eps = " << dom.eps << ", mode "
       << (dom.mode == WeightMode::Axisymmetric ? "axisymmetric" : "planar") << ")\n"
       << "mesh            " << q.n_vertices << " vertices, " << q.n_triangles
       << " triangles, " << q.gap_layer_count << " gap layers\n"
       << "a11             " << res.a11 << "\n"
       << "Q               " << res.Q << " (flux route " << res.Q_flux << ")\n"
       << "C1              " << res.C1 << "\n"
       << "flux_residual   " << res.flux_residual << "\n"
       << "cg iterations   v1 " << res.stats_v1.iterations << ", v0 "
       << res.stats_v0.iterations << "\n";
    if (dom.eps < 0.5) {
        const BlowupProbe probe = probe_blowup(res, dom);
        os << "grad mid        " << probe.grad_mid << " (v1 " << probe.grad_mid_v1 << ", v0 "
           << probe.grad_mid_v0 << ")\n"
           << "ratio max       " << probe.ratio_max << "\n";
    }
    std::cout << os.str();
    std::ofstream(cfg.output_dir + "/summary.txt") << os.str();
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    const SweepSpec spec = build_sweep_spec(cfg);
    const std::vector<SweepRecord> records = run_sweep(spec, cfg.workers);
    append_records_csv(cfg.output_dir + "/records.csv", records);
    std::cout << render_records_table(records);

    std::vector<SweepRecord> good;
    for (const auto& r : records)
        if (r.ok) good.push_back(r);
        else std::cerr << "eps " << r.eps << " failed: " << r.error << "\n";

    if (good.size() >= 3) {
        const GapDomain dom0 = spec.domain_family(good.front().eps);
        const RatePrediction pred = predict_a11_rate(dom0.dimension(), dom0.m);
        std::ofstream fits(cfg.output_dir + "/ratefits.txt", std::ios::app);
        auto emit = [&](const std::string& qname, const RateFit& fit, double pe, bool pass) {
            const std::string line = format_rate_fit_line(qname, fit, pe, pass);
            std::cout << line << "\n";
            fits << line << "\n";
        };
        const RateFit fa =
            fit_rate(good, [](const SweepRecord& r) { return r.a11; }, FitModel::Power);
        emit("a11", fa, pred.exponent,
             std::abs(fa.slope - pred.exponent) <= 0.05 || pred.log_corrected);
        if (pred.log_corrected) {
            const RateFit fl =
                fit_rate(good, [](const SweepRecord& r) { return r.a11; }, FitModel::PowerWithLog);
            emit("a11-log", fl, 1.0, fl.residual_rms < fa.residual_rms);
        }
        // |grad u| at the midpoint carries the same negative exponent as a11
        const RateFit fg =
            fit_rate(good, [](const SweepRecord& r) { return r.grad_mid; }, FitModel::Power);
        emit("grad_mid", fg, pred.exponent,
             std::abs(fg.slope - pred.exponent) <= 0.05 || pred.log_corrected);
        if (good.size() >= 4) {
            const QstarExtrapolation ex = extrapolate_Qstar(good);
            std::cout << "Qstar: "
                      << (ex.has_estimate ? std::to_string(ex.Qstar)
                                          : std::string("no estimate (tail not Cauchy)"))
                      << "\n";
        }
    }
    bool any_fail = false;
    for (const auto& r : records) any_fail = any_fail || !r.ok;
    return any_fail ? kExitSolver : kExitOk;
}

int cmd_oracle(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto& oc = cfg.oracle;
    std::ostringstream os;
    os << "n = " << oc.n << ", m = " << oc.m << ", R0 = " << oc.R0 << "\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %-16s %-16s\n", "eps", "value", "value*rho");
    os << buf;
    std::vector<double> eps, vals;
    for (double e : oc.eps) {
        const double v = a11_quadrature_oracle(oc.n, oc.m, e, oc.R0);
        eps.push_back(e);
        vals.push_back(v);
        const double rho = (e > 0.0 && e < 0.5) ? rho_n_m(oc.n, oc.m, e) : 1.0;
        std::snprintf(buf, sizeof(buf), "%-12.3g %-16.8g %-16.8g\n", e, v, v * rho);
        os << buf;
    }
    if (eps.size() >= 3) {
        const RatePrediction pred = predict_a11_rate(oc.n, oc.m);
        const RateFit fit = fit_rate(eps, vals, FitModel::Power);
        os << format_rate_fit_line("oracle", fit, pred.exponent,
                                   pred.log_corrected ||
                                       std::abs(fit.slope - pred.exponent) <= 0.02)
           << "\n";
        if (pred.log_corrected) {
            const RateFit fl = fit_rate(eps, vals, FitModel::PowerWithLog);
            os << format_rate_fit_line("oracle-log", fl, 1.0,
                                       fl.residual_rms < fit.residual_rms)
               << "\n";
        }
    }
    std::cout << os.str();
    std::ofstream(cfg.output_dir + "/oracle.txt") << os.str();
    return kExitOk;
}

int cmd_verify(int workers, const std::string& out_dir) {
    AcceptanceOptions opts;
    opts.workers = workers;
    opts.verbose = true;
    const std::vector<CriterionResult> results = run_acceptance(opts);
    const std::string rendered = render_verdicts(results);
    std::cout << rendered;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(out_dir + "/verdicts.txt") << rendered;
    }
    return all_pass(results) ? kExitOk : kExitAcceptance;
}

int cmd_report(const RunConfig& cfg) {
    const std::string path = cfg.output_dir + "/records.csv";
    const std::vector<SweepRecord> records = read_records_csv(path);
    if (records.empty()) {
        std::cerr << "report: store at " << path << " holds no records\n";
        return kExitConfig;
    }
    std::cout << render_records_table(records);
    bool ok = true;
    for (const auto& v : store_verdicts(records)) {
        std::printf("%-24s %-4s %s\n", v.name.c_str(), v.pass ? "PASS" : "FAIL",
                    v.measured.c_str());
        ok = ok && v.pass;
    }
    const std::string verdicts = cfg.output_dir + "/verdicts.txt";
    if (std::ifstream vf{verdicts}) std::cout << vf.rdbuf();
    return ok ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gapfield: near-boundary inclusion field solver and rate harness"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    int workers_override = 0;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "run configuration file");
        if (need_config) opt->required();
        sub->add_option("--out", out_override, "output directory override");
        sub->add_option("--workers", workers_override, "sweep worker count");
    };

    CLI::App* solve = app.add_subcommand("solve", "single decomposition solve");
    add_common(solve, true);
    CLI::App* sweep = app.add_subcommand("sweep", "eps sweep with rate fits");
    add_common(sweep, true);
    CLI::App* oracle = app.add_subcommand("oracle", "quadrature-oracle table");
    add_common(oracle, true);
    CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(verify, false);
    CLI::App* report = app.add_subcommand("report", "render a stored result set");
    add_common(report, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify(workers_override > 0 ? workers_override : 1, out_override);
        }
        const RunConfig cfg = load_config_or_die(config_path, out_override, workers_override);
        apply_worker_mode(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (oracle->parsed()) return cmd_oracle(cfg);
        if (report->parsed()) return cmd_report(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitConfig;
}
