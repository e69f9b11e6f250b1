#include "gapfield/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "gapfield/asymptotics.hpp"
#include "gapfield/auxiliary.hpp"
#include "gapfield/coefficients.hpp"
#include "gapfield/conductivity.hpp"
#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/mesh.hpp"
#include "gapfield/phi.hpp"

namespace gapfield {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

const std::vector<double> kSweepEps = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

MeshParams default_mesh() {
    MeshParams p;
    p.h_target = 0.04;
    p.gap_layers = 8;
    p.band_factor = 0.3;
    return p;
}

struct IdentityCompare {
    double nodewise_dev = 0.0;
};

// everything the criteria consume, computed up front so sweeps are shared
struct Context {
    // concentric annulus (criterion 1)
    double annulus_a11 = 0.0;
    double annulus_green = 0.0;
    double annulus_wall_s = 0.0;

    std::vector<SweepRecord> disks;     // criteria 2-5, 10, 11
    double disks_wall_s = 0.0;
    std::vector<SweepRecord> spheres;   // criterion 6
    std::vector<SweepRecord> mprofile;  // criterion 7
    std::vector<SweepRecord> divergence;  // criterion 9

    IdentityCompare ident;                    // criterion 9
    std::vector<double> corr_ubar, corr_utilde;  // criterion 9 negative control

    // trivial data and linearity (criterion 10)
    double trivial_absQ = 0.0;
    double trivial_u_dev = 0.0;
    double trivial_grad_mid = 0.0;
    double linearity_dev = 0.0;
    double affine_dev = 0.0;
    double trivial_green = 0.0;
    double trivial_fluxres_rel = 0.0;

    // quadrature oracle (criterion 8)
    double oracle_slope_22 = 0.0, oracle_slope_23 = 0.0, oracle_slope_42 = 0.0;
    double oracle_logslope_32 = 0.0;
    double oracle_n4_last = 0.0, oracle_n4_prev = 0.0;
    double oracle_wall_s = 0.0;
};

void run_annulus(Context& ctx) {
    const auto t0 = Clock::now();
    const GapDomain dom = make_concentric_annulus(0.5, 1.0);
    MeshParams prm = default_mesh();
    prm.h_target = 0.02;
    const Mesh mesh = triangulate(dom, prm);
    CoefficientPreset ident;
    const CoefficientField A = make_preset(ident);
    const LinearSystem sys = assemble(mesh, A);
    SolveStats stats;
    const ScalarField v1 = solve_v1(sys, &stats);
    ctx.annulus_a11 = energy_product(sys, v1, v1);
    ctx.annulus_green =
        std::abs(boundary_flux(sys, v1, BoundaryTag::Inner) + ctx.annulus_a11) / ctx.annulus_a11;
    ctx.annulus_wall_s = seconds_since(t0);
}

SweepSpec spec_for(std::function<GapDomain(double)> family, const PhiSpec& phi,
                   const CoefficientField& A) {
    SweepSpec spec;
    spec.domain_family = std::move(family);
    spec.eps_list = kSweepEps;
    spec.mesh = default_mesh();
    spec.phi = phi;
    spec.A = A;
    return spec;
}

void run_trivial(Context& ctx) {
    const GapDomain dom = make_eccentric_disks(0.5, 1.0, 1e-3);
    const Mesh mesh = triangulate(dom, default_mesh());
    const CoefficientField A = make_preset({});
    const LinearSystem sys = assemble(mesh, A);

    // constant datum
    const BoundaryData bd_const = make_boundary_data(dom, phi_constant(0.7));
    const DecompositionResult rc = solve_decomposition(sys, bd_const);
    ctx.trivial_absQ = std::abs(rc.Q);
    double dev = 0.0;
    for (double v : rc.u.values) dev = std::max(dev, std::abs(v - 0.7));
    ctx.trivial_u_dev = dev;
    ctx.trivial_grad_mid = norm(probe_gradient(rc.u, {0.0, 0.5 * dom.eps}));

    // linearity in the datum
    const PhiSpec phi1 = phi_linear_xn();
    const BoundaryData bd1 = make_boundary_data(dom, phi1);
    const DecompositionResult r1 = solve_decomposition(sys, bd1);
    const BoundaryData bd2 = make_boundary_data(dom, phi_scaled(phi1, 2.0));
    const DecompositionResult r2 = solve_decomposition(sys, bd2);
    double lin = 0.0;
    for (std::size_t i = 0; i < r1.u.values.size(); ++i)
        lin = std::max(lin, std::abs(r2.u.values[i] - 2.0 * r1.u.values[i]));
    ctx.linearity_dev = lin;

    const BoundaryData bd3 = make_boundary_data(dom, phi_shifted(phi1, 0.3));
    const DecompositionResult r3 = solve_decomposition(sys, bd3);
    double aff = 0.0;
    for (std::size_t i = 0; i < r1.u.values.size(); ++i)
        aff = std::max(aff, std::abs(r3.u.values[i] - (r1.u.values[i] + 0.3)));
    ctx.affine_dev = aff;

    ctx.trivial_green =
        std::abs(boundary_flux(sys, r1.v1, BoundaryTag::Inner) + r1.a11) / r1.a11;
    ctx.trivial_fluxres_rel = std::abs(r1.flux_residual) / (r1.a11 + std::abs(r1.Q));
}

void run_identity_compare(Context& ctx) {
    const GapDomain dom = make_eccentric_disks(0.5, 1.0, 1e-3);
    const Mesh mesh = triangulate(dom, default_mesh());
    const CoefficientField fast = make_preset({});
    CoefficientPreset gen_preset;
    gen_preset.name = "constant-offdiag";
    gen_preset.scale = 1.0;
    gen_preset.a_off = 0.0;  // identity values through the general path
    const CoefficientField general = make_preset(gen_preset);

    const LinearSystem sys_fast = assemble(mesh, fast);
    const LinearSystem sys_gen = assemble(mesh, general);
    const ScalarField v_fast = solve_v1(sys_fast);
    const ScalarField v_gen = solve_v1(sys_gen);
    double dev = 0.0;
    for (std::size_t i = 0; i < v_fast.values.size(); ++i)
        dev = std::max(dev, std::abs(v_fast.values[i] - v_gen.values[i]));
    ctx.ident.nodewise_dev = dev;
}

void run_corrector_checks(Context& ctx) {
    CoefficientPreset p;
    p.name = "constant-offdiag";
    p.scale = 1.0;
    p.a_off = 0.3;
    const CoefficientField A = make_preset(p);
    for (double eps : kSweepEps) {
        const GapDomain dom = make_eccentric_disks(0.5, 1.0, eps);
        const AuxFunction ub = make_ubar(dom);
        const AuxFunction ut = make_utilde(dom, A);
        ctx.corr_ubar.push_back(corrector_flux_check(ub, A).max_scaled_divergence);
        ctx.corr_utilde.push_back(corrector_flux_check(ut, A).max_scaled_divergence);
    }
}

void run_oracle(Context& ctx) {
    const auto t0 = Clock::now();
    const std::vector<double> eps = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    const double R0 = 1.0;
    auto values = [&](int n, int m) {
        std::vector<double> v;
        for (double e : eps) v.push_back(a11_quadrature_oracle(n, m, e, R0));
        return v;
    };
    const auto v22 = values(2, 2), v23 = values(2, 3), v32 = values(3, 2), v42 = values(4, 2);
    ctx.oracle_slope_22 = fit_rate(eps, v22, FitModel::Power).slope;
    ctx.oracle_slope_23 = fit_rate(eps, v23, FitModel::Power).slope;
    ctx.oracle_slope_42 = fit_rate(eps, v42, FitModel::Power).slope;
    ctx.oracle_logslope_32 = fit_rate(eps, v32, FitModel::PowerWithLog).slope;
    ctx.oracle_n4_last = v42.back();
    ctx.oracle_n4_prev = v42[v42.size() - 2];
    ctx.oracle_wall_s = seconds_since(t0);
}

double max_over(const std::vector<SweepRecord>& recs,
                const std::function<double(const SweepRecord&)>& f) {
    double m = -std::numeric_limits<double>::max();
    for (const auto& r : recs)
        if (r.ok) m = std::max(m, f(r));
    return m;
}

double min_over(const std::vector<SweepRecord>& recs,
                const std::function<double(const SweepRecord&)>& f) {
    double m = std::numeric_limits<double>::max();
    for (const auto& r : recs)
        if (r.ok) m = std::min(m, f(r));
    return m;
}

bool all_records_ok(const std::vector<SweepRecord>& recs) {
    if (recs.empty()) return false;
    for (const auto& r : recs)
        if (!r.ok) return false;
    return true;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    Context ctx;
    auto progress = [&](const char* what) {
        if (opts.verbose) std::fprintf(stderr, "[acceptance] %s\n", what);
    };

    progress("concentric annulus");
    run_annulus(ctx);

    const CoefficientField ident = make_preset({});
    progress("disks sweep");
    {
        const auto t0 = Clock::now();
        ctx.disks = run_sweep(
            spec_for([](double e) { return make_eccentric_disks(0.5, 1.0, e); }, phi_linear_xn(),
                     ident),
            opts.workers);
        ctx.disks_wall_s = seconds_since(t0);
    }
    progress("axisymmetric sphere sweep");
    ctx.spheres = run_sweep(
        spec_for(
            [](double e) { return make_eccentric_disks(0.5, 1.0, e, WeightMode::Axisymmetric); },
            phi_linear_xn(), ident),
        opts.workers);
    progress("cubic-profile sweep");
    ctx.mprofile = run_sweep(
        spec_for([](double e) { return make_mprofile(3, 1.0, e); }, phi_linear_xn(), ident),
        opts.workers);
    progress("divergence-form sweep");
    {
        CoefficientPreset p;
        p.name = "constant-offdiag";
        p.scale = 1.0;
        p.a_off = 0.3;
        ctx.divergence = run_sweep(
            spec_for([](double e) { return make_eccentric_disks(0.5, 1.0, e); }, phi_linear_xn(),
                     make_preset(p)),
            opts.workers);
    }
    progress("identity comparison and trivial data");
    run_identity_compare(ctx);
    run_trivial(ctx);
    run_corrector_checks(ctx);
    progress("quadrature oracle");
    run_oracle(ctx);

    std::vector<CriterionResult> out;

    {  // 1: concentric annulus capacitary energy against the closed form
        CriterionResult c;
        c.id = 1;
        c.name = "annulus-capacitance-oracle";
        const double expected = 2.0 * M_PI / std::log(2.0);
        const double rel = std::abs(ctx.annulus_a11 - expected) / expected;
        c.measured = "a11 = " + fmt(ctx.annulus_a11) + " vs " + fmt(expected) +
                     " (rel err " + fmt(rel) + "), " + fmt(ctx.annulus_wall_s) + " s";
        c.tolerance = "rel err <= 1e-2, runtime < 10 s";
        c.pass = rel <= 1e-2 && ctx.annulus_wall_s < 10.0;
        c.wall_s = ctx.annulus_wall_s;
        out.push_back(c);
    }
    {  // 2: reaction-sum flux of v1 equals minus its energy on every solve
        CriterionResult c;
        c.id = 2;
        c.name = "green-identity";
        double worst = ctx.annulus_green;
        worst = std::max(worst, ctx.trivial_green);
        for (const auto* recs : {&ctx.disks, &ctx.spheres, &ctx.mprofile, &ctx.divergence})
            worst = std::max(worst, max_over(*recs, [](const SweepRecord& r) { return r.green_rel; }));
        c.measured = "max rel |flux(v1)+a11| = " + fmt(worst);
        c.tolerance = "<= 1e-12 on every solve";
        c.pass = worst <= 1e-12;
        out.push_back(c);
    }
    {  // 3: zero net flux of the reconstructed field
        CriterionResult c;
        c.id = 3;
        c.name = "flux-constraint";
        double worst = ctx.trivial_fluxres_rel;
        for (const auto* recs : {&ctx.disks, &ctx.spheres, &ctx.mprofile, &ctx.divergence})
            worst = std::max(worst, max_over(*recs, [](const SweepRecord& r) {
                                 return std::abs(r.flux_residual) / (r.a11 + std::abs(r.Q));
                             }));
        c.measured = "max |flux_residual|/(a11+|Q|) = " + fmt(worst);
        c.tolerance = "<= 1e-9 on every solve";
        c.pass = worst <= 1e-9;
        out.push_back(c);
    }
    {  // 4: planar blow-up rates
        CriterionResult c;
        c.id = 4;
        c.name = "rate-n2-m2";
        c.tolerance = "a11 and grad_mid slopes -0.5 +/- 0.05, runtime < 600 s";
        if (!all_records_ok(ctx.disks)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            const RateFit fa = fit_rate(ctx.disks, [](const SweepRecord& r) { return r.a11; },
                                        FitModel::Power);
            const RateFit fg = fit_rate(ctx.disks, [](const SweepRecord& r) { return r.grad_mid; },
                                        FitModel::Power);
            c.measured = "a11 slope " + fmt(fa.slope) + ", grad_mid slope " + fmt(fg.slope) +
                         ", " + fmt(ctx.disks_wall_s) + " s";
            c.pass = std::abs(fa.slope + 0.5) <= 0.05 && std::abs(fg.slope + 0.5) <= 0.05 &&
                     ctx.disks_wall_s < 600.0;
        }
        c.wall_s = ctx.disks_wall_s;
        out.push_back(c);
    }
    {  // 5: bounded comparisons vs blow-up separation
        CriterionResult c;
        c.id = 5;
        c.name = "bounded-differences";
        c.tolerance = "sup|grad(v1-ubar)| and mid |grad v0| vary < 2x; mid |grad v1| grows > 50x";
        if (!all_records_ok(ctx.disks)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            const double sup_ratio =
                max_over(ctx.disks, [](const SweepRecord& r) { return r.sup_diff_v1; }) /
                min_over(ctx.disks, [](const SweepRecord& r) { return r.sup_diff_v1; });
            const double v0_ratio =
                max_over(ctx.disks, [](const SweepRecord& r) { return r.grad_mid_v0; }) /
                min_over(ctx.disks, [](const SweepRecord& r) { return r.grad_mid_v0; });
            const double growth = ctx.disks.back().grad_mid_v1 / ctx.disks.front().grad_mid_v1;
            c.measured = "sup_diff ratio " + fmt(sup_ratio) + ", mid v0 ratio " + fmt(v0_ratio) +
                         ", v1 growth " + fmt(growth) + "x";
            c.pass = sup_ratio < 2.0 && v0_ratio < 2.0 && growth > 50.0;
        }
        out.push_back(c);
    }
    {  // 6: axisymmetric logarithmic rate
        CriterionResult c;
        c.id = 6;
        c.name = "rate-n3-axisym";
        c.tolerance = "a11/|ln eps| within a 2x band; log-model residual < power residual";
        if (!all_records_ok(ctx.spheres)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            double lo = std::numeric_limits<double>::max(), hi = 0.0;
            for (const auto& r : ctx.spheres) {
                const double norm_a11 = r.a11 * rho_n(3, r.eps);
                lo = std::min(lo, norm_a11);
                hi = std::max(hi, norm_a11);
            }
            const RateFit fp = fit_rate(ctx.spheres, [](const SweepRecord& r) { return r.a11; },
                                        FitModel::Power);
            const RateFit fl = fit_rate(ctx.spheres, [](const SweepRecord& r) { return r.a11; },
                                        FitModel::PowerWithLog);
            c.measured = "a11*rho3 in [" + fmt(lo) + ", " + fmt(hi) + "] (ratio " + fmt(hi / lo) +
                         "), residuals log " + fmt(fl.residual_rms) + " vs power " +
                         fmt(fp.residual_rms);
            c.pass = hi / lo < 2.0 && fl.residual_rms < fp.residual_rms;
        }
        out.push_back(c);
    }
    {  // 7: cubic flatness changes the rate
        CriterionResult c;
        c.id = 7;
        c.name = "rate-n2-m3";
        c.tolerance = "a11 slope -2/3 +/- 0.05";
        if (!all_records_ok(ctx.mprofile)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            const RateFit fa = fit_rate(ctx.mprofile, [](const SweepRecord& r) { return r.a11; },
                                        FitModel::Power);
            c.measured = "a11 slope " + fmt(fa.slope);
            c.pass = std::abs(fa.slope + 2.0 / 3.0) <= 0.05;
        }
        out.push_back(c);
    }
    {  // 8: quadrature-oracle rates across (n, m)
        CriterionResult c;
        c.id = 8;
        c.name = "oracle-cross-check";
        c.tolerance =
            "slopes within 0.02 of {-1/2, -2/3, 0}, log slope within 0.02 of 1; n=4 bounded; < 30 s";
        const double n4_drift = std::abs(ctx.oracle_n4_last - ctx.oracle_n4_prev) /
                                std::abs(ctx.oracle_n4_last);
        c.measured = "slopes (2,2) " + fmt(ctx.oracle_slope_22) + ", (2,3) " +
                     fmt(ctx.oracle_slope_23) + ", (4,2) " + fmt(ctx.oracle_slope_42) +
                     ", (3,2) log " + fmt(ctx.oracle_logslope_32) + ", n4 value " +
                     fmt(ctx.oracle_n4_last) + ", " + fmt(ctx.oracle_wall_s) + " s";
        c.pass = std::abs(ctx.oracle_slope_22 + 0.5) <= 0.02 &&
                 std::abs(ctx.oracle_slope_23 + 2.0 / 3.0) <= 0.02 &&
                 std::abs(ctx.oracle_slope_42) <= 0.02 &&
                 std::abs(ctx.oracle_logslope_32 - 1.0) <= 0.02 && n4_drift < 0.01 &&
                 ctx.oracle_n4_last < 4.0 * M_PI * 1.05 && ctx.oracle_wall_s < 30.0;
        c.wall_s = ctx.oracle_wall_s;
        out.push_back(c);
    }
    {  // 9: divergence form with the flattened-flux corrector
        CriterionResult c;
        c.id = 9;
        c.name = "divergence-form";
        c.tolerance =
            "sup|grad(V1-utilde)| varies < 2x; identity paths agree to 1e-8; corrector passes "
            "scaled bound, plain ramp fails";
        if (!all_records_ok(ctx.divergence)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            const double sup_ratio =
                max_over(ctx.divergence, [](const SweepRecord& r) { return r.sup_diff_v1; }) /
                min_over(ctx.divergence, [](const SweepRecord& r) { return r.sup_diff_v1; });
            double ut_hi = 0.0, ut_lo = std::numeric_limits<double>::max();
            for (double v : ctx.corr_utilde) {
                ut_hi = std::max(ut_hi, v);
                ut_lo = std::min(ut_lo, v);
            }
            const double ub_growth = ctx.corr_ubar.back() / ctx.corr_ubar.front();
            c.measured = "sup_diff ratio " + fmt(sup_ratio) + ", identity dev " +
                         fmt(ctx.ident.nodewise_dev) + ", corrector band " + fmt(ut_hi / ut_lo) +
                         ", ramp growth " + fmt(ub_growth) + "x";
            c.pass = sup_ratio < 2.0 && ctx.ident.nodewise_dev <= 1e-8 && ut_hi / ut_lo < 2.0 &&
                     ub_growth > 4.0;
        }
        out.push_back(c);
    }
    {  // 10: trivial data and linearity of the pipeline
        CriterionResult c;
        c.id = 10;
        c.name = "trivial-data";
        c.tolerance = "Q = 0, u = const, mid gradient <= 1e-8; linearity devs <= 1e-8";
        c.measured = "|Q| = " + fmt(ctx.trivial_absQ) + ", |u-c| = " + fmt(ctx.trivial_u_dev) +
                     ", grad_mid = " + fmt(ctx.trivial_grad_mid) + ", lin dev " +
                     fmt(ctx.linearity_dev) + ", affine dev " + fmt(ctx.affine_dev);
        c.pass = ctx.trivial_absQ <= 1e-12 && ctx.trivial_u_dev <= 1e-10 &&
                 ctx.trivial_grad_mid <= 1e-8 && ctx.linearity_dev <= 1e-8 &&
                 ctx.affine_dev <= 1e-8;
        out.push_back(c);
    }
    {  // 11: approach of Q to its touching limit
        CriterionResult c;
        c.id = 11;
        c.name = "qstar-convergence";
        c.tolerance = "successive |dQ| strictly decreasing; Q* stable to 1% without coarsest eps";
        if (!all_records_ok(ctx.disks)) {
            c.measured = "sweep failed";
            c.pass = false;
        } else {
            const QstarExtrapolation full = extrapolate_Qstar(ctx.disks);
            std::vector<SweepRecord> dropped(ctx.disks.begin() + 1, ctx.disks.end());
            bool stable = false;
            double rel = std::numeric_limits<double>::quiet_NaN();
            if (full.has_estimate) {
                const QstarExtrapolation part = extrapolate_Qstar(dropped);
                if (part.has_estimate) {
                    rel = std::abs(full.Qstar - part.Qstar) /
                          std::max(1e-300, std::abs(full.Qstar));
                    stable = rel <= 0.01;
                }
            }
            c.measured = std::string("cauchy ") + (full.has_estimate ? "yes" : "no") +
                         ", Q* = " + fmt(full.Qstar) + " (order " + fmt(full.order) +
                         "), drop-coarsest rel dev " + fmt(rel);
            c.pass = full.has_estimate && stable;
        }
        out.push_back(c);
    }
    return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

std::string render_verdicts(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        char buf[640];
        std::snprintf(buf, sizeof(buf), "[%2d] %-4s %-26s %s  {%s}\n", r.id,
                      r.pass ? "PASS" : "FAIL", r.name.c_str(), r.measured.c_str(),
                      r.tolerance.c_str());
        os << buf;
    }
    os << (all_pass(results) ? "acceptance: all criteria passed\n"
                             : "acceptance: FAILURES present\n");
    return os.str();
}

}  // namespace gapfield
