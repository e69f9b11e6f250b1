#include "gapfield/asymptotics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "gapfield/auxiliary.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gapfield {

namespace {
void check_rate_args(int n, double eps) {
    if (n < 2) throw std::invalid_argument("rate factor: dimension must be >= 2");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("rate factor: eps must lie in (0, 1/2)");
}
}  // namespace

double rho_n(int n, double eps) {
    check_rate_args(n, eps);
    if (n == 2) return std::sqrt(eps);
    if (n == 3) return 1.0 / std::abs(std::log(eps));
    return 1.0;
}

double rho_n_m(int n, int m, double eps) {
    check_rate_args(n, eps);
    if (m < 2) throw std::invalid_argument("rate factor: m must be >= 2");
    if (n - 1 < m) return std::pow(eps, 1.0 - static_cast<double>(n - 1) / m);
    if (n - 1 == m) return 1.0 / std::abs(std::log(eps));
    return 1.0;
}

RatePrediction predict_a11_rate(int n, int m) {
    RatePrediction p;
    p.n = n;
    p.m = m;
    if (n - 1 < m) {
        p.exponent = -(1.0 - static_cast<double>(n - 1) / m);
    } else if (n - 1 == m) {
        p.exponent = 0.0;
        p.log_corrected = true;
    } else {
        p.exponent = 0.0;
    }
    return p;
}

// ---------------------------------------------------------------------------
// adaptive Simpson for the model integral
// ---------------------------------------------------------------------------

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("a11_quadrature_oracle: quadrature did not converge");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = 1e-11 * (std::abs(whole) + 1e-300);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 64);
}

}  // namespace

double a11_quadrature_oracle(int n, int m, double eps, double R0) {
    if (n < 2 || n > 5) throw std::invalid_argument("a11_quadrature_oracle: n must be in {2,..,5}");
    if (m < 2) throw std::invalid_argument("a11_quadrature_oracle: m must be >= 2");
    if (!(eps > 0.0)) throw std::invalid_argument("a11_quadrature_oracle: eps must be positive");
    if (!(R0 > 0.0)) throw std::invalid_argument("a11_quadrature_oracle: R0 must be positive");

    const double sphere_factor[] = {2.0, 2.0 * M_PI, 4.0 * M_PI, 2.0 * M_PI * M_PI};
    auto f = [n, m, eps](double s) { return std::pow(s, n - 2) / (eps + std::pow(s, m)); };

    const double split = std::min(R0, std::pow(eps, 1.0 / m));
    double J = 0.0;
    if (split > 0.0) J += integrate(f, 0.0, split);
    if (split < R0) J += integrate(f, split, R0);
    return sphere_factor[n - 2] * J;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

SweepRecord compute_sweep_record(const SweepSpec& spec, double eps) {
    SweepRecord rec;
    rec.eps = eps;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const GapDomain dom = spec.domain_family(eps);
        rec.n = dom.dimension();
        rec.m = dom.m;
        const Mesh mesh = triangulate(dom, spec.mesh);
        const LinearSystem sys = assemble(mesh, spec.A);
        const BoundaryData bd = make_boundary_data(dom, spec.phi);
        const DecompositionResult res = solve_decomposition(sys, bd);

        rec.a11 = res.a11;
        rec.Q = res.Q;
        rec.Q_flux = res.Q_flux;
        rec.C1 = res.C1;
        rec.flux_residual = res.flux_residual;
        rec.mesh_vertices = mesh.n_vertices();
        rec.cg_iters_v1 = res.stats_v1.iterations;
        rec.cg_iters_v0 = res.stats_v0.iterations;
        rec.green_rel =
            std::abs(boundary_flux(sys, res.v1, BoundaryTag::Inner) + res.a11) / res.a11;

        const BlowupProbe probe = probe_blowup(res, dom);
        rec.grad_mid = probe.grad_mid;
        rec.grad_mid_v1 = probe.grad_mid_v1;
        rec.grad_mid_v0 = probe.grad_mid_v0;
        rec.ratio_max = probe.ratio_max;

        const AuxFunction aux_v1 =
            spec.A.is_identity ? make_ubar(dom) : make_utilde(dom, spec.A);
        rec.sup_diff_v1 = sup_gradient_difference(res.v1, aux_v1, {});
        const AuxFunction aux_v0 = make_uhat(dom, spec.phi);
        rec.sup_diff_v0 = sup_gradient_difference(res.v0, aux_v0, {});

        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rec;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers) {
    if (spec.eps_list.size() < 3)
        throw std::invalid_argument("run_sweep: need at least 3 eps values");
    for (std::size_t i = 1; i < spec.eps_list.size(); ++i)
        if (!(spec.eps_list[i] < spec.eps_list[i - 1]))
            throw std::invalid_argument("run_sweep: eps list must be strictly decreasing");

    const int n = static_cast<int>(spec.eps_list.size());
    std::vector<SweepRecord> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, workers)) if (workers > 1)
#endif
    for (int i = 0; i < n; ++i) out[i] = compute_sweep_record(spec, spec.eps_list[i]);

    bool any_ok = false;
    for (const auto& r : out) any_ok = any_ok || r.ok;
    if (!any_ok) throw SolverError("run_sweep: all solves failed");
    return out;
}

// ---------------------------------------------------------------------------
// rate fits
// ---------------------------------------------------------------------------

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& q, FitModel model) {
    if (eps.size() != q.size()) throw std::invalid_argument("fit_rate: size mismatch");
    if (eps.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
    const int n = static_cast<int>(eps.size());
    std::vector<double> X(n), Y(n);
    for (int i = 0; i < n; ++i) {
        if (!(q[i] > 0.0)) throw std::invalid_argument("fit_rate: nonpositive quantity value");
        X[i] = model == FitModel::Power ? std::log(eps[i]) : std::log(std::log(1.0 / eps[i]));
        Y[i] = std::log(q[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += X[i];
        sy += Y[i];
        sxx += X[i] * X[i];
        sxy += X[i] * Y[i];
    }
    RateFit fit;
    fit.model = model;
    fit.n_points = n;
    const double det = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = Y[i] - (fit.intercept + fit.slope * X[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

RateFit fit_rate(const std::vector<SweepRecord>& records,
                 const std::function<double(const SweepRecord&)>& quantity, FitModel model) {
    std::vector<double> eps, q;
    for (const auto& r : records) {
        if (!r.ok) continue;
        eps.push_back(r.eps);
        q.push_back(quantity(r));
    }
    return fit_rate(eps, q, model);
}

// ---------------------------------------------------------------------------
// Q* extrapolation
// ---------------------------------------------------------------------------

QstarExtrapolation extrapolate_Qstar(const std::vector<SweepRecord>& records) {
    QstarExtrapolation ex;
    for (const auto& r : records) {
        if (!r.ok) continue;
        ex.eps.push_back(r.eps);
        ex.Q.push_back(r.Q);
    }
    if (ex.eps.size() < 4)
        throw std::invalid_argument("extrapolate_Qstar: need at least 4 records");

    for (std::size_t i = 1; i < ex.Q.size(); ++i) ex.dQ.push_back(ex.Q[i] - ex.Q[i - 1]);
    for (std::size_t i = 1; i < ex.dQ.size(); ++i)
        if (!(std::abs(ex.dQ[i]) < std::abs(ex.dQ[i - 1]))) return ex;  // no estimate

    // least squares of Q = Q* + A eps^p, golden-section over the order p
    auto sse_for = [&](double p, double& qstar_out) {
        const int n = static_cast<int>(ex.eps.size());
        double s1 = n, se = 0, see = 0, sq = 0, sqe = 0;
        for (int i = 0; i < n; ++i) {
            const double e = std::pow(ex.eps[i], p);
            se += e;
            see += e * e;
            sq += ex.Q[i];
            sqe += ex.Q[i] * e;
        }
        const double det = s1 * see - se * se;
        const double qstar = (sq * see - se * sqe) / det;
        const double amp = (s1 * sqe - se * sq) / det;
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = ex.Q[i] - (qstar + amp * std::pow(ex.eps[i], p));
            ss += r * r;
        }
        qstar_out = qstar;
        return ss;
    };

    double lo = 0.05, hi = 3.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double p1 = hi - gr * (hi - lo), p2 = lo + gr * (hi - lo);
    double tmp;
    double f1 = sse_for(p1, tmp), f2 = sse_for(p2, tmp);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            hi = p2;
            p2 = p1;
            f2 = f1;
            p1 = hi - gr * (hi - lo);
            f1 = sse_for(p1, tmp);
        } else {
            lo = p1;
            p1 = p2;
            f1 = f2;
            p2 = lo + gr * (hi - lo);
            f2 = sse_for(p2, tmp);
        }
    }
    ex.order = 0.5 * (lo + hi);
    sse_for(ex.order, ex.Qstar);
    ex.has_estimate = true;
    return ex;
}

}  // namespace gapfield
