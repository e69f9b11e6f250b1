#include "gapfield/conductivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gapfield/asymptotics.hpp"
#include "gapfield/auxiliary.hpp"

namespace gapfield {

BoundaryData make_boundary_data(const GapDomain& dom, const PhiSpec& phi) {
    BoundaryData bd;
    bd.phi = phi;
    bd.phi_at_P = phi.value({0.0, 0.0});

    // sampled C2 norm over the outer boundary
    PiecewiseCurve curve = dom.outer.full_curve(dom.R0);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    const int N = 512;
    for (int i = 0; i < N; ++i) {
        const Vec2 p = curve.point_at_length(curve.length() * i / N);
        m0 = std::max(m0, std::abs(phi.value(p)));
        m1 = std::max(m1, norm(phi.gradient(p)));
        const Mat2 h = phi.hessian(p);
        m2 = std::max(m2, std::abs(h.eig_min()));
        m2 = std::max(m2, std::abs(h.eig_max()));
    }
    bd.c2_norm = m0 + m1 + m2;
    return bd;
}

ScalarField solve_v1(const LinearSystem& sys, SolveStats* stats) {
    return solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, stats);
}

ScalarField solve_v0(const LinearSystem& sys, const BoundaryData& bd, SolveStats* stats) {
    const double phiP = bd.phi_at_P;
    const PhiSpec& phi = bd.phi;
    return solve_dirichlet(
        sys, [&phi, phiP](Vec2 p) { return phi.value(p) - phiP; }, [](Vec2) { return 0.0; },
        stats);
}

Functionals compute_functionals(const LinearSystem& sys, const ScalarField& v1,
                                const ScalarField& v0) {
    Functionals fn;
    fn.a11 = energy_product(sys, v1, v1);
    fn.Q = -energy_product(sys, v0, v1);
    fn.Q_flux = boundary_flux(sys, v0, BoundaryTag::Inner);
    fn.consistent = std::abs(fn.Q - fn.Q_flux) <= 1e-6 * (1.0 + std::abs(fn.Q));
    return fn;
}

DecompositionResult assemble_u(const LinearSystem& sys, ScalarField v1, ScalarField v0,
                               const Functionals& fn, const BoundaryData& bd) {
    if (!(fn.a11 > 0.0))
        throw SolverError("assemble_u: a11 <= 0 signals an assembly defect");
    DecompositionResult res;
    res.a11 = fn.a11;
    res.Q = fn.Q;
    res.Q_flux = fn.Q_flux;
    res.functionals_consistent = fn.consistent;
    res.C1 = bd.phi_at_P + fn.Q / fn.a11;
    res.c2_norm = bd.c2_norm;

    const double scale = res.C1 - bd.phi_at_P;
    res.u.mesh = v1.mesh;
    res.u.values.resize(v1.values.size());
    for (std::size_t i = 0; i < v1.values.size(); ++i)
        res.u.values[i] = scale * v1.values[i] + v0.values[i] + bd.phi_at_P;

    res.flux_residual = scale * boundary_flux(sys, v1, BoundaryTag::Inner) +
                        boundary_flux(sys, v0, BoundaryTag::Inner);
    res.v1 = std::move(v1);
    res.v0 = std::move(v0);
    return res;
}

DecompositionResult solve_decomposition(const LinearSystem& sys, const BoundaryData& bd) {
    SolveStats s1, s0;
    ScalarField v1 = solve_v1(sys, &s1);
    ScalarField v0 = solve_v0(sys, bd, &s0);
    const Functionals fn = compute_functionals(sys, v1, v0);
    DecompositionResult res = assemble_u(sys, std::move(v1), std::move(v0), fn, bd);
    res.stats_v1 = s1;
    res.stats_v0 = s0;
    return res;
}

namespace {

double dist_to_gap_segment(const GapDomain& dom, Vec2 p) {
    // segment from P = (0,0) to P1 = (0, eps)
    const double ty = std::clamp(p.y, 0.0, dom.eps);
    return std::hypot(p.x, p.y - ty);
}

}  // namespace

BlowupProbe probe_blowup(const DecompositionResult& result, const GapDomain& dom) {
    BlowupProbe probe;
    const Vec2 mid{0.0, 0.5 * dom.eps};
    probe.grad_mid = norm(probe_gradient(result.u, mid));
    probe.grad_mid_v1 = norm(probe_gradient(result.v1, mid));
    probe.grad_mid_v0 = norm(probe_gradient(result.v0, mid));

    const int ns = 21;
    for (int i = 0; i < ns; ++i) {
        const Vec2 p{0.0, dom.eps * (i + 0.5) / ns};
        probe.grad_max_segment = std::max(probe.grad_max_segment, norm(probe_gradient(result.u, p)));
    }

    // chart-wide ratio against the predicted pointwise envelope; only defined
    // inside the rate regime eps < 1/2
    if (dom.eps < 0.5) {
        const double rho = rho_n_m(dom.dimension(), dom.m, dom.eps);
        const double Qabs = std::abs(result.Q);
        const double c2 = std::max(1e-12, result.c2_norm);
        double ratio_max = 0.0;
        for (const Vec2& p : chart_sample_points(dom)) {
            const double d = dist_to_gap_segment(dom, p);
            const double dm = std::pow(d, dom.m);
            const double denom = rho * Qabs / (dom.eps + dm) +
                                 (std::pow(d, dom.m - 1) / (dom.eps + dm) + 1.0) * c2;
            const double g = norm(probe_gradient(result.u, p));
            ratio_max = std::max(ratio_max, g / denom);
        }
        probe.ratio_max = ratio_max;
    }
    return probe;
}

}  // namespace gapfield
