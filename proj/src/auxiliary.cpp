#include "gapfield/auxiliary.hpp"

#include <cmath>
#include <stdexcept>

namespace gapfield {

namespace {

struct ChartState {
    double h, dh, d2h;
    double h1, dh1, d2h1;
    double delta, ddelta;
};

ChartState chart_state(const GapDomain& dom, double x) {
    ChartState s;
    s.h = dom.h(x);
    s.dh = dom.dh(x);
    s.d2h = dom.d2h(x);
    s.h1 = dom.h1(x);
    s.dh1 = dom.dh1(x);
    s.d2h1 = dom.d2h1(x);
    s.delta = dom.eps + (s.h1 - s.h);
    s.ddelta = s.dh1 - s.dh;
    return s;
}

AuxEval eval_ubar(const GapDomain& dom, Vec2 p) {
    const ChartState s = chart_state(dom, p.x);
    AuxEval e;
    const double num = p.y - s.h;
    e.value = num / s.delta;
    e.gradient.x = (-s.dh * s.delta - num * s.ddelta) / (s.delta * s.delta);
    e.gradient.y = 1.0 / s.delta;
    return e;
}

}  // namespace

bool AuxFunction::in_chart(Vec2 p) const {
    if (std::abs(p.x) > 2.0 * dom->R0 * (1.0 + 1e-12)) return false;
    const double lo = dom->h(p.x), hi = dom->eps + dom->h1(p.x);
    const double slack = 1e-9 * (hi - lo) + 1e-300;
    return p.y >= lo - slack && p.y <= hi + slack;
}

AuxEval AuxFunction::eval(Vec2 p) const {
    if (!in_chart(p))
        throw std::invalid_argument("AuxFunction::eval: point outside the gap chart");
    switch (kind) {
        case AuxKind::Ubar:
            return eval_ubar(*dom, p);
        case AuxKind::Uhat: {
            const ChartState s = chart_state(*dom, p.x);
            const AuxEval ub = eval_ubar(*dom, p);
            const Vec2 foot{p.x, s.h};
            const double tr = phi->value(foot) - phi->value({0.0, 0.0});
            const Vec2 gphi = phi->gradient(foot);
            const double dtr = gphi.x + gphi.y * s.dh;
            AuxEval e;
            e.value = (1.0 - ub.value) * tr;
            e.gradient.x = (1.0 - ub.value) * dtr - ub.gradient.x * tr;
            e.gradient.y = -ub.gradient.y * tr;
            return e;
        }
        case AuxKind::Utilde: {
            const ChartState s = chart_state(*dom, p.x);
            const AuxEval ub = eval_ubar(*dom, p);
            const Mat2 a = A->eval(p);
            Mat2 dax, day;
            A->deriv(p, dax, day);
            // G = A_12 (h1-h)' / (4 A_22)
            const double diffp = s.dh1 - s.dh;
            const double diffpp = s.d2h1 - s.d2h;
            const double ga = a.a12 / (4.0 * a.a22);
            const double ga_x = (dax.a12 * a.a22 - a.a12 * dax.a22) / (4.0 * a.a22 * a.a22);
            const double ga_y = (day.a12 * a.a22 - a.a12 * day.a22) / (4.0 * a.a22 * a.a22);
            const double G = ga * diffp;
            const double G_x = ga_x * diffp + ga * diffpp;
            const double G_y = ga_y * diffp;
            // Z = (2 xn - (eps + h1 + h)) / delta; the factor Z^2 - 1 vanishes
            // on both graphs
            const double num = 2.0 * p.y - (dom->eps + s.h1 + s.h);
            const double Z = num / s.delta;
            const double Z_x = (-(s.dh1 + s.dh) * s.delta - num * s.ddelta) / (s.delta * s.delta);
            const double Z_y = 2.0 / s.delta;
            const double fac = Z * Z - 1.0;
            AuxEval e;
            e.value = ub.value + G * fac;
            e.gradient.x = ub.gradient.x + G_x * fac + G * 2.0 * Z * Z_x;
            e.gradient.y = ub.gradient.y + G_y * fac + G * 2.0 * Z * Z_y;
            return e;
        }
    }
    return {};
}

AuxFunction make_ubar(const GapDomain& dom) {
    AuxFunction f;
    f.kind = AuxKind::Ubar;
    f.dom = &dom;
    return f;
}

AuxFunction make_uhat(const GapDomain& dom, const PhiSpec& phi) {
    AuxFunction f;
    f.kind = AuxKind::Uhat;
    f.dom = &dom;
    f.phi = &phi;
    return f;
}

AuxFunction make_utilde(const GapDomain& dom, const CoefficientField& A) {
    AuxFunction f;
    f.kind = AuxKind::Utilde;
    f.dom = &dom;
    f.A = &A;
    return f;
}

std::vector<Vec2> chart_sample_points(const GapDomain& dom, const ChartGrid& grid) {
    std::vector<Vec2> pts;
    const bool axisym = dom.mode == WeightMode::Axisymmetric;
    const int nx = axisym ? (grid.n_tangential + 1) / 2 : grid.n_tangential;
    const double x_lo = axisym ? 0.0 : -dom.R0;
    for (int i = 0; i < nx; ++i) {
        const double x = x_lo + (dom.R0 - x_lo) * i / (nx - 1);
        const double h = dom.h(x);
        const double delta = dom.gap_width_unchecked(x);
        for (int j = 0; j < grid.n_layers; ++j) {
            const double t =
                grid.t_min + (grid.t_max - grid.t_min) * j / (grid.n_layers - 1);
            pts.push_back({x, h + t * delta});
        }
    }
    return pts;
}

double sup_gradient_difference(const ScalarField& f, const AuxFunction& aux,
                               const ChartGrid& grid) {
    const auto pts = chart_sample_points(*aux.dom, grid);
    double sup = 0.0;
    for (const Vec2& p : pts) {
        const Vec2 gf = probe_gradient(f, p);
        const AuxEval ea = aux.eval(p);
        sup = std::max(sup, norm(gf - ea.gradient));
    }
    return sup;
}

CorrectorCheck corrector_flux_check(const AuxFunction& aux, const CoefficientField& A,
                                    const ChartGrid& grid) {
    const GapDomain& dom = *aux.dom;
    CorrectorCheck out;
    // keep the stencil a safe margin inside the chart band
    ChartGrid g = grid;
    g.t_min = std::max(grid.t_min, 0.05);
    g.t_max = std::min(grid.t_max, 0.95);
    const auto pts = chart_sample_points(dom, g);
    auto flux = [&](Vec2 p) {
        const AuxEval e = aux.eval(p);
        return A.eval(p).apply(e.gradient);
    };
    for (const Vec2& p : pts) {
        const double delta = dom.gap_width_unchecked(p.x);
        const double sy = 5e-6 * delta;
        const double sx = 5e-6 * (std::sqrt(dom.eps) + std::abs(p.x) + delta);
        const double div = (flux({p.x + sx, p.y}).x - flux({p.x - sx, p.y}).x) / (2.0 * sx) +
                           (flux({p.x, p.y + sy}).y - flux({p.x, p.y - sy}).y) / (2.0 * sy);
        const double scaled = std::abs(div) * (dom.eps + std::pow(std::abs(p.x), dom.m));
        if (scaled > out.max_scaled_divergence) {
            out.max_scaled_divergence = scaled;
            out.argmax = p;
        }
    }
    return out;
}

}  // namespace gapfield
