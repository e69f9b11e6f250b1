#include "gapfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapfield {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double Mat2::eig_min() const {
    const double tr = a11 + a22;
    const double disc = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (tr - disc);
}

double Mat2::eig_max() const {
    const double tr = a11 + a22;
    const double disc = std::sqrt((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12);
    return 0.5 * (tr + disc);
}

// ---------------------------------------------------------------------------
// PiecewiseCurve
// ---------------------------------------------------------------------------

namespace {
constexpr int kArcSamples = 2048;
}

void PiecewiseCurve::add(CurvePiece piece) {
    pieces_.push_back(std::move(piece));
    finalized_ = false;
}

void PiecewiseCurve::finalize() {
    tables_.clear();
    piece_offset_.clear();
    total_length_ = 0.0;
    for (const auto& pc : pieces_) {
        PieceTable tab;
        tab.cum.resize(kArcSamples + 1);
        tab.cum[0] = 0.0;
        const double dt = (pc.t1 - pc.t0) / kArcSamples;
        // two-point Gauss per sub-interval
        const double g = 0.5 / std::sqrt(3.0);
        for (int i = 0; i < kArcSamples; ++i) {
            const double tm = pc.t0 + (i + 0.5) * dt;
            const double s1 = norm(pc.dpoint(tm - g * dt));
            const double s2 = norm(pc.dpoint(tm + g * dt));
            tab.cum[i + 1] = tab.cum[i] + 0.5 * dt * (s1 + s2);
        }
        tab.length = tab.cum.back();
        piece_offset_.push_back(total_length_);
        total_length_ += tab.length;
        tables_.push_back(std::move(tab));
    }
    finalized_ = true;
}

double PiecewiseCurve::param_at_length(std::size_t piece, double s_local) const {
    const auto& pc = pieces_[piece];
    const auto& tab = tables_[piece];
    const auto it = std::upper_bound(tab.cum.begin(), tab.cum.end(), s_local);
    std::size_t k = (it == tab.cum.begin()) ? 0 : (it - tab.cum.begin() - 1);
    if (k >= static_cast<std::size_t>(kArcSamples)) k = kArcSamples - 1;
    const double seg = tab.cum[k + 1] - tab.cum[k];
    const double frac = seg > 0.0 ? (s_local - tab.cum[k]) / seg : 0.0;
    const double dt = (pc.t1 - pc.t0) / kArcSamples;
    return pc.t0 + (k + frac) * dt;
}

Vec2 PiecewiseCurve::point_at_length(double s) const {
    if (!finalized_) throw std::logic_error("PiecewiseCurve: finalize() not called");
    s = std::clamp(s, 0.0, total_length_);
    std::size_t piece = pieces_.size() - 1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (s <= piece_offset_[i] + tables_[i].length) {
            piece = i;
            break;
        }
    }
    const double t = param_at_length(piece, s - piece_offset_[piece]);
    return pieces_[piece].point(t);
}

void PiecewiseCurve::eval_at_length(double s, Vec2& p, Vec2& tangent) const {
    if (!finalized_) throw std::logic_error("PiecewiseCurve: finalize() not called");
    s = std::clamp(s, 0.0, total_length_);
    std::size_t piece = pieces_.size() - 1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (s <= piece_offset_[i] + tables_[i].length) {
            piece = i;
            break;
        }
    }
    const double t = param_at_length(piece, s - piece_offset_[piece]);
    p = pieces_[piece].point(t);
    Vec2 d = pieces_[piece].dpoint(t);
    const double nd = norm(d);
    tangent = nd > 0.0 ? (1.0 / nd) * d : Vec2{1.0, 0.0};
}

// ---------------------------------------------------------------------------
// BoundaryProfile: gap-side graphs
// ---------------------------------------------------------------------------

namespace {

double poly_eval(const std::vector<double>& c, double x) {
    const double ax = std::abs(x);
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 2;) v = v * ax + c[k];
    // v now holds sum c_k ax^(k-2); multiply the two factored powers back
    return v * ax * ax;
}

double poly_deriv(const std::vector<double>& c, double x) {
    const double ax = std::abs(x);
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 2;) {
        double term = c[k] * static_cast<double>(k);
        v = v * ax + term;
    }
    return v * ax * ((x >= 0.0) ? 1.0 : -1.0);
}

double poly_deriv2(const std::vector<double>& c, double x) {
    const double ax = std::abs(x);
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 2;)
        v = v * ax + c[k] * static_cast<double>(k) * static_cast<double>(k - 1);
    return v;
}

}  // namespace

double BoundaryProfile::graph0(double x) const {
    switch (kind) {
        case ProfileKind::Circle:
            // a - sqrt(a^2 - x^2), rationalized so the pole value is an exact 0
            return x * x / (a + std::sqrt(a * a - x * x));
        case ProfileKind::Ellipse: {
            const double u = (x / a) * (x / a);
            return b * u / (1.0 + std::sqrt(1.0 - u));
        }
        case ProfileKind::GraphPoly:
            return poly_eval(coeff, x);
    }
    return 0.0;
}

double BoundaryProfile::dgraph0(double x) const {
    switch (kind) {
        case ProfileKind::Circle:
            return x / std::sqrt(a * a - x * x);
        case ProfileKind::Ellipse:
            return b * x / (a * a * std::sqrt(1.0 - (x / a) * (x / a)));
        case ProfileKind::GraphPoly:
            return poly_deriv(coeff, x);
    }
    return 0.0;
}

double BoundaryProfile::d2graph0(double x) const {
    switch (kind) {
        case ProfileKind::Circle: {
            const double q = a * a - x * x;
            return a * a / (q * std::sqrt(q));
        }
        case ProfileKind::Ellipse: {
            const double q = 1.0 - (x / a) * (x / a);
            return b / (a * a * q * std::sqrt(q));
        }
        case ProfileKind::GraphPoly:
            return poly_deriv2(coeff, x);
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// BoundaryProfile: closed-curve pieces
//
// The remainder runs from the chart point at x' = +x_band around the far side
// of the curve to x' = -x_band (or to the symmetry axis when upper_half is
// set). All pieces keep the domain interior on the left.
// ---------------------------------------------------------------------------

namespace {

CurvePiece conic_arc(Vec2 center, double a, double b, double t0, double t1) {
    CurvePiece p;
    p.point = [=](double t) { return Vec2{center.x + a * std::sin(t), center.y - b * std::cos(t)}; };
    p.dpoint = [=](double t) { return Vec2{a * std::cos(t), b * std::sin(t)}; };
    p.t0 = t0;
    p.t1 = t1;
    return p;
}

CurvePiece circle_arc(Vec2 center, double r, double th0, double th1) {
    CurvePiece p;
    p.point = [=](double t) { return Vec2{center.x + r * std::cos(t), center.y + r * std::sin(t)}; };
    p.dpoint = [=](double t) { return Vec2{-r * std::sin(t), r * std::cos(t)}; };
    p.t0 = th0;
    p.t1 = th1;
    return p;
}

CurvePiece segment(Vec2 p0, Vec2 p1) {
    CurvePiece p;
    p.point = [=](double t) { return Vec2{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)}; };
    p.dpoint = [=](double) { return Vec2{p1.x - p0.x, p1.y - p0.y}; };
    p.t0 = 0.0;
    p.t1 = 1.0;
    return p;
}

CurvePiece graph_piece(const BoundaryProfile* prof, double offset_y, double x0, double x1) {
    CurvePiece p;
    p.point = [=](double x) { return Vec2{x, offset_y + prof->graph0(x)}; };
    p.dpoint = [=](double x) { return Vec2{1.0, prof->dgraph0(x)}; };
    p.t0 = x0;
    p.t1 = x1;
    return p;
}

}  // namespace

PiecewiseCurve BoundaryProfile::remainder_curve(double x_band, bool upper_half) const {
    PiecewiseCurve c;
    switch (kind) {
        case ProfileKind::Circle:
        case ProfileKind::Ellipse: {
            const double tplus = std::asin(x_band / a);
            const double tend = upper_half ? M_PI : 2.0 * M_PI - tplus;
            c.add(conic_arc(center, a, b, tplus, tend));
            break;
        }
        case ProfileKind::GraphPoly: {
            if (!is_outer) {
                // graph out to the junction, then the cap arc
                c.add(graph_piece(this, offset_y, x_band, chart_xmax));
                const Vec2 jr{chart_xmax, offset_y + graph0(chart_xmax)};
                const double ang = std::atan2(jr.y - cap_center.y, jr.x - cap_center.x);
                if (upper_half) {
                    c.add(circle_arc(cap_center, cap_radius, ang, M_PI / 2.0));
                } else {
                    c.add(circle_arc(cap_center, cap_radius, ang, M_PI - ang));
                    c.add(graph_piece(this, offset_y, -chart_xmax, -x_band));
                }
            } else {
                // rounded box: flat graph, corner arc, wall, dome
                const double W = wall_x - corner_r;
                c.add(graph_piece(this, offset_y, x_band, W));
                c.add(circle_arc({W, corner_r}, corner_r, -M_PI / 2.0, 0.0));
                c.add(segment({wall_x, corner_r}, {wall_x, wall_top}));
                if (upper_half) {
                    c.add(circle_arc({0.0, wall_top}, dome_radius, 0.0, M_PI / 2.0));
                } else {
                    c.add(circle_arc({0.0, wall_top}, dome_radius, 0.0, M_PI));
                    c.add(segment({-wall_x, wall_top}, {-wall_x, corner_r}));
                    c.add(circle_arc({-W, corner_r}, corner_r, M_PI, 1.5 * M_PI));
                    c.add(graph_piece(this, offset_y, -W, -x_band));
                }
            }
            break;
        }
    }
    c.finalize();
    return c;
}

PiecewiseCurve BoundaryProfile::full_curve(double x_band) const {
    PiecewiseCurve c;
    c.add(graph_piece(this, offset_y, -x_band, x_band));
    switch (kind) {
        case ProfileKind::Circle:
        case ProfileKind::Ellipse: {
            const double tplus = std::asin(x_band / a);
            c.add(conic_arc(center, a, b, tplus, 2.0 * M_PI - tplus));
            break;
        }
        case ProfileKind::GraphPoly: {
            if (!is_outer) {
                c.add(graph_piece(this, offset_y, x_band, chart_xmax));
                const Vec2 jr{chart_xmax, offset_y + graph0(chart_xmax)};
                const double ang = std::atan2(jr.y - cap_center.y, jr.x - cap_center.x);
                c.add(circle_arc(cap_center, cap_radius, ang, M_PI - ang));
                c.add(graph_piece(this, offset_y, -chart_xmax, -x_band));
            } else {
                const double W = wall_x - corner_r;
                c.add(graph_piece(this, offset_y, x_band, W));
                c.add(circle_arc({W, corner_r}, corner_r, -M_PI / 2.0, 0.0));
                c.add(segment({wall_x, corner_r}, {wall_x, wall_top}));
                c.add(circle_arc({0.0, wall_top}, dome_radius, 0.0, M_PI));
                c.add(segment({-wall_x, wall_top}, {-wall_x, corner_r}));
                c.add(circle_arc({-W, corner_r}, corner_r, M_PI, 1.5 * M_PI));
                c.add(graph_piece(this, offset_y, -W, -x_band));
            }
            break;
        }
    }
    c.finalize();
    return c;
}

bool BoundaryProfile::region_contains(Vec2 p) const {
    switch (kind) {
        case ProfileKind::Circle: {
            const Vec2 d = p - center;
            return d.x * d.x + d.y * d.y < a * a;
        }
        case ProfileKind::Ellipse: {
            const double u = (p.x - center.x) / a;
            const double v = (p.y - center.y) / b;
            return u * u + v * v < 1.0;
        }
        case ProfileKind::GraphPoly: {
            if (!is_outer) {
                const Vec2 d = p - cap_center;
                if (d.x * d.x + d.y * d.y >= cap_radius * cap_radius) return false;
                if (std::abs(p.x) > chart_xmax) return true;
                return p.y > offset_y + graph0(p.x);
            }
            if (std::abs(p.x) >= wall_x) return false;
            const double W = wall_x - corner_r;
            double floor_y;
            if (std::abs(p.x) <= W) {
                floor_y = offset_y + graph0(p.x);
            } else {
                const double dx = std::abs(p.x) - W;
                floor_y = corner_r - std::sqrt(corner_r * corner_r - dx * dx);
            }
            if (p.y <= floor_y) return false;
            if (p.y <= wall_top) return true;
            const Vec2 d = p - Vec2{0.0, wall_top};
            return d.x * d.x + d.y * d.y < dome_radius * dome_radius;
        }
    }
    return false;
}

double BoundaryProfile::distance_to_curve(Vec2 p) const {
    if (kind == ProfileKind::Circle) return std::abs(norm(p - center) - a);
    // generic: sample the full curve, then golden-section refine
    const double band = (kind == ProfileKind::GraphPoly) ? chart_xmax * 0.5 : a * 0.25;
    PiecewiseCurve c = full_curve(band);
    const double L = c.length();
    const int N = 512;
    double best_s = 0.0, best_d = std::numeric_limits<double>::max();
    for (int i = 0; i < N; ++i) {
        const double s = L * i / N;
        const double d = norm(p - c.point_at_length(s));
        if (d < best_d) {
            best_d = d;
            best_s = s;
        }
    }
    double lo = best_s - L / N, hi = best_s + L / N;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double s1 = hi - gr * (hi - lo), s2 = lo + gr * (hi - lo);
    double f1 = norm(p - c.point_at_length(s1)), f2 = norm(p - c.point_at_length(s2));
    for (int it = 0; it < 90; ++it) {
        if (f1 < f2) {
            hi = s2; s2 = s1; f2 = f1;
            s1 = hi - gr * (hi - lo);
            f1 = norm(p - c.point_at_length(s1));
        } else {
            lo = s1; s1 = s2; f1 = f2;
            s2 = lo + gr * (hi - lo);
            f2 = norm(p - c.point_at_length(s2));
        }
    }
    return std::min(f1, f2);
}

// ---------------------------------------------------------------------------
// GapDomain
// ---------------------------------------------------------------------------

double GapDomain::gap_width(double x) const {
    if (std::abs(x) > 2.0 * R0 * (1.0 + 1e-12))
        throw std::invalid_argument("gap_width: |x'| exceeds the graph chart (2 R0)");
    return gap_width_unchecked(x);
}

bool GapDomain::contains(Vec2 p) const {
    return outer.region_contains(p) && !inner.region_contains(p);
}

namespace {

BoundaryProfile circle_profile(double radius, double offset_y, bool is_outer) {
    BoundaryProfile b;
    b.kind = ProfileKind::Circle;
    b.a = b.b = radius;
    b.center = {0.0, offset_y + radius};
    b.offset_y = offset_y;
    b.is_outer = is_outer;
    return b;
}

}  // namespace

GapDomain make_eccentric_disks(double r, double R, double eps, WeightMode mode) {
    if (r <= 0.0) throw std::invalid_argument("make_eccentric_disks: r must be positive");
    if (eps <= 0.0) throw std::invalid_argument("make_eccentric_disks: eps must be positive");
    if (R <= 0.0) throw std::invalid_argument("make_eccentric_disks: R must be positive");
    if (r + eps >= R)
        throw std::invalid_argument("make_eccentric_disks: r+eps >= R (inclusion touches or exits)");
    GapDomain dom;
    dom.outer = circle_profile(R, 0.0, true);
    dom.inner = circle_profile(r, eps, false);
    dom.eps = eps;
    dom.P = {0.0, 0.0};
    dom.P1 = {0.0, eps};
    dom.kappa0 = 1.0 / r;
    dom.kappa1 = 1.0 / r - 1.0 / R;
    dom.m = 2;
    dom.lambda0 = dom.lambda1 = 0.5 * dom.kappa1;
    dom.R0 = std::min(r, R) / 4.0;
    dom.mode = mode;
    dom.name = mode == WeightMode::Axisymmetric ? "spheres" : "disks";
    return dom;
}

GapDomain make_concentric_annulus(double r, double R, WeightMode mode) {
    if (r <= 0.0 || R <= r)
        throw std::invalid_argument("make_concentric_annulus: need 0 < r < R");
    const double eps = R - r;
    GapDomain dom;
    dom.outer = circle_profile(R, 0.0, true);
    dom.inner = circle_profile(r, eps, false);
    dom.eps = eps;
    dom.P = {0.0, 0.0};
    dom.P1 = {0.0, eps};
    dom.kappa0 = 1.0 / r;
    dom.kappa1 = 1.0 / r - 1.0 / R;
    dom.m = 2;
    dom.lambda0 = dom.lambda1 = 0.5 * dom.kappa1;
    dom.R0 = std::min(r, R) / 4.0;
    dom.mode = mode;
    dom.name = mode == WeightMode::Axisymmetric ? "concentric-spheres" : "annulus";
    return dom;
}

GapDomain make_ellipse_in_circle(double a, double b, double R, double eps) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("make_ellipse_in_circle: semi-axes must be positive");
    if (eps <= 0.0) throw std::invalid_argument("make_ellipse_in_circle: eps must be positive");
    if (eps + 2.0 * b >= 2.0 * R)
        throw std::invalid_argument("make_ellipse_in_circle: inclusion does not fit");
    const double kappa0 = b / (a * a);
    const double kappa1 = kappa0 - 1.0 / R;
    if (kappa1 <= 0.0)
        throw std::invalid_argument("make_ellipse_in_circle: relative convexity fails (b/a^2 <= 1/R)");

    GapDomain dom;
    dom.outer = circle_profile(R, 0.0, true);
    dom.inner.kind = ProfileKind::Ellipse;
    dom.inner.a = a;
    dom.inner.b = b;
    dom.inner.center = {0.0, eps + b};
    dom.inner.offset_y = eps;
    dom.inner.is_outer = false;
    dom.eps = eps;
    dom.P = {0.0, 0.0};
    dom.P1 = {0.0, eps};
    dom.kappa0 = kappa0;
    dom.kappa1 = kappa1;
    dom.m = 2;
    dom.lambda0 = dom.lambda1 = 0.5 * kappa1;
    dom.R0 = std::min(a * a / b, R) / 4.0;
    dom.mode = WeightMode::Planar;
    dom.name = "ellipse";

    // the ellipse must lie strictly inside the circle with the gap attained at P
    const int N = 720;
    double min_clear = std::numeric_limits<double>::max();
    for (int i = 0; i < N; ++i) {
        const double t = 2.0 * M_PI * i / N;
        const Vec2 p{a * std::sin(t), eps + b - b * std::cos(t)};
        min_clear = std::min(min_clear, R - norm(p - dom.outer.center));
    }
    if (min_clear < eps * (1.0 - 1e-9))
        throw std::invalid_argument("make_ellipse_in_circle: nearest approach is not at the pole");
    return dom;
}

GapDomain make_mprofile(int m, double lambda, double eps) {
    if (m < 2) throw std::invalid_argument("make_mprofile: m must be >= 2");
    if (lambda <= 0.0) throw std::invalid_argument("make_mprofile: lambda must be positive");
    if (eps <= 0.0) throw std::invalid_argument("make_mprofile: eps must be positive");

    GapDomain dom;
    // flat outer boundary closed by a rounded box
    dom.outer.kind = ProfileKind::GraphPoly;
    dom.outer.is_outer = true;
    dom.outer.offset_y = 0.0;

    // inner graph lambda |x'|^m closed by a tangent circular cap
    dom.inner.kind = ProfileKind::GraphPoly;
    dom.inner.is_outer = false;
    dom.inner.offset_y = eps;
    dom.inner.coeff.assign(m + 1, 0.0);
    dom.inner.coeff[m] = lambda;

    // chart half-width: largest x with |d(h1)/dx| <= 1/2, capped for sanity
    const double x_slope = std::pow(1.0 / (2.0 * lambda * m), 1.0 / (m - 1));
    const double xc = std::min(x_slope, 0.5);
    dom.R0 = xc / 2.0;
    dom.inner.chart_xmax = xc;
    dom.outer.chart_xmax = xc;

    // tangent cap through the junctions
    const double s = dom.inner.dgraph0(xc);
    const double yc = eps + dom.inner.graph0(xc);
    const double y0 = yc + xc / s;
    const double rc = std::hypot(xc, xc / s);
    if (!(y0 > yc) || !(rc > xc))
        throw std::invalid_argument("make_mprofile: cap closure failed");
    dom.inner.cap_center = {0.0, y0};
    dom.inner.cap_radius = rc;

    dom.outer.corner_r = 0.3;
    dom.outer.wall_x = rc + 0.5 + dom.outer.corner_r;
    dom.outer.wall_top = y0 + rc + 0.4;
    dom.outer.dome_radius = dom.outer.wall_x;

    dom.eps = eps;
    dom.P = {0.0, 0.0};
    dom.P1 = {0.0, eps};
    dom.kappa0 = dom.inner.d2graph0(0.0);
    dom.kappa1 = dom.kappa0;
    dom.m = m;
    dom.lambda0 = dom.lambda1 = lambda;
    dom.mode = WeightMode::Planar;
    dom.name = "mprofile";
    return dom;
}

GapDomain make_from_circle_pair(Vec2 outer_center, double R, Vec2 inner_center,
                                double r, WeightMode mode) {
    const double d = norm(inner_center - outer_center);
    if (d + r >= R)
        throw std::invalid_argument("make_from_circle_pair: inclusion touches or exits the domain");
    if (d == 0.0)
        throw std::invalid_argument("make_from_circle_pair: concentric input has no unique nearest point");
    const double eps = R - d - r;
    return make_eccentric_disks(r, R, eps, mode);
}

// ---------------------------------------------------------------------------
// validate_convexity
// ---------------------------------------------------------------------------

ConvexityReport validate_convexity(const GapDomain& dom) {
    ConvexityReport rep;
    rep.kappa0 = dom.d2h1(0.0);
    rep.kappa1 = dom.d2h1(0.0) - dom.d2h(0.0);

    const int N = 64;
    double lam_min = std::numeric_limits<double>::max();
    double lam_max = 0.0;
    double sep_min = std::numeric_limits<double>::max();
    for (int i = 1; i <= N; ++i) {
        const double x = 2.0 * dom.R0 * i / N;
        const double diff = dom.h1(x) - dom.h(x);
        const double env = diff / std::pow(x, dom.m);
        lam_min = std::min(lam_min, env);
        lam_max = std::max(lam_max, env);
        sep_min = std::min({sep_min, dom.eps + diff, dom.gap_width_unchecked(-x)});
    }
    rep.lambda0_hat = lam_min;
    rep.lambda1_hat = lam_max;
    rep.sep_min = std::min(sep_min, dom.eps);

    rep.pass_separation = rep.sep_min > 0.0;
    rep.pass_curvature = dom.m == 2 ? (rep.kappa0 > 1e-12 && rep.kappa1 > 1e-12) : true;
    rep.pass_envelope =
        lam_min > 1e-12 && std::isfinite(lam_max) && lam_max / lam_min < 100.0;
    return rep;
}

// ---------------------------------------------------------------------------
// nearest_points: joint minimization of |a(s) - b(t)| over both curves,
// coarse scan followed by a damped Newton iteration on the arc-length pair.
// ---------------------------------------------------------------------------

namespace {

struct PairObjective {
    const PiecewiseCurve* ca;
    const PiecewiseCurve* cb;
    double f(double sa, double sb) const {
        Vec2 pa, ta, pb, tb;
        ca->eval_at_length(sa, pa, ta);
        cb->eval_at_length(sb, pb, tb);
        const Vec2 d = pa - pb;
        return 0.5 * dot(d, d);
    }
    void grad(double sa, double sb, double& ga, double& gb) const {
        Vec2 pa, ta, pb, tb;
        ca->eval_at_length(sa, pa, ta);
        cb->eval_at_length(sb, pb, tb);
        const Vec2 d = pa - pb;
        ga = dot(d, ta);
        gb = -dot(d, tb);
    }
};

}  // namespace

NearestPointsResult nearest_points(const GapDomain& dom) {
    const double band = dom.R0;
    PiecewiseCurve co = dom.outer.full_curve(band);
    PiecewiseCurve ci = dom.inner.full_curve(band);
    PairObjective obj{&co, &ci};

    const int N = 160;
    double best_sa = 0.0, best_sb = 0.0, best_f = std::numeric_limits<double>::max();
    for (int i = 0; i < N; ++i) {
        const double sa = co.length() * i / N;
        for (int j = 0; j < N; ++j) {
            const double sb = ci.length() * j / N;
            const double f = obj.f(sa, sb);
            if (f < best_f) {
                best_f = f;
                best_sa = sa;
                best_sb = sb;
            }
        }
    }

    double sa = best_sa, sb = best_sb;
    const double scale = std::max(co.length(), ci.length());
    const double hstep = 1e-7 * scale;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
        double ga, gb;
        obj.grad(sa, sb, ga, gb);
        if (std::hypot(ga, gb) <= 1e-15 * scale) {
            converged = true;
            break;
        }
        // numeric Hessian of the squared distance
        double gap, gbp, gam, gbm;
        obj.grad(sa + hstep, sb, gap, gbp);
        obj.grad(sa - hstep, sb, gam, gbm);
        const double haa = (gap - gam) / (2.0 * hstep);
        const double hba = (gbp - gbm) / (2.0 * hstep);
        obj.grad(sa, sb + hstep, gap, gbp);
        obj.grad(sa, sb - hstep, gam, gbm);
        const double hab = (gap - gam) / (2.0 * hstep);
        const double hbb = (gbp - gbm) / (2.0 * hstep);
        double det = haa * hbb - hab * hba;
        double da, db;
        if (std::abs(det) < 1e-30) {
            da = -ga;
            db = -gb;
        } else {
            da = -(hbb * ga - hab * gb) / det;
            db = -(-hba * ga + haa * gb) / det;
        }
        const double f0 = obj.f(sa, sb);
        double step = 1.0;
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            const double na = sa + step * da, nb = sb + step * db;
            if (obj.f(na, nb) < f0) {
                sa = na;
                sb = nb;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            converged = std::hypot(ga, gb) <= 1e-9 * scale;
            break;
        }
        if (std::hypot(step * da, step * db) <= 1e-15 * scale) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        double ga, gb;
        obj.grad(sa, sb, ga, gb);
        if (std::hypot(ga, gb) > 1e-8 * scale)
            throw std::runtime_error("nearest_points: two-point minimization did not converge");
    }

    NearestPointsResult res;
    Vec2 ta, tb;
    co.eval_at_length(sa, res.P, ta);
    ci.eval_at_length(sb, res.P1, tb);
    res.dist = norm(res.P - res.P1);
    return res;
}

}  // namespace gapfield
