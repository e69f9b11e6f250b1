#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapfield {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

// Symmetric 2x2 matrix.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;
    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
    double eig_min() const;
    double eig_max() const;
};

enum class WeightMode { Planar, Axisymmetric };

// ---------------------------------------------------------------------------
// Piecewise parametric curves. Used for the full closed boundaries: meshing
// samples them by arc length, and the two-curve distance minimization walks
// them with exact tangents. Points are always re-evaluated from the closed
// form of the active piece, never interpolated.
// ---------------------------------------------------------------------------

struct CurvePiece {
    std::function<Vec2(double)> point;   // t in [t0, t1]
    std::function<Vec2(double)> dpoint;  // d point / d t
    double t0 = 0.0, t1 = 1.0;
};

class PiecewiseCurve {
public:
    void add(CurvePiece piece);
    void finalize();  // builds arc-length tables; call after all add()s

    double length() const { return total_length_; }
    Vec2 point_at_length(double s) const;
    Vec2 point_at_fraction(double f) const { return point_at_length(f * total_length_); }
    // Position and unit tangent; used by the closest-pair solver.
    void eval_at_length(double s, Vec2& p, Vec2& tangent) const;

private:
    struct PieceTable {
        std::vector<double> cum;  // cumulative length at uniform t samples
        double length = 0.0;
    };
    double param_at_length(std::size_t piece, double s_local) const;

    std::vector<CurvePiece> pieces_;
    std::vector<PieceTable> tables_;
    std::vector<double> piece_offset_;
    double total_length_ = 0.0;
    bool finalized_ = false;
};

// ---------------------------------------------------------------------------
// Boundary profiles. Each profile knows its gap-side graph in the normalized
// frame, measured from its own tangency point: the outer boundary is
// x_n = graph0(x'), the inner boundary x_n = eps + graph0(x'). graph0(0) = 0
// and graph0'(0) = 0 hold exactly by construction.
// ---------------------------------------------------------------------------

enum class ProfileKind { Circle, Ellipse, GraphPoly };

struct BoundaryProfile {
    ProfileKind kind = ProfileKind::Circle;

    // Circle / ellipse: center in the normalized frame, semi-axes a (x) and
    // b (x_n). Circle has a == b. The gap-side graph is the lower arc.
    Vec2 center{0.0, 0.0};
    double a = 1.0, b = 1.0;

    // GraphPoly: coeff[k] multiplies |x'|^k, k >= 2. `offset_y` is the height
    // of the tangency point in the normalized frame (0 for outer, eps for
    // inner); the closures below are built from it.
    std::vector<double> coeff;
    double offset_y = 0.0;
    double chart_xmax = 0.0;  // half-width over which the graph is the boundary

    // Closure of a GraphPoly inner boundary: tangent circular cap over the top.
    Vec2 cap_center{0.0, 0.0};
    double cap_radius = 0.0;

    // Closure of a GraphPoly outer boundary: corner arcs, vertical walls and a
    // dome arc (a rounded box opening upward).
    double wall_x = 0.0;       // |x| of the vertical walls
    double corner_r = 0.0;     // corner arc radius
    double wall_top = 0.0;     // y where walls meet the dome
    double dome_radius = 0.0;  // dome arc radius (center (0, wall_top))

    bool is_outer = false;  // interior side: outer boundary encloses the domain

    double graph0(double x) const;
    double dgraph0(double x) const;
    double d2graph0(double x) const;
    double curvature_at_origin() const { return d2graph0(0.0); }

    // Full closed curve (planar) or gap-to-top half (axisymmetric meshing).
    // `x_band` is the |x'| where the gap chart hands over to the remainder.
    PiecewiseCurve remainder_curve(double x_band, bool upper_half) const;
    PiecewiseCurve full_curve(double x_band) const;

    // Interior test of the region this profile bounds (the matrix domain D for
    // outer profiles, the inclusion D1 for inner ones).
    bool region_contains(Vec2 p) const;

    // Distance from p to the curve (non-negative), used for snapping checks.
    double distance_to_curve(Vec2 p) const;
};

// ---------------------------------------------------------------------------
// GapDomain: normalized geometry of a convex inclusion eps-close to the outer
// boundary. P = (0,0) on the outer boundary, P1 = (0,eps) on the inclusion,
// and the the shortest segment between them lies on the x_n axis.
// ---------------------------------------------------------------------------

struct ConvexityReport {
    double kappa0 = 0.0;       // inner graph curvature at 0
    double kappa1 = 0.0;       // curvature of the difference at 0
    double lambda0_hat = 0.0;  // measured envelope constants for |x'|^m
    double lambda1_hat = 0.0;
    double sep_min = 0.0;      // min of eps + h1 - h over the chart
    bool pass_curvature = false;
    bool pass_envelope = false;
    bool pass_separation = false;
    bool pass() const { return pass_curvature && pass_envelope && pass_separation; }
};

struct NearestPointsResult {
    Vec2 P, P1;
    double dist = 0.0;
};

struct GapDomain {
    BoundaryProfile outer, inner;
    double eps = 0.0;
    Vec2 P{0.0, 0.0}, P1{0.0, 0.0};
    double R0 = 0.0;
    int m = 2;
    double kappa0 = 0.0, kappa1 = 0.0;
    double lambda0 = 0.0, lambda1 = 0.0;
    WeightMode mode = WeightMode::Planar;
    std::string name;

    double h(double x) const { return outer.graph0(x); }
    double dh(double x) const { return outer.dgraph0(x); }
    double d2h(double x) const { return outer.d2graph0(x); }
    double h1(double x) const { return inner.graph0(x); }
    double dh1(double x) const { return inner.dgraph0(x); }
    double d2h1(double x) const { return inner.d2graph0(x); }

    // Local gap width delta(x') = eps + h1 - h; |x'| <= 2 R0 required. Written
    // through the stored curve offsets so a degenerate pair (coincident
    // curves) reports its true zero separation.
    double gap_width(double x) const;
    double gap_width_unchecked(double x) const {
        return (inner.offset_y - outer.offset_y) + (h1(x) - h(x));
    }

    // True if p lies in Omega = D \ closure(D1).
    bool contains(Vec2 p) const;

    int dimension() const { return mode == WeightMode::Axisymmetric ? 3 : 2; }
};

// Constructors (all emit normalized domains).
GapDomain make_eccentric_disks(double r, double R, double eps,
                               WeightMode mode = WeightMode::Planar);
GapDomain make_concentric_annulus(double r, double R,
                                  WeightMode mode = WeightMode::Planar);
GapDomain make_ellipse_in_circle(double a, double b, double R, double eps);
GapDomain make_mprofile(int m, double lambda, double eps);
// Arbitrary circle pair; normalizes (translation + rotation) so the closest
// points land on the x_n axis.
GapDomain make_from_circle_pair(Vec2 outer_center, double R, Vec2 inner_center,
                                double r, WeightMode mode = WeightMode::Planar);

ConvexityReport validate_convexity(const GapDomain& dom);
NearestPointsResult nearest_points(const GapDomain& dom);

}  // namespace gapfield
