#include "gapfield/coefficients.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gapfield {

CoefficientField make_preset(const CoefficientPreset& preset) {
    CoefficientField f;
    f.name = preset.name;
    if (preset.name == "identity") {
        f.eval = [](Vec2) { return Mat2{1.0, 0.0, 1.0}; };
        f.deriv = [](Vec2, Mat2& dx, Mat2& dy) {
            dx = Mat2{0.0, 0.0, 0.0};
            dy = Mat2{0.0, 0.0, 0.0};
        };
        f.lambda = f.Lambda = 1.0;
        f.is_identity = true;
        return f;
    }
    if (preset.name == "scaled") {
        const double s = preset.scale;
        if (s <= 0.0) throw std::invalid_argument("make_preset: scale must be positive");
        f.eval = [s](Vec2) { return Mat2{s, 0.0, s}; };
        f.deriv = [](Vec2, Mat2& dx, Mat2& dy) {
            dx = Mat2{0.0, 0.0, 0.0};
            dy = Mat2{0.0, 0.0, 0.0};
        };
        f.lambda = f.Lambda = s;
        f.is_identity = false;
        return f;
    }
    if (preset.name == "constant-offdiag") {
        const double s = preset.scale, a = preset.a_off;
        if (s - std::abs(a) <= 0.0)
            throw std::invalid_argument("make_preset: ellipticity margin <= 0 (|a_off| >= scale)");
        f.eval = [s, a](Vec2) { return Mat2{s, a, s}; };
        f.deriv = [](Vec2, Mat2& dx, Mat2& dy) {
            dx = Mat2{0.0, 0.0, 0.0};
            dy = Mat2{0.0, 0.0, 0.0};
        };
        f.lambda = s - std::abs(a);
        f.Lambda = s + std::abs(a);
        f.is_identity = false;
        return f;
    }
    if (preset.name == "smooth-rotation") {
        const double kappa = preset.kappa;
        if (kappa <= 0.0 || kappa > 1.0)
            throw std::invalid_argument("make_preset: smooth-rotation needs kappa in (0, 1]");
        const double th0 = preset.theta0;
        const Vec2 c = preset.bump_center;
        const double w = preset.bump_width;
        if (w <= 0.0) throw std::invalid_argument("make_preset: bump width must be positive");
        auto theta = [th0, c, w](Vec2 p) {
            const double q = ((p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y)) / (w * w);
            return th0 * std::exp(-q);
        };
        f.eval = [kappa, theta](Vec2 p) {
            const double t = theta(p);
            const double ct = std::cos(t), st = std::sin(t);
            return Mat2{ct * ct + kappa * st * st, (1.0 - kappa) * st * ct,
                        st * st + kappa * ct * ct};
        };
        f.deriv = [kappa, theta, c, w](Vec2 p, Mat2& dx, Mat2& dy) {
            const double t = theta(p);
            const double s2 = std::sin(2.0 * t), c2 = std::cos(2.0 * t);
            // dA/dtheta
            const Mat2 dAdt{-(1.0 - kappa) * s2, (1.0 - kappa) * c2, (1.0 - kappa) * s2};
            const double tx = t * (-2.0 * (p.x - c.x) / (w * w));
            const double ty = t * (-2.0 * (p.y - c.y) / (w * w));
            dx = Mat2{dAdt.a11 * tx, dAdt.a12 * tx, dAdt.a22 * tx};
            dy = Mat2{dAdt.a11 * ty, dAdt.a12 * ty, dAdt.a22 * ty};
        };
        f.lambda = kappa;
        f.Lambda = 1.0;
        f.is_identity = false;
        f.name = "smooth-rotation";
        return f;
    }
    throw std::invalid_argument("make_preset: unknown preset '" + preset.name + "'");
}

EllipticityCertificate certify_ellipticity(const CoefficientField& A, const GapDomain& dom,
                                           int n_samples, std::uint64_t seed) {
    if (n_samples < 100)
        throw std::invalid_argument("certify_ellipticity: need at least 100 samples");

    // bounding box from the outer curve
    PiecewiseCurve outer = dom.outer.full_curve(dom.R0);
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    for (int i = 0; i <= 256; ++i) {
        const Vec2 p = outer.point_at_length(outer.length() * i / 256.0);
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(xmin, xmax), uy(ymin, ymax);
    EllipticityCertificate cert;
    cert.lambda_hat = std::numeric_limits<double>::max();
    cert.Lambda_hat = 0.0;
    int accepted = 0;
    int guard = 0;
    while (accepted < n_samples && guard < 1000 * n_samples) {
        ++guard;
        const Vec2 p{ux(rng), uy(rng)};
        if (!dom.contains(p)) continue;
        const Mat2 a = A.eval(p);
        cert.lambda_hat = std::min(cert.lambda_hat, a.eig_min());
        cert.Lambda_hat = std::max(cert.Lambda_hat, a.eig_max());
        ++accepted;
    }
    if (accepted < n_samples)
        throw std::runtime_error("certify_ellipticity: rejection sampling failed to fill the quota");
    cert.samples = accepted;
    if (cert.lambda_hat < A.lambda - 1e-12)
        throw std::runtime_error("certify_ellipticity: sampled ellipticity undercuts the claimed bound");
    return cert;
}

}  // namespace gapfield
