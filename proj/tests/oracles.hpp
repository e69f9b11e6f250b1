#pragma once

// Test-only closed-form references, independent of the finite-element path:
//  - concentric annulus / spherical shell potentials and energies by
//    separation of variables,
//  - eccentric disk pair by the Moebius map onto a concentric annulus.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "gapfield/geometry.hpp"

namespace oracles {

// planar annulus r < |x - c| < R, potential 1 on the inner circle, 0 outside
inline double annulus_v1(double r, double R, gapfield::Vec2 center, gapfield::Vec2 p) {
    const double rho = gapfield::norm(p - center);
    return std::log(R / rho) / std::log(R / r);
}

inline double annulus_a11(double r, double R) { return 2.0 * M_PI / std::log(R / r); }

// spherical shell (axisymmetric), potential 1 inside, 0 outside
inline double shell_v1(double r, double R, gapfield::Vec2 center, gapfield::Vec2 p) {
    const double rho = gapfield::norm(p - center);
    return (1.0 / rho - 1.0 / R) / (1.0 / r - 1.0 / R);
}

inline double shell_a11(double r, double R) { return 4.0 * M_PI / (1.0 / r - 1.0 / R); }

// Eccentric disk pair in the normalized frame: outer circle center (0, R)
// radius R, inner circle center (0, eps + r) radius r. The two inversion
// points of the pair map both circles onto concentric ones.
struct BipolarDisks {
    double p = 0.0, q = 0.0;     // inversion points (0, p) and (0, q)
    double rho_out = 0.0, rho_in = 0.0;

    BipolarDisks(double r, double R, double eps) {
        const double ci = eps + r;
        const double S = (ci * ci - r * r) / (ci - R);
        const double P = R * S;
        const double disc = S * S - 4.0 * P;
        if (disc <= 0.0) throw std::runtime_error("bipolar oracle: circles not nested/eccentric");
        p = 0.5 * (S - std::sqrt(disc));
        q = 0.5 * (S + std::sqrt(disc));
        rho_out = std::abs(p / q);  // |T(0)|, origin lies on the outer circle
        rho_in = std::abs((eps - p) / (eps - q));
    }

    std::complex<double> T(std::complex<double> z) const {
        return (z - std::complex<double>(0.0, p)) / (z - std::complex<double>(0.0, q));
    }

    double v1(gapfield::Vec2 pt) const {
        const std::complex<double> z(pt.x, pt.y);
        return (std::log(std::abs(T(z))) - std::log(rho_out)) /
               (std::log(rho_in) - std::log(rho_out));
    }

    double grad_v1_mag(gapfield::Vec2 pt) const {
        const std::complex<double> z(pt.x, pt.y);
        const std::complex<double> lp = 1.0 / (z - std::complex<double>(0.0, p)) -
                                        1.0 / (z - std::complex<double>(0.0, q));
        return std::abs(lp) / std::abs(std::log(rho_in) - std::log(rho_out));
    }

    double a11() const { return 2.0 * M_PI / std::abs(std::log(rho_in / rho_out)); }
};

}  // namespace oracles
