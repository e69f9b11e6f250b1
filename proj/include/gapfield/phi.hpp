#pragma once

#include <string>
#include <vector>

#include "gapfield/geometry.hpp"

namespace gapfield {

// Boundary datum as a small polynomial in the normalized coordinates
// (x1 = tangential / meridian radius, xn = axial). Closed-form derivatives
// keep the comparison functions and the sampled C2 norm exact.
struct PhiMonomial {
    double c = 0.0;
    int p1 = 0;  // power of x1
    int pn = 0;  // power of xn
};

struct PhiSpec {
    std::vector<PhiMonomial> terms;
    std::string name = "constant";

    double value(Vec2 p) const;
    Vec2 gradient(Vec2 p) const;
    Mat2 hessian(Vec2 p) const;
};

PhiSpec phi_constant(double c = 1.0);
PhiSpec phi_linear_xn();
PhiSpec phi_quadratic();
PhiSpec phi_scaled(const PhiSpec& base, double factor);
PhiSpec phi_shifted(const PhiSpec& base, double constant);

// "poly: 2*xn^2 + -0.5*x1*xn" (powers default to 1 when omitted)
PhiSpec parse_phi_expression(const std::string& text);
// preset name or "poly: ..." expression
PhiSpec make_phi(const std::string& spec);

}  // namespace gapfield
