#pragma once

#include <cstdint>
#include <string>

#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"

namespace gapfield {

// Closed-form coefficient presets with hand-written derivatives. The
// flattened-flux corrector needs A_ni, A_nn and their first derivatives
// exactly, so none of these go through numeric differentiation.
struct CoefficientPreset {
    std::string name = "identity";  // identity | scaled | constant-offdiag | smooth-rotation
    double scale = 1.0;             // scaled
    double a_off = 0.0;             // constant-offdiag
    double kappa = 1.0;             // smooth-rotation: second eigenvalue, in (0,1]
    double theta0 = 0.5;            // smooth-rotation: bump amplitude (radians)
    Vec2 bump_center{0.0, 0.3};     // smooth-rotation: bump location
    double bump_width = 0.5;        // smooth-rotation: bump length scale
};

CoefficientField make_preset(const CoefficientPreset& preset);

struct EllipticityCertificate {
    double lambda_hat = 0.0;
    double Lambda_hat = 0.0;
    int samples = 0;
};

// Extreme eigenvalues of A over random sample points in Omega; hard error if
// the sampled lower bound undercuts the field's claimed one.
EllipticityCertificate certify_ellipticity(const CoefficientField& A, const GapDomain& dom,
                                           int n_samples, std::uint64_t seed = 12345);

}  // namespace gapfield
