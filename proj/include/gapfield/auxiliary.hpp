#pragma once

#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/phi.hpp"

namespace gapfield {

// Explicit comparison functions on the gap chart Omega_{R0}:
//   ubar   - linear ramp through the gap, 1 on the inclusion graph, 0 on the
//            outer graph
//   uhat   - (1 - ubar) times the outer trace increment, matching the data of
//            the trace-driven solve
//   utilde - ubar plus the flattened-flux corrector for non-diagonal A
// Values and gradients come from the profile closed forms; finite differences
// appear only in self-tests and the divergence diagnostic below.
enum class AuxKind { Ubar, Uhat, Utilde };

struct AuxEval {
    double value = 0.0;
    Vec2 gradient{0.0, 0.0};
};

struct AuxFunction {
    AuxKind kind = AuxKind::Ubar;
    const GapDomain* dom = nullptr;
    const CoefficientField* A = nullptr;  // utilde
    const PhiSpec* phi = nullptr;         // uhat

    AuxEval eval(Vec2 p) const;
    bool in_chart(Vec2 p) const;
};

AuxFunction make_ubar(const GapDomain& dom);
AuxFunction make_uhat(const GapDomain& dom, const PhiSpec& phi);
AuxFunction make_utilde(const GapDomain& dom, const CoefficientField& A);

struct ChartGrid {
    int n_tangential = 41;  // doubled-up over [-R0, R0] (or [0, R0] axisym)
    int n_layers = 11;      // t in [0.05, 0.95]
    double t_min = 0.05, t_max = 0.95;
};

std::vector<Vec2> chart_sample_points(const GapDomain& dom, const ChartGrid& grid = {});

// max over the chart grid of |grad f_h - grad aux|
double sup_gradient_difference(const ScalarField& f, const AuxFunction& aux,
                               const ChartGrid& grid = {});

struct CorrectorCheck {
    double max_scaled_divergence = 0.0;  // max |div(A grad aux)| * (eps + |x'|^m)
    Vec2 argmax{0.0, 0.0};
};

// Scaled conduction-flux divergence of an aux function over the chart grid,
// via central differences of the closed-form flux A(x) grad aux(x). The
// corrector keeps this bounded for non-diagonal A; the plain ramp does not.
CorrectorCheck corrector_flux_check(const AuxFunction& aux, const CoefficientField& A,
                                    const ChartGrid& grid = {});

}  // namespace gapfield
