#pragma once

#include <string>

#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/phi.hpp"

namespace gapfield {

struct BoundaryData {
    PhiSpec phi;
    double phi_at_P = 0.0;
    double c2_norm = 0.0;  // sampled over the outer boundary
};

BoundaryData make_boundary_data(const GapDomain& dom, const PhiSpec& phi);

struct Functionals {
    double a11 = 0.0;
    double Q = 0.0;       // energy route (primary)
    double Q_flux = 0.0;  // reaction-sum route (cross-check)
    bool consistent = true;
};

// Solved bundle: the two auxiliary potentials, the recovered floating
// potential C1 = phi(P) + Q/a11 and the reconstructed field
// u = (C1 - phi(P)) v1 + v0 + phi(P).
struct DecompositionResult {
    ScalarField v1, v0, u;
    double a11 = 0.0;
    double Q = 0.0;
    double Q_flux = 0.0;
    double C1 = 0.0;
    double flux_residual = 0.0;
    double c2_norm = 0.0;  // carried from the boundary data for the probes
    bool functionals_consistent = true;
    SolveStats stats_v1, stats_v0;
};

ScalarField solve_v1(const LinearSystem& sys, SolveStats* stats = nullptr);
ScalarField solve_v0(const LinearSystem& sys, const BoundaryData& bd,
                     SolveStats* stats = nullptr);
Functionals compute_functionals(const LinearSystem& sys, const ScalarField& v1,
                                const ScalarField& v0);
DecompositionResult assemble_u(const LinearSystem& sys, ScalarField v1, ScalarField v0,
                               const Functionals& fn, const BoundaryData& bd);
DecompositionResult solve_decomposition(const LinearSystem& sys, const BoundaryData& bd);

struct BlowupProbe {
    double grad_mid = 0.0;          // |grad u| at the gap midpoint
    double grad_max_segment = 0.0;  // max |grad u| along the closest segment
    double ratio_max = 0.0;         // measured/predicted pointwise bound, chart grid
    double grad_mid_v1 = 0.0;
    double grad_mid_v0 = 0.0;
};

BlowupProbe probe_blowup(const DecompositionResult& result, const GapDomain& dom);

}  // namespace gapfield
