#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gapfield/conductivity.hpp"
#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/mesh.hpp"
#include "gapfield/phi.hpp"

namespace gapfield {

// Dimension-dependent rate factor: sqrt(eps) in 2D, 1/|ln eps| in 3D, 1 from
// 4D on. Valid for 0 < eps < 1/2.
double rho_n(int n, double eps);
// Flatness-generalized version; reduces to rho_n at m = 2.
double rho_n_m(int n, int m, double eps);

struct RatePrediction {
    int n = 2, m = 2;
    double exponent = 0.0;   // predicted power of eps for a11
    bool log_corrected = false;
};
RatePrediction predict_a11_rate(int n, int m);

// Model integral over the (n-1)-ball: S_{n-2} * int_0^R0 s^{n-2}/(eps+s^m) ds,
// adaptive Simpson on the two natural subranges. Its eps-rate matches the
// capacitary energy independently of any finite-element solve.
double a11_quadrature_oracle(int n, int m, double eps, double R0);

struct SweepRecord {
    double eps = 0.0;
    int n = 2, m = 2;
    double a11 = 0.0, Q = 0.0, C1 = 0.0;
    double grad_mid = 0.0, sup_diff_v1 = 0.0, sup_diff_v0 = 0.0;
    double flux_residual = 0.0;
    int mesh_vertices = 0, cg_iters_v1 = 0, cg_iters_v0 = 0;
    double wall_ms = 0.0;
    // extra diagnostics, not part of the CSV schema
    double grad_mid_v1 = 0.0, grad_mid_v0 = 0.0;
    double Q_flux = 0.0, ratio_max = 0.0, green_rel = 0.0;
    bool ok = false;
    std::string error;
};

struct SweepSpec {
    std::function<GapDomain(double)> domain_family;
    std::vector<double> eps_list;  // strictly decreasing
    MeshParams mesh;
    PhiSpec phi;
    CoefficientField A;
};

SweepRecord compute_sweep_record(const SweepSpec& spec, double eps);
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, int workers = 1);

enum class FitModel { Power, PowerWithLog };

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    int n_points = 0;
    FitModel model = FitModel::Power;
};

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& q, FitModel model);
RateFit fit_rate(const std::vector<SweepRecord>& records,
                 const std::function<double(const SweepRecord&)>& quantity, FitModel model);

struct QstarExtrapolation {
    bool has_estimate = false;
    double Qstar = 0.0;
    double order = 0.0;  // fitted algebraic order p in Q(eps) = Q* + A eps^p
    std::vector<double> eps, Q, dQ;  // convergence table (dQ has one fewer row)
};

// Richardson-style limit of Q(eps) assuming an algebraic approach; refuses to
// extrapolate when the successive differences do not shrink monotonically.
QstarExtrapolation extrapolate_Qstar(const std::vector<SweepRecord>& records);

}  // namespace gapfield
