#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gapfield/geometry.hpp"
#include "gapfield/kernels.hpp"
#include "gapfield/mesh.hpp"

namespace gapfield {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symmetric coefficient matrix A(x) with certified ellipticity bounds and
// closed-form first derivatives (needed by the flattened-flux corrector).
struct CoefficientField {
    std::function<Mat2(Vec2)> eval;
    std::function<void(Vec2, Mat2&, Mat2&)> deriv;  // dA/dx, dA/dy
    double lambda = 1.0;
    double Lambda = 1.0;
    bool is_identity = true;
    std::string name = "identity";
};

struct ScalarField {
    const Mesh* mesh = nullptr;
    std::vector<double> values;
};

struct SolveStats {
    int iterations = 0;
    double rel_residual = 0.0;
    double min_value = 0.0, max_value = 0.0;
    bool converged = false;
};

// Assembled stiffness on all nodes plus the Dirichlet bookkeeping. The full
// matrix backs the energy form and the reaction-sum fluxes; the reduced
// free-node block feeds the CG solver.
struct LinearSystem {
    const Mesh* mesh = nullptr;
    kernels::CsrMatrix K;            // all nodes
    std::vector<double> load;        // zero for the homogeneous problems here
    std::vector<int> free_nodes;     // ascending node ids
    std::vector<int> free_index;     // node -> position in free_nodes, or -1
    kernels::CsrMatrix Kff;
    std::vector<double> diag_ff;
    double required_tol = 1e-10;
};

LinearSystem assemble(const Mesh& mesh, const CoefficientField& A);

ScalarField solve_dirichlet(const LinearSystem& sys,
                            const std::function<double(Vec2)>& g_outer,
                            const std::function<double(Vec2)>& g_inner,
                            SolveStats* stats = nullptr);

// f^T K g over full nodal vectors (boundary nodes included).
double energy_product(const LinearSystem& sys, const ScalarField& f, const ScalarField& g);

// Reaction-sum flux through the tagged boundary, normal pointing from the
// tagged body into the gap region; for the capacitary potential this returns
// minus its energy.
double boundary_flux(const LinearSystem& sys, const ScalarField& f, BoundaryTag tag);

std::vector<Vec2> field_gradient(const ScalarField& f);
Vec2 element_gradient(const ScalarField& f, int tri);
Vec2 probe_gradient(const ScalarField& f, Vec2 p);

}  // namespace gapfield
