#include "gapfield/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gapfield {

namespace {

struct ElementGeom {
    double area;
    double bx[3], by[3];  // basis gradients
};

ElementGeom element_geom(const Mesh& mesh, int t) {
    const Vec2 a = mesh.vertices[mesh.tris[t][0]];
    const Vec2 b = mesh.vertices[mesh.tris[t][1]];
    const Vec2 c = mesh.vertices[mesh.tris[t][2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    ElementGeom g;
    g.area = 0.5 * det;
    g.bx[0] = (b.y - c.y) / det;
    g.bx[1] = (c.y - a.y) / det;
    g.bx[2] = (a.y - b.y) / det;
    g.by[0] = (c.x - b.x) / det;
    g.by[1] = (a.x - c.x) / det;
    g.by[2] = (b.x - a.x) / det;
    return g;
}

// Local 3x3 stiffness; symmetric by construction (upper triangle mirrored).
// Planar: one centroid point. Axisymmetric: edge-midpoint rule with the
// 2*pi*radius weight taken at the quadrature points, so elements touching the
// axis never see a zero nodal radius.
void local_stiffness(const Mesh& mesh, const CoefficientField& A, int t, double out[9]) {
    const ElementGeom g = element_geom(mesh, t);
    const Vec2 p0 = mesh.vertices[mesh.tris[t][0]];
    const Vec2 p1 = mesh.vertices[mesh.tris[t][1]];
    const Vec2 p2 = mesh.vertices[mesh.tris[t][2]];

    Vec2 qpts[3];
    double qw[3];
    int nq;
    if (mesh.weight_mode == WeightMode::Planar) {
        qpts[0] = (1.0 / 3.0) * (p0 + p1 + p2);
        qw[0] = g.area;
        nq = 1;
    } else {
        qpts[0] = 0.5 * (p0 + p1);
        qpts[1] = 0.5 * (p1 + p2);
        qpts[2] = 0.5 * (p2 + p0);
        for (int q = 0; q < 3; ++q) qw[q] = (g.area / 3.0) * 2.0 * M_PI * std::abs(qpts[q].x);
        nq = 3;
    }

    for (int i = 0; i < 9; ++i) out[i] = 0.0;
    for (int q = 0; q < nq; ++q) {
        Mat2 Aq{1.0, 0.0, 1.0};
        if (!A.is_identity) {
            Aq = A.eval(qpts[q]);
            if (Aq.eig_min() <= 0.0)
                throw SolverError("assemble: ellipticity violation detected at a quadrature point");
        }
        for (int i = 0; i < 3; ++i) {
            const Vec2 Agi = Aq.apply({g.bx[i], g.by[i]});
            for (int j = i; j < 3; ++j) {
                out[3 * i + j] += qw[q] * (Agi.x * g.bx[j] + Agi.y * g.by[j]);
            }
        }
    }
    out[3] = out[1];
    out[6] = out[2];
    out[7] = out[5];
}

}  // namespace

// ---------------------------------------------------------------------------
// Assembly: element matrices first (parallel over elements), then a gather
// pass parallel over rows. Each row accumulates its incident elements in
// ascending element order, so the result is independent of thread count and
// entry (i,j) is bit-identical to (j,i).
// ---------------------------------------------------------------------------

LinearSystem assemble(const Mesh& mesh, const CoefficientField& A) {
    const int nv = mesh.n_vertices();
    const int nt = mesh.n_triangles();

    std::vector<double> localK(static_cast<std::size_t>(nt) * 9);
    const bool par = kernels::backend() == kernels::Backend::OpenMP;
#pragma omp parallel for schedule(static) if (par)
    for (int t = 0; t < nt; ++t) local_stiffness(mesh, A, t, &localK[9 * t]);

    // vertex -> incident (element, local index), ascending element order
    std::vector<int> head(nv + 1, 0);
    for (int t = 0; t < nt; ++t)
        for (int k = 0; k < 3; ++k) head[mesh.tris[t][k] + 1]++;
    for (int v = 0; v < nv; ++v) head[v + 1] += head[v];
    std::vector<std::pair<int, int>> incident(3 * static_cast<std::size_t>(nt));
    {
        std::vector<int> cursor(head.begin(), head.end() - 1);
        for (int t = 0; t < nt; ++t)
            for (int k = 0; k < 3; ++k) {
                const int v = mesh.tris[t][k];
                incident[cursor[v]++] = {t, k};
            }
    }

    LinearSystem sys;
    sys.mesh = &mesh;
    sys.K.n = nv;
    sys.K.row_ptr.assign(nv + 1, 0);

    // pattern: neighbors of each vertex (sorted unique)
    std::vector<std::vector<int>> row_cols(nv);
#pragma omp parallel for schedule(static) if (par)
    for (int v = 0; v < nv; ++v) {
        auto& cols = row_cols[v];
        for (int it = head[v]; it < head[v + 1]; ++it) {
            const int t = incident[it].first;
            for (int k = 0; k < 3; ++k) cols.push_back(mesh.tris[t][k]);
        }
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }
    for (int v = 0; v < nv; ++v)
        sys.K.row_ptr[v + 1] = sys.K.row_ptr[v] + static_cast<int>(row_cols[v].size());
    sys.K.col.resize(sys.K.row_ptr[nv]);
    sys.K.val.assign(sys.K.row_ptr[nv], 0.0);
    for (int v = 0; v < nv; ++v)
        std::copy(row_cols[v].begin(), row_cols[v].end(), sys.K.col.begin() + sys.K.row_ptr[v]);

#pragma omp parallel for schedule(static) if (par)
    for (int v = 0; v < nv; ++v) {
        const int lo = sys.K.row_ptr[v];
        const int hi = sys.K.row_ptr[v + 1];
        for (int it = head[v]; it < head[v + 1]; ++it) {
            const auto [t, li] = incident[it];
            for (int lj = 0; lj < 3; ++lj) {
                const int j = mesh.tris[t][lj];
                const int pos = static_cast<int>(
                    std::lower_bound(sys.K.col.begin() + lo, sys.K.col.begin() + hi, j) -
                    sys.K.col.begin());
                sys.K.val[pos] += localK[9 * t + 3 * li + lj];
            }
        }
    }

    sys.load.assign(nv, 0.0);

    // Dirichlet bookkeeping
    sys.free_index.assign(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (!mesh.vertex_on_outer[v] && !mesh.vertex_on_inner[v]) {
            sys.free_index[v] = static_cast<int>(sys.free_nodes.size());
            sys.free_nodes.push_back(v);
        }
    }

    // reduced block
    const int nf = static_cast<int>(sys.free_nodes.size());
    sys.Kff.n = nf;
    sys.Kff.row_ptr.assign(nf + 1, 0);
    for (int fi = 0; fi < nf; ++fi) {
        const int v = sys.free_nodes[fi];
        int count = 0;
        for (int k = sys.K.row_ptr[v]; k < sys.K.row_ptr[v + 1]; ++k)
            if (sys.free_index[sys.K.col[k]] >= 0) ++count;
        sys.Kff.row_ptr[fi + 1] = sys.Kff.row_ptr[fi] + count;
    }
    sys.Kff.col.resize(sys.Kff.row_ptr[nf]);
    sys.Kff.val.resize(sys.Kff.row_ptr[nf]);
    sys.diag_ff.assign(nf, 0.0);
    for (int fi = 0; fi < nf; ++fi) {
        const int v = sys.free_nodes[fi];
        int pos = sys.Kff.row_ptr[fi];
        for (int k = sys.K.row_ptr[v]; k < sys.K.row_ptr[v + 1]; ++k) {
            const int fj = sys.free_index[sys.K.col[k]];
            if (fj < 0) continue;
            sys.Kff.col[pos] = fj;
            sys.Kff.val[pos] = sys.K.val[k];
            if (fj == fi) sys.diag_ff[fi] = sys.K.val[k];
            ++pos;
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Jacobi-preconditioned conjugate gradients. Required relative residual
// 1e-10; iteration continues opportunistically toward round-off so the
// reaction-sum identities hold far below the acceptance tolerances. All
// reductions are blocked, so the iteration is bit-reproducible for any
// thread count.
// ---------------------------------------------------------------------------

namespace {

struct CgResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

CgResult pcg(const kernels::CsrMatrix& A, const std::vector<double>& diag,
             const std::vector<double>& b, std::vector<double>& x, double required_tol) {
    const int n = A.n;
    x.assign(n, 0.0);
    CgResult res;
    const double bnorm = kernels::norm2(b);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const int cap = static_cast<int>(20.0 * std::sqrt(static_cast<double>(n)) + 500.0);
    const double extended_tol = 3e-15;

    std::vector<double> r = b, z(n), p(n), q(n), inv_diag(n);
    for (int i = 0; i < n; ++i) inv_diag[i] = 1.0 / diag[i];
    kernels::hadamard(r, inv_diag, z);
    p = z;
    double rz = kernels::dot(r, z);
    double rel = 1.0, best = 1.0;
    int stagnant = 0;

    int it = 0;
    for (; it < cap; ++it) {
        kernels::spmv(A, p, q);
        const double pq = kernels::dot(p, q);
        if (pq <= 0.0)
            throw SolverError("pcg: nonpositive curvature encountered (system not SPD)");
        const double alpha = rz / pq;
        kernels::axpy(alpha, p, x);
        kernels::axpy(-alpha, q, r);
        if ((it + 1) % 64 == 0) {
            kernels::spmv(A, x, q);
            for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
        }
        const double rnorm = kernels::norm2(r);
        rel = rnorm / bnorm;
        if (rel < 0.9999 * best) {
            best = rel;
            stagnant = 0;
        } else {
            ++stagnant;
        }
        if (rel <= extended_tol) {
            ++it;
            break;
        }
        if (rel <= required_tol && stagnant >= 40) {
            ++it;
            break;
        }
        kernels::hadamard(r, inv_diag, z);
        const double rz_new = kernels::dot(r, z);
        kernels::xpby(z, rz_new / rz, p);
        rz = rz_new;
    }
    // true residual at exit
    kernels::spmv(A, x, q);
    for (int i = 0; i < n; ++i) q[i] = b[i] - q[i];
    res.rel_residual = kernels::norm2(q) / bnorm;
    res.iterations = it;
    res.converged = res.rel_residual <= required_tol;
    return res;
}

}  // namespace

ScalarField solve_dirichlet(const LinearSystem& sys,
                            const std::function<double(Vec2)>& g_outer,
                            const std::function<double(Vec2)>& g_inner,
                            SolveStats* stats) {
    const Mesh& mesh = *sys.mesh;
    const int nv = mesh.n_vertices();

    ScalarField f;
    f.mesh = &mesh;
    f.values.assign(nv, 0.0);
    for (int v = 0; v < nv; ++v) {
        if (mesh.vertex_on_inner[v])
            f.values[v] = g_inner(mesh.vertices[v]);
        else if (mesh.vertex_on_outer[v])
            f.values[v] = g_outer(mesh.vertices[v]);
        if (!std::isfinite(f.values[v]))
            throw SolverError("solve_dirichlet: non-finite trace value at a boundary node");
    }

    // rhs on free nodes: load - K * g
    std::vector<double> Kg;
    kernels::spmv(sys.K, f.values, Kg);
    const int nf = static_cast<int>(sys.free_nodes.size());
    std::vector<double> b(nf);
    for (int fi = 0; fi < nf; ++fi) {
        const int v = sys.free_nodes[fi];
        b[fi] = sys.load[v] - Kg[v];
    }

    std::vector<double> xf;
    const CgResult cg = pcg(sys.Kff, sys.diag_ff, b, xf, sys.required_tol);
    if (!cg.converged) {
        throw SolverError("solve_dirichlet: CG did not reach the required residual within " +
                          std::to_string(cg.iterations) +
                          " iterations (relative residual " + std::to_string(cg.rel_residual) + ")");
    }
    for (int fi = 0; fi < nf; ++fi) f.values[sys.free_nodes[fi]] = xf[fi];

    if (stats) {
        stats->iterations = cg.iterations;
        stats->rel_residual = cg.rel_residual;
        stats->converged = cg.converged;
        const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
        stats->min_value = *mn;
        stats->max_value = *mx;
    }
    return f;
}

double energy_product(const LinearSystem& sys, const ScalarField& f, const ScalarField& g) {
    if (f.mesh != sys.mesh || g.mesh != sys.mesh)
        throw std::invalid_argument("energy_product: fields live on a different mesh");
    std::vector<double> Kf;
    kernels::spmv(sys.K, f.values, Kf);
    return kernels::dot(Kf, g.values);
}

double boundary_flux(const LinearSystem& sys, const ScalarField& f, BoundaryTag tag) {
    if (f.mesh != sys.mesh)
        throw std::invalid_argument("boundary_flux: field lives on a different mesh");
    const Mesh& mesh = *sys.mesh;
    const auto& flags = tag == BoundaryTag::Inner ? mesh.vertex_on_inner : mesh.vertex_on_outer;
    bool any = false;
    for (int v = 0; v < mesh.n_vertices(); ++v) any = any || flags[v];
    if (!any) throw std::invalid_argument("boundary_flux: tag absent from mesh");

    std::vector<double> Kf;
    kernels::spmv(sys.K, f.values, Kf);
    double s = 0.0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (flags[v]) s += Kf[v] - sys.load[v];
    return -s;
}

std::vector<Vec2> field_gradient(const ScalarField& f) {
    const Mesh& mesh = *f.mesh;
    const int nt = mesh.n_triangles();
    std::vector<Vec2> g(nt);
    const bool par = kernels::backend() == kernels::Backend::OpenMP;
#pragma omp parallel for schedule(static) if (par)
    for (int t = 0; t < nt; ++t) g[t] = element_gradient(f, t);
    return g;
}

Vec2 element_gradient(const ScalarField& f, int tri) {
    const Mesh& mesh = *f.mesh;
    const ElementGeom ge = element_geom(mesh, tri);
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        const double v = f.values[mesh.tris[tri][k]];
        g.x += v * ge.bx[k];
        g.y += v * ge.by[k];
    }
    return g;
}

Vec2 probe_gradient(const ScalarField& f, Vec2 p) {
    const int t = locate(*f.mesh, p);
    if (t < 0) throw std::invalid_argument("probe_gradient: point outside mesh");
    return element_gradient(f, t);
}

}  // namespace gapfield
