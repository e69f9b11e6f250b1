#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "gapfield/coefficients.hpp"
#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/kernels.hpp"
#include "gapfield/mesh.hpp"
#include "oracles.hpp"

using namespace gapfield;

namespace {

// one unit right triangle with tagged edges, enough to exercise assembly
Mesh unit_triangle_mesh() {
    Mesh m;
    m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    m.tris = {{0, 1, 2}};
    m.tri_region = {0};
    m.rows = 1;
    m.weight_mode = WeightMode::Planar;
    m.boundary_edges = {{0, 1, BoundaryTag::Outer}, {1, 2, BoundaryTag::Inner}};
    m.vertex_on_outer = {true, true, false};
    m.vertex_on_inner = {false, true, true};
    m.neighbors = {{-1, -1, -1}};
    return m;
}

double csr_entry(const kernels::CsrMatrix& K, int i, int j) {
    for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k)
        if (K.col[k] == j) return K.val[k];
    return 0.0;
}

LinearSystem annulus_system(double h, Mesh& mesh_out, const CoefficientField& A) {
    const GapDomain dom = make_concentric_annulus(0.5, 1.0);
    mesh_out = triangulate(dom, h, 8);
    return assemble(mesh_out, A);
}

}  // namespace

TEST_CASE("unit right triangle element matrix") {
    const Mesh m = unit_triangle_mesh();
    const CoefficientField A = make_preset({});
    const LinearSystem sys = assemble(m, A);
    // standard reference matrix: 1/2 * [[2,-1,-1],[-1,1,0],[-1,0,1]]
    CHECK(csr_entry(sys.K, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(csr_entry(sys.K, 0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(csr_entry(sys.K, 0, 2) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(csr_entry(sys.K, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(csr_entry(sys.K, 1, 2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(csr_entry(sys.K, 2, 2) == doctest::Approx(0.5).epsilon(1e-15));
    for (int i = 0; i < 3; ++i) {
        double row = 0.0;
        for (int j = 0; j < 3; ++j) row += csr_entry(sys.K, i, j);
        CHECK(std::abs(row) <= 1e-15);
    }
}

TEST_CASE("stiffness is exactly linear in a scalar coefficient") {
    const Mesh m = unit_triangle_mesh();
    const LinearSystem s1 = assemble(m, make_preset({}));
    CoefficientPreset scaled;
    scaled.name = "scaled";
    scaled.scale = 2.0;
    const LinearSystem s2 = assemble(m, make_preset(scaled));
    REQUIRE(s1.K.val.size() == s2.K.val.size());
    for (std::size_t i = 0; i < s1.K.val.size(); ++i) CHECK(s2.K.val[i] == 2.0 * s1.K.val[i]);
}

TEST_CASE("assembled stiffness is bit-exactly symmetric with constant kernel") {
    const GapDomain dom = make_eccentric_disks(0.5, 1.0, 1e-2);
    const Mesh mesh = triangulate(dom, 0.07, 8);
    CoefficientPreset p;
    p.name = "constant-offdiag";
    p.a_off = 0.5;
    const LinearSystem sys = assemble(mesh, make_preset(p));
    for (int i = 0; i < sys.K.n; ++i)
        for (int k = sys.K.row_ptr[i]; k < sys.K.row_ptr[i + 1]; ++k) {
            const int j = sys.K.col[k];
            CHECK(sys.K.val[k] == csr_entry(sys.K, j, i));
        }
    // constants lie in the kernel up to assembly round-off
    std::vector<double> ones(sys.K.n, 1.0), out;
    kernels::spmv(sys.K, ones, out);
    double scale = 0.0;
    for (double v : sys.K.val) scale = std::max(scale, std::abs(v));
    for (double v : out) CHECK(std::abs(v) <= 1e-12 * scale);
    // quadratic form nonnegative on random vectors
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField f;
        f.mesh = &mesh;
        f.values.resize(sys.K.n);
        for (auto& x : f.values) x = u(rng);
        CHECK(energy_product(sys, f, f) >= -1e-10 * scale);
    }
}

TEST_CASE("annulus solve matches separation of variables and converges at order ~2") {
    const GapDomain dom = make_concentric_annulus(0.5, 1.0);
    const CoefficientField A = make_preset({});
    const double exact = oracles::annulus_a11(0.5, 1.0);

    double err_coarse = 0.0, err_fine = 0.0;
    double node_err_coarse = 0.0, node_err_fine = 0.0;
    for (double h : {0.08, 0.04}) {
        const Mesh mesh = triangulate(dom, h, 8);
        const LinearSystem sys = assemble(mesh, A);
        SolveStats stats;
        const ScalarField v1 = solve_dirichlet(
            sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, &stats);
        CHECK(stats.converged);
        CHECK(stats.rel_residual <= 1e-10);
        const double a11 = energy_product(sys, v1, v1);
        double nerr = 0.0;
        for (int v = 0; v < mesh.n_vertices(); ++v)
            nerr = std::max(nerr, std::abs(v1.values[v] - oracles::annulus_v1(0.5, 1.0,
                                                                              dom.outer.center,
                                                                              mesh.vertices[v])));
        if (h == 0.08) {
            err_coarse = std::abs(a11 - exact);
            node_err_coarse = nerr;
        } else {
            err_fine = std::abs(a11 - exact);
            node_err_fine = nerr;
        }
    }
    CHECK(node_err_fine < node_err_coarse);
    const double order = std::log(err_coarse / err_fine) / std::log(2.0);
    CHECK(order >= 1.8);
}

TEST_CASE("axisymmetric shell energy matches the closed form") {
    const GapDomain dom = make_concentric_annulus(0.5, 1.0, WeightMode::Axisymmetric);
    const Mesh mesh = triangulate(dom, 0.025, 8);
    const LinearSystem sys = assemble(mesh, make_preset({}));
    const ScalarField v1 = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    const double a11 = energy_product(sys, v1, v1);
    CHECK(a11 == doctest::Approx(oracles::shell_a11(0.5, 1.0)).epsilon(0.01));
}

TEST_CASE("patch test: linear field reproduced through the solver") {
    Mesh mesh;
    const LinearSystem sys = annulus_system(0.06, mesh, make_preset({}));
    auto lin = [](Vec2 p) { return 0.3 * p.y + 0.1; };
    const ScalarField w = solve_dirichlet(sys, lin, lin, nullptr);
    double dev = 0.0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        dev = std::max(dev, std::abs(w.values[v] - lin(mesh.vertices[v])));
    CHECK(dev <= 1e-9);
    // element gradients of the interpolant are exactly the linear's gradient
    ScalarField interp;
    interp.mesh = &mesh;
    for (const auto& p : mesh.vertices) interp.values.push_back(p.y);
    for (const Vec2 g : field_gradient(interp)) {
        CHECK(g.x == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(g.y == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("same constant trace on both boundaries gives the constant field") {
    Mesh mesh;
    const LinearSystem sys = annulus_system(0.07, mesh, make_preset({}));
    const ScalarField w = solve_dirichlet(
        sys, [](Vec2) { return 0.7; }, [](Vec2) { return 0.7; }, nullptr);
    for (double v : w.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::abs(boundary_flux(sys, w, BoundaryTag::Inner)) <= 1e-10);
    CHECK(std::abs(boundary_flux(sys, w, BoundaryTag::Outer)) <= 1e-10);
    ScalarField c = w;
    CHECK(std::abs(energy_product(sys, c, w)) <= 1e-12);
}

TEST_CASE("reaction-sum flux identities") {
    Mesh mesh;
    const LinearSystem sys = annulus_system(0.05, mesh, make_preset({}));
    const ScalarField v1 = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    const double a11 = energy_product(sys, v1, v1);
    const double fin = boundary_flux(sys, v1, BoundaryTag::Inner);
    const double fout = boundary_flux(sys, v1, BoundaryTag::Outer);
    CHECK(std::abs(fin + a11) <= 1e-12 * a11);      // flux equals minus the energy
    CHECK(std::abs(fin + fout) <= 1e-12 * a11);     // discrete conservation
}

TEST_CASE("solution is invariant under coefficient scaling; energies scale") {
    Mesh mesh;
    const LinearSystem s1 = annulus_system(0.06, mesh, make_preset({}));
    CoefficientPreset sp;
    sp.name = "scaled";
    sp.scale = 5.0;
    Mesh mesh2;
    const LinearSystem s5 = annulus_system(0.06, mesh2, make_preset(sp));
    const ScalarField va = solve_dirichlet(
        s1, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    const ScalarField vb = solve_dirichlet(
        s5, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    double dev = 0.0;
    for (std::size_t i = 0; i < va.values.size(); ++i)
        dev = std::max(dev, std::abs(va.values[i] - vb.values[i]));
    CHECK(dev <= 1e-11);
    const double e1 = energy_product(s1, va, va);
    const double e5 = energy_product(s5, vb, vb);
    CHECK(e5 == doctest::Approx(5.0 * e1).epsilon(1e-11));
}

TEST_CASE("discrete extremes respect the trace range on a gated mesh") {
    const GapDomain dom = make_concentric_annulus(0.5, 1.0);
    const Mesh mesh = triangulate(dom, 0.04, 8);
    const MeshQuality q = mesh_quality_report(mesh);
    const LinearSystem sys = assemble(mesh, make_preset({}));
    SolveStats stats;
    const ScalarField v1 = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, &stats);
    if (passes_quality_gate(q)) {
        CHECK(stats.min_value >= -1e-8);
        CHECK(stats.max_value <= 1.0 + 1e-8);
    } else {
        const bool in_range = stats.min_value >= -1e-8 && stats.max_value <= 1.0 + 1e-8;
        WARN_MESSAGE(in_range,
                     "max-angle gate failed; extreme-value check reported but not enforced");
    }
}

TEST_CASE("gap midpoint gradient of the capacitary potential matches the disk-pair oracle") {
    const double eps = 1e-2;
    const GapDomain dom = make_eccentric_disks(0.5, 1.0, eps);
    const Mesh mesh = triangulate(dom, 0.04, 8);
    const LinearSystem sys = assemble(mesh, make_preset({}));
    const ScalarField v1 = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    const oracles::BipolarDisks oracle(0.5, 1.0, eps);
    // oracle self-check on both circles before trusting it
    CHECK(oracle.v1({0.0, eps}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oracle.v1({0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oracle.v1({1.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-12));

    const Vec2 mid{0.0, 0.5 * eps};
    const double g_fem = norm(probe_gradient(v1, mid));
    const double g_oracle = oracle.grad_v1_mag(mid);
    CHECK(g_fem == doctest::Approx(g_oracle).epsilon(0.05));
    CHECK(g_fem == doctest::Approx(1.0 / eps).epsilon(0.15));  // leading-order magnitude

    const double a11 = energy_product(sys, v1, v1);
    CHECK(a11 == doctest::Approx(oracle.a11()).epsilon(0.02));
    CHECK(a11 == doctest::Approx(44.68944052055824).epsilon(0.02));  // frozen oracle value
}

TEST_CASE("solves are bit-identical across kernel backends") {
    if (!kernels::openmp_available()) return;
    Mesh mesh;
    const LinearSystem sys = annulus_system(0.05, mesh, make_preset({}));
    kernels::set_backend(kernels::Backend::Serial);
    const ScalarField a = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    kernels::set_backend(kernels::Backend::OpenMP);
    const ScalarField b = solve_dirichlet(
        sys, [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, nullptr);
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("probe outside the mesh throws") {
    Mesh mesh;
    const LinearSystem sys = annulus_system(0.08, mesh, make_preset({}));
    ScalarField f;
    f.mesh = &mesh;
    f.values.assign(mesh.n_vertices(), 0.0);
    CHECK_THROWS_AS(probe_gradient(f, {3.0, 3.0}), std::invalid_argument);
}

TEST_CASE("mismatched meshes are rejected") {
    Mesh mesh1, mesh2;
    const LinearSystem s1 = annulus_system(0.08, mesh1, make_preset({}));
    const LinearSystem s2 = annulus_system(0.07, mesh2, make_preset({}));
    ScalarField f;
    f.mesh = &mesh2;
    f.values.assign(mesh2.n_vertices(), 0.0);
    ScalarField g;
    g.mesh = &mesh1;
    g.values.assign(mesh1.n_vertices(), 0.0);
    CHECK_THROWS_AS(energy_product(s1, f, g), std::invalid_argument);
}
