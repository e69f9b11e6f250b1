// Benchmark of the OpenMP kernels against their serial reference: assembly,
// sparse matvec, blocked dot and a full conjugate-gradient solve on a
// production-sized gap mesh. Also verifies that both backends produce
// bit-identical results, which is what the determinism guarantees rest on.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <vector>

#include "gapfield/coefficients.hpp"
#include "gapfield/conductivity.hpp"
#include "gapfield/elliptic.hpp"
#include "gapfield/geometry.hpp"
#include "gapfield/kernels.hpp"
#include "gapfield/mesh.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gapfield;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    double h = 0.01;
    if (argc > 1) h = std::atof(argv[1]);

    const GapDomain dom = make_eccentric_disks(0.5, 1.0, 1e-3);
    MeshParams prm;
    prm.h_target = h;
    prm.gap_layers = 12;
    const Mesh mesh = triangulate(dom, prm);
    const CoefficientField A = make_preset({});
    std::printf("mesh: %d vertices, %d triangles (h_target = %g)\n", mesh.n_vertices(),
                mesh.n_triangles(), h);
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP not compiled in)\n");
#endif

    // --- assembly ---
    kernels::set_backend(kernels::Backend::Serial);
    const double t_asm_s = time_best_of(3, [&] { (void)assemble(mesh, A); });
    LinearSystem sys_serial = assemble(mesh, A);
    double t_asm_p = t_asm_s;
    if (kernels::openmp_available()) {
        kernels::set_backend(kernels::Backend::OpenMP);
        t_asm_p = time_best_of(3, [&] { (void)assemble(mesh, A); });
    }
    LinearSystem sys_par = assemble(mesh, A);
    bool same = sys_serial.K.val.size() == sys_par.K.val.size() &&
                std::memcmp(sys_serial.K.val.data(), sys_par.K.val.data(),
                            sys_serial.K.val.size() * sizeof(double)) == 0;
    std::printf("assembly    serial %8.4f s   parallel %8.4f s   speedup %5.2f   bit-equal %s\n",
                t_asm_s, t_asm_p, t_asm_s / t_asm_p, same ? "yes" : "NO");

    // --- spmv / dot ---
    const int n = sys_serial.K.n;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(0.37 * i);
    kernels::set_backend(kernels::Backend::Serial);
    const double t_spmv_s = time_best_of(5, [&] {
        for (int k = 0; k < 50; ++k) kernels::spmv(sys_serial.K, x, y);
    });
    const std::vector<double> y_serial = y;
    const double t_dot_s = time_best_of(5, [&] {
        volatile double acc = 0.0;
        for (int k = 0; k < 200; ++k) acc = acc + kernels::dot(x, x);
        (void)acc;
    });
    const double dot_serial = kernels::dot(x, x);
    double t_spmv_p = t_spmv_s, t_dot_p = t_dot_s;
    double dot_par = dot_serial;
    std::vector<double> y_par = y_serial;
    if (kernels::openmp_available()) {
        kernels::set_backend(kernels::Backend::OpenMP);
        t_spmv_p = time_best_of(5, [&] {
            for (int k = 0; k < 50; ++k) kernels::spmv(sys_par.K, x, y);
        });
        y_par = y;
        t_dot_p = time_best_of(5, [&] {
            volatile double acc = 0.0;
            for (int k = 0; k < 200; ++k) acc = acc + kernels::dot(x, x);
            (void)acc;
        });
        dot_par = kernels::dot(x, x);
    }
    std::printf("spmv (x50)  serial %8.4f s   parallel %8.4f s   speedup %5.2f   bit-equal %s\n",
                t_spmv_s, t_spmv_p, t_spmv_s / t_spmv_p,
                std::memcmp(y_serial.data(), y_par.data(), n * sizeof(double)) == 0 ? "yes" : "NO");
    std::printf("dot (x200)  serial %8.4f s   parallel %8.4f s   speedup %5.2f   bit-equal %s\n",
                t_dot_s, t_dot_p, t_dot_s / t_dot_p, dot_serial == dot_par ? "yes" : "NO");

    // --- full solve ---
    kernels::set_backend(kernels::Backend::Serial);
    SolveStats st_s;
    const double t_cg_s = time_best_of(1, [&] { (void)solve_v1(sys_serial, &st_s); });
    const ScalarField v_serial = solve_v1(sys_serial, &st_s);
    double t_cg_p = t_cg_s;
    ScalarField v_par = v_serial;
    SolveStats st_p = st_s;
    if (kernels::openmp_available()) {
        kernels::set_backend(kernels::Backend::OpenMP);
        t_cg_p = time_best_of(1, [&] { (void)solve_v1(sys_par, &st_p); });
        v_par = solve_v1(sys_par, &st_p);
    }
    std::printf("cg solve    serial %8.4f s   parallel %8.4f s   speedup %5.2f   bit-equal %s\n",
                t_cg_s, t_cg_p, t_cg_s / t_cg_p,
                std::memcmp(v_serial.values.data(), v_par.values.data(), n * sizeof(double)) == 0
                    ? "yes"
                    : "NO");
    std::printf("cg iterations: serial %d, parallel %d\n", st_s.iterations, st_p.iterations);
    return 0;
}
