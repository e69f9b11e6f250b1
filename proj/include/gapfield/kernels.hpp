#pragma once

#include <cstddef>
#include <vector>

// Low-level linear-algebra kernels. Every kernel has a serial reference
// implementation and an OpenMP one; a process-wide backend switch selects
// which runs. Both variants perform floating-point operations in the same
// order (fixed-size blocked reductions, per-row scatter), so results are
// bit-identical for any thread count. Tests and the benchmark tool rely on
// that equivalence.

namespace gapfield::kernels {

enum class Backend { Serial, OpenMP };

Backend backend();
void set_backend(Backend b);
bool openmp_available();
int max_threads();

// Block size for deterministic reductions.
inline constexpr std::size_t kBlock = 1024;

// Compressed sparse row, symmetric storage not exploited (full pattern).
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;   // size n+1
    std::vector<int> col;       // size nnz
    std::vector<double> val;    // size nnz

    std::size_t nnz() const { return val.size(); }
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
double sum(const std::vector<double>& v);

// y += alpha * x
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);
// p = z + beta * p
void xpby(const std::vector<double>& z, double beta, std::vector<double>& p);
// y = A x
void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y);
// y[i] = a[i] * b[i]
void hadamard(const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& y);

// Serial reference variants, callable directly (used by tests and the
// benchmark regardless of the active backend).
namespace serial {
double dot(const std::vector<double>& a, const std::vector<double>& b);
void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);
}  // namespace serial

namespace omp {
double dot(const std::vector<double>& a, const std::vector<double>& b);
void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y);
void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y);
}  // namespace omp

}  // namespace gapfield::kernels
