#include "gapfield/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gapfield::kernels {

namespace {
Backend g_backend = openmp_available() ? Backend::OpenMP : Backend::Serial;
}

bool openmp_available() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Backend backend() { return g_backend; }

void set_backend(Backend b) {
    if (b == Backend::OpenMP && !openmp_available())
        throw std::runtime_error("kernels: OpenMP backend requested but not compiled in");
    g_backend = b;
}

// ---------------------------------------------------------------------------
// dot: partial sums over fixed kBlock-sized blocks, block sums accumulated in
// block order. The parallel variant only distributes blocks; the per-block
// and cross-block addition order is identical to the serial variant.
// ---------------------------------------------------------------------------

namespace {

inline double block_sum_product(const double* a, const double* b, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double serial::dot(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    const std::size_t nblk = (n + kBlock - 1) / kBlock;
    double total = 0.0;
    for (std::size_t blk = 0; blk < nblk; ++blk) {
        const std::size_t lo = blk * kBlock;
        const std::size_t len = std::min(kBlock, n - lo);
        total += block_sum_product(a.data() + lo, b.data() + lo, len);
    }
    return total;
}

double omp::dot(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    const std::size_t nblk = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nblk);
#pragma omp parallel for schedule(static)
    for (std::int64_t blk = 0; blk < static_cast<std::int64_t>(nblk); ++blk) {
        const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
        const std::size_t len = std::min(kBlock, n - lo);
        partial[blk] = block_sum_product(a.data() + lo, b.data() + lo, len);
    }
    double total = 0.0;
    for (std::size_t blk = 0; blk < nblk; ++blk) total += partial[blk];
    return total;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kernels::dot: size mismatch");
    return g_backend == Backend::OpenMP ? omp::dot(a, b) : serial::dot(a, b);
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double sum(const std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t nblk = (n + kBlock - 1) / kBlock;
    double total = 0.0;
    for (std::size_t blk = 0; blk < nblk; ++blk) {
        const std::size_t lo = blk * kBlock;
        const std::size_t len = std::min(kBlock, n - lo);
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += v[lo + i];
        total += s;
    }
    return total;
}

// ---------------------------------------------------------------------------
// axpy / xpby / hadamard: elementwise, order-independent.
// ---------------------------------------------------------------------------

void serial::axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void omp::axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernels::axpy: size mismatch");
    if (g_backend == Backend::OpenMP)
        omp::axpy(alpha, x, y);
    else
        serial::axpy(alpha, x, y);
}

void xpby(const std::vector<double>& z, double beta, std::vector<double>& p) {
    const std::int64_t n = static_cast<std::int64_t>(z.size());
    if (g_backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    } else {
        for (std::int64_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
}

void hadamard(const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& y) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    if (g_backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
    } else {
        for (std::int64_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
    }
}

// ---------------------------------------------------------------------------
// spmv: one thread owns a full row; within-row order is the CSR order.
// ---------------------------------------------------------------------------

void serial::spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < A.n; ++i) {
        double s = 0.0;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
        y[i] = s;
    }
}

void omp::spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < A.n; ++i) {
        double s = 0.0;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
        y[i] = s;
    }
}

void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y) {
    if (static_cast<int>(x.size()) != A.n) throw std::invalid_argument("kernels::spmv: size mismatch");
    y.resize(A.n);
    if (g_backend == Backend::OpenMP)
        omp::spmv(A, x, y);
    else
        serial::spmv(A, x, y);
}

}  // namespace gapfield::kernels
