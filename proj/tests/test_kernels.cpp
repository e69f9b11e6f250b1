#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "gapfield/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gapfield;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

kernels::CsrMatrix random_csr(int n, int per_row, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    kernels::CsrMatrix A;
    A.n = n;
    A.row_ptr.push_back(0);
    for (int i = 0; i < n; ++i) {
        std::set<int> cols;
        cols.insert(i);
        while (static_cast<int>(cols.size()) < per_row) cols.insert(col(rng));
        for (int c : cols) {
            A.col.push_back(c);
            A.val.push_back(u(rng));
        }
        A.row_ptr.push_back(static_cast<int>(A.col.size()));
    }
    return A;
}

}  // namespace

TEST_CASE("blocked dot is identical across backends and thread counts") {
    for (std::size_t n : {1ul, 5ul, 1024ul, 1025ul, 100003ul}) {
        const auto a = random_vec(n, 7 + n);
        const auto b = random_vec(n, 11 + n);
        const double d_serial = kernels::serial::dot(a, b);
        if (kernels::openmp_available()) {
#ifdef _OPENMP
            for (int threads : {1, 2, 5}) {
                omp_set_num_threads(threads);
                CHECK(kernels::omp::dot(a, b) == d_serial);
            }
#endif
        }
        kernels::set_backend(kernels::Backend::Serial);
        CHECK(kernels::dot(a, b) == d_serial);
    }
}

TEST_CASE("spmv identical across backends") {
    const auto A = random_csr(4000, 9, 42);
    const auto x = random_vec(4000, 3);
    std::vector<double> y1(4000), y2(4000);
    kernels::serial::spmv(A, x, y1);
    if (kernels::openmp_available()) {
#ifdef _OPENMP
        omp_set_num_threads(3);
#endif
        kernels::omp::spmv(A, x, y2);
        REQUIRE(y1.size() == y2.size());
        for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1[i] == y2[i]);
    }
}

TEST_CASE("axpy and xpby match the reference") {
    const auto x = random_vec(5000, 1);
    auto y1 = random_vec(5000, 2);
    auto y2 = y1;
    kernels::serial::axpy(0.37, x, y1);
    if (kernels::openmp_available()) {
        kernels::omp::axpy(0.37, x, y2);
        for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1[i] == y2[i]);
    }
}

TEST_CASE("backend switch round-trips") {
    const auto prev = kernels::backend();
    kernels::set_backend(kernels::Backend::Serial);
    CHECK(kernels::backend() == kernels::Backend::Serial);
    if (kernels::openmp_available()) {
        kernels::set_backend(kernels::Backend::OpenMP);
        CHECK(kernels::backend() == kernels::Backend::OpenMP);
    }
    kernels::set_backend(prev);
}
