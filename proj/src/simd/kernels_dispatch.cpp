#include <cstdlib>
#include <cstring>

#include "sgl/error.hpp"
#include "sgl/simd/kernels.hpp"

namespace sgl::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using SumFn = double (*)(const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScalFn = void (*)(double, double*, std::size_t);

struct Table {
    Backend backend;
    DotFn dot;
    SumFn sum;
    AxpyFn axpy;
    ScalFn scal;
};

constexpr Table kScalar{Backend::Scalar, detail::dot_scalar, detail::sum_scalar,
                        detail::axpy_scalar, detail::scal_scalar};

#if defined(__x86_64__) || defined(__i386__)
constexpr Table kAvx2{Backend::Avx2, detail::dot_avx2, detail::sum_avx2, detail::axpy_avx2,
                      detail::scal_avx2};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* pick_initial() {
    if (const char* env = std::getenv("SGL_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalar;
#if defined(__x86_64__) || defined(__i386__)
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return &kAvx2;
#endif
    }
#if defined(__x86_64__) || defined(__i386__)
    if (cpu_has_avx2()) return &kAvx2;
#endif
    return &kScalar;
}

const Table* g_table = pick_initial();

} // namespace

Backend active_backend() { return g_table->backend; }

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() { return cpu_has_avx2(); }

void set_backend(Backend b) {
    if (b == Backend::Scalar) {
        g_table = &kScalar;
        return;
    }
#if defined(__x86_64__) || defined(__i386__)
    if (b == Backend::Avx2 && cpu_has_avx2()) {
        g_table = &kAvx2;
        return;
    }
#endif
    fail_pre("ConfigError", "requested SIMD backend not available on this CPU");
}

double dot(const double* a, const double* b, std::size_t n) { return g_table->dot(a, b, n); }
double sum(const double* x, std::size_t n) { return g_table->sum(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { g_table->axpy(a, x, y, n); }
void scal(double a, double* x, std::size_t n) { g_table->scal(a, x, n); }

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) y[i] = g_table->dot(a + i * cols, x, cols);
}

void matvec_t_acc(const double* a, std::size_t rows, std::size_t cols, const double* x,
                  double* y) {
    for (std::size_t i = 0; i < rows; ++i) g_table->axpy(x[i], a + i * cols, y, cols);
}

void ger(double* a, std::size_t rows, std::size_t cols, const double* u, const double* v,
         double s) {
    for (std::size_t i = 0; i < rows; ++i) g_table->axpy(s * u[i], v, a + i * cols, cols);
}

} // namespace sgl::simd
