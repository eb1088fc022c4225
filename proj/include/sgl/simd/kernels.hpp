#pragma once

#include <cstddef>

namespace sgl::simd {

// Double-precision inner-loop kernels. Scalar reference implementations are
// the semantic ground truth; the AVX2 variants are selected at runtime when
// the CPU supports avx2+fma and must agree with the reference within a small
// relative tolerance (equivalence-tested). Set SGL_SIMD=scalar|avx2 to pin a
// backend; dispatch is per-process, so repeated runs of one binary on one
// machine are bit-identical.
enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();
void set_backend(Backend b); // throws if the backend is unavailable

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n); // y += a*x
void scal(double a, double* x, std::size_t n);                  // x *= a

// Row-major dense helpers built on the dispatched primitives.
// y = A x, A is rows x cols.
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// y += A^T x (caller owns initialization of y)
void matvec_t_acc(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
// A += s * u v^T
void ger(double* a, std::size_t rows, std::size_t cols, const double* u, const double* v, double s);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_scalar(const double* x, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void scal_scalar(double a, double* x, std::size_t n);
#if defined(__x86_64__) || defined(__i386__)
double dot_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* x, std::size_t n);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void scal_avx2(double a, double* x, std::size_t n);
#endif
} // namespace detail

} // namespace sgl::simd
