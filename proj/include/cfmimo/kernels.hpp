#pragma once

#include <complex>
#include <cstddef>
#include <string>

#if defined(__x86_64__) || defined(_M_X64)
#define CFMIMO_X86 1
#else
#define CFMIMO_X86 0
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define CFMIMO_NEON 1
#else
#define CFMIMO_NEON 0
#endif

namespace cfmimo::kernels {

// Vector/matrix primitives backing the hot loops (interior-point linear
// algebra, complex inner products of channel and beamforming vectors).
// Every primitive has a scalar reference implementation plus SIMD variants;
// the top-level entry points dispatch once at startup based on the CPU.

enum class Isa { scalar, avx2, neon };

Isa active_isa();
std::string isa_name(Isa isa);

double dot(const double* a, const double* b, std::size_t n);
double norm2_sq(const double* x, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);

/// sum_k conj(a[k]) * b[k] over interleaved (re, im) pairs; n is the
/// number of complex elements, so both arrays hold 2n doubles.
std::complex<double> cdotc(const double* a, const double* b, std::size_t n);

/// C[i*ldc + j] += sign * sum_k A[i*lda + k] * B[j*ldb + k]
/// for i < m, j < n (both operands traversed along contiguous rows).
void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double norm2_sq(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
std::complex<double> cdotc(const double* a, const double* b, std::size_t n);
void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign);
}  // namespace scalar

#if CFMIMO_X86
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double norm2_sq(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
std::complex<double> cdotc(const double* a, const double* b, std::size_t n);
void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign);
bool supported();
}  // namespace avx2
#endif

#if CFMIMO_NEON
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double norm2_sq(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scal(double alpha, double* x, std::size_t n);
std::complex<double> cdotc(const double* a, const double* b, std::size_t n);
void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign);
}  // namespace neon
#endif

}  // namespace cfmimo::kernels
