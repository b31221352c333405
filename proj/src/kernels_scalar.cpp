#include "cfmimo/kernels.hpp"

namespace cfmimo::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm2_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

std::complex<double> cdotc(const double* a, const double* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[2 * i];
    const double ai = a[2 * i + 1];
    const double br = b[2 * i];
    const double bi = b[2 * i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * lda;
    double* ci = C + i * ldc;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = B + j * ldb;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      ci[j] += sign * acc;
    }
  }
}

}  // namespace cfmimo::kernels::scalar
