#include "cfmimo/kernels.hpp"

#if CFMIMO_NEON

#include <arm_neon.h>

namespace cfmimo::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm2_sq(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc0 = vfmaq_f64(acc0, v, v);
  }
  double acc = vaddvq_f64(acc0);
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

std::complex<double> cdotc(const double* a, const double* b, std::size_t n) {
  // One complex value per 128-bit lane: (re, im).
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(a + 2 * i);
    const float64x2_t vb = vld1q_f64(b + 2 * i);
    acc_re = vfmaq_f64(acc_re, va, vb);               // (ar*br, ai*bi)
    acc_im = vfmaq_f64(acc_im, va, vextq_f64(vb, vb, 1));  // (ar*bi, ai*br)
  }
  const double re = vaddvq_f64(acc_re);
  const double im = vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1);
  return {re, im};
}

void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      C[i * ldc + j] += sign * dot(A + i * lda, B + j * ldb, k);
    }
  }
}

}  // namespace cfmimo::kernels::neon

#endif  // CFMIMO_NEON
