#include "cfmimo/kernels.hpp"

#if CFMIMO_X86

#include <immintrin.h>

namespace cfmimo::kernels::avx2 {

bool supported() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm2_sq(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v, v, acc0);
  }
  double acc = hsum(acc0);
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scal(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

std::complex<double> cdotc(const double* a, const double* b, std::size_t n) {
  // Interleaved (re, im): process two complex values per 256-bit lane.
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * i);  // ar0 ai0 ar1 ai1
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    // re: ar*br + ai*bi
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    // im: ar*bi - ai*br -> swap b pairs, multiply, then sign per lane
    const __m256d vb_sw = _mm256_permute_pd(vb, 0b0101);  // bi0 br0 bi1 br1
    acc_im = _mm256_fmadd_pd(va, vb_sw, acc_im);          // ar*bi + ai*br (per slot)
  }
  // acc_re slots: (ar*br, ai*bi, ...) -> plain sum
  double re = hsum(acc_re);
  // acc_im slots: (ar*bi, ai*br, ...) -> alternating +,-
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, acc_im);
  double im = tmp[0] - tmp[1] + tmp[2] - tmp[3];
  for (; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

namespace {

// 2x4 register tile, vectorized along k.
inline void tile2x4(double* C, std::size_t ldc, const double* A, std::size_t lda,
                    const double* B, std::size_t ldb, std::size_t k, double sign) {
  __m256d acc[2][4];
  for (auto& row : acc)
    for (auto& v : row) v = _mm256_setzero_pd();
  std::size_t p = 0;
  for (; p + 4 <= k; p += 4) {
    const __m256d a0 = _mm256_loadu_pd(A + p);
    const __m256d a1 = _mm256_loadu_pd(A + lda + p);
    for (int j = 0; j < 4; ++j) {
      const __m256d bj = _mm256_loadu_pd(B + j * ldb + p);
      acc[0][j] = _mm256_fmadd_pd(a0, bj, acc[0][j]);
      acc[1][j] = _mm256_fmadd_pd(a1, bj, acc[1][j]);
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = hsum(acc[i][j]);
      for (std::size_t q = p; q < k; ++q) s += A[i * lda + q] * B[j * ldb + q];
      C[i * ldc + j] += sign * s;
    }
  }
}

}  // namespace

void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m,
                 std::size_t n, std::size_t k, double sign) {
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      tile2x4(C + i * ldc + j, ldc, A + i * lda, lda, B + j * ldb, ldb, k, sign);
    }
    for (; j < n; ++j) {
      C[i * ldc + j] += sign * dot(A + i * lda, B + j * ldb, k);
      C[(i + 1) * ldc + j] += sign * dot(A + (i + 1) * lda, B + j * ldb, k);
    }
  }
  for (; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      C[i * ldc + j] += sign * dot(A + i * lda, B + j * ldb, k);
    }
  }
}

}  // namespace cfmimo::kernels::avx2

#endif  // CFMIMO_X86
