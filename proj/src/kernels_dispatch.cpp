#include "cfmimo/kernels.hpp"

namespace cfmimo::kernels {

namespace {

Isa detect() {
#if CFMIMO_X86
  if (avx2::supported()) return Isa::avx2;
#endif
#if CFMIMO_NEON
  return Isa::neon;
#endif
  return Isa::scalar;
}

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm2_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  std::complex<double> (*cdotc)(const double*, const double*, std::size_t);
  void (*gemm_nt_acc)(double*, std::size_t, const double*, std::size_t, const double*,
                      std::size_t, std::size_t, std::size_t, std::size_t, double);
};

Table make_table(Isa isa) {
  switch (isa) {
#if CFMIMO_X86
    case Isa::avx2:
      return {avx2::dot, avx2::norm2_sq, avx2::axpy, avx2::scal, avx2::cdotc,
              avx2::gemm_nt_acc};
#endif
#if CFMIMO_NEON
    case Isa::neon:
      return {neon::dot, neon::norm2_sq, neon::axpy, neon::scal, neon::cdotc,
              neon::gemm_nt_acc};
#endif
    default:
      return {scalar::dot, scalar::norm2_sq, scalar::axpy, scalar::scal,
              scalar::cdotc, scalar::gemm_nt_acc};
  }
}

const Table& table() {
  static const Table t = make_table(detect());
  return t;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string isa_name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    default: return "scalar";
  }
}

double dot(const double* a, const double* b, std::size_t n) { return table().dot(a, b, n); }
double norm2_sq(const double* x, std::size_t n) { return table().norm2_sq(x, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { table().axpy(alpha, x, y, n); }
void scal(double alpha, double* x, std::size_t n) { table().scal(alpha, x, n); }
std::complex<double> cdotc(const double* a, const double* b, std::size_t n) {
  return table().cdotc(a, b, n);
}
void gemm_nt_acc(double* C, std::size_t ldc, const double* A, std::size_t lda,
                 const double* B, std::size_t ldb, std::size_t m, std::size_t n,
                 std::size_t k, double sign) {
  table().gemm_nt_acc(C, ldc, A, lda, B, ldb, m, n, k, sign);
}

}  // namespace cfmimo::kernels
