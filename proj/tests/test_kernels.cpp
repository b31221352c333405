#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cfmimo/kernels.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

template <typename Fa, typename Fb>
void check_close(Fa&& a, Fb&& b, double rtol) {
  const double av = a;
  const double bv = b;
  CHECK(std::abs(av - bv) <= rtol * (1.0 + std::abs(av) + std::abs(bv)));
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("dispatched kernels match the scalar reference") {
  Rng rng(42);
  // Deliberately awkward lengths to exercise the remainder loops.
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{7},
                        std::size_t{8}, std::size_t{15}, std::size_t{64}, std::size_t{121}}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    check_close(kernels::dot(a.data(), b.data(), n),
                kernels::scalar::dot(a.data(), b.data(), n), 1e-13);
    check_close(kernels::norm2_sq(a.data(), n), kernels::scalar::norm2_sq(a.data(), n),
                1e-13);

    auto y1 = random_vec(n, rng);
    auto y2 = y1;
    kernels::axpy(0.37, a.data(), y1.data(), n);
    kernels::scalar::axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) check_close(y1[i], y2[i], 1e-14);

    auto s1 = a;
    auto s2 = a;
    kernels::scal(-1.7, s1.data(), n);
    kernels::scalar::scal(-1.7, s2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == doctest::Approx(s2[i]));
  }
}

TEST_CASE("complex dot matches the scalar reference and std::complex") {
  Rng rng(7);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{16}}) {
    const auto a = random_vec(2 * n, rng);
    const auto b = random_vec(2 * n, rng);
    const auto fast = kernels::cdotc(a.data(), b.data(), n);
    const auto ref = kernels::scalar::cdotc(a.data(), b.data(), n);
    check_close(fast.real(), ref.real(), 1e-13);
    check_close(fast.imag(), ref.imag(), 1e-13);

    std::complex<double> manual{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> ca{a[2 * i], a[2 * i + 1]};
      const std::complex<double> cb{b[2 * i], b[2 * i + 1]};
      manual += std::conj(ca) * cb;
    }
    check_close(fast.real(), manual.real(), 1e-13);
    check_close(fast.imag(), manual.imag(), 1e-13);
  }
}

TEST_CASE("gemm_nt accumulation matches the scalar reference") {
  Rng rng(3);
  const std::vector<std::array<int, 3>> shapes = {
      {1, 1, 1}, {2, 4, 8}, {5, 7, 13}, {8, 8, 48}, {3, 9, 31}};
  for (const auto& [m, n, k] : shapes) {
    const auto A = random_vec(static_cast<std::size_t>(m) * k, rng);
    const auto B = random_vec(static_cast<std::size_t>(n) * k, rng);
    auto C1 = random_vec(static_cast<std::size_t>(m) * n, rng);
    auto C2 = C1;
    kernels::gemm_nt_acc(C1.data(), n, A.data(), k, B.data(), k, m, n, k, -1.0);
    kernels::scalar::gemm_nt_acc(C2.data(), n, A.data(), k, B.data(), k, m, n, k, -1.0);
    for (std::size_t i = 0; i < C1.size(); ++i) check_close(C1[i], C2[i], 1e-12);
  }
}

TEST_CASE("active ISA is consistent with the platform") {
  const auto isa = kernels::active_isa();
  CHECK(!kernels::isa_name(isa).empty());
#if CFMIMO_X86
  if (kernels::avx2::supported()) CHECK(isa == kernels::Isa::avx2);
#endif
}

TEST_CASE("rng moments and determinism") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng rng(99);
  double mean = 0.0;
  double var = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    mean += x;
    var += x * x;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));

  std::complex<double> cmean{0.0, 0.0};
  double cvar = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.cnormal();
    cmean += z;
    cvar += std::norm(z);
  }
  cvar /= n;
  CHECK(std::abs(cmean) / n < 0.01);
  CHECK(cvar == doctest::Approx(1.0).epsilon(0.02));

  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}

}  // TEST_SUITE
