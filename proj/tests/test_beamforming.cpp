#include <doctest.h>

#include <cmath>
#include <complex>

#include "cfmimo/beamforming.hpp"
#include "cfmimo/kernels.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

namespace {

/// Random full-association fixture.
struct Fixture {
  ChannelRealization ch;
  AssociationMap assoc;
};

Fixture make_fixture(int n_users, int n_aps, int m_ap, std::uint64_t seed) {
  Fixture fx;
  fx.ch.n_users = n_users;
  fx.ch.n_aps = n_aps;
  fx.ch.m_ap = m_ap;
  fx.ch.h.resize(static_cast<std::size_t>(n_users) * n_aps * m_ap);
  Rng rng(seed);
  for (auto& v : fx.ch.h) v = rng.cnormal();
  std::vector<double> beta(static_cast<std::size_t>(n_users) * n_aps, 1.0);
  for (auto& v : beta) v = rng.uniform01();
  fx.assoc = associate_users(beta, n_users, n_aps, n_aps);
  return fx;
}

std::complex<double> dotc(const std::complex<double>* a, const std::complex<double>* b,
                          int n) {
  return kernels::cdotc(reinterpret_cast<const double*>(a),
                        reinterpret_cast<const double*>(b), n);
}

}  // namespace

TEST_SUITE("beamforming") {

TEST_CASE("cbf-upa splits the budget uniformly") {
  const auto fx = make_fixture(2, 1, 4, 3);
  const double eta = 0.2;
  const BeamformerSet f = cbf_upa(fx.ch, fx.assoc, eta);
  CHECK(f.power(0, 0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f.power(1, 0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(f.ap_power(0) == doctest::Approx(eta).epsilon(1e-12));
}

TEST_CASE("cbf-upa is parallel to the channel") {
  const auto fx = make_fixture(3, 2, 4, 17);
  const BeamformerSet f = cbf_upa(fx.ch, fx.assoc, 0.2);
  for (int u = 0; u < 3; ++u) {
    for (std::size_t pos = 0; pos < fx.assoc.serving_aps[u].size(); ++pos) {
      const int a = fx.assoc.serving_aps[u][pos];
      const auto ip = dotc(fx.ch.at(u, a), f.at(u, static_cast<int>(pos)), 4);
      const double hn = std::sqrt(fx.ch.norm_sq(u, a));
      const double fn = std::sqrt(f.power(u, static_cast<int>(pos)));
      // Inner product is real, positive, and saturates Cauchy-Schwarz.
      CHECK(ip.imag() == doctest::Approx(0.0).scale(hn * fn).epsilon(1e-12));
      CHECK(ip.real() == doctest::Approx(hn * fn).epsilon(1e-12));
    }
  }
}

TEST_CASE("cbf-ppa splits the budget proportionally") {
  // Two users on one AP with ||h||^2 = 1 and 3.
  ChannelRealization ch;
  ch.n_users = 2;
  ch.n_aps = 1;
  ch.m_ap = 1;
  ch.h = {{1.0, 0.0}, {std::sqrt(3.0), 0.0}};
  const AssociationMap assoc = associate_users({1.0, 1.0}, 2, 1, 1);
  const BeamformerSet f = cbf_ppa(ch, assoc, 0.2);
  CHECK(f.power(0, 0) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(f.power(1, 0) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(f.ap_power(0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("single served user takes the whole ppa budget") {
  const auto fx = make_fixture(1, 2, 2, 5);
  const BeamformerSet f = cbf_ppa(fx.ch, fx.assoc, 0.7);
  CHECK(f.power(0, 0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(f.power(0, 1) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("both schemes saturate every serving AP budget exactly") {
  const auto fx = make_fixture(4, 3, 4, 29);
  for (const auto& f : {cbf_upa(fx.ch, fx.assoc, 0.2), cbf_ppa(fx.ch, fx.assoc, 0.2)}) {
    for (int a = 0; a < 3; ++a) {
      CHECK(f.ap_power(a) == doctest::Approx(0.2).epsilon(1e-12));
    }
  }
}

TEST_CASE("upa power per user ignores channel magnitude, ppa is monotone") {
  ChannelRealization ch;
  ch.n_users = 2;
  ch.n_aps = 1;
  ch.m_ap = 1;
  ch.h = {{0.3, 0.0}, {2.5, 0.0}};
  const AssociationMap assoc = associate_users({1.0, 1.0}, 2, 1, 1);
  const BeamformerSet upa = cbf_upa(ch, assoc, 1.0);
  CHECK(upa.power(0, 0) == doctest::Approx(upa.power(1, 0)));
  const BeamformerSet ppa = cbf_ppa(ch, assoc, 1.0);
  CHECK(ppa.power(1, 0) > ppa.power(0, 0));
}

TEST_CASE("global channel phase rotation rotates the beamformer identically") {
  auto fx = make_fixture(1, 1, 3, 41);
  const BeamformerSet f0 = cbf_upa(fx.ch, fx.assoc, 0.2);
  const std::complex<double> rot = std::polar(1.0, 1.234);
  for (auto& v : fx.ch.h) v *= rot;
  const BeamformerSet f1 = cbf_upa(fx.ch, fx.assoc, 0.2);
  const auto ip0 = dotc(fx.ch.at(0, 0), f0.at(0, 0), 3);  // rotated h against old f
  const auto ip1 = dotc(fx.ch.at(0, 0), f1.at(0, 0), 3);
  CHECK(std::abs(ip0) == doctest::Approx(std::abs(ip1)).epsilon(1e-12));
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(f1.at(0, 0)[k] - rot * f0.at(0, 0)[k]) < 1e-12);
  }
}

TEST_CASE("beamformers exist exactly for serving pairs") {
  // Partial association: 2 users, 3 APs, clusters of size 1.
  ChannelRealization ch;
  ch.n_users = 2;
  ch.n_aps = 3;
  ch.m_ap = 1;
  ch.h.assign(6, {1.0, 0.0});
  const AssociationMap assoc = associate_users({3.0, 1.0, 2.0, 1.0, 3.0, 2.0}, 2, 3, 1);
  const BeamformerSet f = cbf_upa(ch, assoc, 0.2);
  CHECK(f.from_ap(0, 0) != nullptr);  // AP 0 serves user 0
  CHECK(f.from_ap(1, 1) != nullptr);  // AP 1 serves user 1
  CHECK(f.from_ap(1, 0) == nullptr);
  CHECK(f.from_ap(2, 0) == nullptr);
  CHECK(f.ap_power(2) == 0.0);  // AP 2 serves nobody and radiates nothing
}

TEST_CASE("degenerate zero channel is rejected") {
  ChannelRealization ch;
  ch.n_users = 1;
  ch.n_aps = 1;
  ch.m_ap = 2;
  ch.h = {{0.0, 0.0}, {0.0, 0.0}};
  const AssociationMap assoc = associate_users({1.0}, 1, 1, 1);
  CHECK_THROWS(cbf_upa(ch, assoc, 0.2));
  CHECK_THROWS(cbf_ppa(ch, assoc, 0.2));
}

}  // TEST_SUITE
