#include "cfmimo/beamforming.hpp"

#include <cmath>
#include <stdexcept>

#include "cfmimo/kernels.hpp"

namespace cfmimo {

const std::complex<double>* BeamformerSet::from_ap(int a, int u) const {
  const auto& aps = serving_aps[u];
  for (std::size_t pos = 0; pos < aps.size(); ++pos) {
    if (aps[pos] == a) return at(u, static_cast<int>(pos));
  }
  return nullptr;
}

double BeamformerSet::power(int u, int pos) const {
  return kernels::norm2_sq(reinterpret_cast<const double*>(at(u, pos)),
                           static_cast<std::size_t>(2) * m_ap);
}

double BeamformerSet::ap_power(int a) const {
  double total = 0.0;
  for (int u = 0; u < n_users(); ++u) {
    const auto& aps = serving_aps[u];
    for (std::size_t pos = 0; pos < aps.size(); ++pos) {
      if (aps[pos] == a) total += power(u, static_cast<int>(pos));
    }
  }
  return total;
}

BeamformerSet BeamformerSet::zeros(const AssociationMap& assoc, int m_ap, int n_aps,
                                   std::string scheme) {
  BeamformerSet set;
  set.scheme = std::move(scheme);
  set.m_ap = m_ap;
  set.n_aps = n_aps;
  set.serving_aps = assoc.serving_aps;
  set.vectors.resize(assoc.n_users());
  for (int u = 0; u < assoc.n_users(); ++u) {
    set.vectors[u].assign(assoc.serving_aps[u].size() * static_cast<std::size_t>(m_ap),
                          {0.0, 0.0});
  }
  return set;
}

BeamformerSet cbf_upa(const ChannelRealization& ch, const AssociationMap& assoc,
                      double eta) {
  BeamformerSet set = BeamformerSet::zeros(assoc, ch.m_ap, ch.n_aps, "cbf-upa");
  for (int u = 0; u < assoc.n_users(); ++u) {
    const auto& aps = assoc.serving_aps[u];
    for (std::size_t pos = 0; pos < aps.size(); ++pos) {
      const int a = aps[pos];
      const int n_served = static_cast<int>(assoc.served_users[a].size());
      const double hnorm = std::sqrt(ch.norm_sq(u, a));
      if (hnorm <= 0.0) throw std::runtime_error("cbf_upa: degenerate zero channel");
      const double scale = std::sqrt(eta / n_served) / hnorm;
      const std::complex<double>* h = ch.at(u, a);
      std::complex<double>* f = set.at(u, static_cast<int>(pos));
      for (int k = 0; k < ch.m_ap; ++k) f[k] = scale * h[k];
    }
  }
  return set;
}

BeamformerSet cbf_ppa(const ChannelRealization& ch, const AssociationMap& assoc,
                      double eta) {
  BeamformerSet set = BeamformerSet::zeros(assoc, ch.m_ap, ch.n_aps, "cbf-ppa");
  // Per-AP normalization sum_{v in U_a} ||h_{v,a}||^2.
  std::vector<double> denom(ch.n_aps, 0.0);
  for (int a = 0; a < ch.n_aps; ++a) {
    for (int v : assoc.served_users[a]) denom[a] += ch.norm_sq(v, a);
  }
  for (int u = 0; u < assoc.n_users(); ++u) {
    const auto& aps = assoc.serving_aps[u];
    for (std::size_t pos = 0; pos < aps.size(); ++pos) {
      const int a = aps[pos];
      if (denom[a] <= 0.0) throw std::runtime_error("cbf_ppa: degenerate zero channels at AP");
      const double scale = std::sqrt(eta / denom[a]);
      const std::complex<double>* h = ch.at(u, a);
      std::complex<double>* f = set.at(u, static_cast<int>(pos));
      for (int k = 0; k < ch.m_ap; ++k) f[k] = scale * h[k];
    }
  }
  return set;
}

}  // namespace cfmimo
