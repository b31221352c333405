#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cfmimo/channel.hpp"
#include "cfmimo/geometry.hpp"

namespace cfmimo {

/// Downlink beamforming vectors f_{a,u}, defined only for (a, u) pairs where
/// AP a serves user u. Stored per user in the serving-cluster order of the
/// association map; value-semantic so solutions can outlive their inputs.
struct BeamformerSet {
  std::string scheme;
  int m_ap = 0;
  int n_aps = 0;
  std::vector<std::vector<int>> serving_aps;
  // vectors[u] holds serving_aps[u].size() blocks of m_ap complex entries.
  std::vector<std::vector<std::complex<double>>> vectors;

  int n_users() const { return static_cast<int>(serving_aps.size()); }

  const std::complex<double>* at(int u, int pos) const {
    return vectors[u].data() + static_cast<std::size_t>(pos) * m_ap;
  }
  std::complex<double>* at(int u, int pos) {
    return vectors[u].data() + static_cast<std::size_t>(pos) * m_ap;
  }

  /// Beamformer from AP a to user u, or nullptr when a does not serve u.
  const std::complex<double>* from_ap(int a, int u) const;

  double power(int u, int pos) const;  // ||f_{a,u}||^2 for the pos-th serving AP
  double ap_power(int a) const;        // sum over users served by AP a

  static BeamformerSet zeros(const AssociationMap& assoc, int m_ap, int n_aps,
                             std::string scheme);
};

/// Conjugate beamforming with uniform power allocation:
/// f_{a,u} = sqrt(eta / N_{U,a}) h_{u,a} / ||h_{u,a}||.
BeamformerSet cbf_upa(const ChannelRealization& ch, const AssociationMap& assoc,
                      double eta);

/// Conjugate beamforming with proportional power allocation:
/// f_{a,u} = sqrt(eta / sum_{v in U_a} ||h_{v,a}||^2) h_{u,a}.
BeamformerSet cbf_ppa(const ChannelRealization& ch, const AssociationMap& assoc,
                      double eta);

}  // namespace cfmimo
