#include "cfmimo/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "cfmimo/kernels.hpp"

namespace cfmimo {

std::complex<double> inner_sum(const ChannelRealization& ch, const BeamformerSet& f,
                               int victim_u, int source_i) {
  std::complex<double> acc{0.0, 0.0};
  const auto& aps = f.serving_aps[source_i];
  for (std::size_t pos = 0; pos < aps.size(); ++pos) {
    const int a = aps[pos];
    acc += kernels::cdotc(reinterpret_cast<const double*>(ch.at(victim_u, a)),
                          reinterpret_cast<const double*>(f.at(source_i, static_cast<int>(pos))),
                          ch.m_ap);
  }
  return acc;
}

double signal_power(const ChannelRealization& ch, const BeamformerSet& f, int u) {
  return std::norm(inner_sum(ch, f, u, u));
}

double interference_power(const ChannelRealization& ch, const BeamformerSet& f,
                          const AssociationMap& assoc, int u) {
  double acc = 0.0;
  for (int i = 0; i < assoc.n_users(); ++i) {
    if (i == u) continue;
    acc += std::norm(inner_sum(ch, f, u, i));
  }
  return acc;
}

double interference_amplitude_sum(const ChannelRealization& ch, const BeamformerSet& f,
                                  const AssociationMap& assoc, int u) {
  double acc = 0.0;
  for (int i = 0; i < assoc.n_users(); ++i) {
    if (i == u) continue;
    acc += std::abs(inner_sum(ch, f, u, i));
  }
  return acc;
}

double sinr(double p_signal, double p_interference, double sigma_w2) {
  if (sigma_w2 <= 0.0) throw std::domain_error("sinr: noise power must be > 0");
  return p_signal / (p_interference + sigma_w2);
}

double rate(double gamma, double bandwidth_hz, double tau_ratio) {
  if (gamma < 0.0) throw std::domain_error("rate: SINR must be >= 0");
  return tau_ratio * bandwidth_hz * std::log2(1.0 + gamma);
}

double energy_efficiency(double sum_rate_bps, double total_power_w) {
  if (total_power_w <= 0.0) {
    if (sum_rate_bps > 0.0) {
      throw std::logic_error("energy_efficiency: positive rate at zero radiated power");
    }
    return 0.0;
  }
  return sum_rate_bps / total_power_w;
}

MetricsRecord compute_metrics(const ChannelRealization& ch, const BeamformerSet& f,
                              const AssociationMap& assoc, double sigma_w2,
                              double bandwidth_hz, double tau_ratio) {
  MetricsRecord rec;
  const int n_users = assoc.n_users();
  rec.signal_w.resize(n_users);
  rec.interference_w.resize(n_users);
  rec.sinr_lin.resize(n_users);
  rec.rate_bps.resize(n_users);
  rec.rate_ub_bps.resize(n_users);
  for (int u = 0; u < n_users; ++u) {
    rec.signal_w[u] = signal_power(ch, f, u);
    rec.interference_w[u] = interference_power(ch, f, assoc, u);
    rec.sinr_lin[u] = sinr(rec.signal_w[u], rec.interference_w[u], sigma_w2);
    rec.rate_bps[u] = rate(rec.sinr_lin[u], bandwidth_hz, tau_ratio);
    rec.rate_ub_bps[u] = rate(rec.signal_w[u] / sigma_w2, bandwidth_hz, tau_ratio);
    rec.sum_rate_bps += rec.rate_bps[u];
  }
  rec.ap_power_w.resize(assoc.n_aps());
  for (int a = 0; a < assoc.n_aps(); ++a) {
    rec.ap_power_w[a] = f.ap_power(a);
    rec.total_power_w += rec.ap_power_w[a];
  }
  rec.energy_efficiency_bpj = energy_efficiency(rec.sum_rate_bps, rec.total_power_w);
  return rec;
}

}  // namespace cfmimo
