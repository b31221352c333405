#pragma once

#include <complex>
#include <vector>

#include "cfmimo/beamforming.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/geometry.hpp"

namespace cfmimo {

/// Coherent inner sum sum_{a in A_i} h*_{u,a} f_{a,i}: the desired-signal
/// amplitude for i == u, one interference amplitude otherwise.
std::complex<double> inner_sum(const ChannelRealization& ch, const BeamformerSet& f,
                               int victim_u, int source_i);

double signal_power(const ChannelRealization& ch, const BeamformerSet& f, int u);

double interference_power(const ChannelRealization& ch, const BeamformerSet& f,
                          const AssociationMap& assoc, int u);

/// Sum of interference amplitudes sum_{i != u} |inner_sum(u, i)| — the
/// quantity the min-max objective bounds.
double interference_amplitude_sum(const ChannelRealization& ch, const BeamformerSet& f,
                                  const AssociationMap& assoc, int u);

double sinr(double p_signal, double p_interference, double sigma_w2);

/// R = tau_ratio * B * log2(1 + gamma), in bit/s.
double rate(double gamma, double bandwidth_hz, double tau_ratio);

/// Per-realization evaluation of one beamforming scheme.
struct MetricsRecord {
  std::vector<double> signal_w;        // per user
  std::vector<double> interference_w;  // per user
  std::vector<double> sinr_lin;        // per user
  std::vector<double> rate_bps;        // per user
  std::vector<double> rate_ub_bps;     // per user, interference forced to 0
  std::vector<double> ap_power_w;      // per AP
  double sum_rate_bps = 0.0;
  double total_power_w = 0.0;
  double energy_efficiency_bpj = 0.0;  // sum rate / total AP power
};

MetricsRecord compute_metrics(const ChannelRealization& ch, const BeamformerSet& f,
                              const AssociationMap& assoc, double sigma_w2,
                              double bandwidth_hz, double tau_ratio);

/// EE over an already-filled record; throws if rate is positive at zero power.
double energy_efficiency(double sum_rate_bps, double total_power_w);

}  // namespace cfmimo
