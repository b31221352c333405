#pragma once

#include <complex>
#include <vector>

#include "cfmimo/minmax.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

/// Ground truth for the binary structure: solves all 2^{N_U} fixed-phi
/// SOCPs and returns the best. Guarded to N_U <= 10.
BeamformingSolution enumerate_phi_solve(const MinMaxModel& model,
                                        const conic::SolverSettings& settings = {});

/// Feasible-point sampling upper bound on the optimal max-user interference
/// amplitude sum, with an optional stochastic polish around the best sample.
struct SearchResult {
  bool found = false;
  double best_objective = 0.0;  // max-user sum of |inner products|
  int n_feasible = 0;
  int n_samples = 0;
};

SearchResult random_feasible_search(const ChannelRealization& ch,
                                    const AssociationMap& assoc, const QosBounds& bounds,
                                    int n_samples, Rng& rng, int polish_rounds = 0);

/// Direct evaluation of the received sample at user u, in both the plain
/// double-sum ordering and the desired/interference regrouping.
struct ReceivedSignal {
  std::complex<double> plain_sum;      // sum over APs, then served users
  std::complex<double> regrouped_sum;  // desired + interference + noise
  std::complex<double> desired;
  std::vector<std::complex<double>> interference;  // per interfering user
  std::complex<double> noise;
};

ReceivedSignal received_signal_bruteforce(const ChannelRealization& ch,
                                          const BeamformerSet& f,
                                          const AssociationMap& assoc,
                                          const std::vector<std::complex<double>>& symbols,
                                          std::complex<double> noise, int u);

/// Small synthetic instance with O(1) channel magnitudes, used by the
/// cross-validation sweeps (enumerate vs branch-and-bound vs phase-fixing).
struct TinyInstance {
  ChannelRealization channel;
  AssociationMap assoc;
  QosBounds bounds;
};

TinyInstance random_tiny_instance(int n_aps, int n_users, int m_ap, int cluster_size,
                                  Rng& rng);

}  // namespace cfmimo
