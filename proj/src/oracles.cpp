#include "cfmimo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfmimo/kernels.hpp"
#include "cfmimo/metrics.hpp"

namespace cfmimo {

BeamformingSolution enumerate_phi_solve(const MinMaxModel& model,
                                        const conic::SolverSettings& settings) {
  if (model.n_users > 10) {
    throw std::invalid_argument("enumerate_phi_solve: guarded to N_U <= 10");
  }
  BeamformingSolution best;
  bool have_best = false;
  bool any_optimal = false;
  bool any_infeasible = false;
  std::vector<int> phi(model.n_users, 0);
  const unsigned total = 1u << model.n_users;
  for (unsigned mask = 0; mask < total; ++mask) {
    for (int u = 0; u < model.n_users; ++u) phi[u] = (mask >> u) & 1u;
    BeamformingSolution sol = solve_socp(model, fix_binaries(model, phi), settings);
    if (sol.status == conic::SolveStatus::primal_infeasible) {
      any_infeasible = true;
      continue;
    }
    if (!sol.optimal()) continue;
    any_optimal = true;
    if (!have_best || sol.z_value < best.z_value) {
      best = std::move(sol);
      have_best = true;
    }
  }
  if (!have_best) {
    best.status = (any_infeasible && !any_optimal) ? conic::SolveStatus::primal_infeasible
                                                   : conic::SolveStatus::numerical_failure;
    best.message = "enumerate_phi_solve: no subproblem solved to optimality";
  }
  return best;
}

namespace {

/// Max-user sum of interference amplitudes for a candidate beamformer set.
double objective_of(const ChannelRealization& ch, const AssociationMap& assoc,
                    const BeamformerSet& f) {
  double worst = 0.0;
  for (int u = 0; u < assoc.n_users(); ++u) {
    worst = std::max(worst, interference_amplitude_sum(ch, f, assoc, u));
  }
  return worst;
}

/// Phase-aligns and rescales every user's block so the desired inner product
/// lands exactly on its target amplitude; returns false when any desired
/// inner product vanished.
bool project_signal(const ChannelRealization& ch, const AssociationMap& assoc,
                    const std::vector<double>& target, BeamformerSet& f) {
  for (int u = 0; u < assoc.n_users(); ++u) {
    const std::complex<double> d = inner_sum(ch, f, u, u);
    const double mag = std::abs(d);
    if (!(mag > 0.0)) return false;
    const std::complex<double> rot = std::conj(d) / mag * (target[u] / mag);
    auto& vec = f.vectors[u];
    for (auto& v : vec) v *= rot;
  }
  return true;
}

bool power_feasible(const BeamformerSet& f, const QosBounds& bounds) {
  for (int a = 0; a < f.n_aps; ++a) {
    if (f.ap_power(a) > bounds.eta[a] * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace

SearchResult random_feasible_search(const ChannelRealization& ch,
                                    const AssociationMap& assoc, const QosBounds& bounds,
                                    int n_samples, Rng& rng, int polish_rounds) {
  SearchResult result;
  result.n_samples = n_samples;
  const int n_users = assoc.n_users();

  std::vector<double> target(n_users);
  for (int u = 0; u < n_users; ++u) target[u] = std::sqrt(bounds.rho[u]);

  BeamformerSet best;
  for (int s = 0; s < n_samples; ++s) {
    BeamformerSet cand = BeamformerSet::zeros(assoc, ch.m_ap, ch.n_aps, "oracle");
    for (int u = 0; u < n_users; ++u) {
      for (auto& v : cand.vectors[u]) v = rng.cnormal();
    }
    // Mostly probe the lower signal boundary; occasionally the interior.
    std::vector<double> t(target);
    if (s % 4 == 3) {
      for (int u = 0; u < n_users; ++u) {
        const double hi = std::sqrt(bounds.mu[u]);
        t[u] = target[u] + rng.uniform01() * 0.25 * (hi - target[u]);
      }
    }
    if (!project_signal(ch, assoc, t, cand)) continue;
    if (!power_feasible(cand, bounds)) continue;
    const double obj = objective_of(ch, assoc, cand);
    ++result.n_feasible;
    if (!result.found || obj < result.best_objective) {
      result.found = true;
      result.best_objective = obj;
      best = cand;
    }
  }

  if (result.found && polish_rounds > 0) {
    double radius = 0.5;
    BeamformerSet current = best;
    for (int r = 0; r < polish_rounds; ++r) {
      BeamformerSet cand = current;
      for (int u = 0; u < n_users; ++u) {
        for (auto& v : cand.vectors[u]) {
          v += radius * std::abs(v) * rng.cnormal() + radius * 1e-3 * rng.cnormal();
        }
      }
      if (!project_signal(ch, assoc, target, cand)) continue;
      if (!power_feasible(cand, bounds)) continue;
      const double obj = objective_of(ch, assoc, cand);
      if (obj < result.best_objective) {
        result.best_objective = obj;
        current = cand;
        radius *= 1.05;
      } else {
        radius *= 0.97;
      }
      radius = std::clamp(radius, 1e-4, 1.0);
    }
  }
  return result;
}

TinyInstance random_tiny_instance(int n_aps, int n_users, int m_ap, int cluster_size,
                                  Rng& rng) {
  TinyInstance inst;
  inst.channel.n_users = n_users;
  inst.channel.n_aps = n_aps;
  inst.channel.m_ap = m_ap;
  inst.channel.h.resize(static_cast<std::size_t>(n_users) * n_aps * m_ap);

  // Mild large-scale spread keeps the instances asymmetric without the
  // extreme dynamic range of physical channels.
  std::vector<double> beta_dB(static_cast<std::size_t>(n_users) * n_aps);
  for (int u = 0; u < n_users; ++u) {
    for (int a = 0; a < n_aps; ++a) {
      const double db = -10.0 * rng.uniform01();
      beta_dB[static_cast<std::size_t>(u) * n_aps + a] = db;
      const double amp = std::sqrt(db_to_linear(db));
      std::complex<double>* h = inst.channel.at(u, a);
      for (int k = 0; k < m_ap; ++k) h[k] = amp * rng.cnormal();
    }
  }
  inst.assoc = associate_users(beta_dB, n_users, n_aps, cluster_size);
  inst.bounds = compute_bounds(inst.channel, inst.assoc, /*eta=*/1.0, /*sigma_w2=*/1e-5,
                               n_aps, n_users, /*delta=*/1000.0);
  return inst;
}

ReceivedSignal received_signal_bruteforce(const ChannelRealization& ch,
                                          const BeamformerSet& f,
                                          const AssociationMap& assoc,
                                          const std::vector<std::complex<double>>& symbols,
                                          std::complex<double> noise, int u) {
  ReceivedSignal out;
  out.noise = noise;

  // Plain ordering: sum over every AP of h*_{u,a} x_a with
  // x_a = sum_{v served by a} f_{a,v} s_v.
  std::complex<double> acc{0.0, 0.0};
  std::vector<std::complex<double>> x_a(ch.m_ap);
  for (int a = 0; a < ch.n_aps; ++a) {
    std::fill(x_a.begin(), x_a.end(), std::complex<double>{0.0, 0.0});
    for (int v : assoc.served_users[a]) {
      const auto& aps = assoc.serving_aps[v];
      for (std::size_t pos = 0; pos < aps.size(); ++pos) {
        if (aps[pos] != a) continue;
        const std::complex<double>* fv = f.at(v, static_cast<int>(pos));
        for (int k = 0; k < ch.m_ap; ++k) x_a[k] += fv[k] * symbols[v];
      }
    }
    acc += kernels::cdotc(reinterpret_cast<const double*>(ch.at(u, a)),
                          reinterpret_cast<const double*>(x_a.data()), ch.m_ap);
  }
  out.plain_sum = acc + noise;

  // Regrouped ordering: desired term plus one coherent term per interferer.
  out.desired = inner_sum(ch, f, u, u) * symbols[u];
  out.regrouped_sum = out.desired + noise;
  for (int i = 0; i < assoc.n_users(); ++i) {
    if (i == u) continue;
    const std::complex<double> term = inner_sum(ch, f, u, i) * symbols[i];
    out.interference.push_back(term);
    out.regrouped_sum += term;
  }
  return out;
}

}  // namespace cfmimo
