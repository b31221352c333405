#pragma once

#include <complex>
#include <vector>

#include "cfmimo/geometry.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {

double db_to_linear(double db);
double linear_to_db(double linear);

/// Deterministic part of the large-scale fading in dB:
/// -36.7 log10(d) - 22.7 log10(f_GHz). Throws for d <= 0.
double path_loss_dB(double distance_m, double freq_ghz);

/// Large-scale fading coefficients for every (user, AP) pair.
struct LargeScaleTable {
  int n_users = 0;
  int n_aps = 0;
  std::vector<double> beta_dB;      // row-major n_users x n_aps
  std::vector<double> beta_linear;  // 10^(beta_dB/10)

  double linear(int u, int a) const { return beta_linear[static_cast<std::size_t>(u) * n_aps + a]; }
  double dB(int u, int a) const { return beta_dB[static_cast<std::size_t>(u) * n_aps + a]; }
};

/// Per-AP covariance of the shadowing terms across users (dB^2); the same
/// matrix applies to every AP and cross-AP covariance is zero.
/// Entries: sigma_sh^2 * 2^(-r_ui / r0) with r_ui the torus distance.
struct ShadowCovariance {
  int n_users = 0;
  std::vector<double> cov;     // row-major n_users x n_users, dB^2
  std::vector<double> factor;  // F with F F' = cov (eigenvalue-clipped)

  double at(int u, int i) const { return cov[static_cast<std::size_t>(u) * n_users + i]; }

  /// One correlated shadowing vector (dB), to be drawn once per AP.
  std::vector<double> sample(Rng& rng) const;
};

ShadowCovariance shadow_covariance(const std::vector<Point2>& user_positions,
                                   double side_length, double r0_m,
                                   double sigma_sh_db);

/// Builds a ShadowCovariance from an explicit matrix (used by tests).
ShadowCovariance shadow_covariance_from_matrix(std::vector<double> cov, int n_users);

/// i.i.d. CN(0, I_m) vector.
std::vector<std::complex<double>> sample_small_scale(int m_ap, Rng& rng);

/// h = sqrt(beta_linear) * g elementwise.
std::vector<std::complex<double>> channel_vector(double beta_linear,
                                                 const std::vector<std::complex<double>>& g);

/// Complex channel vectors h[u][a] (each of length m_ap) for one slot.
struct ChannelRealization {
  int n_users = 0;
  int n_aps = 0;
  int m_ap = 0;
  int slot_index = 0;
  std::vector<std::complex<double>> h;  // [(u * n_aps + a) * m_ap + antenna]

  const std::complex<double>* at(int u, int a) const {
    return h.data() + (static_cast<std::size_t>(u) * n_aps + a) * m_ap;
  }
  std::complex<double>* at(int u, int a) {
    return h.data() + (static_cast<std::size_t>(u) * n_aps + a) * m_ap;
  }
  double norm_sq(int u, int a) const;
};

/// Large-scale synthesis: path loss from wrapped 3-D distances plus one
/// correlated shadowing draw per AP.
LargeScaleTable make_large_scale(const NetworkLayout& layout, double freq_ghz,
                                 const ShadowCovariance& shadow, Rng& rng);

/// Small-scale synthesis on top of a large-scale table.
ChannelRealization draw_channel(const LargeScaleTable& table, int m_ap, Rng& rng,
                                int slot_index = 0);

}  // namespace cfmimo
