#include "cfmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "cfmimo/kernels.hpp"

namespace cfmimo {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double path_loss_dB(double distance_m, double freq_ghz) {
  if (distance_m <= 0.0) throw std::domain_error("path_loss_dB: distance must be > 0");
  if (freq_ghz <= 0.0) throw std::domain_error("path_loss_dB: frequency must be > 0");
  return -36.7 * std::log10(distance_m) - 22.7 * std::log10(freq_ghz);
}

namespace {

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major).
/// Returns eigenvalues in `eig`; V holds eigenvectors in columns.
void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& eig,
                  std::vector<double>& V) {
  V.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) V[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26 * n * n) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V[static_cast<std::size_t>(k) * n + p];
          const double vkq = V[static_cast<std::size_t>(k) * n + q];
          V[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
          V[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eig.resize(n);
  for (int i = 0; i < n; ++i) eig[i] = a[static_cast<std::size_t>(i) * n + i];
}

/// F = V diag(sqrt(max(eig, 0))) so that F F' reproduces the clipped matrix.
std::vector<double> psd_factor(std::vector<double> cov, int n) {
  // Symmetrize first; the construction is symmetric up to rounding.
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) {
      const double v = 0.5 * (cov[static_cast<std::size_t>(r) * n + c] +
                              cov[static_cast<std::size_t>(c) * n + r]);
      cov[static_cast<std::size_t>(r) * n + c] = v;
      cov[static_cast<std::size_t>(c) * n + r] = v;
    }
  }
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += cov[static_cast<std::size_t>(i) * n + i];

  std::vector<double> eig, V;
  jacobi_eigen(cov, n, eig, V);

  const double tol = 1e-10 * std::max(trace, 1.0);
  for (double& e : eig) {
    if (e < -tol) {
      throw std::runtime_error("shadow_covariance: matrix is not PSD within tolerance");
    }
    e = std::max(e, 0.0);
  }

  std::vector<double> F(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      F[static_cast<std::size_t>(r) * n + c] =
          V[static_cast<std::size_t>(r) * n + c] * std::sqrt(eig[c]);
    }
  }
  return F;
}

}  // namespace

std::vector<double> ShadowCovariance::sample(Rng& rng) const {
  std::vector<double> g(n_users);
  for (auto& v : g) v = rng.normal();
  std::vector<double> zeta(n_users, 0.0);
  for (int u = 0; u < n_users; ++u) {
    zeta[u] = kernels::dot(factor.data() + static_cast<std::size_t>(u) * n_users,
                           g.data(), n_users);
  }
  return zeta;
}

ShadowCovariance shadow_covariance(const std::vector<Point2>& user_positions,
                                   double side_length, double r0_m,
                                   double sigma_sh_db) {
  if (r0_m <= 0.0) throw std::invalid_argument("shadow_covariance: r0 must be > 0");
  const int n = static_cast<int>(user_positions.size());
  const double var = sigma_sh_db * sigma_sh_db;
  std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u) {
    for (int i = 0; i < n; ++i) {
      const double r = wrap_distance(user_positions[u], user_positions[i], side_length, 0.0);
      cov[static_cast<std::size_t>(u) * n + i] = var * std::exp2(-r / r0_m);
    }
  }
  return shadow_covariance_from_matrix(std::move(cov), n);
}

ShadowCovariance shadow_covariance_from_matrix(std::vector<double> cov, int n_users) {
  ShadowCovariance sc;
  sc.n_users = n_users;
  sc.factor = psd_factor(cov, n_users);
  sc.cov = std::move(cov);
  return sc;
}

std::vector<std::complex<double>> sample_small_scale(int m_ap, Rng& rng) {
  if (m_ap < 1) throw std::invalid_argument("sample_small_scale: m_ap must be >= 1");
  std::vector<std::complex<double>> g(m_ap);
  for (auto& v : g) v = rng.cnormal();
  return g;
}

std::vector<std::complex<double>> channel_vector(double beta_linear,
                                                 const std::vector<std::complex<double>>& g) {
  if (beta_linear < 0.0) throw std::domain_error("channel_vector: beta must be >= 0");
  const double amp = std::sqrt(beta_linear);
  std::vector<std::complex<double>> h(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) h[i] = amp * g[i];
  return h;
}

double ChannelRealization::norm_sq(int u, int a) const {
  const std::complex<double>* v = at(u, a);
  double acc = 0.0;
  for (int k = 0; k < m_ap; ++k) acc += std::norm(v[k]);
  return acc;
}

LargeScaleTable make_large_scale(const NetworkLayout& layout, double freq_ghz,
                                 const ShadowCovariance& shadow, Rng& rng) {
  const int n_users = layout.n_users();
  const int n_aps = layout.n_aps();
  LargeScaleTable table;
  table.n_users = n_users;
  table.n_aps = n_aps;
  table.beta_dB.resize(static_cast<std::size_t>(n_users) * n_aps);
  table.beta_linear.resize(table.beta_dB.size());

  const double dh = layout.height_gap();
  for (int a = 0; a < n_aps; ++a) {
    const std::vector<double> zeta = shadow.sample(rng);
    for (int u = 0; u < n_users; ++u) {
      const double d = wrap_distance(layout.user_positions[u], layout.ap_positions[a],
                                     layout.side_length, dh);
      const double db = path_loss_dB(d, freq_ghz) + zeta[u];
      table.beta_dB[static_cast<std::size_t>(u) * n_aps + a] = db;
      table.beta_linear[static_cast<std::size_t>(u) * n_aps + a] = db_to_linear(db);
    }
  }
  return table;
}

ChannelRealization draw_channel(const LargeScaleTable& table, int m_ap, Rng& rng,
                                int slot_index) {
  ChannelRealization ch;
  ch.n_users = table.n_users;
  ch.n_aps = table.n_aps;
  ch.m_ap = m_ap;
  ch.slot_index = slot_index;
  ch.h.resize(static_cast<std::size_t>(table.n_users) * table.n_aps * m_ap);
  for (int u = 0; u < table.n_users; ++u) {
    for (int a = 0; a < table.n_aps; ++a) {
      const double amp = std::sqrt(table.linear(u, a));
      std::complex<double>* dst = ch.at(u, a);
      for (int k = 0; k < m_ap; ++k) dst[k] = amp * rng.cnormal();
    }
  }
  return ch;
}

}  // namespace cfmimo
