#include "cfmimo/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "cfmimo/kernels.hpp"
#include "cfmimo/metrics.hpp"

namespace cfmimo {

namespace {
namespace kn = cfmimo::kernels;
}

void QosBounds::validate() const {
  if (rho.size() != mu.size()) throw std::invalid_argument("QosBounds: rho/mu size mismatch");
  double max_sqrt_mu = 0.0;
  for (std::size_t u = 0; u < rho.size(); ++u) {
    if (!(rho[u] > 0.0) || !(rho[u] < mu[u])) {
      throw std::invalid_argument("QosBounds: need 0 < rho < mu per user");
    }
    max_sqrt_mu = std::max(max_sqrt_mu, std::sqrt(mu[u]));
  }
  for (double e : eta) {
    if (!(e > 0.0)) throw std::invalid_argument("QosBounds: eta must be > 0");
  }
  if (!(delta > max_sqrt_mu)) {
    throw std::invalid_argument("QosBounds: delta must exceed max sqrt(mu)");
  }
}

QosBounds compute_bounds(const ChannelRealization& ch, const AssociationMap& assoc,
                         double eta, double sigma_w2, int n_aps, int n_users,
                         double delta) {
  if (sigma_w2 <= 0.0) throw std::invalid_argument("compute_bounds: sigma_w2 must be > 0");
  QosBounds bounds;
  bounds.delta = delta;
  bounds.eta.assign(ch.n_aps, eta);
  bounds.rho.resize(assoc.n_users());
  bounds.mu.resize(assoc.n_users());
  for (int u = 0; u < assoc.n_users(); ++u) {
    double best = 0.0;
    for (int a : assoc.serving_aps[u]) best = std::max(best, ch.norm_sq(u, a));
    bounds.rho[u] = sigma_w2 + eta / (static_cast<double>(n_aps) * n_users) * best;
    bounds.mu[u] = 1e5 * sigma_w2 + eta * std::sqrt(static_cast<double>(n_aps)) / n_users * best;
  }
  return bounds;
}

int MinMaxModel::t_index(int u, int i) const {
  return t_base + u * (n_users - 1) + (i < u ? i : i - 1);
}

MinMaxModel build_model(const ChannelRealization& ch, const AssociationMap& assoc,
                        const QosBounds& bounds) {
  bounds.validate();
  if (assoc.n_users() != ch.n_users || assoc.n_aps() != ch.n_aps) {
    throw std::invalid_argument("build_model: channels and association disagree");
  }
  if (static_cast<int>(bounds.rho.size()) != ch.n_users ||
      static_cast<int>(bounds.eta.size()) != ch.n_aps) {
    throw std::invalid_argument("build_model: bounds sized for a different network");
  }

  MinMaxModel m;
  m.n_users = ch.n_users;
  m.n_aps = ch.n_aps;
  m.m_ap = ch.m_ap;
  m.assoc = assoc;
  m.bounds = bounds;

  // Variable layout.
  m.slot_offset.resize(m.n_users);
  int offset = 0;
  for (int u = 0; u < m.n_users; ++u) {
    m.slot_offset[u].resize(assoc.serving_aps[u].size());
    for (std::size_t pos = 0; pos < assoc.serving_aps[u].size(); ++pos) {
      m.slot_offset[u][pos] = offset;
      offset += 2 * m.m_ap;
    }
  }
  m.n_f = offset;
  m.z_index = offset;
  m.t_base = offset + 1;
  for (int u = 0; u < m.n_users; ++u) {
    for (int i = 0; i < m.n_users; ++i) {
      if (i != u) m.t_pairs.emplace_back(u, i);
    }
  }
  m.n_continuous = m.t_base + static_cast<int>(m.t_pairs.size()) + 3 * m.n_users;
  m.n_binary = m.n_users;

  // Conditioning scales: beamformers measured against the largest budget,
  // amplitudes against a typical serving-channel norm.
  double eta_max = 0.0;
  for (double e : bounds.eta) eta_max = std::max(eta_max, e);
  m.f_scale = std::sqrt(eta_max);
  std::vector<double> norms;
  for (int u = 0; u < m.n_users; ++u) {
    for (int a : assoc.serving_aps[u]) {
      const double nrm = std::sqrt(ch.norm_sq(u, a));
      if (nrm > 0.0) norms.push_back(nrm);
    }
  }
  if (norms.empty()) {
    m.h_scale = 1.0;
  } else {
    std::nth_element(norms.begin(), norms.begin() + norms.size() / 2, norms.end());
    m.h_scale = norms[norms.size() / 2];
  }

  const double amp = m.amp_scale();
  m.h_scaled.resize(ch.h.size());
  for (std::size_t k = 0; k < ch.h.size(); ++k) m.h_scaled[k] = ch.h[k] / m.h_scale;
  m.sqrt_rho.resize(m.n_users);
  m.sqrt_mu.resize(m.n_users);
  for (int u = 0; u < m.n_users; ++u) {
    m.sqrt_rho[u] = std::sqrt(bounds.rho[u]) / amp;
    m.sqrt_mu[u] = std::sqrt(bounds.mu[u]) / amp;
  }
  m.sqrt_eta.resize(m.n_aps);
  for (int a = 0; a < m.n_aps; ++a) m.sqrt_eta[a] = std::sqrt(bounds.eta[a]) / m.f_scale;
  m.delta_scaled = bounds.delta / amp;
  return m;
}

namespace {

using conic::Triplet;

/// Appends coefficients of Re/Im of sum_{a in A_i} h*_{u,a} f_{a,i} to the
/// given rows (scaled channel entries; `sign` covers the G-row convention).
void add_inner_coeffs(const MinMaxModel& m, int victim_u, int source_i, int row_re,
                      int row_im, double sign, std::vector<Triplet>& trip) {
  const auto& aps = m.assoc.serving_aps[source_i];
  for (std::size_t pos = 0; pos < aps.size(); ++pos) {
    const int a = aps[pos];
    const int off = m.slot_offset[source_i][pos];
    const std::complex<double>* h = m.h_at(victim_u, a);
    for (int k = 0; k < m.m_ap; ++k) {
      const double re = h[k].real();
      const double im = h[k].imag();
      // Re(h* f) = re*Re(f) + im*Im(f);  Im(h* f) = re*Im(f) - im*Re(f)
      if (re != 0.0) trip.push_back({row_re, off + 2 * k, sign * re});
      if (im != 0.0) trip.push_back({row_re, off + 2 * k + 1, sign * im});
      if (im != 0.0) trip.push_back({row_im, off + 2 * k, -sign * im});
      if (re != 0.0) trip.push_back({row_im, off + 2 * k + 1, sign * re});
    }
  }
}

enum class Variant { wlog, fixed, relaxed };

LoweredProgram lower_model(const MinMaxModel& m, Variant variant,
                           const std::vector<int>& phi_fixed) {
  LoweredProgram lp;
  const int nu_users = m.n_users;
  lp.vplus_index.assign(nu_users, -1);
  lp.vminus_index.assign(nu_users, -1);
  lp.nu_index.assign(nu_users, -1);
  lp.phi_index.assign(nu_users, -1);
  lp.phi_fixed.assign(nu_users, 1);

  // Allocate the variant-specific tail of the variable vector.
  int next = m.t_base + static_cast<int>(m.t_pairs.size());
  for (int u = 0; u < nu_users; ++u) {
    switch (variant) {
      case Variant::wlog:
        lp.vplus_index[u] = next++;
        lp.phi_fixed[u] = 1;
        break;
      case Variant::fixed:
        if (phi_fixed[u] == 1) {
          lp.vplus_index[u] = next++;
        } else {
          lp.vminus_index[u] = next++;
        }
        lp.nu_index[u] = next++;
        lp.phi_fixed[u] = phi_fixed[u];
        break;
      case Variant::relaxed:
        if (phi_fixed[u] == 0 || phi_fixed[u] == 1) {
          if (phi_fixed[u] == 1) {
            lp.vplus_index[u] = next++;
          } else {
            lp.vminus_index[u] = next++;
          }
          lp.nu_index[u] = next++;
          lp.phi_fixed[u] = phi_fixed[u];
        } else {
          lp.vplus_index[u] = next++;
          lp.vminus_index[u] = next++;
          lp.nu_index[u] = next++;
          lp.phi_index[u] = next++;
          lp.phi_fixed[u] = -1;
        }
        break;
    }
  }
  const int n_vars = next;

  std::vector<Triplet> at;  // equalities
  std::vector<double> b;
  std::vector<Triplet> gt;  // cone rows
  std::vector<double> h;
  int row = 0;

  // Signal equalities per user: Re(d_u) - V+ + V- = 0 and Im(d_u) = 0,
  // then the range-slack equality where nu survives.
  for (int u = 0; u < nu_users; ++u) {
    const int row_re = row++;
    const int row_im = row++;
    add_inner_coeffs(m, u, u, row_re, row_im, 1.0, at);
    if (lp.vplus_index[u] >= 0) at.push_back({row_re, lp.vplus_index[u], -1.0});
    if (lp.vminus_index[u] >= 0) at.push_back({row_re, lp.vminus_index[u], 1.0});
    b.push_back(0.0);
    b.push_back(0.0);
    if (lp.nu_index[u] >= 0) {
      const int row_range = row++;
      if (lp.vplus_index[u] >= 0) at.push_back({row_range, lp.vplus_index[u], 1.0});
      if (lp.vminus_index[u] >= 0) at.push_back({row_range, lp.vminus_index[u], 1.0});
      at.push_back({row_range, lp.nu_index[u], 1.0});
      b.push_back(m.sqrt_mu[u]);
    }
  }
  const int n_eq = row;

  // Linear cone rows.
  row = 0;
  for (int u = 0; u < nu_users; ++u) {
    // Epigraph: sum_i t_{u,i} - z <= 0 (kept for every user; with no
    // interferers it degenerates to z >= 0).
    for (int i = 0; i < nu_users; ++i) {
      if (i != u) gt.push_back({row, m.t_index(u, i), 1.0});
    }
    gt.push_back({row, m.z_index, -1.0});
    h.push_back(0.0);
    ++row;
  }
  for (int u = 0; u < nu_users; ++u) {
    switch (variant) {
      case Variant::wlog: {
        const int v = lp.vplus_index[u];
        gt.push_back({row, v, 1.0});
        h.push_back(m.sqrt_mu[u]);
        ++row;
        gt.push_back({row, v, -1.0});
        h.push_back(-m.sqrt_rho[u]);
        ++row;
        break;
      }
      case Variant::fixed:
      case Variant::relaxed: {
        const bool free_phi = lp.phi_fixed[u] == -1;
        const int vp = lp.vplus_index[u];
        const int vm = lp.vminus_index[u];
        const int nu = lp.nu_index[u];
        if (vp >= 0) {
          gt.push_back({row, vp, -1.0});  // V+ >= 0
          h.push_back(0.0);
          ++row;
        }
        if (vm >= 0) {
          gt.push_back({row, vm, -1.0});  // V- >= 0
          h.push_back(0.0);
          ++row;
        }
        gt.push_back({row, nu, -1.0});  // nu >= 0
        h.push_back(0.0);
        ++row;
        gt.push_back({row, nu, 1.0});  // nu <= sqrt(mu) - sqrt(rho)
        h.push_back(m.sqrt_mu[u] - m.sqrt_rho[u]);
        ++row;
        if (free_phi) {
          const int phi = lp.phi_index[u];
          gt.push_back({row, phi, -1.0});  // phi >= 0
          h.push_back(0.0);
          ++row;
          gt.push_back({row, phi, 1.0});  // phi <= 1
          h.push_back(1.0);
          ++row;
          gt.push_back({row, vp, 1.0});  // V+ <= delta * phi
          gt.push_back({row, phi, -m.delta_scaled});
          h.push_back(0.0);
          ++row;
          gt.push_back({row, vm, 1.0});  // V- <= delta * (1 - phi)
          gt.push_back({row, phi, m.delta_scaled});
          h.push_back(m.delta_scaled);
          ++row;
        }
        // With phi fixed, the active-side big-M row V <= delta is implied by
        // the range equality (V = sqrt(mu) - nu <= sqrt(mu) < delta) and the
        // zero-side row became the variable elimination above.
        break;
      }
    }
  }
  const int n_lin = row;

  conic::ConeLayout cones;
  cones.n_nonneg = n_lin;

  // Interference SOCs: (t_{u,i}, Re c_{u,i}, Im c_{u,i}) in Q^3.
  for (const auto& [u, i] : m.t_pairs) {
    gt.push_back({row, m.t_index(u, i), -1.0});
    h.push_back(0.0);
    ++row;
    const int row_re = row++;
    const int row_im = row++;
    add_inner_coeffs(m, u, i, row_re, row_im, -1.0, gt);
    h.push_back(0.0);
    h.push_back(0.0);
    cones.soc_dims.push_back(3);
  }

  // Per-AP power SOCs over the stacked beamformer block.
  for (int a = 0; a < m.n_aps; ++a) {
    const auto& users = m.assoc.served_users[a];
    if (users.empty()) continue;
    h.push_back(m.sqrt_eta[a]);  // head row has no variables
    ++row;
    int dim = 1;
    for (int u : users) {
      const auto& aps = m.assoc.serving_aps[u];
      int pos = -1;
      for (std::size_t p = 0; p < aps.size(); ++p) {
        if (aps[p] == a) pos = static_cast<int>(p);
      }
      const int off = m.slot_offset[u][pos];
      for (int k = 0; k < 2 * m.m_ap; ++k) {
        gt.push_back({row, off + k, -1.0});
        h.push_back(0.0);
        ++row;
        ++dim;
      }
    }
    cones.soc_dims.push_back(dim);
  }

  lp.program.n = n_vars;
  lp.program.c.assign(n_vars, 0.0);
  lp.program.c[m.z_index] = 1.0;
  lp.program.A = conic::SparseMatrix(n_eq, n_vars, at);
  lp.program.b = std::move(b);
  lp.program.G = conic::SparseMatrix(row, n_vars, gt);
  lp.program.h = std::move(h);
  lp.program.cones = std::move(cones);
  return lp;
}

}  // namespace

LoweredProgram reduce_phase_wlog(const MinMaxModel& model) {
  LoweredProgram lp = lower_model(model, Variant::wlog, {});
  lp.program.name = "minmax-wlog";
  return lp;
}

LoweredProgram fix_binaries(const MinMaxModel& model, const std::vector<int>& phi) {
  if (static_cast<int>(phi.size()) != model.n_users) {
    throw std::invalid_argument("fix_binaries: phi size mismatch");
  }
  for (int v : phi) {
    if (v != 0 && v != 1) throw std::invalid_argument("fix_binaries: phi must be 0/1");
  }
  LoweredProgram lp = lower_model(model, Variant::fixed, phi);
  lp.program.name = "minmax-fixed-phi";
  return lp;
}

LoweredProgram relax_binaries(const MinMaxModel& model, const std::vector<int>& phi_fixed) {
  if (static_cast<int>(phi_fixed.size()) != model.n_users) {
    throw std::invalid_argument("relax_binaries: phi size mismatch");
  }
  LoweredProgram lp = lower_model(model, Variant::relaxed, phi_fixed);
  lp.program.name = "minmax-relaxed";
  return lp;
}

BeamformingSolution solve_socp(const MinMaxModel& model, const LoweredProgram& lowered,
                               const conic::SolverSettings& settings) {
  const conic::ConicSolution sol = conic::solve(lowered.program, settings);

  BeamformingSolution out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.solve_seconds = sol.solve_seconds;
  out.message = sol.message;
  out.solver_gap = sol.gap;
  out.solver_pres = sol.pres;
  out.solver_dres = sol.dres;

  const double amp = model.amp_scale();
  out.beamformers = BeamformerSet::zeros(model.assoc, model.m_ap, model.n_aps, "minmax");
  if (sol.x.empty()) return out;
  for (int u = 0; u < model.n_users; ++u) {
    for (std::size_t pos = 0; pos < model.assoc.serving_aps[u].size(); ++pos) {
      const int off = model.slot_offset[u][pos];
      std::complex<double>* f = out.beamformers.at(u, static_cast<int>(pos));
      for (int k = 0; k < model.m_ap; ++k) {
        f[k] = {sol.x[off + 2 * k] * model.f_scale, sol.x[off + 2 * k + 1] * model.f_scale};
      }
    }
  }
  out.z_value = sol.x[model.z_index] * amp;
  out.v_plus.assign(model.n_users, 0.0);
  out.v_minus.assign(model.n_users, 0.0);
  out.nu.assign(model.n_users, 0.0);
  out.phi.assign(model.n_users, 1);
  for (int u = 0; u < model.n_users; ++u) {
    const double vp = lowered.vplus_index[u] >= 0 ? sol.x[lowered.vplus_index[u]] * amp : 0.0;
    const double vm = lowered.vminus_index[u] >= 0 ? sol.x[lowered.vminus_index[u]] * amp : 0.0;
    out.v_plus[u] = vp;
    out.v_minus[u] = vm;
    if (lowered.nu_index[u] >= 0) {
      out.nu[u] = sol.x[lowered.nu_index[u]] * amp;
    } else {
      out.nu[u] = std::sqrt(model.bounds.mu[u]) - vp - vm;
    }
    if (lowered.phi_fixed[u] == -1) {
      out.phi[u] = vp >= vm ? 1 : 0;
    } else {
      out.phi[u] = lowered.phi_fixed[u];
    }
  }
  return out;
}

BeamformingSolution solve_minmax(const MinMaxModel& model, SolveStrategy strategy,
                                 const conic::SolverSettings& settings) {
  if (strategy == SolveStrategy::bnb) return branch_and_bound(model, settings);
  return solve_socp(model, reduce_phase_wlog(model), settings);
}

BeamformingSolution branch_and_bound(const MinMaxModel& model,
                                     const conic::SolverSettings& settings) {
  if (model.n_binary > 16) {
    std::fprintf(stderr,
                 "branch_and_bound: %d binaries; enumeration may be slow, "
                 "consider the wlog strategy\n",
                 model.n_binary);
  }
  const double amp = model.amp_scale();
  const double prune_tol = 1e-8;     // scaled z units
  const double integral_tol = 1e-7;  // scaled V units

  struct Node {
    std::vector<int> phi_fixed;
    double bound;  // scaled z lower bound inherited from the parent
  };
  std::vector<Node> stack;
  stack.push_back({std::vector<int>(model.n_users, -1), -1.0});

  BeamformingSolution best;
  bool have_best = false;
  double best_scaled = std::numeric_limits<double>::infinity();
  int nodes = 0;
  int failures = 0;
  bool any_infeasible = false;

  auto try_leaf = [&](const std::vector<int>& phi) {
    BeamformingSolution leaf = solve_socp(model, fix_binaries(model, phi), settings);
    ++nodes;
    if (leaf.status == conic::SolveStatus::primal_infeasible) {
      any_infeasible = true;
      return std::numeric_limits<double>::infinity();
    }
    if (!leaf.optimal()) {
      ++failures;
      return std::numeric_limits<double>::infinity();
    }
    const double scaled = leaf.z_value / amp;
    if (!have_best || scaled < best_scaled) {
      best = std::move(leaf);
      best_scaled = scaled;
      have_best = true;
    }
    return scaled;
  };

  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (have_best && node.bound >= best_scaled - prune_tol) continue;

    const bool all_fixed =
        std::none_of(node.phi_fixed.begin(), node.phi_fixed.end(),
                     [](int v) { return v == -1; });
    if (all_fixed) {
      try_leaf(node.phi_fixed);
      continue;
    }

    BeamformingSolution rel = solve_socp(model, relax_binaries(model, node.phi_fixed), settings);
    ++nodes;
    if (rel.status == conic::SolveStatus::primal_infeasible) {
      any_infeasible = true;
      continue;
    }
    if (!rel.optimal()) {
      ++failures;
      continue;
    }
    const double bound = rel.z_value / amp;
    if (have_best && bound >= best_scaled - prune_tol) continue;

    // Branch on the free user with the largest complementarity violation.
    int branch_u = -1;
    double worst = 0.0;
    for (int u = 0; u < model.n_users; ++u) {
      if (node.phi_fixed[u] != -1) continue;
      const double v = std::min(rel.v_plus[u], rel.v_minus[u]) / amp;
      if (branch_u == -1 || v > worst) {
        branch_u = u;
        worst = v;
      }
    }
    if (worst <= integral_tol) {
      // Relaxation is already complementary: solve the rounded leaf and
      // prune the subtree when it matches the bound.
      std::vector<int> phi(node.phi_fixed);
      for (int u = 0; u < model.n_users; ++u) {
        if (phi[u] == -1) phi[u] = rel.v_plus[u] >= rel.v_minus[u] ? 1 : 0;
      }
      const double leaf_scaled = try_leaf(phi);
      if (leaf_scaled <= bound + prune_tol) continue;
    }

    Node child0 = node;
    child0.phi_fixed[branch_u] = 0;
    child0.bound = bound;
    Node child1 = node;
    child1.phi_fixed[branch_u] = 1;
    child1.bound = bound;
    stack.push_back(std::move(child0));
    stack.push_back(std::move(child1));  // popped first
  }

  if (!have_best) {
    BeamformingSolution out;
    out.beamformers = BeamformerSet::zeros(model.assoc, model.m_ap, model.n_aps, "minmax");
    out.status = (failures == 0 && any_infeasible) ? conic::SolveStatus::primal_infeasible
                                                   : conic::SolveStatus::numerical_failure;
    out.message = "branch and bound: no incumbent (" + std::to_string(nodes) + " nodes, " +
                  std::to_string(failures) + " node failures)";
    return out;
  }
  best.message += " [bnb nodes=" + std::to_string(nodes) +
                  (failures ? ", node failures=" + std::to_string(failures) : "") + "]";
  return best;
}

namespace {

double pos_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace

FeasibilityReport check_feasibility(const BeamformingSolution& solution,
                                    const ChannelRealization& ch,
                                    const AssociationMap& assoc, const QosBounds& bounds) {
  FeasibilityReport rep;
  const int n_users = assoc.n_users();
  const BeamformerSet& f = solution.beamformers;

  double amp_ref = 0.0;
  for (int u = 0; u < n_users; ++u) amp_ref = std::max(amp_ref, std::sqrt(bounds.mu[u]));

  std::vector<double> v_plus = solution.v_plus;
  std::vector<double> v_minus = solution.v_minus;
  std::vector<double> nu = solution.nu;
  std::vector<int> phi = solution.phi;
  const bool reconstruct = v_plus.empty();
  if (reconstruct) {
    v_plus.assign(n_users, 0.0);
    v_minus.assign(n_users, 0.0);
    nu.assign(n_users, 0.0);
    phi.assign(n_users, 1);
  }

  for (int u = 0; u < n_users; ++u) {
    const std::complex<double> d = inner_sum(ch, f, u, u);
    if (reconstruct) {
      v_plus[u] = pos_part(d.real());
      v_minus[u] = pos_part(-d.real());
      nu[u] = std::sqrt(bounds.mu[u]) - v_plus[u] - v_minus[u];
      phi[u] = v_plus[u] >= v_minus[u] ? 1 : 0;
    }
    const double sqrt_rho = std::sqrt(bounds.rho[u]);
    const double sqrt_mu = std::sqrt(bounds.mu[u]);
    const double a = std::abs(d);

    const double interference = interference_amplitude_sum(ch, f, assoc, u);
    rep.epigraph = std::max(
        rep.epigraph, (interference - solution.z_value) / std::max(solution.z_value, amp_ref));
    rep.signal_range = std::max(
        rep.signal_range, std::max(pos_part(sqrt_rho - a), pos_part(a - sqrt_mu)) / sqrt_mu);
    rep.signal_equality =
        std::max(rep.signal_equality,
                 std::max(std::abs(d.imag()),
                          std::abs(d.real() - (v_plus[u] - v_minus[u]))) /
                     sqrt_mu);
    rep.range_slack = std::max(
        rep.range_slack,
        std::max({std::abs(v_plus[u] + v_minus[u] + nu[u] - sqrt_mu), pos_part(-nu[u]),
                  pos_part(nu[u] - (sqrt_mu - sqrt_rho))}) /
            sqrt_mu);
    rep.nonneg = std::max(rep.nonneg,
                          std::max(pos_part(-v_plus[u]), pos_part(-v_minus[u])) / sqrt_mu);
    rep.big_m = std::max(rep.big_m,
                         std::max(pos_part(v_plus[u] - bounds.delta * phi[u]),
                                  pos_part(v_minus[u] - bounds.delta * (1 - phi[u]))) /
                             bounds.delta);
  }
  for (int a = 0; a < assoc.n_aps(); ++a) {
    rep.power = std::max(rep.power, pos_part(f.ap_power(a) - bounds.eta[a]) / bounds.eta[a]);
  }
  rep.worst = std::max({rep.epigraph, rep.signal_range, rep.signal_equality,
                        rep.range_slack, rep.nonneg, rep.big_m, rep.power});
  return rep;
}

std::string FeasibilityReport::to_string() const {
  std::ostringstream os;
  os << "feasibility (relative violations):\n";
  os << "  epigraph:        " << epigraph << "\n";
  os << "  signal range:    " << signal_range << "\n";
  os << "  signal equality: " << signal_equality << "\n";
  os << "  range slack:     " << range_slack << "\n";
  os << "  nonnegativity:   " << nonneg << "\n";
  os << "  big-M rows:      " << big_m << "\n";
  os << "  AP power:        " << power << "\n";
  os << "  worst:           " << worst << "\n";
  return os.str();
}

}  // namespace cfmimo
