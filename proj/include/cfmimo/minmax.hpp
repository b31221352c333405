#pragma once

#include <string>
#include <vector>

#include "cfmimo/beamforming.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/conic/program.hpp"
#include "cfmimo/conic/solver.hpp"
#include "cfmimo/geometry.hpp"

namespace cfmimo {

/// Per-user desired-signal power window [rho, mu], per-AP budgets, and the
/// big-M coefficient for the either-or rows.
struct QosBounds {
  std::vector<double> rho;  // W
  std::vector<double> mu;   // W
  std::vector<double> eta;  // W, per AP
  double delta = 1000.0;    // signal-amplitude units

  void validate() const;  // 0 < rho < mu, eta > 0, delta > max sqrt(mu)
};

/// rho_u = sigma_w^2 + eta/(N_A N_U) ||h_{u,t}||^2 and
/// mu_u = 1e5 sigma_w^2 + eta sqrt(N_A)/N_U ||h_{u,t}||^2, with t the
/// best-channel AP among the serving cluster of user u.
QosBounds compute_bounds(const ChannelRealization& ch, const AssociationMap& assoc,
                         double eta, double sigma_w2, int n_aps, int n_users,
                         double delta = 1000.0);

/// The min-max interference model over the stacked real decision vector
/// [f-block | z | t-block | V+ | V- | nu] plus binary switches phi.
/// All program data is kept in scaled units (amplitudes divided by
/// h_scale * f_scale, beamformer entries by f_scale) purely for numerical
/// conditioning; solutions are mapped back to watts.
struct MinMaxModel {
  int n_users = 0;
  int n_aps = 0;
  int m_ap = 0;
  AssociationMap assoc;
  QosBounds bounds;  // original units

  // Variable layout (continuous prefix shared by every lowering).
  std::vector<std::vector<int>> slot_offset;  // per user, per serving position
  std::vector<std::pair<int, int>> t_pairs;   // ordered (victim u, source i)
  int n_f = 0;
  int z_index = 0;
  int t_base = 0;
  int n_continuous = 0;  // f, z, t, V+, V-, nu
  int n_binary = 0;      // phi

  // Scaled data.
  double f_scale = 1.0;
  double h_scale = 1.0;
  std::vector<std::complex<double>> h_scaled;  // [(u*n_aps + a)*m_ap + k]
  std::vector<double> sqrt_rho;  // scaled amplitude bounds
  std::vector<double> sqrt_mu;
  std::vector<double> sqrt_eta;  // scaled per-AP budget
  double delta_scaled = 0.0;

  double amp_scale() const { return f_scale * h_scale; }
  int t_index(int u, int i) const;
  const std::complex<double>* h_at(int u, int a) const {
    return h_scaled.data() + (static_cast<std::size_t>(u) * n_aps + a) * m_ap;
  }
};

MinMaxModel build_model(const ChannelRealization& ch, const AssociationMap& assoc,
                        const QosBounds& bounds);

/// A standard-form lowering of the model plus the index maps needed to
/// recover named quantities from the solution vector.
struct LoweredProgram {
  conic::ConicProgram program;
  // Per user: index of the active V variable and its sign in the signal
  // equality (+1 for V+, -1 for V-); -1 when the variable was eliminated.
  std::vector<int> vplus_index;
  std::vector<int> vminus_index;
  std::vector<int> nu_index;
  std::vector<int> phi_index;       // continuous relaxation only
  std::vector<int> phi_fixed;       // -1 free, else 0/1
};

/// Pure SOCP obtained by fixing the desired inner products on the
/// nonnegative real axis (phi = 1, V- = 0, nu eliminated); exact by the
/// phase invariance of every constraint.
LoweredProgram reduce_phase_wlog(const MinMaxModel& model);

/// Lowering with all binaries fixed and the slack structure kept intact;
/// the zeroed slack variable is eliminated and big-M rows that the range
/// equality makes redundant are dropped.
LoweredProgram fix_binaries(const MinMaxModel& model, const std::vector<int>& phi);

/// Continuous relaxation with phi in [0,1] for the given free set.
LoweredProgram relax_binaries(const MinMaxModel& model, const std::vector<int>& phi_fixed);

struct BeamformingSolution {
  BeamformerSet beamformers;  // watts
  double z_value = 0.0;       // amplitude units (sqrt-watt scale)
  std::vector<double> v_plus;
  std::vector<double> v_minus;
  std::vector<double> nu;
  std::vector<int> phi;
  conic::SolveStatus status = conic::SolveStatus::numerical_failure;
  int iterations = 0;
  double solve_seconds = 0.0;
  std::string message;
  double solver_gap = 0.0;
  double solver_pres = 0.0;
  double solver_dres = 0.0;

  bool optimal() const { return status == conic::SolveStatus::optimal; }
};

/// Solves one lowered SOCP and maps the result back to beamformers.
BeamformingSolution solve_socp(const MinMaxModel& model, const LoweredProgram& lowered,
                               const conic::SolverSettings& settings = {});

/// Depth-first branch and bound over the binary switches; leaves are pure
/// SOCPs. Warns above 16 binaries.
BeamformingSolution branch_and_bound(const MinMaxModel& model,
                                     const conic::SolverSettings& settings = {});

enum class SolveStrategy { wlog, bnb };

BeamformingSolution solve_minmax(const MinMaxModel& model, SolveStrategy strategy,
                                 const conic::SolverSettings& settings = {});

/// Re-verification of every constraint family of the solved model from raw
/// beamformers and channels; never reads solver internals.
struct FeasibilityReport {
  double epigraph = 0.0;      // (sum_i |c_ui| - z) / max(z, amp)
  double signal_range = 0.0;  // window violation / sqrt(mu)
  double signal_equality = 0.0;  // |Im d_u| and |Re d_u - (V+ - V-)| / sqrt(mu)
  double range_slack = 0.0;   // |V+ + V- + nu - sqrt(mu)| / sqrt(mu), nu window
  double nonneg = 0.0;        // negative part of V+/V- / sqrt(mu)
  double big_m = 0.0;         // (V - delta*switch)+ / delta
  double power = 0.0;         // (P_a - eta_a)+ / eta_a
  double worst = 0.0;
  bool pass(double tol) const { return worst <= tol; }
  bool power_pass(double tol) const { return power <= tol; }
  std::string to_string() const;
};

FeasibilityReport check_feasibility(const BeamformingSolution& solution,
                                    const ChannelRealization& ch,
                                    const AssociationMap& assoc, const QosBounds& bounds);

}  // namespace cfmimo
