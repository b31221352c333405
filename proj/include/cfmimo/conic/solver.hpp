#pragma once

#include <string>
#include <vector>

#include "cfmimo/conic/program.hpp"

namespace cfmimo::conic {

enum class SolveStatus {
  optimal,
  primal_infeasible,
  dual_infeasible,
  iteration_limit,
  numerical_failure,
};

std::string status_name(SolveStatus status);

struct SolverSettings {
  double feastol = 1e-9;
  double abstol = 1e-10;
  double reltol = 1e-9;
  // Fallback thresholds when the search stalls short of full accuracy.
  double feastol_inacc = 1e-4;
  double abstol_inacc = 5e-5;
  double reltol_inacc = 5e-5;
  int max_iters = 100;
  int refine_iters = 4;
  double refine_stop = 1e-14;
  double static_reg = 5e-9;
  int equil_iters = 3;
  double step_frac = 0.99;
  double step_min = 1e-6;
  double step_max = 0.999;
  double sigma_min = 1e-4;
  double sigma_max = 1.0;
  double divergence_guard = 500.0;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  std::vector<double> x;
  std::vector<double> y;  // equality multipliers
  std::vector<double> z;  // cone multipliers
  std::vector<double> s;  // cone slacks
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  double pres = 0.0;
  double dres = 0.0;
  int iterations = 0;
  double solve_seconds = 0.0;
  std::string message;

  bool optimal() const { return status == SolveStatus::optimal; }
};

/// Homogeneous self-dual primal-dual interior-point method with
/// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
ConicSolution solve(const ConicProgram& prog, const SolverSettings& settings = {});

}  // namespace cfmimo::conic
