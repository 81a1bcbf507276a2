#pragma once

#include <string>
#include <vector>

#include "covert/conic.hpp"
#include "covert/sca.hpp"

namespace covert {

struct ScaOptions {
  int max_iter = 50;
  double tol = -1.0;  // <= 0 uses the scenario's sca_tol
  SolveOptions solver;
  /// Check, every iteration, that the incumbent is feasible for the new
  /// subproblem (costs one residual evaluation).
  bool check_incumbent = true;
};

/// Applies COVERT_SCA_TOL, COVERT_MAX_ITER, COVERT_FEAS_TOL and COVERT_GAP_TOL.
ScaOptions options_from_env(ScaOptions base = {});

enum class RunStatus { converged, max_iter, subproblem_failure };
const char* to_string(RunStatus s);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;     // true min average rate after this iteration
  double surrogate = 0.0;     // subproblem optimum eta
  std::string solver_status;
  int solver_iterations = 0;
  double incumbent_residual = 0.0;
  bool accepted = true;
  double wall_seconds = 0.0;
};

struct CovertCheck {
  int slot = 0;
  int warden = 0;
  double max_ratio = 0.0;  // max sampled gamma / gamma_max
  double min_dep = 1.0;    // min sampled detection error probability
};

struct CovertReport {
  double gamma_cap = 0.0;
  std::vector<CovertCheck> entries;
  double max_ratio = 0.0;
  double min_dep = 1.0;
};

struct SolveResult {
  Iterate final;
  std::vector<double> trace;  // trace[0] is the initialization
  std::vector<IterationRecord> iterations;
  RunStatus status = RunStatus::converged;
  std::string failure;        // backend status on subproblem_failure
  int rejected_steps = 0;
  CovertReport covert_report;
};

/// Straight constant-speed trajectories with the largest uniform-margin
/// covert power per slot.
Iterate initialize(const Scenario& scn, AntennaMode mode, Benchmark bench);

SolveResult sca_solve(const Scenario& scn, AntennaMode mode, Benchmark bench,
                      const ScaOptions& opts = {});

/// Samples `samples` points on each uncertainty circle plus the centre and
/// the analytic nearest/farthest points, and reports the worst SINR ratio.
CovertReport verify_covertness(const Trajectory& traj, const Scenario& scn, AntennaMode mode,
                               int samples = 200);

}  // namespace covert
