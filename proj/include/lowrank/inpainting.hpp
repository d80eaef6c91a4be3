#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lowrank/matrix.hpp"
#include "lowrank/solvers.hpp"

namespace lowrank {

enum class SolverKind { tliht, svt, svp };

std::string to_string(SolverKind kind);
/// Accepts "tliht", "svt", "svp". Throws InvalidInput otherwise.
SolverKind parse_solver_kind(const std::string& name);

struct RecoveryReport {
  std::string solver;
  double relative_error = 0.0;
  int iterations = 0;
  double wall_time_seconds = 0.0;
  bool converged = false;
  std::string config;  ///< parameters the solver ran with
  std::string error;   ///< non-empty when the solver threw
};

struct InpaintOptions {
  Index rank = 30;
  double sr = 0.40;
  std::uint64_t seed = 1;
  std::vector<SolverKind> solvers{SolverKind::tliht, SolverKind::svt, SolverKind::svp};

  double alpha = 0.1;
  double eta = 1e-3;
  double tol = 1e-8;
  int max_iter = 20000;

  double svt_tol = 1e-4;
  int svt_max_iter = 1000;
  int svp_max_iter = 1000;

  /// When set, writes reference.pgm, observed.pgm and <solver>.pgm here.
  std::optional<std::string> out_dir;
};

/// Truncates `image` to rank `opt.rank`, samples a mask at `opt.sr`, runs each selected solver and
/// reports its relative error against the truncated reference. Solver exceptions land in the report.
std::vector<RecoveryReport> inpaint_experiment(const Matrix& image, const InpaintOptions& opt);

}  // namespace lowrank
