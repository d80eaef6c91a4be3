#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowrank/linear_map.hpp"
#include "lowrank/matrix.hpp"
#include "lowrank/solvers.hpp"

namespace lowrank {

/// m x r times r x n product of i.i.d. standard normal factors.
Matrix gen_low_rank(Index m, Index n, Index r, std::uint64_t seed);

/// round(sr * m * n) distinct positions drawn uniformly.
SamplingMask sample_mask(Index m, Index n, double sr, std::uint64_t seed);

/// s / (r (m + n - r)).
double freedom_ratio(Index s, Index r, Index m, Index n);

/// ||x - reference||_F / ||reference||_F. Throws InvalidInput for a zero reference.
double relative_error(const Matrix& x, const Matrix& reference);

struct CompletionProblem {
  SamplingMask mask;
  Measurement b;
  std::optional<Matrix> ground_truth;
  Index r_true = 0;  ///< 0 when unknown

  Index rows() const { return mask.rows(); }
  Index cols() const { return mask.cols(); }
  double sampling_ratio() const;
  /// NaN when r_true is unknown.
  double freedom_ratio() const;
};

/// Planted rank-r problem. The matrix and the mask use independent streams derived from `seed`.
CompletionProblem make_completion_problem(Index m, Index n, Index r, double sr, std::uint64_t seed);

/// Writes/reads the observation file ("m n" header then "i j value" lines). Ground truth is not stored.
void save_problem(const std::string& path, const CompletionProblem& problem);
CompletionProblem load_problem(const std::string& path);

/// Dense matrix as text: "rows cols" header, then one row per line.
void save_matrix(const std::string& path, const Matrix& x);
Matrix load_matrix(const std::string& path);

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

struct GridCell {
  Index n = 0;
  Index r = 0;
  double sr = 0.0;
  double alpha = 0.0;
};

/// One cell per non-blank line: "n r sr alpha". Lines starting with '#' are skipped.
std::vector<GridCell> parse_grid(std::istream& in);

struct GridOptions {
  int seeds = 3;
  std::uint64_t master_seed = 1;
  double eta = 1e-3;
  double tol = 1e-8;
  int max_iter = 20000;
};

/// Medians over the replicates of one cell.
struct GridRow {
  GridCell cell;
  double fr = 0.0;
  std::string solver = "tliht";
  double re = 0.0;
  double iters = 0.0;
  double time_s = 0.0;
  bool converged = false;   ///< every replicate met the stopping rule
  bool recovered = false;   ///< median RE <= kRecoveryThreshold
  std::string error;        ///< first solver failure, empty when none
};

/// Cells whose median RE exceeds this are reported as failed recoveries.
inline constexpr double kRecoveryThreshold = 1e-2;

/// Runs TLIHT with adaptive parameters on every cell. Replicate j of a cell uses the problem
/// seed mix_seed(master_seed, hash(n, r, sr, j)), so cells that differ only in alpha share instances.
/// Solver failures are recorded in the row and never abort the grid.
std::vector<GridRow> run_completion_grid(const std::vector<GridCell>& cells, const GridOptions& opt);

/// Header "n,r,fr,sr,alpha,solver,re,iters,time_s,converged". With include_timing = false the
/// time_s column is written as 0 so that reruns are byte-identical.
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows, bool include_timing = true);

}  // namespace lowrank
