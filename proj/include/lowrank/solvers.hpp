#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lowrank/linear_map.hpp"
#include "lowrank/matrix.hpp"
#include "lowrank/tl_penalty.hpp"

namespace lowrank {

enum class ParameterPolicy { fixed, adaptive };

/// Configuration of the TL iterative half-thresholding solver (TLIHT).
struct SolverConfig {
  double alpha = 0.1;

  /// adaptive: epsilon_k = max(sigma_{r+1}(X^k), 1e-3).
  ParameterPolicy epsilon_policy = ParameterPolicy::adaptive;
  double epsilon = 1e-3;

  /// adaptive: lambda_k places the threshold of entry r+1 exactly on sigma_{r+1}(B_mu(X^k)).
  ParameterPolicy lambda_policy = ParameterPolicy::adaptive;
  double lambda = 1.0;

  /// Rank r used by the adaptive policies. Must satisfy 1 <= r < min(m, n) when either is adaptive.
  Index target_rank = 0;

  /// Step mu = (1 - eta) / ||A||^2.
  double eta = 1e-3;
  /// Explicit step; rejected unless 0 < mu < 1 / ||A||^2. Overrides eta.
  std::optional<double> mu;

  double tol = 1e-8;
  int max_iter = 20000;

  /// Starting point. Defaults to mu * A*(b); `init_seed` draws a Gaussian start of the same norm instead.
  std::optional<Matrix> x0;
  std::optional<std::uint64_t> init_seed;

  void validate(const LinearMap& map) const;
};

struct IterationRecord {
  int k = 0;
  double objective = 0.0;  ///< C_lambda(X^k) with the lambda_k, epsilon_k used to produce X^k
  double step = 0.0;       ///< ||X^k - X^{k-1}||_F
  double lambda = 0.0;
  double epsilon = 0.0;
  Index rank = 0;
  double residual = 0.0;  ///< ||A(X^k) - b|| / ||b|| (absolute when b = 0)
};

struct IterationTrace {
  std::vector<IterationRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const IterationRecord& back() const { return records.back(); }
};

/// Header "k,objective,step,lambda,epsilon,rank,residual".
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

struct SolveResult {
  Matrix solution;
  IterationTrace trace;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  double mu = 0.0;
};

/// Largest admissible step is 1 / ||A||^2; returns mu from cfg (eta or explicit) after checking it.
/// Throws ConfigError if the operator norm estimate fails or the step is out of range.
double resolve_step_size(const LinearMap& map, const SolverConfig& cfg);

/// Regularization weight that puts the threshold for entry r+1 (0-based index r) on sigma_b[r]:
///   sqrt(96) * sigma_b[r]^{3/2} * (sigma_x[r] + eps)^{1/2 - alpha} / (9 mu).
/// Returns kLambdaFloor when sigma_b[r] == 0.
double update_lambda(const Vector& sigma_b, const Vector& sigma_x, Index r, double mu, const TlParams& p);
inline constexpr double kLambdaFloor = 1e-12;

/// max(sigma_x[r], 1e-3).
double update_epsilon(const Vector& sigma_x, Index r);
inline constexpr double kEpsilonFloor = 1e-3;

/// Threshold cbrt(54)/4 * (lambda mu / (sigma_xi + eps)^{1/2 - alpha})^{2/3} below which a
/// singular value of B_mu(X^k) is zeroed.
double threshold_value(double lambda, double mu, double sigma_xi, const TlParams& p);

/// One TLIHT iteration from (x, sigma_x).
struct TlihtStep {
  Matrix next;
  Vector sigma_next;  ///< spectrum of `next`, descending
  Vector sigma_b;     ///< spectrum of B_mu(x)
  double lambda = 0.0;
  double epsilon = 0.0;
};

TlihtStep tliht_step(const LinearMap& map, const Measurement& b, const Matrix& x, const Vector& sigma_x,
                     const SolverConfig& cfg, double mu);

/// Iterates X^{k+1} = H_{lambda mu / (sigma(X^k) + eps)^{1/2-alpha}}(B_mu(X^k)) until
/// ||X^k - X^{k-1}||_F / ||X^k||_F <= tol or max_iter. Reaching max_iter is reported via
/// converged = false, not an exception.
SolveResult tliht_solve(const LinearMap& map, const Measurement& b, const SolverConfig& cfg);

/// Soft shrinkage of the spectrum: U diag(max(sigma - tau, 0)) V^T.
Matrix singular_value_shrink(const Matrix& y, double tau);

/// The dual ascent is only guaranteed to converge for delta in (0, 2).
inline constexpr double kMaxSvtDelta = 1.9;

struct SvtOptions {
  double tau = 0.0;
  double delta = 0.0;
  double tol = 1e-4;
  int max_iter = 1000;

  /// tau = 5 sqrt(m n), delta = min(1.2 / sr, kMaxSvtDelta).
  static SvtOptions defaults_for(Index m, Index n, double sampling_ratio);
};

/// Singular value thresholding (dual ascent with soft spectral shrinkage) on a sampling mask.
/// Stops when ||b - A(X^k)|| / ||b|| <= tol; flags divergence when the residual exceeds 1e6 ||b||.
SolveResult svt_solve(const LinearMap& map, const Measurement& b, const SvtOptions& opt);

struct SvpOptions {
  Index rank = 1;
  double mu = 1.0;
  double tol = 1e-8;
  int max_iter = 20000;
  std::optional<Matrix> x0;  ///< zero matrix when absent

  /// mu = 1 / ((1 + 1/3) sr), the usual completion step.
  static double default_step(double sampling_ratio);
};

/// Singular value projection: X^{k+1} = truncate_rank(X^k + mu A*(b - A(X^k)), r).
/// Stops on relative step <= tol; flags divergence when the residual exceeds 1e6 ||b||.
SolveResult svp_solve(const LinearMap& map, const Measurement& b, const SvpOptions& opt);

}  // namespace lowrank
