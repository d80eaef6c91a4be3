#include "lowrank/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "lowrank/errors.hpp"
#include "lowrank/half_threshold.hpp"

namespace lowrank {
namespace {

// Below this iterate norm the stopping rule switches to absolute displacement.
constexpr double kTinyNorm = 1e-14;
constexpr double kDivergenceFactor = 1e6;

void require_measurement(const LinearMap& map, const Measurement& b) {
  if (b.size() != map.measurements()) {
    throw ShapeError("measurement of length " + std::to_string(b.size()) + ", operator has " +
                     std::to_string(map.measurements()));
  }
  if (!b.allFinite()) throw InvalidInput("measurement has non-finite entries");
}

bool step_converged(double step, double norm, double tol) {
  return norm < kTinyNorm ? step <= tol : step / norm <= tol;
}

Vector sorted_descending(Vector v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

bool uses_target_rank(const SolverConfig& cfg) {
  return cfg.lambda_policy == ParameterPolicy::adaptive || cfg.epsilon_policy == ParameterPolicy::adaptive;
}

}  // namespace

void SolverConfig::validate(const LinearMap& map) const {
  try {
    TlParams{alpha, epsilon_policy == ParameterPolicy::fixed ? epsilon : kEpsilonFloor}.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (lambda_policy == ParameterPolicy::fixed && !(lambda > 0.0 && std::isfinite(lambda))) {
    throw ConfigError("fixed lambda must be positive and finite");
  }
  const Index k = std::min(map.rows(), map.cols());
  if (uses_target_rank(*this) && (target_rank < 1 || target_rank >= k)) {
    throw ConfigError("adaptive parameters need 1 <= rank < " + std::to_string(k) + ", got " +
                      std::to_string(target_rank));
  }
  if (!mu && !(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (x0 && (x0->rows() != map.rows() || x0->cols() != map.cols())) {
    throw ConfigError("initial point has the wrong shape");
  }
  if (x0 && !x0->allFinite()) throw ConfigError("initial point has non-finite entries");
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "k,objective,step,lambda,epsilon,rank,residual\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : trace.records) {
    out << r.k << ',' << r.objective << ',' << r.step << ',' << r.lambda << ',' << r.epsilon << ',' << r.rank << ','
        << r.residual << '\n';
  }
}

double resolve_step_size(const LinearMap& map, const SolverConfig& cfg) {
  const NormEstimate norm = operator_norm(map);
  if (!norm.converged || !(norm.value > 0.0)) {
    throw ConfigError("operator norm estimate did not converge after " + std::to_string(norm.iterations) +
                      " iterations");
  }
  const double limit = 1.0 / (norm.value * norm.value);
  if (cfg.mu) {
    if (!(*cfg.mu > 0.0 && *cfg.mu < limit)) {
      throw ConfigError("step size " + std::to_string(*cfg.mu) + " violates 0 < mu < 1/||A||^2 = " +
                        std::to_string(limit));
    }
    return *cfg.mu;
  }
  return (1.0 - cfg.eta) * limit;
}

double update_lambda(const Vector& sigma_b, const Vector& sigma_x, Index r, double mu, const TlParams& p) {
  if (r < 0 || r >= sigma_b.size() || r >= sigma_x.size()) {
    throw InvalidInput("rank " + std::to_string(r) + " leaves no singular value r+1");
  }
  if (!(mu > 0.0)) throw InvalidInput("step size mu must be positive");
  const double tail_b = sigma_b[r];
  if (tail_b <= 0.0) return kLambdaFloor;
  const double lambda =
      std::sqrt(96.0) * std::pow(tail_b, 1.5) * std::pow(sigma_x[r] + p.epsilon, p.weight_exponent()) / (9.0 * mu);
  return std::max(lambda, kLambdaFloor);
}

double update_epsilon(const Vector& sigma_x, Index r) {
  if (r < 0 || r >= sigma_x.size()) throw InvalidInput("rank " + std::to_string(r) + " leaves no singular value r+1");
  return std::max(sigma_x[r], kEpsilonFloor);
}

double threshold_value(double lambda, double mu, double sigma_xi, const TlParams& p) {
  const double weight = lambda * mu / std::pow(sigma_xi + p.epsilon, p.weight_exponent());
  return half_threshold_level(ThresholdWeight(weight));
}

TlihtStep tliht_step(const LinearMap& map, const Measurement& b, const Matrix& x, const Vector& sigma_x,
                     const SolverConfig& cfg, double mu) {
  const ThinSvd f = thin_svd(gradient_step(x, map, b, mu));
  if (sigma_x.size() != f.sigma.size()) throw ShapeError("sigma_x does not match the iterate");

  TlihtStep out;
  out.epsilon = cfg.epsilon_policy == ParameterPolicy::adaptive ? update_epsilon(sigma_x, cfg.target_rank)
                                                                : cfg.epsilon;
  const TlParams p{cfg.alpha, out.epsilon};
  out.lambda = cfg.lambda_policy == ParameterPolicy::adaptive
                   ? update_lambda(f.sigma, sigma_x, cfg.target_rank, mu, p)
                   : cfg.lambda;

  const Vector values = vector_half_threshold(f.sigma, tl_threshold_weights(sigma_x, out.lambda, mu, p));
  out.next = reconstruct_with(f, values);
  out.sigma_next = sorted_descending(values);
  out.sigma_b = f.sigma;
  return out;
}

SolveResult tliht_solve(const LinearMap& map, const Measurement& b, const SolverConfig& cfg) {
  require_measurement(map, b);
  cfg.validate(map);

  SolveResult result;
  result.mu = resolve_step_size(map, cfg);
  const double mu = result.mu;
  const double b_norm = b.norm();

  Matrix x;
  if (cfg.x0) {
    x = *cfg.x0;
  } else {
    x = mu * map.adjoint_apply(b);
    if (cfg.init_seed) {
      std::mt19937_64 rng(*cfg.init_seed);
      std::normal_distribution<double> normal;
      const double scale = x.norm();
      for (Index j = 0; j < x.cols(); ++j) {
        for (Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
      }
      if (scale > 0.0) x *= scale / x.norm();
    }
  }
  Vector sigma_x = singular_values(x);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    TlihtStep s = tliht_step(map, b, x, sigma_x, cfg, mu);

    IterationRecord rec;
    rec.k = k;
    rec.lambda = s.lambda;
    rec.epsilon = s.epsilon;
    rec.step = (s.next - x).norm();
    rec.rank = numerical_rank(s.sigma_next);
    const Measurement residual = map.apply(s.next) - b;
    rec.residual = b_norm > 0.0 ? residual.norm() / b_norm : residual.norm();
    rec.objective = residual.squaredNorm() + s.lambda * tl_value(s.sigma_next, TlParams{cfg.alpha, s.epsilon});
    result.trace.records.push_back(rec);

    x = std::move(s.next);
    sigma_x = std::move(s.sigma_next);
    result.iterations = k;
    if (step_converged(rec.step, sigma_x.norm(), cfg.tol)) {
      result.converged = true;
      break;
    }
  }
  result.solution = std::move(x);
  return result;
}

Matrix singular_value_shrink(const Matrix& y, double tau) {
  if (!(tau >= 0.0)) throw InvalidInput("shrinkage level must be nonnegative");
  const ThinSvd f = thin_svd(y);
  return reconstruct_with(f, (f.sigma.array() - tau).max(0.0).matrix());
}

SvtOptions SvtOptions::defaults_for(Index m, Index n, double sampling_ratio) {
  if (!(sampling_ratio > 0.0 && sampling_ratio <= 1.0)) throw InvalidInput("sampling ratio must lie in (0, 1]");
  SvtOptions opt;
  opt.tau = 5.0 * std::sqrt(static_cast<double>(m) * static_cast<double>(n));
  opt.delta = std::min(1.2 / sampling_ratio, kMaxSvtDelta);
  return opt;
}

SolveResult svt_solve(const LinearMap& map, const Measurement& b, const SvtOptions& opt) {
  if (!map.mask()) throw InvalidInput("svt_solve requires a sampling-mask operator");
  require_measurement(map, b);
  if (!(opt.tau > 0.0) || !(opt.delta > 0.0)) throw ConfigError("svt needs positive tau and delta");
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ConfigError("svt needs positive tol and max_iter");

  SolveResult result;
  result.mu = opt.delta;
  const double b_norm = b.norm();
  Matrix x = Matrix::Zero(map.rows(), map.cols());
  if (b_norm == 0.0) {
    result.solution = std::move(x);
    result.converged = true;
    return result;
  }

  // Skip the iterations in which the shrinkage would return zero.
  const double spectral = singular_values(map.adjoint_apply(b))[0];
  const double kick = std::ceil(opt.tau / (opt.delta * spectral));
  Measurement dual = kick * opt.delta * b;

  for (int k = 1; k <= opt.max_iter; ++k) {
    Matrix next = singular_value_shrink(map.adjoint_apply(dual), opt.tau);
    const Measurement residual = b - map.apply(next);
    const double res_norm = residual.norm();

    IterationRecord rec;
    rec.k = k;
    rec.step = (next - x).norm();
    rec.lambda = opt.tau;
    rec.epsilon = 0.0;
    const Vector sigma = singular_values(next);
    rec.rank = numerical_rank(sigma);
    rec.objective = sigma.sum();  // nuclear norm
    rec.residual = res_norm / b_norm;
    result.trace.records.push_back(rec);

    x = std::move(next);
    result.iterations = k;
    if (rec.residual <= opt.tol) {
      result.converged = true;
      break;
    }
    if (res_norm > kDivergenceFactor * b_norm || !std::isfinite(res_norm)) {
      result.diverged = true;
      break;
    }
    dual += opt.delta * residual;
  }
  result.solution = std::move(x);
  return result;
}

double SvpOptions::default_step(double sampling_ratio) {
  if (!(sampling_ratio > 0.0 && sampling_ratio <= 1.0)) throw InvalidInput("sampling ratio must lie in (0, 1]");
  return 1.0 / ((1.0 + 1.0 / 3.0) * sampling_ratio);
}

SolveResult svp_solve(const LinearMap& map, const Measurement& b, const SvpOptions& opt) {
  require_measurement(map, b);
  const Index k = std::min(map.rows(), map.cols());
  if (opt.rank < 1 || opt.rank > k) throw ConfigError("svp rank must lie in [1, " + std::to_string(k) + "]");
  if (!(opt.mu > 0.0) || !(opt.tol > 0.0) || opt.max_iter < 1) {
    throw ConfigError("svp needs positive mu, tol and max_iter");
  }

  SolveResult result;
  result.mu = opt.mu;
  const double b_norm = b.norm();
  Matrix x = opt.x0 ? *opt.x0 : Matrix::Zero(map.rows(), map.cols());
  if (x.rows() != map.rows() || x.cols() != map.cols()) throw ConfigError("initial point has the wrong shape");

  for (int it = 1; it <= opt.max_iter; ++it) {
    const ThinSvd f = thin_svd(gradient_step(x, map, b, opt.mu));
    Vector kept = f.sigma;
    kept.tail(kept.size() - opt.rank).setZero();
    Matrix next = reconstruct_with(f, kept);

    IterationRecord rec;
    rec.k = it;
    rec.step = (next - x).norm();
    rec.lambda = 0.0;
    rec.epsilon = 0.0;
    rec.rank = numerical_rank(kept);
    const Measurement residual = map.apply(next) - b;
    rec.objective = residual.squaredNorm();
    rec.residual = b_norm > 0.0 ? residual.norm() / b_norm : residual.norm();
    result.trace.records.push_back(rec);

    x = std::move(next);
    result.iterations = it;
    if (!std::isfinite(rec.objective) || residual.norm() > kDivergenceFactor * std::max(b_norm, 1.0)) {
      result.diverged = true;
      break;
    }
    if (step_converged(rec.step, kept.norm(), opt.tol)) {
      result.converged = true;
      break;
    }
  }
  result.solution = std::move(x);
  return result;
}

}  // namespace lowrank
