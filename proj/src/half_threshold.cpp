#include "lowrank/half_threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lowrank/errors.hpp"

namespace lowrank {

ThresholdWeight::ThresholdWeight(double lambda_eff) : value_(lambda_eff) {
  if (!(lambda_eff > 0.0) || !std::isfinite(lambda_eff)) {
    throw InvalidInput("threshold weight must be positive and finite, got " + std::to_string(lambda_eff));
  }
}

double half_threshold_level(ThresholdWeight w) { return kHalfThresholdScale * std::cbrt(w.value() * w.value()); }

double scalar_half_threshold(double y, ThresholdWeight w) {
  if (!(y >= 0.0)) throw InvalidInput("half thresholding expects y >= 0, got " + std::to_string(y));
  const double lambda = w.value();
  if (y <= half_threshold_level(w) * (1.0 + kThresholdBoundaryTol)) return 0.0;

  // Trigonometric root of the cubic stationarity condition.
  const double arg = std::clamp(lambda / 8.0 * std::pow(y / 3.0, -1.5), -1.0, 1.0);
  const double angle = std::acos(arg);
  return 2.0 / 3.0 * y * (1.0 + std::cos(2.0 * std::numbers::pi / 3.0 - 2.0 / 3.0 * angle));
}

Vector vector_half_threshold(const Vector& v, ThresholdWeight w) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = scalar_half_threshold(v[i], w);
  return out;
}

Vector vector_half_threshold(const Vector& v, const Vector& weights) {
  if (weights.size() != v.size()) {
    throw ShapeError("got " + std::to_string(weights.size()) + " weights for a vector of length " +
                     std::to_string(v.size()));
  }
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = scalar_half_threshold(v[i], ThresholdWeight(weights[i]));
  return out;
}

Matrix matrix_half_threshold(const Matrix& y, double lambda) {
  const ThresholdWeight w(lambda);
  const ThinSvd f = thin_svd(y);
  return reconstruct_with(f, vector_half_threshold(f.sigma, w));
}

Vector tl_threshold_weights(const Vector& sigma_z, double lambda, double mu, const TlParams& p) {
  p.validate();
  if (!(lambda > 0.0) || !(mu > 0.0)) throw InvalidInput("lambda and mu must be positive");
  Vector w(sigma_z.size());
  for (Index i = 0; i < sigma_z.size(); ++i) {
    if (sigma_z[i] < 0.0) throw InvalidInput("singular values must be nonnegative");
    w[i] = lambda * mu / std::pow(sigma_z[i] + p.epsilon, p.weight_exponent());
  }
  return w;
}

Matrix weighted_matrix_half_threshold(const Matrix& y, const Vector& sigma_z, double lambda, double mu,
                                      const TlParams& p) {
  const Index k = std::min(y.rows(), y.cols());
  if (sigma_z.size() != k) {
    throw ShapeError("sigma_z has length " + std::to_string(sigma_z.size()) + ", expected " + std::to_string(k));
  }
  for (Index i = 0; i + 1 < k; ++i) {
    if (sigma_z[i] < sigma_z[i + 1]) throw InvalidInput("sigma_z must be sorted descending");
  }
  const Vector weights = tl_threshold_weights(sigma_z, lambda, mu, p);
  const ThinSvd f = thin_svd(y);
  return reconstruct_with(f, vector_half_threshold(f.sigma, weights));
}

namespace {

constexpr double kOracleGridStep = 1e-4;
constexpr double kOracleRefineTol = 1e-8;

double prox_objective(double x, double y, double lambda) { return (x - y) * (x - y) + lambda * std::sqrt(x); }

}  // namespace

ProxOracleCandidates prox_oracle_candidates(double y, double lambda_eff) {
  if (!(y >= 0.0)) throw InvalidInput("prox_oracle expects y >= 0");
  if (!(lambda_eff > 0.0)) throw InvalidInput("prox_oracle expects a positive weight");

  ProxOracleCandidates c;
  c.zero_value = y * y;
  const double upper = y + 1.0;
  const auto steps = static_cast<long>(std::ceil(upper / kOracleGridStep));

  // Scan the grid without the origin so a near-tie with x = 0 still yields the interior local minimum.
  long best = 1;
  double best_value = prox_objective(kOracleGridStep, y, lambda_eff);
  for (long k = 2; k <= steps; ++k) {
    const double value = prox_objective(std::min(upper, k * kOracleGridStep), y, lambda_eff);
    if (value < best_value) {
      best_value = value;
      best = k;
    }
  }

  double lo = std::max(0.0, (best - 1) * kOracleGridStep);
  double hi = std::min(upper, (best + 1) * kOracleGridStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = prox_objective(a, y, lambda_eff);
  double fb = prox_objective(b, y, lambda_eff);
  while (hi - lo > kOracleRefineTol) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = prox_objective(a, y, lambda_eff);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = prox_objective(b, y, lambda_eff);
    }
  }
  c.interior = 0.5 * (lo + hi);
  c.interior_value = prox_objective(c.interior, y, lambda_eff);
  c.minimizer = c.zero_value <= c.interior_value ? 0.0 : c.interior;
  return c;
}

double prox_oracle(double y, double lambda_eff) { return prox_oracle_candidates(y, lambda_eff).minimizer; }

}  // namespace lowrank
