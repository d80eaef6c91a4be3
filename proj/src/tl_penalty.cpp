#include "lowrank/tl_penalty.hpp"

#include <cmath>
#include <string>

#include "lowrank/errors.hpp"

namespace lowrank {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("operands of shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_measurement(const LinearMap& map, const Measurement& b) {
  if (b.size() != map.measurements()) {
    throw ShapeError("measurement of length " + std::to_string(b.size()) + ", operator has " +
                     std::to_string(map.measurements()));
  }
}

}  // namespace

void TlParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in [0, 1), got " + std::to_string(alpha));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("epsilon must be positive and finite, got " + std::to_string(epsilon));
  }
}

void TlParams::validate_theory() const {
  validate();
  if (alpha > 0.5) throw InvalidInput("theory mode requires alpha <= 1/2, got " + std::to_string(alpha));
  if (epsilon > 1.0 / 3.0) throw InvalidInput("theory mode requires epsilon <= 1/3, got " + std::to_string(epsilon));
}

double phi(double t, const TlParams& p) {
  if (t < 0.0 || std::isnan(t)) throw InvalidInput("phi is defined for t >= 0, got " + std::to_string(t));
  if (t == 0.0) return 0.0;
  return std::sqrt(t) / std::pow(t + p.epsilon, p.weight_exponent());
}

double tl_value(const Vector& sigma, const TlParams& p) {
  p.validate();
  double sum = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) sum += phi(sigma[i], p);
  return sum;
}

double tl_value(const Matrix& x, const TlParams& p) { return tl_value(singular_values(x), p); }

double objective(const Matrix& x, const LinearMap& map, const Measurement& b, double lambda, const TlParams& p) {
  require_measurement(map, b);
  const double residual = (map.apply(x) - b).squaredNorm();
  return residual + lambda * tl_value(x, p);
}

double surrogate(const Matrix& x, const Matrix& z, double lambda, double mu, const TlParams& p, const LinearMap& map,
                 const Measurement& b) {
  require_same_shape(x, z);
  require_measurement(map, b);
  if (!(mu > 0.0)) throw InvalidInput("step size mu must be positive");
  p.validate();

  const Measurement ax = map.apply(x);
  const Measurement az = map.apply(z);
  const Vector sx = singular_values(x);
  const Vector sz = singular_values(z);

  double weighted = 0.0;
  for (Index i = 0; i < sx.size(); ++i) {
    if (sx[i] == 0.0) continue;
    weighted += std::sqrt(sx[i]) / std::pow(sz[i] + p.epsilon, p.weight_exponent());
  }
  return mu * (ax - b).squaredNorm() + lambda * mu * weighted - mu * (ax - az).squaredNorm() + (x - z).squaredNorm();
}

Matrix gradient_step(const Matrix& x, const LinearMap& map, const Measurement& b, double mu) {
  require_measurement(map, b);
  if (!(mu > 0.0)) throw InvalidInput("step size mu must be positive");
  return x + mu * map.adjoint_apply(b - map.apply(x));
}

}  // namespace lowrank
