#pragma once

#include "lowrank/linear_map.hpp"
#include "lowrank/matrix.hpp"

namespace lowrank {

/// Shape parameters of the penalty phi(t) = t^{1/2} / (t + epsilon)^{1/2 - alpha}.
struct TlParams {
  double alpha = 0.1;
  double epsilon = 1e-3;

  /// Solver domain: 0 <= alpha < 1, epsilon > 0. Throws InvalidInput otherwise.
  void validate() const;
  /// Narrower domain used by the rank-equivalence theory: alpha in [0, 1/2], epsilon in (0, 1/3].
  void validate_theory() const;

  /// Exponent 1/2 - alpha of the denominator.
  double weight_exponent() const { return 0.5 - alpha; }
};

/// Scalar penalty phi(t). phi(0) = 0 exactly. Throws InvalidInput for t < 0.
double phi(double t, const TlParams& p);

/// Sum of phi over a singular-value vector.
double tl_value(const Vector& sigma, const TlParams& p);
/// Sum of phi over all min(m, n) singular values of x.
double tl_value(const Matrix& x, const TlParams& p);

/// ||A(x) - b||^2 + lambda * tl_value(x).
double objective(const Matrix& x, const LinearMap& map, const Measurement& b, double lambda, const TlParams& p);

/// Majorizing surrogate around z:
///   mu ||A(x) - b||^2 + lambda mu sum_i sigma_i(x)^{1/2} / (sigma_i(z) + eps)^{1/2 - alpha}
///   - mu ||A(x) - A(z)||^2 + ||x - z||_F^2.
/// surrogate(x, x) == mu * objective(x).
double surrogate(const Matrix& x, const Matrix& z, double lambda, double mu, const TlParams& p, const LinearMap& map,
                 const Measurement& b);

/// x + mu * A*(b - A(x)).
Matrix gradient_step(const Matrix& x, const LinearMap& map, const Measurement& b, double mu);

}  // namespace lowrank
