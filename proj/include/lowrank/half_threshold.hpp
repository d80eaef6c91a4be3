#pragma once

#include <cmath>

#include "lowrank/matrix.hpp"
#include "lowrank/tl_penalty.hpp"

namespace lowrank {

/// cbrt(54) / 4: an input y is zeroed by the half-thresholding prox iff y <= kHalfThresholdScale * lambda^{2/3}.
inline const double kHalfThresholdScale = std::cbrt(54.0) / 4.0;

/// Relative slack on the zero branch. Inputs within this fraction above the threshold are
/// treated as on it, so that an exactly-placed threshold (adaptive lambda) is not lost to rounding.
inline constexpr double kThresholdBoundaryTol = 1e-12;

/// Effective regularization weight of a single thresholding step. Always positive and finite.
class ThresholdWeight {
 public:
  explicit ThresholdWeight(double lambda_eff);
  double value() const { return value_; }

 private:
  double value_;
};

/// kHalfThresholdScale * lambda^{2/3}.
double half_threshold_level(ThresholdWeight w);

/// Global minimizer of (x - y)^2 + lambda * sqrt(x) over x >= 0, in closed form.
/// Throws InvalidInput for negative or NaN y.
double scalar_half_threshold(double y, ThresholdWeight w);

Vector vector_half_threshold(const Vector& v, ThresholdWeight w);
/// Per-entry weights; `weights` must match `v` in length.
Vector vector_half_threshold(const Vector& v, const Vector& weights);

/// Prox of lambda * sum_i sqrt(sigma_i(X)): thresholds the spectrum of y and keeps its singular vectors.
Matrix matrix_half_threshold(const Matrix& y, double lambda);

/// Weights lambda * mu / (sigma_z[i] + epsilon)^{1/2 - alpha}.
Vector tl_threshold_weights(const Vector& sigma_z, double lambda, double mu, const TlParams& p);

/// Thresholds the spectrum of y entrywise with weights tl_threshold_weights(sigma_z, ...).
/// sigma_z must have min(m, n) nonnegative entries in descending order.
Matrix weighted_matrix_half_threshold(const Matrix& y, const Vector& sigma_z, double lambda, double mu,
                                      const TlParams& p);

/// Brute-force reference for scalar_half_threshold, independent of the closed form: dense grid
/// over [0, y + 1] at spacing 1e-4, golden-section refinement to 1e-8, then comparison with x = 0.
double prox_oracle(double y, double lambda_eff);

struct ProxOracleCandidates {
  double interior = 0.0;        ///< best refined point away from the origin
  double interior_value = 0.0;  ///< objective at `interior`
  double zero_value = 0.0;      ///< objective at x = 0, i.e. y^2
  double minimizer = 0.0;       ///< 0 when zero_value <= interior_value, else `interior`
};

ProxOracleCandidates prox_oracle_candidates(double y, double lambda_eff);

}  // namespace lowrank
