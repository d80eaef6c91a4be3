#pragma once

#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "lowrank/matrix.hpp"

namespace lowrank {

/// Measurement vector b in R^d.
using Measurement = Vector;

struct MatrixEntry {
  Index row = 0;
  Index col = 0;

  friend auto operator<=>(const MatrixEntry&, const MatrixEntry&) = default;
};

/// X -> (<A_1, X>, ..., <A_d, X>) with every A_i of shape m x n.
class DenseStack {
 public:
  explicit DenseStack(const std::vector<Matrix>& mats);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index measurements() const { return stacked_.rows(); }

  /// d x (m*n) matrix whose row i is vec(A_i) in column-major order.
  const Matrix& stacked() const { return stacked_; }
  Matrix component(Index i) const;

 private:
  Index rows_;
  Index cols_;
  Matrix stacked_;
};

/// X -> X restricted to Omega, listed in sorted row-major order.
class SamplingMask {
 public:
  /// Sorts `omega` into canonical order. Throws InvalidInput on out-of-bounds or repeated indices.
  SamplingMask(Index rows, Index cols, std::vector<MatrixEntry> omega);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index measurements() const { return static_cast<Index>(omega_.size()); }
  const std::vector<MatrixEntry>& entries() const { return omega_; }

 private:
  Index rows_;
  Index cols_;
  std::vector<MatrixEntry> omega_;
};

/// The affine measurement operator A : R^{m x n} -> R^d.
class LinearMap {
 public:
  LinearMap(DenseStack stack) : impl_(std::move(stack)) {}
  LinearMap(SamplingMask mask) : impl_(std::move(mask)) {}

  Index rows() const;
  Index cols() const;
  Index measurements() const;

  Measurement apply(const Matrix& x) const;
  Matrix adjoint_apply(const Measurement& y) const;

  const SamplingMask* mask() const { return std::get_if<SamplingMask>(&impl_); }
  const DenseStack* dense() const { return std::get_if<DenseStack>(&impl_); }

 private:
  std::variant<DenseStack, SamplingMask> impl_;
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr std::uint64_t kPowerIterationSeed = 0x5eed0f0bULL;

/// Spectral norm of A via power iteration on A*A from a fixed seeded start.
/// Stops when the relative change of the estimate is <= tol; otherwise returns the
/// last estimate with converged = false. Throws InvalidInput for the zero operator.
NormEstimate operator_norm(const LinearMap& map, double tol = 1e-8, int max_iter = 1000);

/// Observed entries of a matrix: text header "m n", then one "i j value" line per entry,
/// zero-based, in canonical order.
struct Observations {
  SamplingMask mask;
  Measurement values;
};

void write_observations(std::ostream& out, const SamplingMask& mask, const Measurement& values);
Observations read_observations(std::istream& in);

}  // namespace lowrank
