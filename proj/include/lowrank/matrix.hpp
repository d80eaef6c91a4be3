#pragma once

#include <Eigen/Dense>

namespace lowrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A singular value counts as nonzero when it exceeds this fraction of the largest one.
inline constexpr double kRankTolerance = 1e-10;

/// Full SVD: a = u * [diag(sigma), 0] * v^T with u (m x m), v (n x n) orthogonal and
/// sigma (min(m, n)) sorted descending.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// Thin SVD (u: m x k, v: n x k, k = min(m, n)). Used on hot paths where the full bases are waste.
struct ThinSvd {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what = "matrix");

SvdFactors svd(const Matrix& a);
ThinSvd thin_svd(const Matrix& a);
Vector singular_values(const Matrix& a);

/// u * [diag(sigma), 0] * v^T. Throws ShapeError if the factors do not fit rows x cols.
Matrix reconstruct(const SvdFactors& f, Index rows, Index cols);
Matrix reconstruct(const ThinSvd& f);

/// u * diag(values) * v^T using the thin bases; `values` replaces the stored spectrum.
Matrix reconstruct_with(const ThinSvd& f, const Vector& values);

/// Best rank-r approximation in Frobenius norm.
Matrix truncate_rank(const Matrix& a, Index r);

double frobenius_norm(const Matrix& a);

/// Count of entries of a descending spectrum above kRankTolerance * sigma[0].
Index numerical_rank(const Vector& sigma, double rel_tol = kRankTolerance);
Index numerical_rank(const Matrix& a, double rel_tol = kRankTolerance);

}  // namespace lowrank
