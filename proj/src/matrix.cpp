#include "lowrank/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "lowrank/errors.hpp"

namespace lowrank {
namespace {

std::string shape_str(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

// Eigen already returns a descending spectrum; this makes the ordering a guarantee
// independent of the backend.
template <typename Factors>
void sort_descending(Factors& f) {
  const Index k = f.sigma.size();
  bool sorted = true;
  for (Index i = 0; i + 1 < k; ++i) {
    if (f.sigma[i] < f.sigma[i + 1]) {
      sorted = false;
      break;
    }
  }
  if (sorted) return;
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return f.sigma[a] > f.sigma[b]; });
  Vector sigma(k);
  Matrix u = f.u;
  Matrix v = f.v;
  for (Index i = 0; i < k; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    sigma[i] = f.sigma[src];
    u.col(i) = f.u.col(src);
    v.col(i) = f.v.col(src);
  }
  f.sigma = std::move(sigma);
  f.u = std::move(u);
  f.v = std::move(v);
}

template <typename Decomposition>
void check_converged(const Decomposition& dec, const Matrix& a) {
  if (dec.info() != Eigen::Success) {
    // Eigen does not report sweep counts.
    throw FactorizationError("svd did not converge on " + shape_str(a.rows(), a.cols()) + " matrix", -1);
  }
}

}  // namespace

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw InvalidInput(std::string(what) + " has non-finite entries");
}

SvdFactors svd(const Matrix& a) {
  require_finite(a);
  SvdFactors f;
  if (a.size() == 0) return f;
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  check_converged(dec, a);
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  sort_descending(f);
  return f;
}

ThinSvd thin_svd(const Matrix& a) {
  require_finite(a);
  ThinSvd f;
  if (a.size() == 0) return f;
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  check_converged(dec, a);
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  sort_descending(f);
  return f;
}

Vector singular_values(const Matrix& a) {
  require_finite(a);
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Matrix> dec(a);
  check_converged(dec, a);
  Vector s = dec.singularValues();
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Matrix reconstruct(const SvdFactors& f, Index rows, Index cols) {
  const Index k = std::min(rows, cols);
  if (f.u.rows() != rows || f.u.cols() != rows || f.v.rows() != cols || f.v.cols() != cols ||
      f.sigma.size() != k) {
    throw ShapeError("svd factors (u " + shape_str(f.u.rows(), f.u.cols()) + ", v " +
                     shape_str(f.v.rows(), f.v.cols()) + ", sigma " + std::to_string(f.sigma.size()) +
                     ") do not fit a " + shape_str(rows, cols) + " matrix");
  }
  return f.u.leftCols(k) * f.sigma.asDiagonal() * f.v.leftCols(k).transpose();
}

Matrix reconstruct(const ThinSvd& f) { return reconstruct_with(f, f.sigma); }

Matrix reconstruct_with(const ThinSvd& f, const Vector& values) {
  if (values.size() != f.sigma.size()) {
    throw ShapeError("spectrum of length " + std::to_string(values.size()) + " for thin svd of order " +
                     std::to_string(f.sigma.size()));
  }
  // Skip zero columns; thresholded spectra are usually short.
  Index keep = 0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) keep = i + 1;
  }
  if (keep == 0) return Matrix::Zero(f.u.rows(), f.v.rows());
  return f.u.leftCols(keep) * values.head(keep).asDiagonal() * f.v.leftCols(keep).transpose();
}

Matrix truncate_rank(const Matrix& a, Index r) {
  const Index k = std::min(a.rows(), a.cols());
  if (r < 0 || r > k) {
    throw InvalidInput("rank " + std::to_string(r) + " outside [0, " + std::to_string(k) + "]");
  }
  if (r == 0) {
    require_finite(a);
    return Matrix::Zero(a.rows(), a.cols());
  }
  const ThinSvd f = thin_svd(a);
  return f.u.leftCols(r) * f.sigma.head(r).asDiagonal() * f.v.leftCols(r).transpose();
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

Index numerical_rank(const Vector& sigma, double rel_tol) {
  if (sigma.size() == 0) return 0;
  const double cutoff = rel_tol * sigma.maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff) ++rank;
  }
  return rank;
}

Index numerical_rank(const Matrix& a, double rel_tol) { return numerical_rank(singular_values(a), rel_tol); }

}  // namespace lowrank
