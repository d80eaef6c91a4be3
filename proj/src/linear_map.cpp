#include "lowrank/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "lowrank/errors.hpp"

namespace lowrank {
namespace {

std::string shape_str(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void require_shape(const Matrix& x, Index rows, Index cols) {
  if (x.rows() != rows || x.cols() != cols) {
    throw ShapeError("expected a " + shape_str(rows, cols) + " matrix, got " + shape_str(x.rows(), x.cols()));
  }
}

}  // namespace

DenseStack::DenseStack(const std::vector<Matrix>& mats) {
  if (mats.empty()) throw InvalidInput("dense stack needs at least one matrix");
  rows_ = mats.front().rows();
  cols_ = mats.front().cols();
  if (rows_ <= 0 || cols_ <= 0) throw InvalidInput("dense stack matrices must be non-empty");
  stacked_.resize(static_cast<Index>(mats.size()), rows_ * cols_);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    require_shape(mats[i], rows_, cols_);
    require_finite(mats[i], "measurement matrix");
    stacked_.row(static_cast<Index>(i)) = mats[i].reshaped().transpose();
  }
}

Matrix DenseStack::component(Index i) const { return stacked_.row(i).transpose().reshaped(rows_, cols_); }

SamplingMask::SamplingMask(Index rows, Index cols, std::vector<MatrixEntry> omega)
    : rows_(rows), cols_(cols), omega_(std::move(omega)) {
  if (rows_ <= 0 || cols_ <= 0) throw InvalidInput("sampling mask needs positive dimensions");
  for (const auto& e : omega_) {
    if (e.row < 0 || e.row >= rows_ || e.col < 0 || e.col >= cols_) {
      throw InvalidInput("sample (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ") outside " +
                         shape_str(rows_, cols_));
    }
  }
  std::sort(omega_.begin(), omega_.end());
  const auto dup = std::adjacent_find(omega_.begin(), omega_.end());
  if (dup != omega_.end()) {
    throw InvalidInput("sample (" + std::to_string(dup->row) + ", " + std::to_string(dup->col) + ") repeated");
  }
}

Index LinearMap::rows() const {
  return std::visit([](const auto& m) { return m.rows(); }, impl_);
}

Index LinearMap::cols() const {
  return std::visit([](const auto& m) { return m.cols(); }, impl_);
}

Index LinearMap::measurements() const {
  return std::visit([](const auto& m) { return m.measurements(); }, impl_);
}

Measurement LinearMap::apply(const Matrix& x) const {
  require_shape(x, rows(), cols());
  if (const auto* m = mask()) {
    Measurement out(m->measurements());
    Index k = 0;
    for (const auto& e : m->entries()) out[k++] = x(e.row, e.col);
    return out;
  }
  return dense()->stacked() * x.reshaped();
}

Matrix LinearMap::adjoint_apply(const Measurement& y) const {
  if (y.size() != measurements()) {
    throw ShapeError("measurement of length " + std::to_string(y.size()) + ", operator has " +
                     std::to_string(measurements()));
  }
  if (const auto* m = mask()) {
    Matrix out = Matrix::Zero(m->rows(), m->cols());
    Index k = 0;
    for (const auto& e : m->entries()) out(e.row, e.col) = y[k++];
    return out;
  }
  const DenseStack& d = *dense();
  Vector v = d.stacked().transpose() * y;
  return v.reshaped(d.rows(), d.cols());
}

NormEstimate operator_norm(const LinearMap& map, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidInput("operator_norm tolerance must be positive");
  if (max_iter < 1) throw InvalidInput("operator_norm max_iter must be positive");

  std::mt19937_64 rng(kPowerIterationSeed);
  std::normal_distribution<double> normal;
  Matrix x(map.rows(), map.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
  }
  x /= x.norm();

  NormEstimate est;
  double previous = -1.0;
  for (int k = 1; k <= max_iter; ++k) {
    Matrix next = map.adjoint_apply(map.apply(x));
    const double growth = next.norm();  // ||A*A x|| with ||x|| = 1
    if (growth == 0.0) {
      if (k == 1) throw InvalidInput("operator_norm of the zero operator");
      break;
    }
    est.value = std::sqrt(growth);
    est.iterations = k;
    if (previous > 0.0 && std::abs(est.value - previous) <= tol * est.value) {
      est.converged = true;
      return est;
    }
    previous = est.value;
    x = next / growth;
  }
  return est;
}

void write_observations(std::ostream& out, const SamplingMask& mask, const Measurement& values) {
  if (values.size() != mask.measurements()) {
    throw ShapeError("observation values of length " + std::to_string(values.size()) + " for " +
                     std::to_string(mask.measurements()) + " samples");
  }
  out << mask.rows() << ' ' << mask.cols() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  Index k = 0;
  for (const auto& e : mask.entries()) out << e.row << ' ' << e.col << ' ' << values[k++] << '\n';
}

Observations read_observations(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError("observation file is empty", 0);
  Index rows = 0;
  Index cols = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> rows >> cols) || (header >> extra)) throw ParseError("expected header \"m n\"", line_no);
    if (rows <= 0 || cols <= 0) throw ParseError("dimensions must be positive", line_no);
  }

  std::vector<MatrixEntry> entries;
  std::vector<double> values;
  while (next_line()) {
    std::istringstream row(line);
    MatrixEntry e;
    double v = 0.0;
    std::string extra;
    if (!(row >> e.row >> e.col >> v) || (row >> extra)) throw ParseError("expected \"i j value\"", line_no);
    if (!std::isfinite(v)) throw ParseError("non-finite value", line_no);
    entries.push_back(e);
    values.push_back(v);
  }

  // Values must follow their index through the canonical sort.
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return entries[a] < entries[b]; });
  std::vector<MatrixEntry> sorted_entries;
  Measurement sorted_values(static_cast<Index>(values.size()));
  sorted_entries.reserve(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_entries.push_back(entries[order[i]]);
    sorted_values[static_cast<Index>(i)] = values[order[i]];
  }
  return {SamplingMask(rows, cols, std::move(sorted_entries)), std::move(sorted_values)};
}

}  // namespace lowrank
