#include "doctest.h"
#include "lowrank/errors.hpp"
#include "lowrank/tl_penalty.hpp"
#include "test_support.hpp"

using namespace lowrank;
using lowrank::testing::gaussian_matrix;
using lowrank::testing::random_orthogonal;
using lowrank::testing::rel_diff;

namespace {

LinearMap random_mask_map(Index m, Index n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.6);
  std::vector<MatrixEntry> omega;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (coin(rng)) omega.push_back({i, j});
    }
  }
  return LinearMap(SamplingMask(m, n, omega));
}

}  // namespace

TEST_CASE("TlParams domains") {
  CHECK_NOTHROW((TlParams{0.0, 1e-9}.validate()));
  CHECK_NOTHROW((TlParams{0.99, 5.0}.validate()));
  CHECK_THROWS_AS((TlParams{1.0, 0.1}.validate()), InvalidInput);
  CHECK_THROWS_AS((TlParams{-0.1, 0.1}.validate()), InvalidInput);
  CHECK_THROWS_AS((TlParams{0.1, 0.0}.validate()), InvalidInput);
  // The solver domain is wider than the theory domain.
  CHECK_NOTHROW((TlParams{0.5, 1.0 / 3.0}.validate_theory()));
  CHECK_THROWS_AS((TlParams{0.6, 0.1}.validate_theory()), InvalidInput);
  CHECK_THROWS_AS((TlParams{0.1, 0.5}.validate_theory()), InvalidInput);
}

TEST_CASE("phi") {
  CHECK(phi(0.0, {0.3, 0.01}) == 0.0);
  for (double t : {1e-6, 0.3, 2.0, 150.0}) {
    CHECK(phi(t, {0.5, 0.7}) == doctest::Approx(std::sqrt(t)).epsilon(1e-14));
  }
  // 1 / sqrt(1.01), evaluated independently.
  CHECK(phi(1.0, {0.0, 0.01}) == doctest::Approx(0.99503719020998926).epsilon(1e-14));
  CHECK_THROWS_AS(phi(-1e-3, {0.1, 0.1}), InvalidInput);
}

TEST_CASE("phi is nondecreasing for alpha in [0, 1/2]") {
  for (double alpha : {0.0, 0.1, 0.25, 0.4, 0.5}) {
    for (double eps : {1e-6, 1e-3, 0.1, 1.0 / 3.0}) {
      const TlParams p{alpha, eps};
      double previous = 0.0;
      for (int k = 1; k <= 20000; ++k) {
        const double t = 1e-8 * std::pow(1.0015, k);  // 1e-8 up to ~1e5
        const double value = phi(t, p);
        CHECK(value >= previous);
        previous = value;
      }
    }
  }
}

TEST_CASE("tl_value") {
  CHECK(tl_value(Matrix(Matrix::Zero(4, 3)), {0.2, 0.1}) == 0.0);

  for (double alpha : {0.0, 0.3, 0.8}) {
    const TlParams p{alpha, 0.05};
    CHECK(tl_value(Matrix(Matrix::Identity(6, 6)), p) ==
          doctest::Approx(6.0 / std::pow(1.05, 0.5 - alpha)).epsilon(1e-12));
  }

  SUBCASE("interpolates the rank for tiny alpha and epsilon") {
    std::mt19937_64 rng(41);
    for (Index r = 1; r <= 6; ++r) {
      Matrix x = gaussian_matrix(10, r, rng) * gaussian_matrix(r, 12, rng);
      x /= singular_values(x)[0];
      const Index rank = numerical_rank(x);
      REQUIRE(rank == r);
      CHECK(std::abs(tl_value(x, {1e-3, 1e-6}) - static_cast<double>(rank)) <= 0.01);
    }
  }
}

TEST_CASE("tl_value is orthogonally invariant") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = gaussian_matrix(5, 7, rng);
    const Matrix u = random_orthogonal(5, rng);
    const Matrix v = random_orthogonal(7, rng);
    const TlParams p{0.09 * trial, 0.01 + 0.05 * trial};
    CHECK(std::abs(tl_value(Matrix(u * x * v.transpose()), p) - tl_value(x, p)) <= 1e-9);
  }
}

TEST_CASE("tl_value approaches the rank along a shrinking parameter path") {
  std::mt19937_64 rng(43);
  Matrix x = gaussian_matrix(9, 4, rng) * gaussian_matrix(4, 9, rng);
  x /= singular_values(x)[0];
  double previous = std::numeric_limits<double>::infinity();
  for (auto [alpha, eps] : {std::pair{0.3, 0.3}, {0.1, 0.1}, {0.01, 0.01}, {1e-3, 1e-4}, {1e-3, 1e-6}, {1e-4, 1e-8}}) {
    const double error = std::abs(tl_value(x, {alpha, eps}) - 4.0);
    CHECK(error < previous);
    previous = error;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("tl_value is additive over block-disjoint matrices") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index r1 = 1 + trial % 3;
    const Index r2 = 1 + (trial / 3) % 3;
    Matrix m = Matrix::Zero(7, 8);
    Matrix n = Matrix::Zero(7, 8);
    m.topLeftCorner(r1, r1) = gaussian_matrix(r1, r1, rng);
    n.bottomRightCorner(r2, r2) = gaussian_matrix(r2, r2, rng);
    REQUIRE((m * n.transpose()).isZero());
    REQUIRE((m.transpose() * n).isZero());
    const TlParams p{0.5 * unit(rng), 1e-3 + unit(rng) / 3.0};
    const double sum = tl_value(m, p) + tl_value(n, p);
    CHECK(std::abs(tl_value(Matrix(m + n), p) - sum) <= 1e-10 * std::max(1.0, sum));
  }
}

TEST_CASE("scaled spectrum bound for eta >= 3 r sigma_1") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const TlParams p{0.5 * unit(rng), 1e-4 + unit(rng) * (1.0 / 3.0 - 1e-4)};
    p.validate_theory();
    const Index r = 1 + trial % 4;
    const Matrix x = 10.0 * unit(rng) * gaussian_matrix(6, r, rng) * gaussian_matrix(r, 6, rng);
    const Vector sigma = singular_values(x);
    for (double factor : {1.0, 1.5, 10.0}) {
      const double eta = factor * 3.0 * static_cast<double>(r) * sigma[0];
      double lhs = 0.0;
      for (Index i = 0; i < sigma.size(); ++i) {
        const double s = sigma[i] / eta;
        lhs += s / std::pow(s + p.epsilon, 1.0 - 2.0 * p.alpha);
      }
      CHECK(lhs < 1.0 / (3.0 * std::pow(p.epsilon, 1.0 - 2.0 * p.alpha)));
    }
  }
}

TEST_CASE("objective") {
  std::mt19937_64 rng(46);
  const LinearMap map = random_mask_map(5, 6, rng);
  const TlParams p{0.2, 0.01};

  SUBCASE("feasible point pays only the penalty") {
    const Matrix x = gaussian_matrix(5, 6, rng);
    const Measurement b = map.apply(x);
    CHECK(rel_diff(objective(x, map, b, 0.7, p), 0.7 * tl_value(x, p)) < 1e-12);
  }
  SUBCASE("zero point, zero data") {
    CHECK(objective(Matrix::Zero(5, 6), map, Measurement::Zero(map.measurements()), 3.0, p) == 0.0);
  }
  SUBCASE("recomposes from its terms") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix x = gaussian_matrix(5, 6, rng);
      const Measurement b = gaussian_matrix(map.measurements(), 1, rng);
      const double expected = (map.apply(x) - b).squaredNorm() + 0.4 * tl_value(x, p);
      CHECK(rel_diff(objective(x, map, b, 0.4, p), expected) < 1e-12);
    }
  }
  SUBCASE("shape errors") {
    CHECK_THROWS_AS(objective(Matrix::Zero(6, 5), map, Measurement::Zero(map.measurements()), 1.0, p), ShapeError);
    CHECK_THROWS_AS(objective(Matrix::Zero(5, 6), map, Measurement::Zero(2), 1.0, p), ShapeError);
  }
}

TEST_CASE("surrogate") {
  std::mt19937_64 rng(47);
  std::vector<Matrix> mats;
  for (int i = 0; i < 7; ++i) mats.push_back(gaussian_matrix(4, 3, rng));
  const LinearMap dense{DenseStack(mats)};
  const double mu = 0.9 / std::pow(operator_norm(dense).value, 2);

  SUBCASE("touches mu * objective on the diagonal") {
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix x = gaussian_matrix(4, 3, rng);
      const Measurement b = gaussian_matrix(7, 1, rng);
      const TlParams p{0.1 * trial, 0.02 + 0.1 * trial};
      CHECK(rel_diff(surrogate(x, x, 0.8, mu, p, dense, b), mu * objective(x, dense, b, 0.8, p)) < 1e-12);
    }
  }
  SUBCASE("zero") {
    CHECK(surrogate(Matrix::Zero(4, 3), Matrix::Zero(4, 3), 1.0, mu, {0.1, 0.1}, dense, Measurement::Zero(7)) == 0.0);
  }
  SUBCASE("shape errors") {
    CHECK_THROWS_AS(surrogate(Matrix::Zero(4, 3), Matrix::Zero(3, 4), 1.0, mu, {0.1, 0.1}, dense,
                              Measurement::Zero(7)),
                    ShapeError);
  }
}

TEST_CASE("surrogate majorizes at a grid-search minimizer") {
  // 3x3 instance restricted to the plane spanned by two directions; the objective minimizer on a
  // fine grid of that plane plays the role of X*.
  std::mt19937_64 rng(48);
  std::vector<Matrix> mats;
  for (int i = 0; i < 5; ++i) mats.push_back(gaussian_matrix(3, 3, rng));
  const LinearMap map{DenseStack(mats)};
  const double mu = 0.95 / std::pow(operator_norm(map).value, 2);
  const Matrix d1 = gaussian_matrix(3, 3, rng);
  const Matrix d2 = gaussian_matrix(3, 3, rng);
  const Measurement b = map.apply(Matrix(0.8 * d1 - 0.3 * d2));
  const double lambda = 0.5;
  const TlParams p{0.2, 0.1};

  auto point = [&](int i, int j) { return Matrix((i / 20.0 - 2.0) * d1 + (j / 20.0 - 2.0) * d2); };
  double best = std::numeric_limits<double>::infinity();
  Matrix minimizer;
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) {
      const double value = objective(point(i, j), map, b, lambda, p);
      if (value < best) {
        best = value;
        minimizer = point(i, j);
      }
    }
  }
  for (int i = 0; i <= 80; i += 2) {
    for (int j = 0; j <= 80; j += 2) {
      CHECK(surrogate(point(i, j), minimizer, lambda, mu, p, map, b) >= mu * best - 1e-12);
    }
  }
}

TEST_CASE("gradient_step") {
  std::mt19937_64 rng(49);
  const LinearMap map = random_mask_map(4, 5, rng);
  const Matrix truth = gaussian_matrix(4, 5, rng);
  const Measurement b = map.apply(truth);

  CHECK(gradient_step(truth, map, b, 0.7) == truth);
  CHECK(gradient_step(Matrix::Zero(4, 5), map, b, 0.7).isApprox(0.7 * map.adjoint_apply(b)));

  const Matrix x = gaussian_matrix(4, 5, rng);
  const Matrix step = gradient_step(x, map, b, 0.7);
  Matrix observed = Matrix::Zero(4, 5);
  for (const auto& e : map.mask()->entries()) observed(e.row, e.col) = 1.0;
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const double expected = observed(i, j) != 0.0 ? x(i, j) + 0.7 * (truth(i, j) - x(i, j)) : x(i, j);
      CHECK(step(i, j) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  CHECK_THROWS_AS(gradient_step(x, map, b, 0.0), InvalidInput);
  CHECK_THROWS_AS(gradient_step(Matrix::Zero(5, 4), map, b, 0.5), ShapeError);
}
