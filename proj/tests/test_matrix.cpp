#include <limits>

#include "doctest.h"
#include "lowrank/errors.hpp"
#include "lowrank/matrix.hpp"
#include "test_support.hpp"

using namespace lowrank;
using lowrank::testing::gaussian_matrix;

namespace {

double orthogonality_defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

}  // namespace

TEST_CASE("svd of the identity") {
  const SvdFactors f = svd(Matrix::Identity(2, 2));
  CHECK(f.sigma[0] == doctest::Approx(1.0));
  CHECK(f.sigma[1] == doctest::Approx(1.0));
  CHECK(orthogonality_defect(f.u) < 1e-12);
  CHECK(orthogonality_defect(f.v) < 1e-12);
}

TEST_CASE("svd of a zero matrix") {
  const SvdFactors f = svd(Matrix::Zero(3, 4));
  REQUIRE(f.sigma.size() == 3);
  CHECK(f.sigma.isZero());
  CHECK(f.u.rows() == 3);
  CHECK(f.v.rows() == 4);
}

TEST_CASE("svd sorts a permuted diagonal") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3.0, 1.0, 2.0;
  const SvdFactors f = svd(d);
  CHECK(f.sigma[0] == doctest::Approx(3.0));
  CHECK(f.sigma[1] == doctest::Approx(2.0));
  CHECK(f.sigma[2] == doctest::Approx(1.0));
  // The singular vectors follow the permutation: sigma 2 lives on axis 2.
  CHECK(std::abs(f.u(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(f.v(2, 1)) == doctest::Approx(1.0));
}

TEST_CASE("svd rejects non-finite input") {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(a), InvalidInput);
  a(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(thin_svd(a), InvalidInput);
}

TEST_CASE("svd factors are full, orthogonal and sorted") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Index m = 2 + static_cast<Index>(seed % 5);
    const Index n = 2 + static_cast<Index>((seed * 7) % 6);
    const Matrix a = gaussian_matrix(m, n, seed);
    const SvdFactors f = svd(a);
    REQUIRE(f.u.rows() == m);
    REQUIRE(f.u.cols() == m);
    REQUIRE(f.v.rows() == n);
    REQUIRE(f.v.cols() == n);
    CHECK(orthogonality_defect(f.u) < 1e-10);
    CHECK(orthogonality_defect(f.v) < 1e-10);
    for (Index i = 0; i + 1 < f.sigma.size(); ++i) CHECK(f.sigma[i] >= f.sigma[i + 1]);
    CHECK(f.sigma.minCoeff() >= 0.0);
    CHECK((reconstruct(f, m, n) - a).norm() <= 1e-9 * std::max(1.0, a.norm()));
    // Transpose has the same spectrum.
    CHECK((singular_values(a.transpose()) - f.sigma).norm() <= 1e-10 * std::max(1.0, f.sigma[0]));
  }
}

TEST_CASE("reconstruct") {
  SUBCASE("identity factors") {
    CHECK(reconstruct(svd(Matrix::Identity(4, 4)), 4, 4).isApprox(Matrix::Identity(4, 4)));
  }
  SUBCASE("random 5x7 round trip") {
    const Matrix a = gaussian_matrix(5, 7, 99);
    CHECK((reconstruct(svd(a), 5, 7) - a).norm() <= 1e-10 * a.norm());
  }
  SUBCASE("zero spectrum") {
    SvdFactors f = svd(gaussian_matrix(3, 5, 4));
    f.sigma.setZero();
    CHECK(reconstruct(f, 3, 5).isZero());
  }
  SUBCASE("shape mismatch") {
    const SvdFactors f = svd(gaussian_matrix(3, 5, 4));
    CHECK_THROWS_AS(reconstruct(f, 5, 3), ShapeError);
    CHECK_THROWS_AS(reconstruct(f, 3, 4), ShapeError);
  }
}

TEST_CASE("truncate_rank") {
  const Matrix a = gaussian_matrix(6, 8, 17);
  const Vector sigma = singular_values(a);

  CHECK((truncate_rank(a, 6) - a).norm() <= 1e-10 * a.norm());
  CHECK(truncate_rank(a, 0).isZero());
  CHECK_THROWS_AS(truncate_rank(a, 7), InvalidInput);
  CHECK_THROWS_AS(truncate_rank(a, -1), InvalidInput);

  for (Index r = 0; r <= 6; ++r) {
    const Matrix t = truncate_rank(a, r);
    CHECK(numerical_rank(t) <= r);
    // Eckart-Young: the error is the discarded tail of the spectrum.
    const double tail = sigma.tail(6 - r).norm();
    CHECK(std::abs((a - t).norm() - tail) <= 1e-10 * a.norm());
  }
}

TEST_CASE("truncate_rank beats random rank-r candidates") {
  std::mt19937_64 rng(2024);
  for (int instance = 0; instance < 5; ++instance) {
    const Matrix a = gaussian_matrix(6, 6, rng);
    for (Index r = 1; r <= 3; ++r) {
      const double best = (a - truncate_rank(a, r)).norm();
      for (int trial = 0; trial < 100; ++trial) {
        Matrix candidate = gaussian_matrix(6, r, rng) * gaussian_matrix(r, 6, rng);
        // Scale to the optimal multiple along the candidate, which only helps it.
        const double scale = (candidate.array() * a.array()).sum() / candidate.squaredNorm();
        candidate *= scale;
        CHECK((a - candidate).norm() >= best - 1e-12);
      }
    }
  }
}

TEST_CASE("frobenius_norm") {
  CHECK(frobenius_norm(Matrix::Zero(3, 2)) == 0.0);
  CHECK(frobenius_norm(Matrix::Identity(5, 5)) == doctest::Approx(std::sqrt(5.0)));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix a = gaussian_matrix(7, 4, seed);
    // Independent route: the spectrum.
    CHECK(lowrank::testing::rel_diff(frobenius_norm(a), singular_values(a).norm()) <= 1e-10);
  }
}

TEST_CASE("numerical_rank uses a relative cutoff") {
  Vector s(4);
  s << 1e6, 1.0, 1e-3, 1e-5;
  CHECK(numerical_rank(s) == 3);
  CHECK(numerical_rank(Vector(s * 1e-20)) == 3);
  CHECK(numerical_rank(Vector(Vector::Zero(3))) == 0);
}
