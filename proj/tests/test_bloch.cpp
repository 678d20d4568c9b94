#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qutrit/bloch.hpp"
#include "qutrit/errors.hpp"

namespace qutrit {
namespace {

const double kS3 = std::sqrt(3.0);

Coords random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u8(kX8Min, kX8Max);
  Coords x;
  for (std::size_t i = 0; i < kBlochDim; ++i) x[i] = i == kX8 ? u8(rng) : u(rng);
  return x;
}

BlochVector random_physical(std::mt19937_64& rng) {
  while (true) {
    Coords x = random_box(rng);
    if (oracle::min_eigenvalue(x) >= 0) return BlochVector(x);
  }
}

Matrix3c swap_matrix() {
  Matrix3c p = Matrix3c::Zero();
  p(0, 2) = p(2, 0) = p(1, 1) = 1.0;
  return p;
}

TEST(Basis, TracesOfProductsAreTwoDelta) {
  const auto& b = GellMannBasis::standard();
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    EXPECT_NEAR(std::abs(b[i].trace()), 0.0, 1e-15);
    EXPECT_NEAR((b[i] - b[i].adjoint()).norm(), 0.0, 1e-15);
    for (std::size_t j = 0; j < kBlochDim; ++j) {
      EXPECT_NEAR(std::abs((b[i] * b[j]).trace() - (i == j ? 2.0 : 0.0)), 0.0, 1e-14)
          << i << "," << j;
    }
  }
}

TEST(Basis, DiagonalGeneratorsMatchMeasurementBasis) {
  const auto& b = GellMannBasis::standard();
  EXPECT_EQ(b[kX3].diagonal().real(), Eigen::Vector3d(1, 0, -1));
  EXPECT_NEAR((b[kX8].diagonal().real() - Eigen::Vector3d(1, -2, 1) / kS3).norm(), 0, 1e-15);
}

TEST(Basis, MatchesEntrywiseOracle) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const Coords x = random_box(rng);
    const Matrix3c a = bloch_to_density(BlochVector(x)).matrix();
    EXPECT_NEAR((a - oracle::density_entries(x)).norm(), 0.0, 1e-14);
  }
}

TEST(BlochToDensity, Examples) {
  EXPECT_NEAR((bloch_to_density(BlochVector{}).matrix() - Matrix3c::Identity() / 3.0).norm(), 0,
              1e-15);
  const auto p1 = bloch_to_density(BlochVector({0, 0, 1, 0, 0, 0, 0, 1 / kS3}));
  EXPECT_NEAR((p1.matrix() - Eigen::Vector3cd(1, 0, 0).asDiagonal().toDenseMatrix()).norm(), 0,
              1e-15);
  const auto p0 = bloch_to_density(BlochVector({0, 0, 0, 0, 0, 0, 0, -2 / kS3}));
  EXPECT_NEAR((p0.matrix() - Eigen::Vector3cd(0, 1, 0).asDiagonal().toDenseMatrix()).norm(), 0,
              1e-15);
}

TEST(DensityToBloch, ExamplesAndRoundTrip) {
  const auto zero = density_to_bloch(DensityMatrix());
  for (std::size_t i = 0; i < kBlochDim; ++i) EXPECT_NEAR(zero[i], 0.0, 1e-16);

  Matrix3c m = Matrix3c::Zero();
  m(0, 0) = 1;
  const auto x = density_to_bloch(DensityMatrix(m));
  EXPECT_DOUBLE_EQ(x[kX3], 1.0);
  EXPECT_NEAR(x[kX8], 1 / kS3, 1e-15);
  for (std::size_t i : {0, 1, 3, 4, 5, 6}) EXPECT_EQ(x[i], 0.0);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const BlochVector v = random_physical(rng);
    const BlochVector back = density_to_bloch(bloch_to_density(v));
    for (std::size_t i = 0; i < kBlochDim; ++i) EXPECT_NEAR(back[i], v[i], 1e-12);
  }
  for (int k = 0; k < 1000; ++k) {
    const BlochVector v(random_box(rng));
    const BlochVector back = density_to_bloch(bloch_to_density(v));
    for (std::size_t i = 0; i < kBlochDim; ++i) EXPECT_NEAR(back[i], v[i], 1e-12);
  }
}

TEST(BlochVector, RejectsPointsOutsideBox) {
  EXPECT_THROW(BlochVector({1.5, 0, 0, 0, 0, 0, 0, 0}), DomainError);
  EXPECT_THROW(BlochVector({0, 0, 0, 0, 0, 0, 0, 0.6}), DomainError);
  EXPECT_THROW(BlochVector({0, 0, 0, 0, 0, 0, 0, -1.2}), DomainError);
  EXPECT_THROW(BlochVector({NAN, 0, 0, 0, 0, 0, 0, 0}), DomainError);
  EXPECT_NO_THROW(BlochVector({1, -1, 1, -1, 1, -1, 1, kX8Min}));
}

TEST(DensityMatrix, RejectsNonHermitianOrWrongTrace) {
  Matrix3c m = Matrix3c::Identity() / 3.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, DomainError);
  EXPECT_THROW(DensityMatrix{Matrix3c::Identity()}, DomainError);
}

TEST(IsPhysical, Examples) {
  EXPECT_TRUE(is_physical(BlochVector{}));
  EXPECT_TRUE(is_physical(BlochVector({0, 0, 1, 0, 0, 0, 0, 1 / kS3})));
  const BlochVector bad({0, 0, 1, 0, 0, 0, 0, -1 / kS3});
  EXPECT_FALSE(is_physical(bad));
  const auto d = bloch_to_density(bad).diagonal();
  EXPECT_NEAR(d[0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(d[1], 2.0 / 3, 1e-15);
  EXPECT_NEAR(d[2], -1.0 / 3, 1e-15);
  EXPECT_TRUE(is_physical(pure_state_plus()));
  EXPECT_TRUE(is_physical(pure_state_zero()));
  EXPECT_TRUE(is_physical(pure_state_minus()));
}

TEST(IsPhysical, AgreesWithEigenvalueOracleOnRandomBoxPoints) {
  std::mt19937_64 rng(3);
  int disagreements = 0;
  int inside = 0;
  constexpr int kPoints = 200000;
  for (int k = 0; k < kPoints; ++k) {
    const Coords x = random_box(rng);
    const bool expected = oracle::min_eigenvalue(x) >= 0;
    const bool got = is_physical(BlochVector(x));
    disagreements += expected != got;
    inside += got;
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(inside, 0);
  EXPECT_LT(inside, kPoints);
}

TEST(IsPhysical, AgreesWithOracleNearTheBoundary) {
  // Points on segments from the centre to random box points, concentrated
  // around the boundary crossing.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  int disagreements = 0;
  int checked = 0;
  for (int k = 0; k < 20000; ++k) {
    const Coords dir = random_box(rng);
    double lo = 0, hi = 1;
    Coords y;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      for (std::size_t i = 0; i < kBlochDim; ++i) y[i] = dir[i] * mid;
      (oracle::min_eigenvalue(y) >= 0 ? lo : hi) = mid;
    }
    const double s = lo * (1 + (t(rng) - 0.5) * 1e-6);
    for (std::size_t i = 0; i < kBlochDim; ++i) y[i] = dir[i] * s;
    const double lam = oracle::min_eigenvalue(y);
    if (std::abs(lam) < 1e-10) continue;
    ++checked;
    disagreements += (lam >= 0) != is_physical(BlochVector(y));
  }
  EXPECT_GT(checked, 10000);
  EXPECT_EQ(disagreements, 0);
}

TEST(IsPhysical, MatrixOverloadMatchesVectorOverload) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5000; ++k) {
    const BlochVector x(random_box(rng));
    EXPECT_EQ(is_physical(x), is_physical(bloch_to_density(x)));
  }
}

TEST(IsPhysical, AcceptanceFractionIsReproducible) {
  auto fraction = [] {
    std::mt19937_64 rng(6);
    int inside = 0;
    for (int k = 0; k < 100000; ++k) inside += is_physical(BlochVector(random_box(rng)));
    return inside;
  };
  const int a = fraction();
  EXPECT_EQ(a, fraction());
  // Full-box acceptance is about 1.5e-3.
  EXPECT_GT(a, 50);
  EXPECT_LT(a, 400);
}

TEST(SymmetryMap, Examples) {
  const BlochVector x({0, 0, 0.4, 0, 0, 0, 0, 0.2});
  EXPECT_EQ(symmetry_map(x), BlochVector({0, 0, -0.4, 0, 0, 0, 0, 0.2}));
  const BlochVector y({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.05});
  EXPECT_EQ(symmetry_map(y), BlochVector({0.6, 0.7, -0.3, 0.4, -0.5, 0.1, 0.2, 0.05}));
}

TEST(SymmetryMap, InvolutionPreservingPhysicality) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const BlochVector x(random_box(rng));
    EXPECT_EQ(symmetry_map(symmetry_map(x)), x);
    const Coords mapped = symmetry_map(x).coords();
    EXPECT_EQ(oracle::min_eigenvalue(x.coords()) >= 0, oracle::min_eigenvalue(mapped) >= 0);
    EXPECT_EQ(is_physical(x), is_physical(symmetry_map(x)));
  }
}

TEST(SymmetryMap, IsConjugationByLevelSwap) {
  std::mt19937_64 rng(8);
  const Matrix3c p = swap_matrix();
  for (int k = 0; k < 1000; ++k) {
    const BlochVector x(random_box(rng));
    const Matrix3c lhs = bloch_to_density(symmetry_map(x)).matrix();
    const Matrix3c rhs = p * bloch_to_density(x).matrix() * p;
    EXPECT_NEAR((lhs - rhs).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR((swap_outer_levels(bloch_to_density(x)).matrix() - rhs).norm(), 0.0, 1e-15);
  }
}

TEST(SymmetryMap, TextbookSignOfLambda7BreaksConjugation) {
  auto g = GellMannBasis::standard().generators();
  g[6] = -g[6];
  const GellMannBasis textbook(g);
  const BlochVector x({0.1, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  const Matrix3c p = swap_matrix();
  const Matrix3c lhs = bloch_to_density(symmetry_map(x), textbook).matrix();
  const Matrix3c rhs = p * bloch_to_density(x, textbook).matrix() * p;
  EXPECT_GT((lhs - rhs).cwiseAbs().maxCoeff(), 0.05);
}

TEST(ExpectationLambda3, EqualsX3AndMatrixTrace) {
  EXPECT_EQ(expectation_lambda3(BlochVector({0, 0, 0.5, 0, 0, 0, 0, 0})), 0.5);
  EXPECT_EQ(expectation_lambda3(pure_state_plus()), 1.0);
  std::mt19937_64 rng(9);
  Matrix3c l3 = Matrix3c::Zero();
  l3(0, 0) = 1;
  l3(2, 2) = -1;
  for (int k = 0; k < 200; ++k) {
    const Coords x = random_box(rng);
    const double tr = (l3 * oracle::density_entries(x)).trace().real();
    EXPECT_NEAR(expectation_lambda3(BlochVector(x)), tr, 1e-15);
  }
}

TEST(Functionals, Examples) {
  const DensityMatrix mixed;
  EXPECT_NEAR(purity(mixed), 1.0 / 3, 1e-15);
  EXPECT_NEAR(det3(mixed), 1.0 / 27, 1e-16);
  EXPECT_NEAR(von_neumann_entropy(mixed), std::log(3.0), 1e-14);

  const auto pure = bloch_to_density(pure_state_plus());
  EXPECT_NEAR(purity(pure), 1.0, 1e-15);
  EXPECT_NEAR(det3(pure), 0.0, 1e-16);
  EXPECT_NEAR(von_neumann_entropy(pure), 0.0, 1e-14);

  Matrix3c half = Matrix3c::Zero();
  half(0, 0) = half(1, 1) = 0.5;
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix(half)), std::log(2.0), 1e-14);
}

TEST(Functionals, DetAndPurityMatchEigenOnRandomPoints) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 1000; ++k) {
    const Coords x = random_box(rng);
    const Matrix3c m = oracle::density_entries(x);
    const DensityMatrix rho = bloch_to_density(BlochVector(x));
    EXPECT_NEAR(det3(rho), m.determinant().real(), 1e-14);
    EXPECT_NEAR(purity(rho), (m * m).trace().real(), 1e-14);
  }
}

TEST(Functionals, EntropyRejectsNonPhysicalInput) {
  EXPECT_THROW(von_neumann_entropy(bloch_to_density(BlochVector({0, 0, 1, 0, 0, 0, 0, -1 / kS3}))),
               DomainError);
}

}  // namespace
}  // namespace qutrit
