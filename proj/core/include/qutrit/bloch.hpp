#pragma once

// Bloch parametrisation of qutrit density matrices.
//
// Basis ordering is (|1>, |0>, |-1>), the eigenbasis of the measured observable
// lambda_3 = diag(1, 0, -1).  The Bloch vector x has eight real components; in
// this library they are stored 0-based, so x[2] is the third component x_3 and
// x[7] is x_8.

#include <array>
#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Core>

namespace qutrit {

inline constexpr std::size_t kBlochDim = 8;

/// Index of x_3 (the lambda_3 expectation value) in 0-based storage.
inline constexpr std::size_t kX3 = 2;
/// Index of x_8 in 0-based storage.
inline constexpr std::size_t kX8 = 7;

/// Bounds of the box C8 = [-1,1]^7 x [-2/sqrt3, 1/sqrt3].
inline constexpr double kX8Min = -2.0 / std::numbers::sqrt3;
inline constexpr double kX8Max = 1.0 / std::numbers::sqrt3;

/// Slack accepted on the C8 box bounds so that vectors computed from exact
/// states (e.g. |1><1|) are not rejected by last-bit rounding.
inline constexpr double kBoxTolerance = 1e-12;

/// Slack on tr(rho^2) <= 1 and det(rho) >= 0 so that exact pure states, whose
/// determinant rounds to about -1e-17, are accepted as physical.
inline constexpr double kPhysicalTolerance = 1e-14;

/// Tolerance for Hermiticity and unit trace of a DensityMatrix.
inline constexpr double kMatrixTolerance = 1e-12;

using Matrix3c = Eigen::Matrix3cd;
using Coords = std::array<double, kBlochDim>;

/// A point of the box C8.  Construction validates the box bounds.
class BlochVector {
 public:
  BlochVector() = default;
  explicit BlochVector(const Coords& coords);

  double operator[](std::size_t i) const { return coords_[i]; }
  const Coords& coords() const { return coords_; }

  double x3() const { return coords_[kX3]; }
  double x8() const { return coords_[kX8]; }

  /// Euclidean distance |x - y|.
  double distance(const BlochVector& other) const;

  friend bool operator==(const BlochVector&, const BlochVector&) = default;

 private:
  Coords coords_{};
};

bool in_box(const Coords& coords);

/// Bloch vectors of the three measurement projectors.
BlochVector pure_state_plus();   // |1><1|
BlochVector pure_state_zero();   // |0><0|
BlochVector pure_state_minus();  // |-1><-1|

/// A 3x3 complex matrix that is Hermitian and has unit trace (to 1e-12).
/// It is not required to be positive semidefinite.
class DensityMatrix {
 public:
  DensityMatrix();  // I/3
  explicit DensityMatrix(const Matrix3c& m);

  const Matrix3c& matrix() const { return m_; }
  std::complex<double> operator()(int r, int c) const { return m_(r, c); }

  /// Real diagonal (rho_11, rho_22, rho_33) in the measurement basis.
  std::array<double, 3> diagonal() const;

 private:
  Matrix3c m_;
};

/// Eight traceless Hermitian generators with tr(l_i l_j) = 2 delta_ij.
///
/// The standard basis uses the usual Gell-Mann off-diagonal pairs (l1,l2 couple
/// levels 1-2, l4,l5 couple 1-3, l6,l7 couple 2-3) with l7 = i|0><-1| - i|-1><0|,
/// the sign for which swapping |1> and |-1> acts on coordinates as
/// (x1..x8) -> (x6, x7, -x3, x4, -x5, x1, x2, x8).  The diagonal pair is
/// l3 = diag(1,0,-1) and l8 = diag(1,-2,1)/sqrt3.
class GellMannBasis {
 public:
  using Generators = std::array<Matrix3c, kBlochDim>;

  explicit GellMannBasis(const Generators& generators);

  static const GellMannBasis& standard();

  const Matrix3c& operator[](std::size_t i) const { return lambda_[i]; }
  const Generators& generators() const { return lambda_; }

 private:
  Generators lambda_;
};

/// rho(x) = I/3 + (1/2) sum_j x_j lambda_j.
DensityMatrix bloch_to_density(const BlochVector& x,
                               const GellMannBasis& basis = GellMannBasis::standard());

/// x_i = tr(lambda_i rho).
BlochVector density_to_bloch(const DensityMatrix& rho,
                             const GellMannBasis& basis = GellMannBasis::standard());

/// True iff rho(x) is positive semidefinite: tr(rho^2) <= 1 and det(rho) >= 0,
/// each up to kPhysicalTolerance.
bool is_physical(const BlochVector& x);
bool is_physical(const DensityMatrix& rho);

/// Coordinate action of the |1> <-> |-1> swap.  An involution preserving
/// physicality.
BlochVector symmetry_map(const BlochVector& x);
Coords symmetry_map(const Coords& x);

/// P rho P with P the permutation matrix exchanging the first and third basis
/// vectors.
DensityMatrix swap_outer_levels(const DensityMatrix& rho);

/// <lambda_3> in state rho(x), which is x_3.
double expectation_lambda3(const BlochVector& x);

double purity(const DensityMatrix& rho);
double det3(const DensityMatrix& rho);

/// S = -tr(rho ln rho) with 0 ln 0 = 0.  Throws DomainError for non-PSD input.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace qutrit
