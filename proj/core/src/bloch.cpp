#include "qutrit/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qutrit/detail/closed_form.hpp"
#include "qutrit/errors.hpp"

namespace qutrit {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

GellMannBasis::Generators make_standard_generators() {
  GellMannBasis::Generators l;
  for (auto& m : l) m.setZero();
  l[0](0, 1) = 1.0;
  l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI;
  l[1](1, 0) = kI;
  l[2](0, 0) = 1.0;
  l[2](2, 2) = -1.0;
  l[3](0, 2) = 1.0;
  l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI;
  l[4](2, 0) = kI;
  l[5](1, 2) = 1.0;
  l[5](2, 1) = 1.0;
  l[6](1, 2) = kI;
  l[6](2, 1) = -kI;
  const double s = 1.0 / std::numbers::sqrt3;
  l[7](0, 0) = s;
  l[7](1, 1) = -2.0 * s;
  l[7](2, 2) = s;
  return l;
}

}  // namespace

bool in_box(const Coords& coords) {
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    const double lo = i == kX8 ? kX8Min : -1.0;
    const double hi = i == kX8 ? kX8Max : 1.0;
    if (!(coords[i] >= lo - kBoxTolerance && coords[i] <= hi + kBoxTolerance)) return false;
  }
  return true;
}

BlochVector::BlochVector(const Coords& coords) : coords_(coords) {
  if (!in_box(coords)) {
    throw DomainError("Bloch coordinates outside the box C8");
  }
}

double BlochVector::distance(const BlochVector& other) const {
  double s = 0.0;
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    const double d = coords_[i] - other.coords_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

BlochVector pure_state_plus() { return BlochVector({0, 0, 1, 0, 0, 0, 0, kX8Max}); }
BlochVector pure_state_zero() { return BlochVector({0, 0, 0, 0, 0, 0, 0, kX8Min}); }
BlochVector pure_state_minus() { return BlochVector({0, 0, -1, 0, 0, 0, 0, kX8Max}); }

DensityMatrix::DensityMatrix() : m_(Matrix3c::Identity() / 3.0) {}

DensityMatrix::DensityMatrix(const Matrix3c& m) : m_(m) {
  if (!m.allFinite()) throw DomainError("density matrix has non-finite entries");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (std::abs(m(r, c) - std::conj(m(c, r))) > kMatrixTolerance) {
        throw DomainError("density matrix is not Hermitian");
      }
    }
  }
  if (std::abs(m.trace() - cd{1.0, 0.0}) > kMatrixTolerance) {
    throw DomainError("density matrix does not have unit trace");
  }
}

std::array<double, 3> DensityMatrix::diagonal() const {
  return {m_(0, 0).real(), m_(1, 1).real(), m_(2, 2).real()};
}

GellMannBasis::GellMannBasis(const Generators& generators) : lambda_(generators) {}

const GellMannBasis& GellMannBasis::standard() {
  static const GellMannBasis basis(make_standard_generators());
  return basis;
}

DensityMatrix bloch_to_density(const BlochVector& x, const GellMannBasis& basis) {
  Matrix3c m = Matrix3c::Identity() / 3.0;
  for (std::size_t j = 0; j < kBlochDim; ++j) m += 0.5 * x[j] * basis[j];
  return DensityMatrix(m);
}

BlochVector density_to_bloch(const DensityMatrix& rho, const GellMannBasis& basis) {
  Coords x;
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    x[i] = (basis[i] * rho.matrix()).trace().real();
  }
  return BlochVector(x);
}

bool is_physical(const BlochVector& x) {
  const auto d = detail::diagonal_of(x.x3(), x.x8());
  return detail::psd_from(detail::purity_of(x.coords(), d), detail::det_of(x.coords(), d));
}

bool is_physical(const DensityMatrix& rho) { return detail::psd_from(purity(rho), det3(rho)); }

Coords symmetry_map(const Coords& x) {
  return {x[5], x[6], -x[2], x[3], -x[4], x[0], x[1], x[7]};
}

BlochVector symmetry_map(const BlochVector& x) { return BlochVector(symmetry_map(x.coords())); }

DensityMatrix swap_outer_levels(const DensityMatrix& rho) {
  Eigen::Matrix3d p;
  p << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  const Matrix3c pc = p.cast<cd>();
  return DensityMatrix(pc * rho.matrix() * pc);
}

double expectation_lambda3(const BlochVector& x) { return x.x3(); }

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

double det3(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  const double a = m(0, 0).real();
  const double b = m(1, 1).real();
  const double c = m(2, 2).real();
  const cd p = m(0, 1);
  const cd q = m(0, 2);
  const cd r = m(1, 2);
  return a * b * c + 2.0 * (p * r * std::conj(q)).real() - a * std::norm(r) - b * std::norm(q) -
         c * std::norm(p);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  if (ev.minCoeff() < -kMatrixTolerance) {
    throw DomainError("entropy requested for a matrix that is not positive semidefinite");
  }
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double p = std::max(ev[i], 0.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace qutrit
