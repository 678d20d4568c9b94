#include "qutrit/maxent.hpp"

#include <cmath>
#include <limits>

#include "qutrit/errors.hpp"

namespace qutrit {

namespace {

// exp(mu(m)) for |m| < 1.
double boltzmann_ratio(double m) { return (-m + std::sqrt(4.0 - 3.0 * m * m)) / (2.0 * (m + 1.0)); }

}  // namespace

double maxent_mu(double mbar) {
  if (!(std::abs(mbar) <= 1.0)) throw DomainError("average value must lie in [-1, 1]");
  if (std::abs(mbar) == 1.0) {
    throw EndpointError("mu diverges at mbar = +-1; the MaxEnt state is pure there");
  }
  return std::log(boltzmann_ratio(mbar));
}

MaxEntResult maxent_state(double mbar) {
  if (!(std::abs(mbar) <= 1.0)) throw DomainError("average value must lie in [-1, 1]");
  MaxEntResult r;
  Matrix3c m = Matrix3c::Zero();
  if (std::abs(mbar) == 1.0) {
    m(mbar > 0 ? 0 : 2, mbar > 0 ? 0 : 2) = 1.0;
    r.mu = mbar > 0 ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
  } else {
    r.mu = maxent_mu(mbar);
    // diag(e^-mu, 1, e^mu) / Z, written as (1, u, u^2) / (1 + u + u^2) with
    // u = e^{mu(|mbar|)} <= 1, then mirrored for negative mbar.
    const double u = boltzmann_ratio(std::abs(mbar));
    const double z = 1.0 + u + u * u;
    const double hi = 1.0 / z;
    const double lo = u * u / z;
    m(0, 0) = mbar >= 0 ? hi : lo;
    m(1, 1) = u / z;
    m(2, 2) = mbar >= 0 ? lo : hi;
  }
  r.rho = DensityMatrix(m);
  r.x8 = density_to_bloch(r.rho).x8();
  return r;
}

}  // namespace qutrit
