#pragma once

#include "qutrit/bloch.hpp"

namespace qutrit {

/// Maximum-entropy state under the single constraint <lambda_3> = mbar:
/// rho = exp(-mu lambda_3) / tr exp(-mu lambda_3).
struct MaxEntResult {
  DensityMatrix rho;
  /// Lagrange multiplier; -inf at mbar = 1 and +inf at mbar = -1.
  double mu = 0.0;
  double x8 = 0.0;
};

/// mu(mbar) = ln[(-mbar + sqrt(4 - 3 mbar^2)) / (2 (mbar + 1))] for |mbar| < 1.
/// Throws EndpointError at |mbar| = 1 and DomainError for |mbar| > 1.
double maxent_mu(double mbar);

/// Endpoints return the pure states |1><1| and |-1><-1|.
MaxEntResult maxent_state(double mbar);

}  // namespace qutrit
