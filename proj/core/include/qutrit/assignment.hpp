#pragma once

// Posterior-mean state assignment from average-value data.
//
// Large N, exact average mbar: the posterior is the prior restricted to the
// slice x_3 = mbar; by symmetry the assigned Bloch vector is
// (0, 0, mbar, 0, 0, 0, 0, L_8/Z).
//
// Large N, average in a region: the posterior is the prior restricted to
// {x_3 in region}.
//
// Finite N: the likelihood of the data "the average of N outcomes lies in the
// region" is sum over compatible frequency vectors of the multinomial
// probabilities of the diagonal of rho.

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "qutrit/bloch.hpp"
#include "qutrit/integrator.hpp"
#include "qutrit/priors.hpp"
#include "qutrit/region.hpp"

namespace qutrit {

enum class AssignmentMethod { LargeN_Delta, LargeN_Region, FiniteN };

std::string_view to_string(AssignmentMethod m);
AssignmentMethod method_from_string(std::string_view name);

/// Absolute outcome frequencies for outcome values (1, 0, -1).
struct FrequencyVector {
  unsigned n1 = 0;
  unsigned n2 = 0;
  unsigned n3 = 0;

  unsigned total() const { return n1 + n2 + n3; }
  /// (N1 - N3) / N.
  double average() const;

  friend auto operator<=>(const FrequencyVector&, const FrequencyVector&) = default;
};

struct FiniteNLedger {
  unsigned N = 0;
  std::vector<FrequencyVector> phi;
  SliceIntegralEstimate estimate;
};

struct AssignmentResult {
  DensityMatrix rho;
  BlochVector x;
  std::array<double, kBlochDim> stderr_x{};
  double mbar = 0.0;
  PriorSpec prior;
  AssignmentMethod method = AssignmentMethod::LargeN_Delta;
  /// Empty for analytic endpoints.
  std::variant<std::monostate, SliceIntegralEstimate, FiniteNLedger> diagnostics;
  /// Produced from the +mbar integral by the |1> <-> |-1> symmetry.
  bool mirrored = false;
  /// Set without integration (mbar = +-1).
  bool analytic = false;

  const SliceIntegralEstimate* estimate() const;
};

/// Significance (in standard errors) above which a component that must vanish
/// by symmetry is reported as a SymmetryViolation.
inline constexpr double kSuppressionSigma = 4.0;

/// Returns the largest |L_i/Z| / stderr_i over components i not in {3, 8}.
double max_suppressed_significance(const SliceIntegralEstimate& est);

/// Assigned state for an exactly known average value in the large-N limit.
/// Negative mbar is computed from +|mbar| through symmetry_map; mbar = +-1
/// returns the pure state without integration.
AssignmentResult assign_large_n(double mbar, const PriorSpec& prior, const IntegratorConfig& cfg);

/// Assigned state when the average is only known to lie in `region`.  A
/// single-point region is delegated to assign_large_n.
AssignmentResult assign_large_n_region(const AverageRegion& region, const PriorSpec& prior,
                                       const IntegratorConfig& cfg);

/// All (N1, N2, N3) with N1 + N2 + N3 = N and (N1 - N3)/N in region, in
/// lexicographic order.
std::vector<FrequencyVector> enumerate_phi(const AverageRegion& region, unsigned N);

/// sum over phi of prod_i p_i^{N_i} / N_i!, scaled by N! and evaluated in log
/// space.  Factors with N_i = 0 are skipped.
class FrequencyLikelihood {
 public:
  FrequencyLikelihood(std::vector<FrequencyVector> phi, unsigned N);

  double operator()(double p1, double p2, double p3) const;

  std::size_t size() const { return terms_.size(); }

 private:
  struct Term {
    double n1, n2, n3;
    double log_coefficient;
  };
  std::vector<Term> terms_;
};

/// Posterior-mean state for N repetitions with the average in `region`.
/// Throws IncompatibleData when phi is empty and NumericalUnderflow when the
/// likelihood underflows for every sample.
AssignmentResult assign_finite_n(const AverageRegion& region, unsigned N, const PriorSpec& prior,
                                 const IntegratorConfig& cfg);

}  // namespace qutrit
