#pragma once

#include <string>
#include <string_view>

#include "qutrit/bloch.hpp"

namespace qutrit {

enum class PriorKind { Constant, GaussianLike, Slater };

std::string_view to_string(PriorKind kind);
PriorKind prior_kind_from_string(std::string_view name);

/// Unnormalised prior plausibility density g(x) over C8.
///
///   Constant      g = 1
///   GaussianLike  g = exp(-tr[(rho - rho_c)^2] / s^2) = exp(-|x - x_c|^2 / (2 s^2))
///   Slater        g = max(det rho, 0)^k, k = 2d + 1 = 7 for a qutrit
///
/// Normalisation is irrelevant: every assignment is a ratio of integrals.
struct PriorSpec {
  PriorKind kind = PriorKind::Constant;
  BlochVector center;
  double breadth = 0.25;
  int slater_exponent = 7;

  static PriorSpec constant();
  static PriorSpec gaussian(const BlochVector& center, double breadth);
  static PriorSpec slater(int exponent = 7);

  /// Throws DomainError unless breadth > 0 and exponent >= 0.
  void validate() const;

  friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

double eval_prior(const PriorSpec& spec, const BlochVector& x);

/// The prior g' with g'(x) = g(symmetry_map(x)).  Constant and Slater priors are
/// unchanged; a Gaussian center is mapped.
PriorSpec mirrored(const PriorSpec& spec);

/// Hot-path evaluator.  The caller supplies det rho(x), which it has already
/// computed for the physicality test.
class PriorEvaluator {
 public:
  explicit PriorEvaluator(const PriorSpec& spec);

  double operator()(const Coords& x, double det) const;

 private:
  PriorKind kind_;
  Coords center_;
  double inv_two_s2_;
  int exponent_;
};

}  // namespace qutrit
