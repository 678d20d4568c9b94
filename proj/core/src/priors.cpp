#include "qutrit/priors.hpp"

#include <cmath>
#include <string>

#include "qutrit/detail/closed_form.hpp"
#include "qutrit/errors.hpp"

namespace qutrit {

std::string_view to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::Constant:
      return "constant";
    case PriorKind::GaussianLike:
      return "gaussian";
    case PriorKind::Slater:
      return "slater";
  }
  return "unknown";
}

PriorKind prior_kind_from_string(std::string_view name) {
  if (name == "constant") return PriorKind::Constant;
  if (name == "gaussian") return PriorKind::GaussianLike;
  if (name == "slater") return PriorKind::Slater;
  throw DomainError("unknown prior kind '" + std::string(name) + "'");
}

PriorSpec PriorSpec::constant() { return {}; }

PriorSpec PriorSpec::gaussian(const BlochVector& center, double breadth) {
  PriorSpec p;
  p.kind = PriorKind::GaussianLike;
  p.center = center;
  p.breadth = breadth;
  p.validate();
  return p;
}

PriorSpec PriorSpec::slater(int exponent) {
  PriorSpec p;
  p.kind = PriorKind::Slater;
  p.slater_exponent = exponent;
  p.validate();
  return p;
}

void PriorSpec::validate() const {
  if (!(breadth > 0.0) || !std::isfinite(breadth)) {
    throw DomainError("Gaussian breadth must be positive and finite");
  }
  if (slater_exponent < 0) throw DomainError("Slater exponent must be non-negative");
}

PriorSpec mirrored(const PriorSpec& spec) {
  PriorSpec out = spec;
  out.center = symmetry_map(spec.center);
  return out;
}

PriorEvaluator::PriorEvaluator(const PriorSpec& spec)
    : kind_(spec.kind),
      center_(spec.center.coords()),
      inv_two_s2_(1.0 / (2.0 * spec.breadth * spec.breadth)),
      exponent_(spec.slater_exponent) {
  spec.validate();
}

double PriorEvaluator::operator()(const Coords& x, double det) const {
  switch (kind_) {
    case PriorKind::Constant:
      return 1.0;
    case PriorKind::GaussianLike: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < kBlochDim; ++i) {
        const double d = x[i] - center_[i];
        d2 += d * d;
      }
      return std::exp(-d2 * inv_two_s2_);
    }
    case PriorKind::Slater:
      // Negative det only occurs outside B8, where the posterior vanishes anyway.
      return det > 0.0 ? std::pow(det, exponent_) : (exponent_ == 0 ? 1.0 : 0.0);
  }
  return 0.0;
}

double eval_prior(const PriorSpec& spec, const BlochVector& x) {
  const auto d = detail::diagonal_of(x.x3(), x.x8());
  const double g = PriorEvaluator(spec)(x.coords(), detail::det_of(x.coords(), d));
  if (!std::isfinite(g)) throw DomainError("prior evaluated to a non-finite value");
  return g;
}

}  // namespace qutrit
