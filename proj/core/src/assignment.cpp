#include "qutrit/assignment.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qutrit/errors.hpp"

namespace qutrit {

std::string_view to_string(AssignmentMethod m) {
  switch (m) {
    case AssignmentMethod::LargeN_Delta:
      return "large-n";
    case AssignmentMethod::LargeN_Region:
      return "large-n-region";
    case AssignmentMethod::FiniteN:
      return "finite-n";
  }
  return "unknown";
}

AssignmentMethod method_from_string(std::string_view name) {
  if (name == "large-n") return AssignmentMethod::LargeN_Delta;
  if (name == "large-n-region") return AssignmentMethod::LargeN_Region;
  if (name == "finite-n") return AssignmentMethod::FiniteN;
  throw DomainError("unknown assignment method '" + std::string(name) + "'");
}

double FrequencyVector::average() const {
  return (static_cast<double>(n1) - static_cast<double>(n3)) / static_cast<double>(total());
}

const SliceIntegralEstimate* AssignmentResult::estimate() const {
  if (const auto* e = std::get_if<SliceIntegralEstimate>(&diagnostics)) return e;
  if (const auto* f = std::get_if<FiniteNLedger>(&diagnostics)) return &f->estimate;
  return nullptr;
}

namespace {

// Below this effective sample size the standard errors are too unreliable to
// call anything a symmetry violation.
constexpr double kMinEffectiveForSymmetryCheck = 1000.0;

AssignmentResult endpoint_result(double mbar, const PriorSpec& prior) {
  AssignmentResult r;
  r.x = mbar > 0 ? pure_state_plus() : pure_state_minus();
  // Build the projector directly; the Bloch sum leaves ~1e-16 residues.
  Matrix3c m = Matrix3c::Zero();
  m(mbar > 0 ? 0 : 2, mbar > 0 ? 0 : 2) = 1.0;
  r.rho = DensityMatrix(m);
  r.mbar = mbar;
  r.prior = prior;
  r.method = AssignmentMethod::LargeN_Delta;
  r.analytic = true;
  return r;
}

AssignmentResult from_full_estimate(const SliceIntegralEstimate& est, const PriorSpec& prior,
                                    AssignmentMethod method) {
  AssignmentResult r;
  r.x = BlochVector(est.ratio);
  r.rho = bloch_to_density(r.x);
  r.stderr_x = est.stderr_ratio;
  r.mbar = est.ratio[kX3];
  r.prior = prior;
  r.method = method;
  r.diagnostics = est;
  return r;
}

}  // namespace

double max_suppressed_significance(const SliceIntegralEstimate& est) {
  double worst = 0.0;
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    if (i == kX3 || i == kX8) continue;
    const double v = std::abs(est.ratio[i]);
    const double se = est.stderr_ratio[i];
    if (v == 0.0) continue;
    worst = std::max(worst, se > 0.0 ? v / se : std::numeric_limits<double>::infinity());
  }
  return worst;
}

AssignmentResult assign_large_n(double mbar, const PriorSpec& prior,
                                const IntegratorConfig& cfg) {
  if (!(std::abs(mbar) <= 1.0)) throw DomainError("average value must lie in [-1, 1]");
  if (std::abs(mbar) == 1.0) return endpoint_result(mbar, prior);

  if (mbar < 0.0) {
    AssignmentResult r = assign_large_n(-mbar, mirrored(prior), cfg);
    r.x = symmetry_map(r.x);
    r.rho = bloch_to_density(r.x);
    Coords se = r.stderr_x;
    r.stderr_x = symmetry_map(se);
    for (auto& v : r.stderr_x) v = std::abs(v);
    r.mbar = mbar;
    r.prior = prior;
    r.mirrored = true;
    return r;
  }

  const SliceIntegralEstimate est = integrate_slice(mbar, prior, cfg);
  if (est.effective_samples >= kMinEffectiveForSymmetryCheck) {
    const double sig = max_suppressed_significance(est);
    if (sig > kSuppressionSigma) {
      throw SymmetryViolation("a component that vanishes by symmetry is " + std::to_string(sig) +
                              " standard errors from zero at mbar = " + std::to_string(mbar));
    }
  }

  Coords x{};
  x[kX3] = mbar;
  x[kX8] = est.ratio[kX8];
  AssignmentResult r;
  r.x = BlochVector(x);
  r.rho = bloch_to_density(r.x);
  r.stderr_x[kX8] = est.stderr_ratio[kX8];
  r.mbar = mbar;
  r.prior = prior;
  r.method = AssignmentMethod::LargeN_Delta;
  r.diagnostics = est;
  return r;
}

AssignmentResult assign_large_n_region(const AverageRegion& region, const PriorSpec& prior,
                                       const IntegratorConfig& cfg) {
  if (region.is_single_point()) {
    return assign_large_n(region.intervals().front().lo, prior, cfg);
  }
  const auto est = integrate_slice_with_indicator(region, prior, cfg);
  return from_full_estimate(est, prior, AssignmentMethod::LargeN_Region);
}

std::vector<FrequencyVector> enumerate_phi(const AverageRegion& region, unsigned N) {
  if (N == 0) throw DomainError("number of measurements must be at least 1");
  std::vector<FrequencyVector> phi;
  for (unsigned n1 = 0; n1 <= N; ++n1) {
    for (unsigned n2 = 0; n2 <= N - n1; ++n2) {
      const FrequencyVector f{n1, n2, N - n1 - n2};
      if (region.contains(f.average())) phi.push_back(f);
    }
  }
  return phi;
}

FrequencyLikelihood::FrequencyLikelihood(std::vector<FrequencyVector> phi, unsigned N) {
  const double log_n_fact = std::lgamma(static_cast<double>(N) + 1.0);
  terms_.reserve(phi.size());
  for (const auto& f : phi) {
    const double n1 = f.n1, n2 = f.n2, n3 = f.n3;
    terms_.push_back(
        {n1, n2, n3,
         log_n_fact - std::lgamma(n1 + 1.0) - std::lgamma(n2 + 1.0) - std::lgamma(n3 + 1.0)});
  }
}

double FrequencyLikelihood::operator()(double p1, double p2, double p3) const {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const double l1 = p1 > 0.0 ? std::log(p1) : kNegInf;
  const double l2 = p2 > 0.0 ? std::log(p2) : kNegInf;
  const double l3 = p3 > 0.0 ? std::log(p3) : kNegInf;
  auto log_term = [&](const Term& t) {
    double v = t.log_coefficient;
    if (t.n1 > 0) v += t.n1 * l1;
    if (t.n2 > 0) v += t.n2 * l2;
    if (t.n3 > 0) v += t.n3 * l3;
    return v;
  };
  double best = kNegInf;
  for (const auto& t : terms_) best = std::max(best, log_term(t));
  if (best == kNegInf) return 0.0;
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::exp(log_term(t) - best);
  return std::exp(best) * sum;
}

AssignmentResult assign_finite_n(const AverageRegion& region, unsigned N, const PriorSpec& prior,
                                 const IntegratorConfig& cfg) {
  auto phi = enumerate_phi(region, N);
  if (phi.empty()) {
    throw IncompatibleData("no frequency vector of " + std::to_string(N) +
                           " outcomes has its average in " + region.to_string());
  }
  const FrequencyLikelihood likelihood(phi, N);
  SliceIntegralEstimate est;
  try {
    est = integrate_box(
        prior, [&](double a, double b, double c) { return likelihood(a, b, c); }, cfg);
  } catch (const NumericalUnderflow& e) {
    throw NumericalUnderflow(std::string(e.what()) + "; N = " + std::to_string(N) +
                             " is too large for the finite-N path, use the large-N limit");
  }
  AssignmentResult r = from_full_estimate(est, prior, AssignmentMethod::FiniteN);
  r.diagnostics = FiniteNLedger{N, std::move(phi), est};
  return r;
}

}  // namespace qutrit
