#pragma once

// Monte Carlo estimation of the integrals
//
//   L_i = \int_{C8} x_i g(x) K(x) chi_B8(x) dx,   Z = \int_{C8} g(x) K(x) chi_B8(x) dx
//
// where g is a prior, chi_B8 the indicator of the physical states and K selects
// the data: a delta function pinning x_3 = mbar (resolved analytically by
// sampling the 7-dimensional slice), an indicator of x_3 in a region, or a
// likelihood depending on the diagonal of rho(x).
//
// Sampling is split into fixed-size chunks indexed from zero.  Each chunk is a
// pure function of (seed, chunk index), partial sums are combined in chunk order
// by pairwise summation, so results are bit-identical for any thread count.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "qutrit/bloch.hpp"
#include "qutrit/priors.hpp"
#include "qutrit/region.hpp"

namespace qutrit {

enum class Sequence { PseudoRandom, LowDiscrepancy };

std::string_view to_string(Sequence s);
Sequence sequence_from_string(std::string_view name);

struct IntegratorConfig {
  /// Initial sample count, rounded up to whole chunks (and, for LowDiscrepancy,
  /// to whole rounds of `replicates` chunks).
  std::uint64_t n_samples = 1u << 20;
  std::uint64_t seed = 20070114;
  Sequence sequence = Sequence::PseudoRandom;
  /// When set, the sample count is doubled until every free component's ratio
  /// standard error is at most this value (or max_samples is reached).
  std::optional<double> target_stderr;
  std::uint64_t max_samples = std::uint64_t{1} << 32;
  std::uint64_t chunk_size = 1u << 16;
  /// Worker threads; 0 means hardware concurrency.  QUTRIT_ASSIGN_THREADS caps
  /// either value.
  unsigned threads = 0;
  /// An effective sample size (sum w)^2 / sum w^2 below this never counts as
  /// meeting target_stderr: with few dominant weights the error estimate itself
  /// is unreliable.
  double min_effective_samples = 1000.0;
  /// Independent digital shifts of the Sobol sequence (LowDiscrepancy only);
  /// the spread between them provides the error estimate.
  unsigned replicates = 16;
  /// Sample the bounding box of the support (x_8 where the diagonal of rho is
  /// non-negative, off-diagonal pairs within the radius allowed by the 2x2
  /// principal minors) instead of the full C8 slice.  Both are uniform over a
  /// box containing the support, so the estimator targets the same ratio.
  bool tight_box = true;

  /// Throws DomainError on inconsistent values.
  void validate() const;
};

/// Worker count actually used for `requested` after applying hardware
/// concurrency and the QUTRIT_ASSIGN_THREADS cap.
unsigned resolve_thread_count(unsigned requested);

struct SliceIntegralEstimate {
  std::array<double, kBlochDim> L{};
  double Z = 0.0;
  /// L_i / Z.  For a pinned slice the x_3 entry is exactly mbar.
  std::array<double, kBlochDim> ratio{};
  std::array<double, kBlochDim> stderr_ratio{};
  std::uint64_t n_samples = 0;
  std::uint64_t n_physical = 0;
  /// Kish effective sample size (sum w)^2 / sum w^2 of the physical samples.
  double effective_samples = 0.0;
  std::uint64_t seed = 0;
  Sequence sequence = Sequence::PseudoRandom;
  bool target_reached = false;
  /// Index of the pinned coordinate (kX3) for slice integrals.
  std::optional<std::size_t> pinned;

  /// Largest standard error among the non-pinned components.
  double max_stderr() const;
};

/// Integral over the slice {x in C8 : x_3 = mbar}.  Throws DegenerateSlice when
/// |mbar| = 1 (the slice of B8 has measure zero) or when no physical sample is
/// found within max_samples.
SliceIntegralEstimate integrate_slice(double mbar, const PriorSpec& prior,
                                      const IntegratorConfig& cfg);

/// Integral over C8 with the indicator [x_3 in region].  Samples x_3 uniformly
/// on the region only; the excluded part of C8 contributes nothing.  Rejects
/// regions with empty interior.
SliceIntegralEstimate integrate_slice_with_indicator(const AverageRegion& region,
                                                     const PriorSpec& prior,
                                                     const IntegratorConfig& cfg);

/// Extra weight that depends only on the diagonal (rho_11, rho_22, rho_33) of a
/// physical state.  Must be thread-safe.
using DiagonalWeight = std::function<double(double, double, double)>;

/// Integral over all of C8 with weight g(x) * extra(diag rho(x)) * chi_B8(x).
/// Throws NumericalUnderflow when physical samples exist but every weight is 0.
SliceIntegralEstimate integrate_box(const PriorSpec& prior, const DiagonalWeight& extra,
                                    const IntegratorConfig& cfg);

}  // namespace qutrit
