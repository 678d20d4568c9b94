#include "qutrit/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <boost/random/sobol.hpp>

#include "qutrit/detail/closed_form.hpp"
#include "qutrit/errors.hpp"

namespace qutrit {

std::string_view to_string(Sequence s) {
  return s == Sequence::PseudoRandom ? "pseudo" : "lowdisc";
}

Sequence sequence_from_string(std::string_view name) {
  if (name == "pseudo") return Sequence::PseudoRandom;
  if (name == "lowdisc") return Sequence::LowDiscrepancy;
  throw DomainError("unknown sequence '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
  if (n_samples < 10'000) throw DomainError("n_samples must be at least 1e4");
  if (chunk_size == 0) throw DomainError("chunk_size must be positive");
  if (max_samples < n_samples) throw DomainError("max_samples must be >= n_samples");
  if (target_stderr && !(*target_stderr > 0.0)) {
    throw DomainError("target_stderr must be positive");
  }
  if (sequence == Sequence::LowDiscrepancy && replicates < 2) {
    throw DomainError("low-discrepancy mode needs at least two replicates");
  }
}

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QUTRIT_ASSIGN_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      n = std::min<unsigned long>(n, cap);
    }
  }
  return n;
}

double SliceIntegralEstimate::max_stderr() const {
  double m = 0.0;
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    if (pinned && *pinned == i) continue;
    m = std::max(m, stderr_ratio[i]);
  }
  return m;
}

namespace {

using detail::Diagonal;

constexpr double kUnit53 = 0x1.0p-53;

// Raw sums over a run of samples: sw = sum w, sy_i = sum x_i w and the second
// moments needed for the delta-method variance of sy_i / sw.
struct Sums {
  std::uint64_t n = 0;
  std::uint64_t n_physical = 0;
  double sw = 0.0;
  double sww = 0.0;
  Coords sy{};
  Coords syy{};
  Coords syw{};

  Sums& operator+=(const Sums& o) {
    n += o.n;
    n_physical += o.n_physical;
    sw += o.sw;
    sww += o.sww;
    for (std::size_t i = 0; i < kBlochDim; ++i) {
      sy[i] += o.sy[i];
      syy[i] += o.syy[i];
      syw[i] += o.syw[i];
    }
    return *this;
  }
};

Sums pairwise_sum(std::span<const Sums> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts.front();
  const std::size_t mid = parts.size() / 2;
  Sums s = pairwise_sum(parts.first(mid));
  s += pairwise_sum(parts.subspan(mid));
  return s;
}

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream, std::uint32_t tag) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32), tag};
}

class PseudoSource {
 public:
  PseudoSource(std::uint64_t seed, std::uint64_t chunk) {
    auto seq = make_seed_seq(seed, chunk, 0x9e3779b9u);
    gen_.seed(seq);
  }
  void start_point() {}
  double next() { return static_cast<double>(gen_() >> 11) * kUnit53; }

 private:
  std::mt19937_64 gen_;
};

// Sobol points (Joe-Kuo direction numbers as shipped with Boost.Random) with a
// random digital shift per replicate.
class SobolSource {
 public:
  SobolSource(std::size_t dims, std::uint64_t start, std::span<const std::uint64_t> shift)
      : engine_(dims), dims_(dims) {
    std::copy(shift.begin(), shift.end(), shift_.begin());
    engine_.seed(start);
  }
  void start_point() {
    for (std::size_t d = 0; d < dims_; ++d) {
      buf_[d] = static_cast<double>((engine_() ^ shift_[d]) >> 11) * kUnit53;
    }
    pos_ = 0;
  }
  double next() { return buf_[pos_++]; }

 private:
  boost::random::sobol engine_;
  std::size_t dims_;
  std::array<std::uint64_t, kBlochDim> shift_{};
  std::array<double, kBlochDim> buf_{};
  std::size_t pos_ = 0;
};

std::array<std::uint64_t, kBlochDim> digital_shift(std::uint64_t seed, std::uint64_t replicate) {
  auto seq = make_seed_seq(seed, replicate, 0x50b01u);
  std::mt19937_64 gen(seq);
  std::array<std::uint64_t, kBlochDim> s;
  for (auto& v : s) v = gen();
  return s;
}

// Where x_3 comes from, and the box the remaining coordinates are drawn from.
struct Domain {
  bool pinned = false;
  double mbar = 0.0;
  const AverageRegion* region = nullptr;

  double x8_lo = kX8Min;
  double x8_hi = kX8Max;
  // Half-widths for the pairs (x1,x2), (x4,x5), (x6,x7).
  double r12 = 1.0;
  double r13 = 1.0;
  double r23 = 1.0;

  std::size_t dims() const { return pinned ? kBlochDim - 1 : kBlochDim; }

  double x3_measure() const { return pinned ? 1.0 : region->measure(); }

  // Lebesgue measure of the sampled box (7-dimensional when pinned).
  double volume() const {
    const double pairs = 4.0 * r12 * r12 * 4.0 * r13 * r13 * 4.0 * r23 * r23;
    return x3_measure() * (x8_hi - x8_lo) * pairs;
  }

  // Shrinks the box to one containing every physical point: the diagonal must
  // be non-negative and |rho_jk|^2 <= rho_jj rho_kk.
  void tighten() {
    const double x3_lo = pinned ? mbar : region->intervals().front().lo;
    const double x3_hi = pinned ? mbar : region->intervals().back().hi;
    double min_abs_x3 = pinned ? std::abs(mbar) : std::numeric_limits<double>::infinity();
    if (!pinned) {
      for (const auto& iv : region->intervals()) {
        min_abs_x3 = std::min(min_abs_x3, iv.lo <= 0.0 && iv.hi >= 0.0
                                              ? 0.0
                                              : std::min(std::abs(iv.lo), std::abs(iv.hi)));
      }
    }
    // rho_11, rho_33 >= 0  <=>  x8 >= -2/sqrt3 + sqrt3 |x3|
    x8_lo = std::max(kX8Min, kX8Min + std::numbers::sqrt3 * min_abs_x3);
    x8_hi = kX8Max;
    const double a_max = detail::diagonal_of(x3_hi, x8_hi).a;
    const double b_max = detail::diagonal_of(0.0, x8_lo).b;
    const double c_max = detail::diagonal_of(x3_lo, x8_hi).c;
    r12 = std::min(1.0, 2.0 * std::sqrt(std::max(0.0, a_max * b_max)));
    r13 = std::min(1.0, 2.0 * std::sqrt(std::max(0.0, a_max * c_max)));
    r23 = std::min(1.0, 2.0 * std::sqrt(std::max(0.0, b_max * c_max)));
  }
};

struct NoExtra {
  double operator()(double, double, double) const { return 1.0; }
};

template <class Extra>
struct Weight {
  PriorEvaluator prior;
  Extra extra;

  double operator()(const Coords& x, const Diagonal& d, double det) const {
    const double g = prior(x, det);
    if (g == 0.0) return 0.0;
    return g * extra(d.a, d.b, d.c);
  }
};

template <class Source, class W>
void sample_chunk(Source& src, std::uint64_t count, const Domain& dom, const W& weight,
                  Sums& out) {
  const double span8 = dom.x8_hi - dom.x8_lo;
  Coords x{};
  for (std::uint64_t k = 0; k < count; ++k) {
    src.start_point();
    const double x3 = dom.pinned ? dom.mbar : dom.region->map_unit(src.next());
    const double x8 = dom.x8_lo + span8 * src.next();
    const Diagonal d = detail::diagonal_of(x3, x8);
    if (d.a < 0.0 || d.c < 0.0) continue;
    // 2x2 principal minors: |rho_jk|^2 <= rho_jj rho_kk.  Necessary for PSD,
    // so rejecting early leaves the indicator unchanged.
    x[0] = dom.r12 * (2.0 * src.next() - 1.0);
    x[1] = dom.r12 * (2.0 * src.next() - 1.0);
    if (x[0] * x[0] + x[1] * x[1] > 4.0 * d.a * d.b) continue;
    x[3] = dom.r13 * (2.0 * src.next() - 1.0);
    x[4] = dom.r13 * (2.0 * src.next() - 1.0);
    if (x[3] * x[3] + x[4] * x[4] > 4.0 * d.a * d.c) continue;
    x[5] = dom.r23 * (2.0 * src.next() - 1.0);
    x[6] = dom.r23 * (2.0 * src.next() - 1.0);
    if (x[5] * x[5] + x[6] * x[6] > 4.0 * d.b * d.c) continue;
    x[kX3] = x3;
    x[kX8] = x8;
    const double det = detail::det_of(x, d);
    if (!detail::psd_from(detail::purity_of(x, d), det)) continue;

    ++out.n_physical;
    const double w = weight(x, d, det);
    if (w == 0.0) continue;
    out.sw += w;
    out.sww += w * w;
    for (std::size_t i = 0; i < kBlochDim; ++i) {
      const double y = x[i] * w;
      out.sy[i] += y;
      out.syy[i] += y * y;
      out.syw[i] += y * w;
    }
  }
  out.n += count;
}

class ParallelChunks {
 public:
  explicit ParallelChunks(unsigned threads) : threads_(threads) {}

  template <class F>
  void run(std::uint64_t first, std::uint64_t last, std::vector<Sums>& out, F&& f) const {
    out.resize(last);
    std::atomic<std::uint64_t> next{first};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= last) return;
        try {
          out[c] = f(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(last);
          return;
        }
      }
    };
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(threads_, last - first));
    if (n <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(n);
      for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
  }

 private:
  unsigned threads_;
};

struct Moments {
  double n_units = 0.0;
  double sw = 0.0;
  double sww = 0.0;
  Coords sy{};
  Coords syy{};
  Coords syw{};
};

// Per-sample moments for pseudo-random sampling.
Moments sample_moments(const Sums& total) {
  return {static_cast<double>(total.n), total.sw, total.sww, total.sy, total.syy, total.syw};
}

// Replicate-level moments for randomised QMC: each replicate total (Y_r, W_r)
// is one independent unit.
Moments replicate_moments(const std::vector<Sums>& parts, unsigned replicates) {
  Moments m;
  m.n_units = replicates;
  std::vector<Sums> per_rep;
  for (unsigned r = 0; r < replicates; ++r) {
    per_rep.clear();
    for (std::size_t c = r; c < parts.size(); c += replicates) per_rep.push_back(parts[c]);
    const Sums t = pairwise_sum(per_rep);
    m.sw += t.sw;
    m.sww += t.sw * t.sw;
    for (std::size_t i = 0; i < kBlochDim; ++i) {
      m.sy[i] += t.sy[i];
      m.syy[i] += t.sy[i] * t.sy[i];
      m.syw[i] += t.sy[i] * t.sw;
    }
  }
  return m;
}

SliceIntegralEstimate finalize(const std::vector<Sums>& parts, const Domain& dom,
                               const IntegratorConfig& cfg) {
  const Sums total = pairwise_sum(parts);
  const Moments m = cfg.sequence == Sequence::PseudoRandom
                        ? sample_moments(total)
                        : replicate_moments(parts, cfg.replicates);

  SliceIntegralEstimate est;
  est.n_samples = total.n;
  est.n_physical = total.n_physical;
  est.seed = cfg.seed;
  est.sequence = cfg.sequence;
  if (dom.pinned) est.pinned = kX3;

  const double scale = dom.volume() / static_cast<double>(total.n);
  est.Z = scale * total.sw;
  if (total.sw <= 0.0) return est;
  est.effective_samples = total.sw * total.sw / total.sww;

  const double bessel = m.n_units > 1.0 ? m.n_units / (m.n_units - 1.0) : 0.0;
  for (std::size_t i = 0; i < kBlochDim; ++i) {
    if (dom.pinned && i == kX3) {
      // x_3 is constant on the slice, so L_3 / Z = mbar identically.
      est.ratio[i] = dom.mbar;
      est.L[i] = dom.mbar * est.Z;
      est.stderr_ratio[i] = 0.0;
      continue;
    }
    const double r = total.sy[i] / total.sw;
    est.ratio[i] = r;
    est.L[i] = scale * total.sy[i];
    const double ss = std::max(0.0, m.syy[i] - 2.0 * r * m.syw[i] + r * r * m.sww);
    est.stderr_ratio[i] = std::sqrt(ss * bessel) / m.sw;
  }
  return est;
}

template <class Extra>
SliceIntegralEstimate integrate(Domain dom, const PriorSpec& prior, const Extra& extra,
                                const IntegratorConfig& cfg) {
  cfg.validate();
  if (cfg.tight_box) dom.tighten();
  prior.validate();
  const Weight<Extra> weight{PriorEvaluator(prior), extra};
  const ParallelChunks pool(resolve_thread_count(cfg.threads));
  const bool qmc = cfg.sequence == Sequence::LowDiscrepancy;
  const std::uint64_t round = qmc ? cfg.replicates : 1;

  auto round_up = [&](std::uint64_t samples) {
    std::uint64_t chunks = (samples + cfg.chunk_size - 1) / cfg.chunk_size;
    return (chunks + round - 1) / round * round;
  };
  const std::uint64_t max_chunks = std::max(round_up(cfg.max_samples), round);

  std::vector<std::array<std::uint64_t, kBlochDim>> shifts;
  if (qmc) {
    for (unsigned r = 0; r < cfg.replicates; ++r) shifts.push_back(digital_shift(cfg.seed, r));
  }

  auto chunk = [&](std::uint64_t c) {
    Sums s;
    if (qmc) {
      const std::uint64_t block = c / cfg.replicates;
      SobolSource src(dom.dims(), block * cfg.chunk_size, shifts[c % cfg.replicates]);
      sample_chunk(src, cfg.chunk_size, dom, weight, s);
    } else {
      PseudoSource src(cfg.seed, c);
      sample_chunk(src, cfg.chunk_size, dom, weight, s);
    }
    return s;
  };

  std::vector<Sums> parts;
  std::uint64_t done = 0;
  std::uint64_t goal = std::min(round_up(cfg.n_samples), max_chunks);
  SliceIntegralEstimate est;
  for (;;) {
    pool.run(done, goal, parts, chunk);
    done = goal;
    est = finalize(parts, dom, cfg);
    if (!cfg.target_stderr) break;
    if (est.effective_samples >= cfg.min_effective_samples && est.Z > 0.0 &&
        est.max_stderr() <= *cfg.target_stderr) {
      est.target_reached = true;
      break;
    }
    if (done >= max_chunks) break;
    goal = std::min(2 * done, max_chunks);
  }

  if (est.n_physical == 0) {
    throw DegenerateSlice("no physical sample among " + std::to_string(est.n_samples) +
                          " draws; the slice of B8 is (numerically) degenerate");
  }
  if (!(est.Z > 0.0)) {
    throw NumericalUnderflow("all " + std::to_string(est.n_physical) +
                             " physical samples have zero weight");
  }
  return est;
}

}  // namespace

SliceIntegralEstimate integrate_slice(double mbar, const PriorSpec& prior,
                                      const IntegratorConfig& cfg) {
  if (!(std::abs(mbar) <= 1.0)) throw DomainError("average value must lie in [-1, 1]");
  if (std::abs(mbar) == 1.0) {
    throw DegenerateSlice("the slice x3 = +-1 of B8 has measure zero");
  }
  Domain dom;
  dom.pinned = true;
  dom.mbar = mbar;
  return integrate(dom, prior, NoExtra{}, cfg);
}

SliceIntegralEstimate integrate_slice_with_indicator(const AverageRegion& region,
                                                     const PriorSpec& prior,
                                                     const IntegratorConfig& cfg) {
  if (!(region.measure() > 0.0)) {
    throw DomainError("average region has empty interior: " + region.to_string());
  }
  Domain dom;
  dom.region = &region;
  return integrate(dom, prior, NoExtra{}, cfg);
}

SliceIntegralEstimate integrate_box(const PriorSpec& prior, const DiagonalWeight& extra,
                                    const IntegratorConfig& cfg) {
  const AverageRegion whole = AverageRegion::whole();
  Domain dom;
  dom.region = &whole;
  if (!extra) return integrate(dom, prior, NoExtra{}, cfg);
  return integrate(dom, prior, [&](double a, double b, double c) { return extra(a, b, c); },
                   cfg);
}

}  // namespace qutrit
