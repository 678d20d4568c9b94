#include "qutrit/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qutrit/errors.hpp"

namespace qutrit {

AverageRegion::AverageRegion(std::vector<Interval> intervals) {
  if (intervals.empty()) throw DomainError("average region is empty");
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw DomainError("malformed interval in average region");
    }
    if (iv.lo < -1.0 || iv.hi > 1.0) {
      throw DomainError("average region must lie inside [-1, 1]");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

AverageRegion AverageRegion::interval(double lo, double hi) {
  return AverageRegion({Interval{lo, hi}});
}

AverageRegion AverageRegion::point(double value) { return interval(value, value); }

bool AverageRegion::contains(double value) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Interval& iv) { return value >= iv.lo && value <= iv.hi; });
}

double AverageRegion::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

bool AverageRegion::is_single_point() const {
  return intervals_.size() == 1 && intervals_.front().lo == intervals_.front().hi;
}

double AverageRegion::map_unit(double u) const {
  double target = u * measure();
  for (const auto& iv : intervals_) {
    const double len = iv.hi - iv.lo;
    if (target < len) return iv.lo + target;
    target -= len;
  }
  return intervals_.back().hi;
}

double AverageRegion::midpoint() const {
  return 0.5 * (intervals_.front().lo + intervals_.back().hi);
}

std::string AverageRegion::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) os << " U ";
    os << '[' << intervals_[i].lo << ", " << intervals_[i].hi << ']';
  }
  return os.str();
}

}  // namespace qutrit
