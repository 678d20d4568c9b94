#pragma once

#include <string>
#include <vector>

namespace qutrit {

struct Interval {
  double lo;
  double hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of closed intervals inside [-1, 1]: the set Upsilon of
/// admissible average values.  Overlapping or touching intervals are merged on
/// construction; the stored intervals are sorted and disjoint.
class AverageRegion {
 public:
  explicit AverageRegion(std::vector<Interval> intervals);

  static AverageRegion interval(double lo, double hi);
  static AverageRegion point(double value);
  static AverageRegion whole() { return interval(-1.0, 1.0); }

  bool contains(double value) const;

  /// Total Lebesgue measure; zero when the region is a set of points.
  double measure() const;

  bool is_single_point() const;

  /// Maps u in [0, 1) uniformly onto the union of intervals (measure-weighted).
  /// Requires measure() > 0.
  double map_unit(double u) const;

  /// Midpoint of the outer hull.
  double midpoint() const;

  const std::vector<Interval>& intervals() const { return intervals_; }

  std::string to_string() const;

  friend bool operator==(const AverageRegion&, const AverageRegion&) = default;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace qutrit
