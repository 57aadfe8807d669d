#pragma once

#include <functional>
#include <vector>

namespace garchmom {

/// A one-dimensional profile of a moment along a curve parameter x.
/// The function reports +inf wherever the moment does not exist; every
/// transition from finite to infinite is treated as divergence to +inf.
struct ScanNode {
  double x;
  double value;
};

struct ScanSegment {
  std::vector<ScanNode> nodes;  // increasing x, finite values, refined extrema
  bool diverges_low = false;    // value -> +inf as x decreases to low_edge
  bool diverges_high = false;   // value -> +inf as x increases to high_edge
  double low_edge = 0.0;
  double high_edge = 0.0;

  double min() const;
  double max() const;  // +inf when either end diverges
};

struct ScanProfile {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<ScanSegment> segments;

  bool empty() const noexcept { return segments.empty(); }
  double min() const;
  double max() const;
};

using ScalarFunction = std::function<double(double)>;

/// Samples f on (lo, hi] at `resolution` uniform points plus a few points
/// clustered at lo, splits into finite segments, locates the existence edges
/// by bisection and inserts Brent-refined interior extrema.
ScanProfile scan_profile(const ScalarFunction& f, double lo, double hi,
                         int resolution);

/// All x in the profile with f(x) == target, ascending. Brackets come from
/// consecutive nodes and from the divergent ends of each segment.
std::vector<double> level_crossings(const ScanProfile& profile,
                                    const ScalarFunction& f, double target);

enum class Membership { inside, outside, boundary };

/// Classifies target against the attained value ranges of the segments;
/// within rel_tol of a finite range end counts as boundary.
Membership classify(const ScanProfile& profile, double target, double rel_tol);

}  // namespace garchmom
