#pragma once

#include <iosfwd>
#include <vector>

#include "garchmom/distribution.hpp"
#include "garchmom/scan.hpp"

namespace garchmom {

inline constexpr double kMembershipTolerance = 1e-6;

/// Whether (gamma4, gamma6) is produced by some admissible (alpha1, beta1)
/// with a finite sixth moment under `dist`.
Membership region_membership(double gamma4, double gamma6,
                             const ConditionalDistribution& dist,
                             int resolution = 512);

struct BoundaryPoint {
  double gamma4;
  double gamma6_min;
  double gamma6_max;  // +inf where the level curve reaches the sixth-order line
};

struct PhaseRegion {
  ConditionalDistribution dist;
  double gamma4_min;  // eta4, the iid corner
  double gamma4_max;  // supremum of Gamma4 inside the sixth-order region
  std::vector<BoundaryPoint> boundary;  // ascending gamma4, corner first
};

/// Supremum of Gamma4 over the sixth-order existence region, scanned along the
/// sixth-order divergence line at a 1e-9 relative interior offset.
double gamma4_supremum(const ConditionalDistribution& dist, int resolution = 2000);

/// Attained Gamma6 interval on each of `resolution` log-spaced Gamma4 levels
/// in (eta4, gamma4_max). Levels are scanned in parallel.
PhaseRegion region_boundary(const ConditionalDistribution& dist,
                            int resolution = 128, int scan_resolution = 512,
                            unsigned threads = 0);

/// True iff gamma4 > 3 and gamma6 >= (15/9) gamma4^2: some double-gaussian
/// region has its corner at (gamma4, gamma6).
bool family_feasible(double gamma4, double gamma6);

/// `gamma4,gamma6_min,gamma6_max`, one row per boundary point.
void write_region_csv(std::ostream& out, const PhaseRegion& region);

std::string_view to_string(Membership m);

}  // namespace garchmom
