#include "garchmom/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "garchmom/csv.hpp"
#include "garchmom/fitting.hpp"
#include "garchmom/garch.hpp"
#include "garchmom/parallel.hpp"

namespace garchmom {

Membership region_membership(double gamma4, double gamma6, const ConditionalDistribution& dist,
                             int resolution) {
  const double eta4 = dist.eta4();
  if (std::abs(gamma4 - eta4) <= 1e-12 * eta4) {
    // alpha1 = 0 is the only model at this level and it pins Gamma6 to eta6.
    return std::abs(gamma6 - dist.eta6()) <= kMembershipTolerance * dist.eta6()
               ? Membership::boundary
               : Membership::outside;
  }
  if (!(gamma4 > eta4)) return Membership::outside;
  const auto profile = level_curve_profile(gamma4, dist, resolution);
  if (profile.empty()) return Membership::outside;
  return classify(profile, gamma6, kMembershipTolerance);
}

double gamma4_supremum(const ConditionalDistribution& dist, int resolution) {
  // mu(alpha1, 0, 3) = eta6 alpha1^3 < 1 bounds the sixth-order line.
  const double alpha_end = std::cbrt(1.0 / dist.eta6());
  double best = dist.eta4();
  for (int i = 1; i < resolution; ++i) {
    const double alpha1 = alpha_end * i / resolution;
    const double beta_line = divergence_beta(alpha1, 3, dist);
    const double beta1 = beta_line * (1.0 - 1e-9);
    if (moment_existence_order(alpha1, beta1, dist, 3) < 3) continue;
    best = std::max(best, garchmom::gamma4(alpha1, beta1, dist));
  }
  return best;
}

PhaseRegion region_boundary(const ConditionalDistribution& dist, int resolution,
                            int scan_resolution, unsigned threads) {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  const double eta4 = dist.eta4();
  const double g4_max = gamma4_supremum(dist);

  std::vector<std::optional<BoundaryPoint>> levels(resolution);
  parallel_for(
      levels.size(),
      [&](std::size_t i) {
        const double t = static_cast<double>(i + 1) / resolution;
        const double g4 = eta4 * std::pow(g4_max / eta4, t);
        if (!(g4 > eta4)) return;
        const auto profile = level_curve_profile(g4, dist, scan_resolution);
        if (profile.empty()) return;
        levels[i] = BoundaryPoint{g4, profile.min(), profile.max()};
      },
      threads);

  PhaseRegion region{dist, eta4, g4_max, {}};
  region.boundary.push_back({eta4, dist.eta6(), dist.eta6()});
  for (const auto& p : levels) {
    if (p) region.boundary.push_back(*p);
  }
  return region;
}

bool family_feasible(double gamma4, double gamma6) {
  // 9 G6 >= 15 G4^2 keeps the integer-valued presets exact.
  return gamma4 > 3.0 && 9.0 * gamma6 >= 15.0 * gamma4 * gamma4;
}

void write_region_csv(std::ostream& out, const PhaseRegion& region) {
  out << "gamma4,gamma6_min,gamma6_max\n";
  for (const auto& p : region.boundary) {
    out << format_double(p.gamma4) << ',' << format_double(p.gamma6_min) << ','
        << format_double(p.gamma6_max) << '\n';
  }
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::inside:
      return "inside";
    case Membership::outside:
      return "outside";
    case Membership::boundary:
      return "boundary";
  }
  return "unknown";
}

}  // namespace garchmom
