#include "garchmom/scan.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace garchmom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval(const ScalarFunction& f, double x) {
  const double v = f(x);
  return std::isfinite(v) ? v : kInf;
}

// Edge between a finite point and an infinite one, returned on the finite side.
double locate_edge(const ScalarFunction& f, double finite_x, double infinite_x) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (finite_x + infinite_x);
    if (mid == finite_x || mid == infinite_x) break;
    if (std::isfinite(eval(f, mid))) {
      finite_x = mid;
    } else {
      infinite_x = mid;
    }
  }
  return finite_x;
}

void refine_extrema(const ScalarFunction& f, ScanSegment& seg) {
  auto& nodes = seg.nodes;
  std::vector<ScanNode> extra;
  constexpr int bits = std::numeric_limits<double>::digits / 2;
  for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
    const double left = nodes[i].value - nodes[i - 1].value;
    const double right = nodes[i + 1].value - nodes[i].value;
    if (!(left * right < 0.0)) continue;
    const double sign = left > 0.0 ? -1.0 : 1.0;  // maximise peaks, minimise troughs
    std::uintmax_t iters = 200;
    const auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double t) {
          const double v = eval(f, t);
          return std::isfinite(v) ? sign * v : kInf;
        },
        nodes[i - 1].x, nodes[i + 1].x, bits, iters);
    const double v = sign * fx;
    if (std::isfinite(v) && sign * v < sign * nodes[i].value && x != nodes[i].x) {
      extra.push_back({x, v});
    }
  }
  if (extra.empty()) return;
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  std::sort(nodes.begin(), nodes.end(),
            [](const ScanNode& a, const ScanNode& b) { return a.x < b.x; });
}

double solve_bracket(const ScalarFunction& g, double a, double b, double ga, double gb) {
  std::uintmax_t iters = 300;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(), iters);
  const double glo = g(lo);
  const double ghi = g(hi);
  return std::abs(glo) <= std::abs(ghi) ? lo : hi;
}

// Walks from `from` toward a divergent edge until g turns positive.
std::optional<double> root_toward_edge(const ScalarFunction& g, double from, double g_from,
                                       double edge) {
  double prev = from;
  double g_prev = g_from;
  const double span = edge - from;
  for (int k = 1; k <= 1000; ++k) {
    const double x = edge - span * std::pow(0.5, 0.25 * k);
    if (x == prev) continue;
    const double gx = g(x);
    if (!std::isfinite(gx)) break;
    if (gx >= 0.0) {
      if (gx == 0.0) return x;
      return solve_bracket(g, std::min(prev, x), std::max(prev, x), prev < x ? g_prev : gx,
                           prev < x ? gx : g_prev);
    }
    prev = x;
    g_prev = gx;
  }
  return std::nullopt;
}

}  // namespace

double ScanSegment::min() const {
  double m = kInf;
  for (const auto& n : nodes) m = std::min(m, n.value);
  return m;
}

double ScanSegment::max() const {
  if (diverges_low || diverges_high) return kInf;
  double m = -kInf;
  for (const auto& n : nodes) m = std::max(m, n.value);
  return m;
}

double ScanProfile::min() const {
  double m = kInf;
  for (const auto& s : segments) m = std::min(m, s.min());
  return m;
}

double ScanProfile::max() const {
  double m = -kInf;
  for (const auto& s : segments) m = std::max(m, s.max());
  return m;
}

ScanProfile scan_profile(const ScalarFunction& f, double lo, double hi, int resolution) {
  ScanProfile profile;
  profile.lo = lo;
  profile.hi = hi;
  if (resolution < 2 || !(hi > lo)) return profile;

  std::vector<double> ts;
  for (double t : {1e-5, 1e-4, 1e-3}) {
    if (t < 1.0 / resolution) ts.push_back(t);
  }
  for (int i = 1; i <= resolution; ++i) ts.push_back(static_cast<double>(i) / resolution);

  std::vector<ScanNode> samples;
  samples.reserve(ts.size());
  for (double t : ts) {
    const double x = t == 1.0 ? hi : lo + (hi - lo) * t;
    samples.push_back({x, eval(f, x)});
  }

  std::size_t i = 0;
  while (i < samples.size()) {
    if (!std::isfinite(samples[i].value)) {
      ++i;
      continue;
    }
    ScanSegment seg;
    const std::size_t first = i;
    while (i < samples.size() && std::isfinite(samples[i].value)) seg.nodes.push_back(samples[i++]);
    if (first > 0) {
      seg.diverges_low = true;
      seg.low_edge = locate_edge(f, samples[first].x, samples[first - 1].x);
    }
    if (i < samples.size()) {
      seg.diverges_high = true;
      seg.high_edge = locate_edge(f, samples[i - 1].x, samples[i].x);
    }
    refine_extrema(f, seg);
    profile.segments.push_back(std::move(seg));
  }
  return profile;
}

std::vector<double> level_crossings(const ScanProfile& profile, const ScalarFunction& f,
                                    double target) {
  const ScalarFunction g = [&](double x) { return f(x) - target; };
  std::vector<double> roots;
  for (const auto& seg : profile.segments) {
    const auto& n = seg.nodes;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double gi = n[i].value - target;
      if (gi == 0.0) {
        roots.push_back(n[i].x);
        continue;
      }
      if (i + 1 < n.size()) {
        const double gj = n[i + 1].value - target;
        if (gi * gj < 0.0) roots.push_back(solve_bracket(g, n[i].x, n[i + 1].x, gi, gj));
      }
    }
    if (seg.diverges_high && n.back().value < target) {
      if (auto r = root_toward_edge(g, n.back().x, n.back().value - target, seg.high_edge)) {
        roots.push_back(*r);
      }
    }
    if (seg.diverges_low && n.front().value < target) {
      if (auto r = root_toward_edge(g, n.front().x, n.front().value - target, seg.low_edge)) {
        roots.push_back(*r);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > 1e-12 * std::max(1.0, std::abs(r))) {
      unique.push_back(r);
    }
  }
  return unique;
}

Membership classify(const ScanProfile& profile, double target, double rel_tol) {
  bool near_edge = false;
  for (const auto& seg : profile.segments) {
    const double lo = seg.min();
    const double hi = seg.max();
    if (target > lo * (1.0 + rel_tol) && target < hi * (1.0 - rel_tol)) {
      return Membership::inside;
    }
    if (std::abs(target - lo) <= rel_tol * std::abs(lo)) near_edge = true;
    if (std::isfinite(hi) && std::abs(target - hi) <= rel_tol * std::abs(hi)) near_edge = true;
  }
  return near_edge ? Membership::boundary : Membership::outside;
}

}  // namespace garchmom
