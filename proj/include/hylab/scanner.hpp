#pragma once

// The hybrid condition: Kronecker-Weyl phase windows intersected with
// sup-norm approximation on compact rectangles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hylab/arith.hpp"
#include "hylab/engine.hpp"
#include "hylab/kernel.hpp"
#include "hylab/metrics.hpp"
#include "hylab/parallel.hpp"

namespace hylab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline double total_measure(std::span<const Interval> xs) {
  double m = 0.0;
  for (const auto& i : xs) m += i.length();
  return m;
}

/// ||tau log p / (2 pi) - theta||.
inline double phase_distance(std::uint64_t p, double theta, double tau) {
  return circle_distance(tau * std::log(static_cast<double>(p)) / (2.0 * std::numbers::pi), theta);
}

/// The set {tau in [begin, begin + T] : ||tau log p/2pi - theta|| < eps} as intervals.
struct PhaseWindows {
  std::uint64_t prime = 2;
  double theta = 0.0;
  double epsilon = 0.1;
  double begin = 0.0;
  double horizon = 0.0;
  double period = 0.0;
  double half_width = 0.0;
  bool degenerate = false;  // eps >= 1/2: every tau qualifies
  std::vector<Interval> intervals;

  double measure() const { return total_measure(intervals); }
  bool contains(double tau) const { return degenerate || phase_distance(prime, theta, tau) < epsilon; }
};

inline PhaseWindows phase_windows(std::uint64_t p, double theta, double epsilon, double horizon, double begin = 0.0) {
  if (!is_prime(p)) throw std::invalid_argument("phase_windows: " + std::to_string(p) + " is not prime");
  if (!(epsilon > 0.0)) throw std::invalid_argument("phase_windows: epsilon must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("phase_windows: T must be positive");
  PhaseWindows w;
  w.prime = p;
  w.theta = theta - std::floor(theta);
  w.epsilon = epsilon;
  w.begin = begin;
  w.horizon = horizon;
  w.period = 2.0 * std::numbers::pi / std::log(static_cast<double>(p));
  w.half_width = epsilon * w.period;
  const double end = begin + horizon;
  if (epsilon >= 0.5) {
    w.degenerate = true;
    w.intervals.push_back({begin, end});
    return w;
  }
  const auto k0 = static_cast<long long>(std::floor(begin / w.period - w.theta - epsilon));
  const auto k1 = static_cast<long long>(std::ceil(end / w.period - w.theta + epsilon));
  for (long long k = k0; k <= k1; ++k) {
    const double c = (static_cast<double>(k) + w.theta) * w.period;
    const double lo = std::max(begin, c - w.half_width);
    const double hi = std::min(end, c + w.half_width);
    if (hi > lo) w.intervals.push_back({lo, hi});
  }
  return w;
}

inline constexpr double kMergeTolerance = 1e-12;

/// Merges sorted intervals that overlap or touch within kMergeTolerance.
inline std::vector<Interval> merge_intervals(std::vector<Interval> xs) {
  std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& i : xs) {
    if (!out.empty() && i.lo <= out.back().hi + kMergeTolerance) {
      out.back().hi = std::max(out.back().hi, i.hi);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

/// Sweep-line intersection of per-prime window families.
inline std::vector<Interval> intersect_windows(std::span<const PhaseWindows> lists) {
  if (lists.empty()) return {};
  std::vector<Interval> acc = merge_intervals(lists[0].intervals);
  for (std::size_t l = 1; l < lists.size(); ++l) {
    const auto other = merge_intervals(lists[l].intervals);
    std::vector<Interval> next;
    std::size_t i = 0, j = 0;
    while (i < acc.size() && j < other.size()) {
      const double lo = std::max(acc[i].lo, other[j].lo);
      const double hi = std::min(acc[i].hi, other[j].hi);
      if (hi > lo) next.push_back({lo, hi});
      if (acc[i].hi < other[j].hi) ++i;
      else ++j;
    }
    acc = merge_intervals(std::move(next));
  }
  return acc;
}

/// One function slot of a hybrid target: phi_j, K_j and samples of f_j on K_j.
struct TargetFunction {
  EulerProductSpec spec;
  SampledFunction target;

  /// f(s) = sum_k c_k s^k sampled on K.
  static TargetFunction from_polynomial(EulerProductSpec spec, const CompactRectangle& k,
                                        std::span<const cd> coefficients) {
    return {std::move(spec), SampledFunction::sample(k, [&](cd s) {
              cd v{0.0, 0.0};
              for (std::size_t i = coefficients.size(); i-- > 0;) v = v * s + coefficients[i];
              return v;
            })};
  }
};

struct PhaseConstraint {
  std::uint64_t prime = 2;
  double theta = 0.0;
};

struct HybridTarget {
  std::vector<TargetFunction> functions;
  std::vector<PhaseConstraint> phases;
  double epsilon = 0.1;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("HybridTarget: epsilon must be positive");
    std::set<std::uint64_t> seen;
    for (const auto& c : phases) {
      if (!is_prime(c.prime)) throw std::invalid_argument("HybridTarget: " + std::to_string(c.prime) + " is not prime");
      if (!seen.insert(c.prime).second) throw std::invalid_argument("HybridTarget: primes must be distinct");
    }
    for (std::size_t j = 0; j < functions.size(); ++j) {
      const auto& f = functions[j];
      if (!f.target.domain.inside(StripDomain(f.spec.sigma_phi()))) {
        throw std::invalid_argument("HybridTarget: K_" + std::to_string(j + 1) + " is not inside its strip");
      }
    }
  }
};

struct ScanPoint {
  double tau = 0.0;
  std::vector<double> distances;
  bool qualifies = false;
};

struct ScanReport {
  enum class Status { scanned, empty_phase_intersection };
  Status status = Status::scanned;
  double begin = 0.0;
  double horizon = 0.0;
  double tau_step = 0.01;
  double truncation = 0.0;
  double epsilon = 0.0;
  std::vector<PhaseConstraint> phases;
  std::vector<Interval> phase_intervals;
  double phase_density = 0.0;
  std::vector<ScanPoint> candidates;
  std::vector<double> qualifying;
  std::vector<Interval> qualifying_intervals;
  std::vector<double> grid_gap_bounds;  // per function slot
  std::vector<double> step_bounds;      // per slot: sup change of phi_X over half a tau step
  double density = 0.0;
};

/// Candidate shifts: the lattice k * dtau inside each interval, or the
/// midpoint of an interval containing no lattice point.
inline std::vector<double> lattice_candidates(std::span<const Interval> xs, double dtau) {
  std::vector<double> out;
  for (const auto& i : xs) {
    const auto k0 = static_cast<long long>(std::ceil(i.lo / dtau));
    const auto k1 = static_cast<long long>(std::floor(i.hi / dtau));
    bool any = false;
    for (long long k = k0; k <= k1; ++k) {
      const double tau = static_cast<double>(k) * dtau;
      if (tau > i.lo && tau < i.hi) {
        out.push_back(tau);
        any = true;
      }
    }
    if (!any) out.push_back(0.5 * (i.lo + i.hi));
  }
  return out;
}

/// Scans tau in [begin, begin + T] for the hybrid condition.
inline ScanReport hybrid_scan(const HybridTarget& target, double horizon, double tau_step, double truncation,
                              const SmoothingKernel& kernel = SmoothingKernel{}, double begin = 0.0) {
  target.validate();
  if (target.epsilon >= 0.5) throw std::invalid_argument("hybrid_scan: epsilon must be < 1/2");
  if (!(tau_step > 0.0)) throw std::invalid_argument("hybrid_scan: tau step must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("hybrid_scan: T must be positive");
  ScanReport rep;
  rep.begin = begin;
  rep.horizon = horizon;
  rep.tau_step = tau_step;
  rep.truncation = truncation;
  rep.epsilon = target.epsilon;
  rep.phases = target.phases;

  if (target.phases.empty()) {
    rep.phase_intervals = {{begin, begin + horizon}};
  } else {
    std::vector<PhaseWindows> lists;
    for (const auto& c : target.phases) lists.push_back(phase_windows(c.prime, c.theta, target.epsilon, horizon, begin));
    rep.phase_intervals = intersect_windows(lists);
  }
  rep.phase_density = total_measure(rep.phase_intervals) / horizon;
  if (rep.phase_intervals.empty()) {
    rep.status = ScanReport::Status::empty_phase_intersection;
    return rep;
  }

  std::vector<RectangleEvaluator> evaluators;
  for (const auto& f : target.functions) {
    const auto coeffs = coefficients_from_euler(f.spec, required_terms(kernel, truncation));
    const SmoothedSeries series(coeffs, kernel, truncation);
    evaluators.emplace_back(series, f.target.domain);
    rep.grid_gap_bounds.push_back(grid_sup_gap_bound(series, f.target.domain));
    rep.step_bounds.push_back(series.lipschitz_constant(f.target.domain.sigma_left) * 0.5 * tau_step);
  }

  const auto taus = lattice_candidates(rep.phase_intervals, tau_step);
  rep.candidates.resize(taus.size());
  constexpr std::size_t kBlock = 64;
  parallel_for((taus.size() + kBlock - 1) / kBlock, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(taus.size(), (b + 1) * kBlock); ++i) {
      ScanPoint pt;
      pt.tau = taus[i];
      pt.qualifies = std::all_of(target.phases.begin(), target.phases.end(), [&](const PhaseConstraint& c) {
        return phase_distance(c.prime, c.theta, pt.tau) < target.epsilon;
      });
      for (std::size_t j = 0; j < evaluators.size(); ++j) {
        const double d = seminorm(evaluators[j].shifted(pt.tau), target.functions[j].target);
        pt.distances.push_back(d);
        if (!(d < target.epsilon)) pt.qualifies = false;
      }
      rep.candidates[i] = std::move(pt);
    }
  });

  std::vector<Interval> runs;
  for (const auto& c : rep.candidates) {
    if (!c.qualifies) continue;
    rep.qualifying.push_back(c.tau);
    runs.push_back({c.tau - 0.5 * tau_step, c.tau + 0.5 * tau_step});
  }
  rep.qualifying_intervals = merge_intervals(std::move(runs));
  rep.density = std::min(1.0, static_cast<double>(rep.qualifying.size()) * tau_step / horizon);
  return rep;
}

}  // namespace hylab
