#pragma once

// Smoothed Dirichlet series phi_X(s) = sum a(n) lambda(n/X) n^{-s} and its
// evaluation along vertical shifts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hylab/arith.hpp"
#include "hylab/kernel.hpp"
#include "hylab/metrics.hpp"
#include "hylab/parallel.hpp"

namespace hylab {

/// Largest n with lambda(n/X) possibly nonzero, i.e. n < C X.
inline std::uint64_t required_terms(const SmoothingKernel& kernel, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("truncation X must be positive");
  const double cx = kernel.support() * x;
  auto n = static_cast<std::uint64_t>(std::ceil(cx));
  if (n > 0) --n;
  return std::max<std::uint64_t>(n, 1);
}

/// Precomputed weights w(n) = a(n) lambda(n/X) and log n for n < C X.
class SmoothedSeries {
 public:
  SmoothedSeries(const CoefficientTable& coeffs, const SmoothingKernel& kernel, double x)
      : x_(x), support_(kernel.support()) {
    const std::uint64_t need = required_terms(kernel, x);
    if (coeffs.limit() < need) {
      throw std::out_of_range("smoothed series: coefficient table has N = " + std::to_string(coeffs.limit()) +
                              ", needs N >= " + std::to_string(need) + " for X = " + std::to_string(x));
    }
    weights_.reserve(need);
    logs_.reserve(need);
    for (std::uint64_t n = 1; n <= need; ++n) {
      weights_.push_back(coeffs[n] * kernel(static_cast<double>(n) / x));
      logs_.push_back(std::log(static_cast<double>(n)));
    }
    real_ = coeffs.is_real();
  }

  double truncation() const noexcept { return x_; }
  std::size_t terms() const noexcept { return weights_.size(); }
  std::span<const cd> weights() const noexcept { return weights_; }
  std::span<const double> logs() const noexcept { return logs_; }
  bool real_coefficients() const noexcept { return real_; }

  cd operator()(cd s) const {
    cd sum{0.0, 0.0};
    for (std::size_t i = 0; i < weights_.size(); ++i) sum += weights_[i] * std::exp(-s * logs_[i]);
    return sum;
  }

  /// sum w(n) c(n) n^{-s} for a per-n multiplier (index 0 unused).
  cd twisted(cd s, std::span<const cd> multiplier) const {
    if (multiplier.size() <= weights_.size()) throw std::invalid_argument("twisted: multiplier table too short");
    cd sum{0.0, 0.0};
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      sum += weights_[i] * multiplier[i + 1] * std::exp(-s * logs_[i]);
    }
    return sum;
  }

  /// sum_n |a(n)| lambda(n/X) log(n) n^{-sigma}: bounds |d/ds phi_X| on Re(s) >= sigma.
  double lipschitz_constant(double sigma) const {
    double l = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) l += std::abs(weights_[i]) * logs_[i] * std::exp(-sigma * logs_[i]);
    return l;
  }

 private:
  double x_;
  double support_;
  std::vector<cd> weights_;
  std::vector<double> logs_;
  bool real_ = false;
};

inline cd smoothed_value(const CoefficientTable& coeffs, const SmoothingKernel& kernel, cd s, double x) {
  return SmoothedSeries(coeffs, kernel, x)(s);
}

/// s_k = sigma + i (tau_start + k tau_step), k < count.
struct ShiftGrid {
  double sigma = 0.9;
  double tau_start = 0.0;
  double tau_step = 0.1;
  std::size_t count = 1;
  double truncation = 100.0;

  void validate() const {
    if (!(tau_step > 0.0)) throw std::invalid_argument("ShiftGrid: tau_step must be positive");
    if (count == 0) throw std::invalid_argument("ShiftGrid: count must be positive");
    if (!(truncation >= 2.0)) throw std::invalid_argument("ShiftGrid: truncation X must be >= 2");
  }

  double tau(std::size_t k) const { return tau_start + static_cast<double>(k) * tau_step; }
};

inline constexpr std::size_t kReanchorInterval = 4096;

/// Values along a shift grid by per-n incremental rotation, re-anchored
/// every kReanchorInterval steps.
inline std::vector<cd> shifted_grid_values(const SmoothedSeries& series, const ShiftGrid& grid) {
  grid.validate();
  std::vector<cd> out(grid.count);
  const std::size_t blocks = (grid.count + kReanchorInterval - 1) / kReanchorInterval;
  const auto w = series.weights();
  const auto logs = series.logs();
  std::vector<cd> step(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) step[i] = std::polar(1.0, -grid.tau_step * logs[i]);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t k0 = b * kReanchorInterval;
    const std::size_t k1 = std::min(grid.count, k0 + kReanchorInterval);
    const cd s0{grid.sigma, grid.tau(k0)};
    std::vector<cd> c(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) c[i] = w[i] * std::exp(-s0 * logs[i]);
    for (std::size_t k = k0; k < k1; ++k) {
      cd sum{0.0, 0.0};
      for (std::size_t i = 0; i < c.size(); ++i) {
        sum += c[i];
        c[i] *= step[i];
      }
      out[k] = sum;
    }
  });
  return out;
}

inline std::vector<cd> shifted_grid_values(const CoefficientTable& coeffs, const SmoothingKernel& kernel,
                                           const ShiftGrid& grid) {
  grid.validate();
  return shifted_grid_values(SmoothedSeries(coeffs, kernel, grid.truncation), grid);
}

/// Repeated evaluation of a smoothed series on a fixed rectangle grid under
/// per-n multipliers (vertical shifts or random twists).
class RectangleEvaluator {
 public:
  RectangleEvaluator(const SmoothedSeries& series, const CompactRectangle& k)
      : domain_(k), terms_(series.terms()), logs_(series.logs().begin(), series.logs().end()) {
    const auto pts = k.points();
    basis_.resize(pts.size() * terms_);
    const auto w = series.weights();
    for (std::size_t p = 0; p < pts.size(); ++p) {
      for (std::size_t i = 0; i < terms_; ++i) basis_[p * terms_ + i] = w[i] * std::exp(-pts[p] * logs_[i]);
    }
  }

  const CompactRectangle& domain() const noexcept { return domain_; }
  std::size_t terms() const noexcept { return terms_; }

  /// Samples of phi_X(s + i tau) over the grid.
  SampledFunction shifted(double tau) const {
    std::vector<cd> m(terms_ + 1);
    for (std::size_t i = 0; i < terms_; ++i) m[i + 1] = std::polar(1.0, -tau * logs_[i]);
    return apply(m);
  }

  /// Samples of sum w(n) c(n) n^{-s}; c is indexed by n (index 0 unused).
  SampledFunction apply(std::span<const cd> per_term) const {
    if (per_term.size() <= terms_) throw std::invalid_argument("RectangleEvaluator: multiplier too short");
    std::vector<cd> v(domain_.size());
    for (std::size_t p = 0; p < v.size(); ++p) {
      const cd* row = basis_.data() + p * terms_;
      double re = 0.0, im = 0.0;
      for (std::size_t i = 0; i < terms_; ++i) {
        const cd z = row[i] * per_term[i + 1];
        re += z.real();
        im += z.imag();
      }
      v[p] = {re, im};
    }
    return SampledFunction(domain_, std::move(v));
  }

 private:
  CompactRectangle domain_;
  std::size_t terms_;
  std::vector<double> logs_;
  std::vector<cd> basis_;
};

/// Grid sup of |provider - target| over K.
inline double sup_distance_on_compact(const SampledFunction& provider, const SampledFunction& target,
                                      const CompactRectangle& k) {
  if (!(provider.domain == k) || !(target.domain == k)) {
    throw std::invalid_argument("sup_distance_on_compact: samples are not on the grid of K");
  }
  return seminorm(provider, target);
}

/// Upper bound on how far the grid maximum can undershoot the true sup of
/// |phi_X(s + i tau) - f(s)| over K, given a Lipschitz bound for f.
inline double grid_sup_gap_bound(const SmoothedSeries& series, const CompactRectangle& k,
                                 double target_lipschitz = 0.0) {
  const double half_diag = 0.5 * std::hypot(k.sigma_step(), k.t_step());
  return (series.lipschitz_constant(k.sigma_left) + target_lipschitz) * half_diag;
}

/// X = max(2 * max prime in play, sqrt(T)).
inline double default_truncation(std::uint64_t max_prime, double horizon) {
  return std::max({2.0, 2.0 * static_cast<double>(max_prime), std::sqrt(std::max(horizon, 0.0))});
}

}  // namespace hylab
