#pragma once

// Statistical checks of the limit statements: mean squares along vertical
// lines, Weyl averages, two-sample comparisons of shift and model laws.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hylab/arith.hpp"
#include "hylab/engine.hpp"
#include "hylab/metrics.hpp"
#include "hylab/parallel.hpp"
#include "hylab/quadrature.hpp"
#include "hylab/random_model.hpp"

namespace hylab {

/// sum_n |a(n)|^2 lambda(n/X)^2 n^{-2 sigma}.
inline double mean_square_diagonal(const SmoothedSeries& series, double sigma) {
  double d = 0.0;
  const auto w = series.weights();
  const auto logs = series.logs();
  for (std::size_t i = 0; i < w.size(); ++i) d += std::norm(w[i]) * std::exp(-2.0 * sigma * logs[i]);
  return d;
}

/// Mean of |v|^2 over equally weighted samples divided by a target.
inline double ratio_of_mean_square(std::span<const cd> values, double target) {
  if (values.empty()) throw std::invalid_argument("ratio_of_mean_square: no samples");
  if (!(target > 0.0)) throw std::invalid_argument("ratio_of_mean_square: target must be positive");
  double m = 0.0;
  for (cd v : values) m += std::norm(v);
  return m / static_cast<double>(values.size()) / target;
}

struct MeanSquareResult {
  double ratio = 0.0;
  double mean_square = 0.0;
  double diagonal = 0.0;
  double off_diagonal_scale = 0.0;  // C X / T, the size of the neglected off-diagonal term
  std::size_t samples = 0;
  double step = 0.0;
};

/// Midpoint rule for (1/2T) int_{-T}^{T} |phi_X(sigma + it)|^2 dt against the diagonal sum.
inline MeanSquareResult mean_square_ratio(const CoefficientTable& coeffs, const SmoothingKernel& kernel,
                                          double sigma, double horizon, double dt, double truncation) {
  if (!(dt > 0.0) || dt > 1.0) throw std::invalid_argument("mean_square_ratio: dt must lie in (0, 1]");
  if (!(horizon > 0.0)) throw std::invalid_argument("mean_square_ratio: T must be positive");
  if (!(sigma > coeffs.spec().sigma_phi())) throw std::invalid_argument("mean_square_ratio: requires sigma > sigma_phi");
  const SmoothedSeries series(coeffs, kernel, truncation);
  const auto count = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * horizon / dt)));
  const double step = 2.0 * horizon / static_cast<double>(count);
  const auto values = shifted_grid_values(series, ShiftGrid{sigma, -horizon + 0.5 * step, step, count, truncation});
  MeanSquareResult r;
  r.diagonal = mean_square_diagonal(series, sigma);
  r.ratio = ratio_of_mean_square(values, r.diagonal);
  r.mean_square = r.ratio * r.diagonal;
  r.off_diagonal_scale = kernel.support() * truncation / horizon;
  r.samples = count;
  r.step = step;
  return r;
}

struct WeylAverage {
  cd closed_form;
  cd quadrature;
  double frequency = 0.0;
  double bound = 0.0;  // 2 / (T |frequency|)
};

/// (1/T) int_0^T e^{i omega tau} d tau, closed form and quadrature.
inline WeylAverage weyl_moment_at_frequency(double omega, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("weyl average: T must be positive");
  if (omega == 0.0) throw std::invalid_argument("weyl average: zero frequency");
  WeylAverage w;
  w.frequency = omega;
  w.closed_form = (std::polar(1.0, omega * horizon) - 1.0) / (cd{0.0, omega * horizon});
  // the phase omega * t carries an absolute rounding error of about eps * |omega| T
  const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(omega) * horizon;
  const auto q = integrate_oscillatory([omega](double t) { return std::polar(1.0, omega * t); }, 0.0, horizon, omega,
                                       1e-13, noise);
  w.quadrature = q.value / horizon;
  w.bound = 2.0 / (horizon * std::abs(omega));
  return w;
}

inline WeylAverage weyl_average(std::uint64_t p, double horizon) {
  if (!is_prime(p)) throw std::invalid_argument("weyl_average: " + std::to_string(p) + " is not prime");
  return weyl_moment_at_frequency(std::log(static_cast<double>(p)), horizon);
}

/// (1/T) int_0^T prod_n p_n^{i k_n tau} d tau.
inline WeylAverage joint_weyl_moment(std::span<const std::uint64_t> primes, std::span<const int> exponents,
                                     double horizon) {
  if (primes.size() != exponents.size()) throw std::invalid_argument("joint_weyl_moment: shape mismatch");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) throw std::invalid_argument("joint_weyl_moment: non-prime entry");
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[j] == primes[i]) throw std::invalid_argument("joint_weyl_moment: primes must be distinct");
    }
  }
  if (std::all_of(exponents.begin(), exponents.end(), [](int k) { return k == 0; })) {
    throw std::invalid_argument("joint_weyl_moment: exponent vector is zero (the moment is identically 1)");
  }
  if (std::any_of(exponents.begin(), exponents.end(), [](int k) { return std::abs(k) > 10; })) {
    throw std::invalid_argument("joint_weyl_moment: exponents limited to |k| <= 10");
  }
  double omega = 0.0;
  for (std::size_t i = 0; i < primes.size(); ++i) omega += exponents[i] * std::log(static_cast<double>(primes[i]));
  return weyl_moment_at_frequency(omega, horizon);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Critical value c(alpha) sqrt((n + m)/(n m)); c = 1.63 at the 1% level.
inline double ks_critical_value(std::size_t n, std::size_t m, double c_alpha = 1.63) {
  return c_alpha * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

struct SampleMoments {
  double mean = 0.0;
  double mean_se = 0.0;
  double second = 0.0;
  double second_se = 0.0;
};

inline SampleMoments moments(std::span<const double> xs) {
  SampleMoments m;
  const double n = static_cast<double>(xs.size());
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : xs) {
    s1 += x;
    s2 += x * x;
  }
  m.mean = s1 / n;
  m.second = s2 / n;
  for (double x : xs) {
    s3 += (x - m.mean) * (x - m.mean);
    s4 += (x * x - m.second) * (x * x - m.second);
  }
  if (xs.size() > 1) {
    m.mean_se = std::sqrt(s3 / (n - 1.0) / n);
    m.second_se = std::sqrt(s4 / (n - 1.0) / n);
  }
  return m;
}

inline constexpr std::uint64_t kShiftStream = ~0ull;

/// Primes needed to twist a smoothed series (n < C X) plus any extra primes.
inline std::vector<std::uint64_t> model_primes(std::uint64_t terms, std::span<const std::uint64_t> extra = {}) {
  std::uint64_t bound = std::max<std::uint64_t>(terms, 2);
  for (auto p : extra) bound = std::max(bound, p);
  return PrimeSieve(bound).primes();
}

/// |phi_X(s0 + i tau_m)| with tau_m uniform on [0, T].
inline std::vector<double> shift_samples(const SmoothedSeries& series, cd s0, double horizon, std::size_t m,
                                         std::uint64_t seed) {
  std::vector<double> out(m);
  constexpr std::size_t kBlock = 128;
  parallel_for((m + kBlock - 1) / kBlock, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(m, (b + 1) * kBlock); ++i) {
      const double tau = horizon * counter_uniform(seed, kShiftStream, i);
      out[i] = std::abs(series(s0 + cd{0.0, tau}));
    }
  });
  return out;
}

/// |phi_X(s0, omega_m)| with omega_m drawn from stream m.
inline std::vector<double> model_samples(const SmoothedSeries& series, cd s0, std::size_t m, std::uint64_t seed) {
  const auto primes = model_primes(series.terms());
  const PrimeSieve sieve(std::max<std::uint64_t>(series.terms(), 2));
  std::vector<double> out(m);
  constexpr std::size_t kBlock = 64;
  parallel_for((m + kBlock - 1) / kBlock, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(m, (b + 1) * kBlock); ++i) {
      const auto omega = OmegaSample::sample(primes, seed, i);
      out[i] = std::abs(series.twisted(s0, omega_table(omega, series.terms(), sieve)));
    }
  });
  return out;
}

struct DistributionComparison {
  double ks = 0.0;
  double ks_critical_1pct = 0.0;
  SampleMoments shift;
  SampleMoments model;
  std::vector<double> shift_values;
  std::vector<double> model_values;
};

inline DistributionComparison empirical_vs_model(const CoefficientTable& coeffs, const SmoothingKernel& kernel, cd s0,
                                                 double horizon, std::size_t m, double truncation, std::uint64_t seed) {
  if (m < 100) throw std::invalid_argument("empirical_vs_model: M must be >= 100");
  if (!(s0.real() > coeffs.spec().sigma_phi() && s0.real() < 1.0)) {
    throw std::invalid_argument("empirical_vs_model: s0 must lie strictly inside the strip");
  }
  const SmoothedSeries series(coeffs, kernel, truncation);
  DistributionComparison r;
  r.shift_values = shift_samples(series, s0, horizon, m, seed);
  r.model_values = model_samples(series, s0, m, seed);
  r.ks = ks_statistic(r.shift_values, r.model_values);
  r.ks_critical_1pct = ks_critical_value(m, m);
  r.shift = moments(r.shift_values);
  r.model = moments(r.model_values);
  return r;
}

struct HybridSamplerConfig {
  int levels = 6;
  int resolution = 7;
  int offset = 2;
};

/// Builds (phi_X(s + i tau), (p^{i tau})_p) and its model counterpart
/// (phi_X(s, omega), (conj omega(p))_p) on exhaustion grids. omega(n) plays
/// the role of n^{-i tau}, so the torus coordinate matching p^{i tau} is conj omega(p).
class HybridSampler {
 public:
  HybridSampler(std::span<const CoefficientTable> coeffs, const SmoothingKernel& kernel, double truncation,
                std::vector<std::uint64_t> torus_primes, HybridSamplerConfig config = {})
      : torus_primes_(std::move(torus_primes)), config_(config) {
    if (config_.levels < 1) throw std::invalid_argument("HybridSampler: levels must be >= 1");
    for (auto p : torus_primes_) {
      if (!is_prime(p)) throw std::invalid_argument("HybridSampler: " + std::to_string(p) + " is not prime");
    }
    std::uint64_t terms = 1;
    for (const auto& c : coeffs) {
      const SmoothedSeries series(c, kernel, truncation);
      terms = std::max<std::uint64_t>(terms, series.terms());
      families_.emplace_back(StripDomain(c.spec().sigma_phi()), config_.offset, config_.resolution);
      std::vector<RectangleEvaluator> per_level;
      for (int l = 1; l <= config_.levels; ++l) per_level.emplace_back(series, families_.back().level(l));
      evaluators_.push_back(std::move(per_level));
    }
    terms_ = terms;
    sampled_primes_ = model_primes(terms_, torus_primes_);
    sieve_ = std::make_shared<PrimeSieve>(std::max<std::uint64_t>(terms_, 2));
  }

  std::span<const ExhaustionFamily> families() const noexcept { return families_; }
  std::span<const std::uint64_t> torus_primes() const noexcept { return torus_primes_; }
  std::span<const std::uint64_t> sampled_primes() const noexcept { return sampled_primes_; }
  int levels() const noexcept { return config_.levels; }
  std::uint64_t terms() const noexcept { return terms_; }

  HybridPoint shift_point(double tau) const {
    HybridPoint pt;
    std::vector<cd> m(terms_ + 1);
    for (std::uint64_t n = 1; n <= terms_; ++n) m[n] = std::polar(1.0, -tau * std::log(static_cast<double>(n)));
    fill_functions(pt, m);
    for (auto p : torus_primes_) pt.torus.push_back(std::polar(1.0, tau * std::log(static_cast<double>(p))));
    return pt;
  }

  HybridPoint model_point(const OmegaSample& omega) const {
    HybridPoint pt;
    fill_functions(pt, omega_table(omega, terms_, *sieve_));
    for (auto p : torus_primes_) pt.torus.push_back(std::conj(omega(p)));
    return pt;
  }

  OmegaSample draw(std::uint64_t seed, std::uint64_t stream) const {
    return OmegaSample::sample(sampled_primes_, seed, stream);
  }

  double distance(const HybridPoint& a, const HybridPoint& b) const {
    return product_metric(a, b, families_, config_.levels);
  }

 private:
  void fill_functions(HybridPoint& pt, std::span<const cd> multiplier) const {
    for (const auto& per_level : evaluators_) {
      LevelSamples ls;
      for (const auto& ev : per_level) ls.push_back(ev.apply(multiplier));
      pt.functions.push_back(std::move(ls));
    }
  }

  std::vector<std::uint64_t> torus_primes_;
  HybridSamplerConfig config_;
  std::vector<ExhaustionFamily> families_;
  std::vector<std::vector<RectangleEvaluator>> evaluators_;
  std::uint64_t terms_ = 1;
  std::vector<std::uint64_t> sampled_primes_;
  std::shared_ptr<PrimeSieve> sieve_;
};

struct FunctionalGap {
  double gap = 0.0;
  double shift_mean = 0.0;
  double model_mean = 0.0;
  double shift_se = 0.0;
  double model_se = 0.0;
};

/// |E^{P_T}[F] - E^{m}[F]| with stratified tau_m in [0, T] and M model draws.
inline FunctionalGap functional_gap(const HybridSampler& sampler, const std::function<double(const HybridPoint&)>& f,
                                    double horizon, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("functional_gap: M must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("functional_gap: T must be positive");
  std::vector<double> a(m), b(m);
  constexpr std::size_t kBlock = 32;
  parallel_for((m + kBlock - 1) / kBlock, [&](std::size_t blk) {
    for (std::size_t i = blk * kBlock; i < std::min(m, (blk + 1) * kBlock); ++i) {
      const double tau = horizon * (static_cast<double>(i) + counter_uniform(seed, kShiftStream, i)) / static_cast<double>(m);
      a[i] = f(sampler.shift_point(tau));
      b[i] = f(sampler.model_point(sampler.draw(seed, i)));
    }
  });
  const auto ma = moments(a), mb = moments(b);
  return {std::abs(ma.mean - mb.mean), ma.mean, mb.mean, ma.mean_se, mb.mean_se};
}

/// Gap for the bounded Lipschitz functional F = min(1, d(., reference)).
inline FunctionalGap lipschitz_gap(const HybridPoint& reference, const HybridSampler& sampler, double horizon,
                                   std::size_t m, std::uint64_t seed) {
  if (reference.functions.size() != sampler.families().size() ||
      reference.torus.size() != sampler.torus_primes().size()) {
    throw std::invalid_argument("lipschitz_gap: reference tuple shape mismatch");
  }
  return functional_gap(
      sampler, [&](const HybridPoint& x) { return std::min(1.0, sampler.distance(x, reference)); }, horizon, m, seed);
}

struct SupportHitRate {
  double rate = 0.0;
  std::size_t hits = 0;
  std::size_t draws = 0;
  bool zero_is_inconclusive = true;  // a zero rate is consistent with tiny positive mass
};

inline void require_h0(const HybridPoint& target) {
  for (std::size_t j = 0; j < target.functions.size(); ++j) {
    bool any_zero = false, all_zero = true;
    for (const auto& level : target.functions[j]) {
      for (cd v : level.values) {
        if (v == cd{0.0, 0.0}) any_zero = true;
        else all_zero = false;
      }
    }
    if (any_zero && !all_zero) {
      throw std::invalid_argument("support_hit_rate: target function " + std::to_string(j + 1) +
                                  " vanishes on its grid without being identically zero (not in H_0)");
    }
  }
}

/// Fraction of model draws within product-metric distance delta of the target.
inline SupportHitRate support_hit_rate(const HybridPoint& target, const HybridSampler& sampler, double delta,
                                       std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("support_hit_rate: M must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("support_hit_rate: delta must be positive");
  require_h0(target);
  std::vector<char> hit(m, 0);
  constexpr std::size_t kBlock = 32;
  parallel_for((m + kBlock - 1) / kBlock, [&](std::size_t blk) {
    for (std::size_t i = blk * kBlock; i < std::min(m, (blk + 1) * kBlock); ++i) {
      hit[i] = sampler.distance(sampler.model_point(sampler.draw(seed, i)), target) < delta ? 1 : 0;
    }
  });
  SupportHitRate r;
  r.draws = m;
  r.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  r.rate = static_cast<double>(r.hits) / static_cast<double>(m);
  r.zero_is_inconclusive = r.hits == 0;
  return r;
}

}  // namespace hylab
