#pragma once

// The random Euler-product model on a finite-prime truncation of the torus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hylab/arith.hpp"
#include "hylab/engine.hpp"
#include "hylab/primes.hpp"

namespace hylab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Counter-based uniform in [0, 1): a pure function of (seed, stream, counter).
inline double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(stream ^ splitmix64(counter + 0x632be59bd9b4e019ull)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// omega(p) for every prime up to a bound.
class OmegaSample {
 public:
  /// Haar sample: angle(p) = counter_uniform(seed, stream, p).
  static OmegaSample sample(std::span<const std::uint64_t> primes, std::uint64_t seed, std::uint64_t stream) {
    OmegaSample w;
    w.seed_ = seed;
    w.stream_ = stream;
    w.primes_.assign(primes.begin(), primes.end());
    std::sort(w.primes_.begin(), w.primes_.end());
    w.values_.reserve(w.primes_.size());
    for (std::uint64_t p : w.primes_) {
      w.values_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * counter_uniform(seed, stream, p)));
    }
    return w;
  }

  static OmegaSample from_values(std::vector<std::uint64_t> primes, std::vector<cd> values) {
    if (primes.size() != values.size()) throw std::invalid_argument("OmegaSample: size mismatch");
    for (cd v : values) {
      if (std::abs(std::abs(v) - 1.0) > 1e-12) throw std::invalid_argument("OmegaSample: values must be unimodular");
    }
    OmegaSample w;
    std::vector<std::size_t> order(primes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return primes[a] < primes[b]; });
    for (auto i : order) {
      w.primes_.push_back(primes[i]);
      w.values_.push_back(values[i]);
    }
    return w;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::span<const cd> values() const noexcept { return values_; }
  std::uint64_t prime_bound() const noexcept { return primes_.empty() ? 1 : primes_.back(); }

  bool has(std::uint64_t p) const { return std::binary_search(primes_.begin(), primes_.end(), p); }

  cd operator()(std::uint64_t p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) {
      throw std::out_of_range("OmegaSample: prime " + std::to_string(p) + " is outside the sampled set");
    }
    return values_[static_cast<std::size_t>(it - primes_.begin())];
  }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<cd> values_;
};

inline OmegaSample sample_omega(std::span<const std::uint64_t> primes, std::uint64_t seed, std::uint64_t stream) {
  return OmegaSample::sample(primes, seed, stream);
}

/// Completely multiplicative extension omega(n).
inline cd omega_at_n(const OmegaSample& omega, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("omega_at_n: n must be positive");
  cd v{1.0, 0.0};
  for (auto [p, e] : factor_small(n)) {
    const cd w = omega(p);
    for (unsigned k = 0; k < e; ++k) v *= w;
  }
  return v;
}

/// omega(n) for n = 1..limit (index 0 unused), using a sieve covering limit.
inline std::vector<cd> omega_table(const OmegaSample& omega, std::uint64_t limit, const PrimeSieve& sieve) {
  if (sieve.limit() < limit) throw std::invalid_argument("omega_table: sieve does not cover the limit");
  std::vector<cd> t(limit + 1, cd{0.0, 0.0});
  if (limit >= 1) t[1] = 1.0;
  const auto primes = omega.primes();
  const auto values = omega.values();
  std::size_t j = 0;
  for (std::uint64_t p : sieve.primes()) {
    if (p > limit) break;
    while (j < primes.size() && primes[j] < p) ++j;
    if (j == primes.size() || primes[j] != p) {
      throw std::out_of_range("omega_table: prime " + std::to_string(p) + " is outside the sampled set");
    }
    t[p] = values[j];
  }
  for (std::uint64_t n = 4; n <= limit; ++n) {
    const std::uint64_t p = sieve.smallest_factor(n);
    if (p != n) t[n] = t[p] * t[n / p];
  }
  return t;
}

inline std::vector<cd> omega_table(const OmegaSample& omega, std::uint64_t limit) {
  return omega_table(omega, limit, PrimeSieve(std::max<std::uint64_t>(limit, 1)));
}

namespace detail {
// Principal Log(1 - u), accurate for small |u|.
inline cd log_one_minus(cd u) {
  const double re = 0.5 * std::log1p(-2.0 * u.real() + std::norm(u));
  const double im = std::atan2(-u.imag(), 1.0 - u.real());
  return {re, im};
}
}  // namespace detail

/// log phi_p(s, z) = - sum_j Log(1 - alpha_j(p) z p^{-s}).
inline cd log_euler_factor(const EulerProductSpec& spec, std::uint64_t p, cd z, cd s) {
  const cd ps = std::exp(-s * std::log(static_cast<double>(p)));
  cd sum{0.0, 0.0};
  for (cd alpha : spec.local_roots(p)) {
    const cd u = alpha * z * ps;
    if (!(std::abs(u) < 1.0)) {
      throw std::domain_error("log_euler_factor: |alpha z p^{-s}| >= 1 at prime " + std::to_string(p));
    }
    sum -= detail::log_one_minus(u);
  }
  return sum;
}

/// sum_{p <= P} log phi_p(s, omega(p)).
inline cd random_log_value(const EulerProductSpec& spec, const OmegaSample& omega, cd s, std::uint64_t prime_bound) {
  if (!(s.real() > spec.sigma_phi())) throw std::domain_error("random_log_value: requires Re(s) > sigma_phi");
  cd sum{0.0, 0.0};
  const auto primes = omega.primes();
  if (prime_bound >= 2) {
    const PrimeSieve sieve(prime_bound);
    for (std::uint64_t p : sieve.primes()) {
      if (!omega.has(p)) throw std::out_of_range("random_log_value: prime " + std::to_string(p) + " not sampled");
    }
  }
  for (std::size_t i = 0; i < primes.size() && primes[i] <= prime_bound; ++i) {
    sum += log_euler_factor(spec, primes[i], omega.values()[i], s);
  }
  return sum;
}

/// prod_{p <= P} prod_j (1 - alpha_j(p) omega(p) p^{-s})^{-1}, multiplied out directly.
inline cd random_euler_product(const EulerProductSpec& spec, const OmegaSample& omega, cd s, std::uint64_t prime_bound) {
  cd prod{1.0, 0.0};
  const auto primes = omega.primes();
  for (std::size_t i = 0; i < primes.size() && primes[i] <= prime_bound; ++i) {
    const cd ps = std::exp(-s * std::log(static_cast<double>(primes[i])));
    for (cd alpha : spec.local_roots(primes[i])) prod /= (1.0 - alpha * omega.values()[i] * ps);
  }
  return prod;
}

/// phi_X(s, omega) = sum a(n) omega(n) lambda(n/X) n^{-s}.
inline cd random_smoothed_value(const SmoothedSeries& series, const OmegaSample& omega, cd s) {
  return series.twisted(s, omega_table(omega, series.terms()));
}

inline cd random_smoothed_value(const CoefficientTable& coeffs, const SmoothingKernel& kernel,
                                const OmegaSample& omega, cd s, double x) {
  return random_smoothed_value(SmoothedSeries(coeffs, kernel, x), omega, s);
}

}  // namespace hylab
