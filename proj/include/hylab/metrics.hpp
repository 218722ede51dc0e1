#pragma once

// Sampled function-space metrics on H(D) via compact exhaustion, the torus
// metric and their product metric.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hylab {

/// The open strip sigma_low < Re(s) < sigma_high.
struct StripDomain {
  double sigma_low = 0.5;
  double sigma_high = 1.0;

  StripDomain() = default;
  StripDomain(double low, double high = 1.0) : sigma_low(low), sigma_high(high) {
    if (!(low >= 0.5 && low < high && high == 1.0)) {
      throw std::invalid_argument("StripDomain: requires 1/2 <= sigma_low < sigma_high = 1");
    }
  }
};

/// [sigma_left, sigma_right] x [t_center - R, t_center + R] with a
/// resolution x resolution sample grid.
struct CompactRectangle {
  double sigma_left = 0.6;
  double sigma_right = 0.8;
  double half_height = 0.2;
  int resolution = 21;
  double t_center = 0.0;

  void validate() const {
    if (!(sigma_left <= sigma_right) || !(half_height >= 0.0) || resolution < 1 ||
        !std::isfinite(sigma_left) || !std::isfinite(sigma_right) || !std::isfinite(t_center)) {
      throw std::invalid_argument("CompactRectangle: malformed bounds or resolution");
    }
  }

  bool inside(const StripDomain& strip) const {
    return strip.sigma_low < sigma_left && sigma_left <= sigma_right && sigma_right < strip.sigma_high;
  }

  bool contains(const CompactRectangle& other) const {
    return sigma_left <= other.sigma_left && other.sigma_right <= sigma_right &&
           t_center - half_height <= other.t_center - other.half_height &&
           other.t_center + other.half_height <= t_center + half_height;
  }

  bool interior_contains(const CompactRectangle& other) const {
    return sigma_left < other.sigma_left && other.sigma_right < sigma_right &&
           t_center - half_height < other.t_center - other.half_height &&
           other.t_center + other.half_height < t_center + half_height;
  }

  std::size_t size() const { return static_cast<std::size_t>(resolution) * resolution; }

  double sigma_step() const { return resolution > 1 ? (sigma_right - sigma_left) / (resolution - 1) : 0.0; }
  double t_step() const { return resolution > 1 ? 2.0 * half_height / (resolution - 1) : 0.0; }

  /// Grid points, sigma-major.
  std::vector<std::complex<double>> points() const {
    validate();
    std::vector<std::complex<double>> pts;
    pts.reserve(size());
    for (int i = 0; i < resolution; ++i) {
      const double sigma = resolution > 1 ? sigma_left + i * sigma_step() : 0.5 * (sigma_left + sigma_right);
      for (int j = 0; j < resolution; ++j) {
        const double t = resolution > 1 ? t_center - half_height + j * t_step() : t_center;
        pts.emplace_back(sigma, t);
      }
    }
    return pts;
  }

  friend bool operator==(const CompactRectangle&, const CompactRectangle&) = default;
};

/// A function represented by its values on a rectangle's sample grid.
struct SampledFunction {
  CompactRectangle domain;
  std::vector<std::complex<double>> values;

  SampledFunction() = default;
  SampledFunction(CompactRectangle k, std::vector<std::complex<double>> v)
      : domain(k), values(std::move(v)) {
    if (values.size() != domain.size()) {
      throw std::invalid_argument("SampledFunction: " + std::to_string(values.size()) +
                                  " samples for a grid of " + std::to_string(domain.size()));
    }
  }

  template <class F>
  static SampledFunction sample(const CompactRectangle& k, F&& f) {
    std::vector<std::complex<double>> v;
    for (auto s : k.points()) v.push_back(f(s));
    return SampledFunction(k, std::move(v));
  }
};

/// Grid maximum of |f - g|.
inline double seminorm(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.domain == g.domain)) throw std::invalid_argument("seminorm: sample grids differ");
  double m = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) m = std::max(m, std::abs(f.values[i] - g.values[i]));
  return m;
}

/// K_l = [sigma_low + 1/(l + l0), 1 - 1/(l + l0)] x [-l, l].
class ExhaustionFamily {
 public:
  explicit ExhaustionFamily(StripDomain strip = {}, int offset = 2, int resolution = 21)
      : strip_(strip), requested_offset_(offset), resolution_(resolution) {
    if (offset < 1) throw std::invalid_argument("ExhaustionFamily: offset must be positive");
    if (resolution < 1) throw std::invalid_argument("ExhaustionFamily: resolution must be positive");
    // K_1 nonempty needs 2/(1 + l0) <= 1 - sigma_low.
    offset_ = offset;
    while (2.0 / (1.0 + offset_) > strip_.sigma_high - strip_.sigma_low) ++offset_;
  }

  const StripDomain& strip() const noexcept { return strip_; }
  int offset() const noexcept { return offset_; }
  int requested_offset() const noexcept { return requested_offset_; }
  bool offset_adjusted() const noexcept { return offset_ != requested_offset_; }
  int resolution() const noexcept { return resolution_; }

  CompactRectangle level(int l) const {
    if (l < 1) throw std::invalid_argument("ExhaustionFamily: level must be >= 1");
    const double inset = 1.0 / (l + offset_);
    return CompactRectangle{strip_.sigma_low + inset, strip_.sigma_high - inset, static_cast<double>(l),
                            resolution_, 0.0};
  }

  /// Smallest l with k inside K_l; k must lie in the open strip.
  int containing_level(const CompactRectangle& k) const {
    if (!k.inside(strip_)) throw std::invalid_argument("ExhaustionFamily: rectangle not inside the strip");
    const double need_left = 1.0 / (k.sigma_left - strip_.sigma_low) - offset_;
    const double need_right = 1.0 / (strip_.sigma_high - k.sigma_right) - offset_;
    const double need_height = std::max(std::abs(k.t_center - k.half_height), std::abs(k.t_center + k.half_height));
    const double need = std::max({1.0, std::ceil(need_left), std::ceil(need_right), std::ceil(need_height)});
    if (need > 1e9) throw std::invalid_argument("ExhaustionFamily: rectangle too close to the boundary");
    int l = static_cast<int>(need);
    while (l > 1 && level(l - 1).contains(k)) --l;
    while (!level(l).contains(k)) ++l;
    return l;
  }

 private:
  StripDomain strip_;
  int requested_offset_;
  int offset_;
  int resolution_;
};

/// Samples of one function on K_1..K_L.
using LevelSamples = std::vector<SampledFunction>;

template <class F>
LevelSamples sample_levels(const ExhaustionFamily& family, int levels, F&& f) {
  LevelSamples out;
  for (int l = 1; l <= levels; ++l) out.push_back(SampledFunction::sample(family.level(l), f));
  return out;
}

/// sum_{l <= L} 2^{-l} min(d_l, 1); truncation error at most 2^{-L}.
inline double metric_d_phi(std::span<const SampledFunction> f, std::span<const SampledFunction> g,
                           const ExhaustionFamily& family, int levels) {
  if (levels < 1) throw std::invalid_argument("metric_d_phi: truncation level must be >= 1");
  if (f.size() < static_cast<std::size_t>(levels) || g.size() < static_cast<std::size_t>(levels)) {
    throw std::invalid_argument("metric_d_phi: samples missing for some levels");
  }
  double d = 0.0;
  double weight = 0.5;
  for (int l = 1; l <= levels; ++l, weight *= 0.5) {
    const auto k = family.level(l);
    if (!(f[l - 1].domain == k) || !(g[l - 1].domain == k)) {
      throw std::invalid_argument("metric_d_phi: samples at level " + std::to_string(l) +
                                  " are not on the exhaustion grid");
    }
    d += weight * std::min(seminorm(f[l - 1], g[l - 1]), 1.0);
  }
  return d;
}

/// ||a - b|| on R/Z.
inline double circle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 1.0);  // |a - b| keeps the result exactly symmetric
  return std::min(d, 1.0 - d);
}

inline double torus_angle(std::complex<double> x) {
  double theta = std::arg(x) / (2.0 * std::numbers::pi);
  if (theta < 0.0) theta += 1.0;
  return theta >= 1.0 ? 0.0 : theta;
}

inline double torus_distance(std::complex<double> x, std::complex<double> y) {
  if (std::abs(std::abs(x) - 1.0) > 1e-9 || std::abs(std::abs(y) - 1.0) > 1e-9) {
    throw std::invalid_argument("torus_distance: inputs must lie on the unit circle");
  }
  return circle_distance(torus_angle(x), torus_angle(y));
}

/// A point of prod_j H(D_j) x T^{P_N}.
struct HybridPoint {
  std::vector<LevelSamples> functions;
  std::vector<std::complex<double>> torus;
};

/// Ordered sum of component metrics; slot j uses families[j].
inline double product_metric(const HybridPoint& a, const HybridPoint& b,
                             std::span<const ExhaustionFamily> families, int levels) {
  if (a.functions.size() != b.functions.size() || a.torus.size() != b.torus.size() ||
      families.size() != a.functions.size()) {
    throw std::invalid_argument("product_metric: tuple shapes differ");
  }
  double d = 0.0;
  for (std::size_t j = 0; j < a.functions.size(); ++j) {
    d += metric_d_phi(a.functions[j], b.functions[j], families[j], levels);
  }
  for (std::size_t n = 0; n < a.torus.size(); ++n) d += torus_distance(a.torus[n], b.torus[n]);
  return d;
}

}  // namespace hylab
