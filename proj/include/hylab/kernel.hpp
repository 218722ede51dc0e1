#pragma once

// Smooth cutoff lambda and its Mellin transform.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "hylab/quadrature.hpp"

namespace hylab {

/// lambda = 1 on [0, 1], 0 on [C, inf), with the exp(-1/t) transition in between.
class SmoothingKernel {
 public:
  static constexpr double kDefaultSupport = 3.0;

  explicit SmoothingKernel(double support = kDefaultSupport) : support_(support) {
    if (!(support_ > 1.0) || !std::isfinite(support_)) {
      throw std::invalid_argument("SmoothingKernel: support bound must be finite and > 1");
    }
  }

  double support() const noexcept { return support_; }

  double operator()(double x) const {
    if (!(x >= 0.0)) throw std::invalid_argument("SmoothingKernel: x must be nonnegative");
    if (x <= 1.0) return 1.0;
    if (x >= support_) return 0.0;
    return 1.0 - step((x - 1.0) / (support_ - 1.0));
  }

  /// Smooth step S(t) = psi(t) / (psi(t) + psi(1 - t)), psi(t) = exp(-1/t).
  static double step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
  }

 private:
  double support_;
};

/// lambda-hat(s) = 1/s + int_1^C lambda(x) x^{s-1} dx, valid on Re(s) > -1.
class MellinTransform {
 public:
  explicit MellinTransform(SmoothingKernel kernel = SmoothingKernel{}, double tolerance = 1e-10)
      : kernel_(kernel), tolerance_(tolerance) {
    if (!(tolerance_ > 0.0)) throw std::invalid_argument("MellinTransform: tolerance must be positive");
  }

  const SmoothingKernel& kernel() const noexcept { return kernel_; }
  double tolerance() const noexcept { return tolerance_; }

  std::complex<double> operator()(std::complex<double> s) const {
    if (s == std::complex<double>{0.0, 0.0}) throw std::domain_error("MellinTransform: pole at s = 0");
    return entire_part(s) + 1.0 / s;
  }

  /// The integral term; entire in s.
  std::complex<double> entire_part(std::complex<double> s) const {
    check(s);
    // In u = log x the integrand lambda(e^u) e^{s u} oscillates uniformly at rate Im(s).
    const double top = std::log(kernel_.support());
    const auto f = [this, s](double u) { return kernel_(std::exp(u)) * std::exp(s * u); };
    const auto r = integrate_oscillatory(f, 0.0, top, 2.0 * std::max(std::abs(s.imag()), 4.0), 0.01 * tolerance_);
    if (r.error > tolerance_) {
      throw std::runtime_error("MellinTransform: quadrature error " + std::to_string(r.error) +
                               " exceeds tolerance");
    }
    return r.value;
  }

 private:
  void check(std::complex<double> s) const {
    if (!(s.real() > -1.0)) throw std::domain_error("MellinTransform: requires Re(s) > -1");
  }

  SmoothingKernel kernel_;
  double tolerance_;
};

}  // namespace hylab
