#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hylab {

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
};

namespace detail {
// One 15/31-point Gauss-Kronrod pair on [a, b]; error is |K - G| floored at rounding
// (or at the caller's relative noise level in f, if larger), with a flag telling
// whether the floor was hit.
template <class F>
auto kronrod_step(F& f, double a, double b, double noise) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  using G = boost::math::quadrature::gauss<double, 15>;
  using T = decltype(f(a));
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  // even-indexed Kronrod nodes (0 included) are the Gauss nodes
  T f0 = f(mid);
  T kron = f0 * wk[0];
  T gauss = f0 * wg[0];
  double mag = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const T sum = f(mid + half * x[i]) + f(mid - half * x[i]);
    kron += sum * wk[i];
    mag += std::abs(sum) * wk[i];
    if (i % 2 == 0) gauss += sum * wg[i / 2];
  }
  QuadratureResult<T> r;
  r.value = kron * half;
  const double rel = std::max(50.0 * std::numeric_limits<double>::epsilon(), noise);
  const double roundoff = rel * mag * std::abs(half);
  r.error = std::max(std::abs((kron - gauss) * half), roundoff);
  return std::pair{r, r.error == roundoff};
}

template <class F>
auto kronrod_bisect(F& f, double a, double b, double abs_tol, unsigned depth, double noise) {
  auto [r, at_roundoff] = kronrod_step(f, a, b, noise);
  // bisecting cannot beat rounding, so a piece at the floor is accepted
  if (r.error <= abs_tol || at_roundoff || depth == 0) return r;
  const double mid = 0.5 * (a + b);
  auto left = kronrod_bisect(f, a, mid, 0.5 * abs_tol, depth - 1, noise);
  auto right = kronrod_bisect(f, mid, b, 0.5 * abs_tol, depth - 1, noise);
  left.value += right.value;
  left.error += right.error;
  return left;
}
}  // namespace detail

/// Adaptive 31-point Gauss-Kronrod bisection to an absolute tolerance;
/// real or complex integrands. `noise` is the relative accuracy of f itself.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-13, unsigned max_depth = 12, double noise = 0.0) {
  return detail::kronrod_bisect(f, a, b, abs_tol, max_depth, noise);
}

/// Splits [a, b] into pieces spanning at most one period of an oscillation
/// with angular frequency `omega` before integrating each adaptively.
template <class F>
auto integrate_oscillatory(F&& f, double a, double b, double omega, double abs_tol = 1e-13, double noise = 0.0) {
  using T = decltype(f(a));
  const double period = omega != 0.0 ? 2.0 * std::numbers::pi / std::abs(omega) : (b - a);
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / period)));
  QuadratureResult<T> total;
  const double h = (b - a) / static_cast<double>(pieces);
  const double piece_tol = abs_tol / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == pieces) ? b : lo + h;
    auto part = integrate(f, lo, hi, piece_tol, 12, noise);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

}  // namespace hylab
