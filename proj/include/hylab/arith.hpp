#pragma once

// Dirichlet characters, polynomial Euler products and their Dirichlet
// coefficients.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hylab/primes.hpp"

namespace hylab {

using cd = std::complex<double>;

/// exp(2 pi i num/den), exact when the angle is a multiple of a quarter turn.
inline cd unit_root(std::uint64_t num, std::uint64_t den) {
  num %= den;
  const std::uint64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (4 % den == 0) {
    switch (num * (4 / den)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return std::polar(1.0, angle);
}

class DirichletCharacter {
 public:
  /// Validates a full residue table: zero off units, unit modulus on units,
  /// chi(1) = 1 and complete multiplicativity.
  static DirichletCharacter from_table(std::uint64_t modulus, std::vector<cd> table,
                                       double tol = 1e-12) {
    if (modulus == 0) throw std::invalid_argument("DirichletCharacter: modulus must be positive");
    if (table.size() != modulus) {
      throw std::invalid_argument("DirichletCharacter: table size " + std::to_string(table.size()) +
                                  " != modulus " + std::to_string(modulus));
    }
    for (std::uint64_t n = 0; n < modulus; ++n) {
      const bool unit = std::gcd(n, modulus) == 1;
      const double mag = std::abs(table[n]);
      if (unit ? std::abs(mag - 1.0) > tol : mag != 0.0) {
        throw std::invalid_argument("DirichletCharacter: bad value at residue " + std::to_string(n));
      }
    }
    if (std::abs(table[1 % modulus] - 1.0) > tol && modulus > 1) {
      throw std::invalid_argument("DirichletCharacter: chi(1) != 1");
    }
    for (std::uint64_t m = 0; m < modulus; ++m) {
      for (std::uint64_t n = m; n < modulus; ++n) {
        if (std::abs(table[(m * n) % modulus] - table[m] * table[n]) > 4 * tol) {
          throw std::invalid_argument("DirichletCharacter: table is not multiplicative at (" +
                                      std::to_string(m) + ", " + std::to_string(n) + ")");
        }
      }
    }
    return DirichletCharacter(modulus, std::move(table));
  }

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::span<const cd> table() const noexcept { return table_; }

  cd operator()(std::int64_t n) const {
    const auto q = static_cast<std::int64_t>(modulus_);
    return table_[static_cast<std::size_t>(((n % q) + q) % q)];
  }

  bool is_principal() const {
    for (std::uint64_t n = 0; n < modulus_; ++n) {
      if (std::gcd(n, modulus_) == 1 && table_[n] != cd{1.0, 0.0}) return false;
    }
    return true;
  }

  bool is_real() const {
    return std::all_of(table_.begin(), table_.end(), [](cd v) { return v.imag() == 0.0; });
  }

  /// Smallest d | q such that chi is trivial on units congruent to 1 mod d.
  std::uint64_t conductor(double tol = 1e-12) const {
    for (std::uint64_t d = 1; d <= modulus_; ++d) {
      if (modulus_ % d != 0) continue;
      bool ok = true;
      for (std::uint64_t n = 1; n < modulus_ + 1 && ok; n += d) {
        const std::uint64_t r = n % modulus_;
        if (std::gcd(r, modulus_) == 1 && std::abs(table_[r] - 1.0) > tol) ok = false;
      }
      if (ok) return d;
    }
    return modulus_;
  }

  /// The primitive character inducing this one.
  DirichletCharacter primitive(double tol = 1e-12) const {
    const std::uint64_t d = conductor(tol);
    std::vector<cd> t(d, cd{0.0, 0.0});
    for (std::uint64_t r = 0; r < d; ++r) {
      if (std::gcd(r, d) != 1) continue;
      for (std::uint64_t m = r; m < modulus_ + d; m += d) {
        const std::uint64_t mm = m % modulus_;
        if (std::gcd(mm, modulus_) == 1) {
          t[r] = table_[mm];
          break;
        }
      }
    }
    if (d == 1) t[0] = 1.0;
    return DirichletCharacter(d, std::move(t));
  }

 private:
  friend DirichletCharacter character_from_index(std::uint64_t, std::uint64_t);
  DirichletCharacter(std::uint64_t q, std::vector<cd> t) : modulus_(q), table_(std::move(t)) {}

  std::uint64_t modulus_;
  std::vector<cd> table_;
};

/// Two characters are equivalent when they are induced by the same primitive character.
inline bool equivalent(const DirichletCharacter& a, const DirichletCharacter& b, double tol = 1e-12) {
  const auto pa = a.primitive(tol);
  const auto pb = b.primitive(tol);
  if (pa.modulus() != pb.modulus()) return false;
  for (std::uint64_t n = 0; n < pa.modulus(); ++n) {
    if (std::abs(pa.table()[n] - pb.table()[n]) > tol) return false;
  }
  return true;
}

inline bool pairwise_non_equivalent(std::span<const DirichletCharacter> chars) {
  for (std::size_t i = 0; i < chars.size(); ++i) {
    for (std::size_t j = i + 1; j < chars.size(); ++j) {
      if (equivalent(chars[i], chars[j])) return false;
    }
  }
  return true;
}

namespace detail {

// One cyclic factor of (Z/q)^*: generated by `generator` modulo `modulus`
// (a prime power dividing q), of order `order`.
struct CyclicFactor {
  std::uint64_t modulus;
  std::uint64_t generator;
  std::uint64_t order;
  std::vector<std::uint64_t> dlog;  // dlog[r] for units r mod modulus
};

inline CyclicFactor make_factor(std::uint64_t modulus, std::uint64_t generator, std::uint64_t order,
                                bool two_part_sign = false) {
  CyclicFactor f{modulus, generator, order, std::vector<std::uint64_t>(modulus, 0)};
  if (two_part_sign) {
    // Factor generated by -1 mod 2^e: the exponent is the residue class mod 4.
    for (std::uint64_t r = 1; r < modulus; r += 2) f.dlog[r] = (r % 4 == 1) ? 0 : 1;
    return f;
  }
  if (modulus % 2 == 0 && modulus >= 8) {
    // Factor generated by 5 mod 2^e: r = +-5^j.
    std::uint64_t x = 1;
    for (std::uint64_t j = 0; j < order; ++j) {
      f.dlog[x] = j;
      f.dlog[modulus - x] = j;
      x = x * 5 % modulus;
    }
    return f;
  }
  std::uint64_t x = 1;
  for (std::uint64_t j = 0; j < order; ++j) {
    f.dlog[x] = j;
    x = mul_mod(x, generator, modulus);
  }
  return f;
}

inline std::uint64_t primitive_root_prime_power(std::uint64_t p, unsigned k, std::uint64_t pk) {
  const std::uint64_t order = pk / p * (p - 1);
  const auto prime_divs = factor_small(order);
  for (std::uint64_t g = 2; g < pk; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (auto [r, e] : prime_divs) {
      if (pow_mod(g, order / r, pk) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  (void)k;
  return 1;  // pk == 2
}

// CRT factors in canonical order: the 2-part first (sign, then 5), then odd
// prime powers ascending.
inline std::vector<CyclicFactor> unit_group_factors(std::uint64_t q) {
  std::vector<CyclicFactor> out;
  for (auto [p, e] : factor_small(q)) {
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < e; ++i) pk *= p;
    if (p == 2) {
      if (e == 2) {
        out.push_back(make_factor(4, 3, 2, true));
      } else if (e >= 3) {
        out.push_back(make_factor(pk, pk - 1, 2, true));
        out.push_back(make_factor(pk, 5, pk / 4));
      }
    } else {
      out.push_back(make_factor(pk, primitive_root_prime_power(p, e, pk), pk / p * (p - 1)));
    }
  }
  return out;
}

}  // namespace detail

/// Canonical enumeration of the characters mod q. The index is read as a
/// mixed-radix number whose digits are the exponents assigned to the CRT
/// generators (2-part sign, 2-part 5, odd prime powers ascending), the first
/// generator being the most significant digit. Index 0 is principal.
inline DirichletCharacter character_from_index(std::uint64_t q, std::uint64_t index) {
  if (q == 0) throw std::invalid_argument("character_from_index: modulus must be positive");
  const std::uint64_t phi = euler_totient(q);
  if (index >= phi) {
    throw std::out_of_range("character_from_index: index " + std::to_string(index) +
                            " outside [0, " + std::to_string(phi) + ")");
  }
  const auto factors = detail::unit_group_factors(q);
  std::vector<std::uint64_t> digits(factors.size(), 0);
  std::uint64_t rest = index;
  for (std::size_t i = factors.size(); i-- > 0;) {
    digits[i] = rest % factors[i].order;
    rest /= factors[i].order;
  }
  std::uint64_t den = 1;
  for (const auto& f : factors) den = std::lcm(den, f.order);

  std::vector<cd> table(q, cd{0.0, 0.0});
  for (std::uint64_t n = 0; n < q; ++n) {
    if (std::gcd(n, q) != 1) continue;
    std::uint64_t num = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& f = factors[i];
      const std::uint64_t e = f.dlog[n % f.modulus] * digits[i] % f.order;
      num = (num + e * (den / f.order)) % den;
    }
    table[n] = unit_root(num, den);
  }
  return DirichletCharacter(q, std::move(table));
}

/// Local Euler data: for each prime p the roots alpha_j(p), |alpha_j(p)| <= 1.
class EulerProductSpec {
 public:
  using RootFn = std::function<std::vector<cd>(std::uint64_t)>;
  static constexpr double kRootTolerance = 1e-12;

  /// Explicit rows; primes without a row are missing data.
  static EulerProductSpec from_rows(unsigned degree, std::map<std::uint64_t, std::vector<cd>> rows,
                                    double sigma_phi, unsigned pole_order = 0,
                                    std::string name = "euler") {
    for (const auto& [p, roots] : rows) {
      if (!is_prime(p)) throw std::invalid_argument("EulerProductSpec: " + std::to_string(p) + " is not prime");
      check_roots(p, roots, degree);
    }
    EulerProductSpec s(degree, sigma_phi, pole_order, std::move(name));
    auto shared = std::make_shared<const std::map<std::uint64_t, std::vector<cd>>>(std::move(rows));
    s.roots_ = [shared](std::uint64_t p) -> std::vector<cd> {
      auto it = shared->find(p);
      if (it == shared->end()) {
        throw std::out_of_range("EulerProductSpec: missing local roots for prime " + std::to_string(p));
      }
      return it->second;
    };
    return s;
  }

  /// Roots given by a rule; bound checked whenever queried.
  static EulerProductSpec from_function(unsigned degree, RootFn fn, double sigma_phi,
                                        unsigned pole_order = 0, std::string name = "euler") {
    EulerProductSpec s(degree, sigma_phi, pole_order, std::move(name));
    s.roots_ = std::move(fn);
    return s;
  }

  static EulerProductSpec zeta() {
    return from_function(1, [](std::uint64_t) { return std::vector<cd>{1.0}; }, 0.5, 1, "zeta");
  }

  static EulerProductSpec from_character(const DirichletCharacter& chi) {
    const bool principal = chi.is_principal();
    return from_function(
        1, [chi](std::uint64_t p) { return std::vector<cd>{chi(static_cast<std::int64_t>(p % chi.modulus()))}; },
        0.5, principal ? 1u : 0u, "chi_mod_" + std::to_string(chi.modulus()));
  }

  unsigned degree() const noexcept { return degree_; }
  double sigma_phi() const noexcept { return sigma_phi_; }
  unsigned pole_order() const noexcept { return pole_order_; }
  const std::string& name() const noexcept { return name_; }

  std::vector<cd> local_roots(std::uint64_t p) const {
    auto r = roots_(p);
    check_roots(p, r, degree_);
    return r;
  }

 private:
  EulerProductSpec(unsigned degree, double sigma_phi, unsigned pole_order, std::string name)
      : degree_(degree), sigma_phi_(sigma_phi), pole_order_(pole_order), name_(std::move(name)) {
    if (degree_ == 0) throw std::invalid_argument("EulerProductSpec: degree must be positive");
    if (!(sigma_phi_ >= 0.5 && sigma_phi_ < 1.0)) {
      throw std::invalid_argument("EulerProductSpec: sigma_phi must lie in [1/2, 1)");
    }
  }

  static void check_roots(std::uint64_t p, const std::vector<cd>& roots, unsigned degree) {
    if (roots.size() != degree) {
      throw std::invalid_argument("EulerProductSpec: prime " + std::to_string(p) + " has " +
                                  std::to_string(roots.size()) + " roots, degree is " +
                                  std::to_string(degree));
    }
    for (cd a : roots) {
      if (std::abs(a) > 1.0 + kRootTolerance) {
        throw std::invalid_argument("EulerProductSpec: |alpha| > 1 at prime " + std::to_string(p));
      }
    }
  }

  unsigned degree_;
  double sigma_phi_;
  unsigned pole_order_;
  std::string name_;
  RootFn roots_;
};

/// Dirichlet coefficients a(1..N) of an Euler product.
class CoefficientTable {
 public:
  CoefficientTable(EulerProductSpec spec, std::vector<cd> a) : spec_(std::move(spec)), a_(std::move(a)) {}

  const EulerProductSpec& spec() const noexcept { return spec_; }
  std::uint64_t limit() const noexcept { return a_.size() - 1; }

  cd operator[](std::uint64_t n) const {
    if (n == 0 || n > limit()) {
      throw std::out_of_range("CoefficientTable: index " + std::to_string(n) + " outside [1, " +
                              std::to_string(limit()) + "]");
    }
    return a_[n];
  }

  /// Index 0 is padding.
  std::span<const cd> raw() const noexcept { return a_; }

  bool is_real() const {
    return std::all_of(a_.begin(), a_.end(), [](cd v) { return v.imag() == 0.0; });
  }

 private:
  EulerProductSpec spec_;
  std::vector<cd> a_;
};

/// Expands prod_p prod_j (1 - alpha_j(p) p^{-s})^{-1} up to n <= N.
inline CoefficientTable coefficients_from_euler(const EulerProductSpec& spec, std::uint64_t limit) {
  if (limit == 0) throw std::invalid_argument("coefficients_from_euler: N must be positive");
  const PrimeSieve sieve(limit);
  std::vector<cd> a(limit + 1, cd{0.0, 0.0});
  a[1] = 1.0;
  for (std::uint64_t p : sieve.primes()) {
    const auto roots = spec.local_roots(p);
    unsigned kmax = 0;
    for (std::uint64_t pk = p; pk <= limit / p; pk *= p) ++kmax;
    ++kmax;
    // Complete homogeneous symmetric polynomials h_k(alpha) = coefficient of x^k.
    std::vector<cd> h(kmax + 1, cd{0.0, 0.0});
    h[0] = 1.0;
    for (cd alpha : roots) {
      for (unsigned k = 1; k <= kmax; ++k) h[k] += alpha * h[k - 1];
    }
    std::uint64_t pk = p;
    for (unsigned k = 1; k <= kmax; ++k) {
      a[pk] = h[k];
      if (k < kmax) pk *= p;
    }
  }
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = sieve.smallest_factor(n);
    std::uint64_t m = n, pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
    }
    if (m != 1) a[n] = a[pk] * a[m];
  }
  return CoefficientTable(spec, std::move(a));
}

/// The m-fold divisor function d_m(n).
inline double divisor_function(unsigned m, std::uint64_t n) {
  double d = 1.0;
  for (auto [p, k] : factor_small(n)) {
    // binom(k + m - 1, m - 1)
    double b = 1.0;
    for (unsigned i = 1; i < m; ++i) b = b * (k + i) / i;
    d *= b;
  }
  return d;
}

/// (1/pi(x)) sum_{p <= x} |a(p)|^2.
inline double prime_mean_square(const CoefficientTable& coeffs, double x) {
  if (!(x >= 2.0)) throw std::invalid_argument("prime_mean_square: x must be >= 2");
  if (x > static_cast<double>(coeffs.limit())) {
    throw std::out_of_range("prime_mean_square: x exceeds coefficient table limit " +
                            std::to_string(coeffs.limit()));
  }
  const auto xi = static_cast<std::uint64_t>(std::floor(x));
  const PrimeSieve sieve(xi);
  double sum = 0.0;
  for (std::uint64_t p : sieve.primes()) sum += std::norm(coeffs[p]);
  return sum / static_cast<double>(sieve.primes().size());
}

}  // namespace hylab
