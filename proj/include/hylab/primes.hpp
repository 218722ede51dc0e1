#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hylab {

/// Smallest-prime-factor sieve on [0, limit].
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
    for (std::uint64_t i = 2; i <= limit_; ++i) {
      if (spf_[i] == 0) {
        primes_.push_back(i);
        for (std::uint64_t j = i; j <= limit_; j += i) {
          if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
        }
      }
    }
  }

  std::uint64_t limit() const noexcept { return limit_; }
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

  bool is_prime(std::uint64_t n) const {
    check(n);
    return n >= 2 && spf_[n] == n;
  }

  std::uint64_t smallest_factor(std::uint64_t n) const {
    check(n);
    return spf_[n];
  }

  /// Prime factorization as (p, exponent) pairs, ascending in p.
  std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) const {
    check(n);
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    while (n > 1) {
      const std::uint64_t p = spf_[n];
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    return out;
  }

  /// pi(x) for x <= limit.
  std::size_t prime_count(std::uint64_t x) const {
    check(x);
    std::size_t lo = 0, hi = primes_.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (primes_[mid] <= x) lo = mid + 1;
      else hi = mid;
    }
    return lo;
  }

 private:
  void check(std::uint64_t n) const {
    if (n > limit_) {
      throw std::out_of_range("PrimeSieve: " + std::to_string(n) + " exceeds sieve limit " +
                              std::to_string(limit_));
    }
  }

  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint64_t> primes_;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Trial-division factorization; fine for moduli and small n.
inline std::vector<std::pair<std::uint64_t, unsigned>> factor_small(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      unsigned e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::uint64_t euler_totient(std::uint64_t n) {
  std::uint64_t t = n;
  for (auto [p, e] : factor_small(n)) t = t / p * (p - 1);
  return t;
}

inline std::uint64_t carmichael_lambda(std::uint64_t n) {
  std::uint64_t l = 1;
  for (auto [p, e] : factor_small(n)) {
    std::uint64_t pk = 1;
    for (unsigned i = 0; i < e; ++i) pk *= p;
    std::uint64_t part = pk / p * (p - 1);
    if (p == 2 && e >= 3) part /= 2;
    l = std::lcm(l, part);
  }
  return l;
}

__extension__ using uint128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<uint128>(a) * b) % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

}  // namespace hylab
