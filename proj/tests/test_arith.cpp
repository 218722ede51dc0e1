#include <catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <random>

#include "hylab/arith.hpp"
#include "hylab/spec_io.hpp"

using namespace hylab;
using Catch::Matchers::WithinAbs;

namespace {

// Dirichlet series of prod_{p <= N} (1 - alpha p^{-s})^{-1} by repeated naive convolution.
std::vector<cd> brute_euler(const EulerProductSpec& spec, std::uint64_t n_max) {
  std::vector<cd> acc(n_max + 1, 0.0);
  acc[1] = 1.0;
  for (std::uint64_t p = 2; p <= n_max; ++p) {
    if (!is_prime(p)) continue;
    for (cd alpha : spec.local_roots(p)) {
      std::vector<cd> geo(n_max + 1, 0.0);
      cd pw = 1.0;
      for (std::uint64_t q = 1; q <= n_max; q *= p) {
        geo[q] = pw;
        pw *= alpha;
        if (q > n_max / p) break;
      }
      std::vector<cd> next(n_max + 1, 0.0);
      for (std::uint64_t a = 1; a <= n_max; ++a) {
        if (acc[a] == cd{0.0, 0.0}) continue;
        for (std::uint64_t b = 1; a * b <= n_max; ++b) next[a * b] += acc[a] * geo[b];
      }
      acc = std::move(next);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("prime sieve basics") {
  PrimeSieve s(100);
  CHECK(s.primes().size() == 25);
  CHECK(s.prime_count(100) == 25);
  CHECK(s.prime_count(1) == 0);
  CHECK(s.is_prime(97));
  CHECK_FALSE(s.is_prime(91));
  CHECK(s.smallest_factor(91) == 7);
  CHECK_THROWS_AS(s.is_prime(101), std::out_of_range);
  CHECK(euler_totient(12) == 4);
  CHECK(carmichael_lambda(8) == 2);
  CHECK(carmichael_lambda(15) == 4);
  CHECK(pow_mod(3, 200, 1000003) == pow_mod(9, 100, 1000003));
}

TEST_CASE("character from index: trivial modulus and the character mod 4") {
  const auto c1 = character_from_index(1, 0);
  CHECK(c1.modulus() == 1);
  for (std::int64_t n = -5; n < 20; ++n) CHECK(c1(n) == cd{1.0, 0.0});

  const auto c4 = character_from_index(4, 1);
  CHECK(c4(0) == cd{0.0, 0.0});
  CHECK(c4(1) == cd{1.0, 0.0});
  CHECK(c4(2) == cd{0.0, 0.0});
  CHECK(c4(3) == cd{-1.0, 0.0});
  CHECK(c4(-1) == cd{-1.0, 0.0});
  CHECK(c4.is_real());
  CHECK(c4.conductor() == 4);
  CHECK(character_from_index(4, 0).is_principal());
}

TEST_CASE("character from index errors") {
  CHECK_THROWS_AS(character_from_index(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(character_from_index(5, 4), std::out_of_range);
  CHECK_THROWS_AS(character_from_index(12, 4), std::out_of_range);
}

TEST_CASE("characters mod 5 sum to zero when nonprincipal") {
  for (std::uint64_t k = 1; k < 4; ++k) {
    const auto chi = character_from_index(5, k);
    cd sum = 0.0;
    for (cd v : chi.table()) sum += v;
    CHECK(std::abs(sum) < 1e-14);
  }
  CHECK(character_from_index(5, 1)(2) == cd{0.0, 1.0});
}

TEST_CASE("character table invariants and orthogonality", "[property]") {
  for (std::uint64_t q : {1, 2, 3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 25, 27, 32, 36, 40, 48, 60}) {
    const std::uint64_t phi = euler_totient(q);
    const std::uint64_t lam = carmichael_lambda(q);
    std::vector<DirichletCharacter> chars;
    for (std::uint64_t i = 0; i < phi; ++i) chars.push_back(character_from_index(q, i));
    CHECK(chars[0].is_principal());
    for (const auto& chi : chars) {
      CHECK(chi(1) == cd{1.0, 0.0});
      for (std::uint64_t n = 0; n < q; ++n) {
        const bool unit = std::gcd(n, q) == 1;
        CHECK((unit ? std::abs(std::abs(chi(n)) - 1.0) < 1e-14 : chi(n) == cd{0.0, 0.0}));
        if (unit) CHECK(std::abs(std::pow(chi(n), static_cast<double>(lam)) - 1.0) < 1e-12);
        for (std::uint64_t m = 0; m < q; ++m) CHECK(std::abs(chi(m * n % q) - chi(m) * chi(n)) < 1e-12);
      }
    }
    for (std::size_t a = 0; a < chars.size(); ++a) {
      for (std::size_t b = 0; b < chars.size(); ++b) {
        cd s = 0.0;
        for (std::uint64_t n = 0; n < q; ++n) s += chars[a](n) * std::conj(chars[b](n));
        const double expect = a == b ? static_cast<double>(phi) : 0.0;
        CHECK(std::abs(s - expect) < 1e-9);
      }
    }
  }
}

TEST_CASE("from_table validation") {
  CHECK_NOTHROW(DirichletCharacter::from_table(4, {0.0, 1.0, 0.0, -1.0}));
  CHECK_THROWS_AS(DirichletCharacter::from_table(4, {0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(DirichletCharacter::from_table(4, {0.0, 1.0, 0.5, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DirichletCharacter::from_table(5, {0.0, 1.0, 1.0, -1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("equivalence through primitive reduction") {
  const auto c4 = character_from_index(4, 1);
  const auto c12 = character_from_index(12, 2);
  CHECK(c12.conductor() == 4);
  CHECK(equivalent(c4, c12));
  CHECK_FALSE(equivalent(c4, character_from_index(12, 1)));
  CHECK(equivalent(character_from_index(1, 0), character_from_index(15, 0)));
  std::vector<DirichletCharacter> mod5;
  for (std::uint64_t k = 0; k < 4; ++k) mod5.push_back(character_from_index(5, k));
  CHECK(pairwise_non_equivalent(mod5));
  mod5.push_back(character_from_index(10, 1));
  CHECK_FALSE(pairwise_non_equivalent(mod5));
}

TEST_CASE("zeta coefficients are all one") {
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 1000);
  for (std::uint64_t n = 1; n <= 1000; ++n) CHECK(t[n] == cd{1.0, 0.0});
}

TEST_CASE("character mod 4 coefficients match the brute-force product") {
  const auto spec = EulerProductSpec::from_character(character_from_index(4, 1));
  const auto t = coefficients_from_euler(spec, 50);
  const auto brute = brute_euler(spec, 50);
  const cd pattern[4] = {0.0, 1.0, 0.0, -1.0};
  for (std::uint64_t n = 1; n <= 50; ++n) {
    CHECK(std::abs(t[n] - brute[n]) < 1e-14);
    CHECK(t[n] == pattern[n % 4]);
  }
}

TEST_CASE("degree-two unit roots give the divisor function") {
  const auto t = coefficients_from_euler(divisor_spec(2), 2000);
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    std::uint64_t d = 0;
    for (std::uint64_t k = 1; k <= n; ++k) d += (n % k == 0);
    CHECK(t[n].real() == static_cast<double>(d));
  }
}

TEST_CASE("complex degree-two spec matches the brute-force product") {
  const auto spec = EulerProductSpec::from_function(
      2, [](std::uint64_t p) { return std::vector<cd>{std::polar(1.0, 0.3 * p), std::polar(0.7, -1.1 * p)}; }, 0.5);
  const auto t = coefficients_from_euler(spec, 300);
  const auto brute = brute_euler(spec, 300);
  for (std::uint64_t n = 1; n <= 300; ++n) CHECK(std::abs(t[n] - brute[n]) < 1e-12);
}

TEST_CASE("multiplicativity fuzz and divisor bound", "[property]") {
  const std::uint64_t n_max = 20000;
  std::vector<EulerProductSpec> specs{EulerProductSpec::zeta(), divisor_spec(3),
                                      EulerProductSpec::from_character(character_from_index(7, 2)),
                                      EulerProductSpec::from_function(
                                          2,
                                          [](std::uint64_t p) {
                                            return std::vector<cd>{std::polar(1.0, std::sqrt(double(p))),
                                                                   std::polar(1.0, -std::log(double(p)))};
                                          },
                                          0.5)};
  std::mt19937_64 rng(7);
  for (const auto& spec : specs) {
    const auto t = coefficients_from_euler(spec, n_max);
    CHECK(t[1] == cd{1.0, 0.0});
    int pairs = 0;
    while (pairs < 500) {
      const std::uint64_t m = 1 + rng() % 300, n = 1 + rng() % 300;
      if (std::gcd(m, n) != 1 || m * n > n_max) continue;
      ++pairs;
      const cd lhs = t[m * n], rhs = t[m] * t[n];
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      CHECK(std::abs(t[n]) <= divisor_function(spec.degree(), n) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("root bound gate") {
  std::map<std::uint64_t, std::vector<cd>> rows{{2, {cd{1.0 + 1e-11, 0.0}}}};
  CHECK_THROWS_AS(EulerProductSpec::from_rows(1, rows, 0.5), std::invalid_argument);
  rows[2] = {cd{1.0 + 1e-13, 0.0}};
  CHECK_NOTHROW(EulerProductSpec::from_rows(1, rows, 0.5));
  const auto bad = EulerProductSpec::from_function(1, [](std::uint64_t p) { return std::vector<cd>{p == 3 ? 1.5 : 1.0}; }, 0.5);
  CHECK_THROWS_AS(coefficients_from_euler(bad, 10), std::invalid_argument);
  CHECK_THROWS_AS(EulerProductSpec::from_rows(1, {{4, {cd{1.0}}}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(EulerProductSpec::from_rows(2, {{2, {cd{1.0}}}}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(EulerProductSpec::from_rows(1, {}, 1.0), std::invalid_argument);
}

TEST_CASE("missing root data names the prime") {
  const auto spec = EulerProductSpec::from_rows(1, {{2, {cd{1.0}}}, {3, {cd{-1.0}}}, {7, {cd{1.0}}}}, 0.5);
  CHECK_NOTHROW(coefficients_from_euler(spec, 4));
  try {
    (void)coefficients_from_euler(spec, 10);
    FAIL("expected an error");
  } catch (const std::out_of_range& e) {
    CHECK(std::string(e.what()).find("prime 5") != std::string::npos);
  }
}

TEST_CASE("prime mean square") {
  CHECK(prime_mean_square(coefficients_from_euler(EulerProductSpec::zeta(), 100), 100) == 1.0);
  const auto c4 = coefficients_from_euler(EulerProductSpec::from_character(character_from_index(4, 1)), 100);
  CHECK(prime_mean_square(c4, 100) == 24.0 / 25.0);
  CHECK(prime_mean_square(coefficients_from_euler(divisor_spec(2), 100), 100) == 4.0);
  CHECK_THROWS_AS(prime_mean_square(c4, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(prime_mean_square(c4, 200), std::out_of_range);
}

TEST_CASE("coefficient table access") {
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 10);
  CHECK(t.limit() == 10);
  CHECK_THROWS_AS(t[0], std::out_of_range);
  CHECK_THROWS_AS(t[11], std::out_of_range);
  CHECK(t.is_real());
  CHECK_FALSE(coefficients_from_euler(EulerProductSpec::from_character(character_from_index(5, 1)), 10).is_real());
  CHECK_THROWS_AS(coefficients_from_euler(EulerProductSpec::zeta(), 0), std::invalid_argument);
}
