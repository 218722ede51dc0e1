#include <catch_amalgamated.hpp>

#include <numbers>

#include "hylab/random_model.hpp"
#include "hylab/spec_io.hpp"
#include "hylab/stats.hpp"

using namespace hylab;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<std::uint64_t> primes_upto(std::uint64_t n) { return PrimeSieve(n).primes(); }

double se_of_mean(const std::vector<double>& xs) { return moments(xs).mean_se; }

}  // namespace

TEST_CASE("omega sampling is deterministic per seed and stream") {
  const auto ps = primes_upto(1000);
  const auto a = sample_omega(ps, 42, 7), b = sample_omega(ps, 42, 7);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  const auto c = sample_omega(ps, 42, 8), d = sample_omega(ps, 43, 7);
  CHECK(a(2) != c(2));
  CHECK(a(2) != d(2));
  for (cd v : a.values()) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
  CHECK(a.seed() == 42);
  CHECK(a.stream() == 7);
  CHECK(a.prime_bound() == 997);
  // the value at p does not depend on which other primes were sampled
  const std::vector<std::uint64_t> few{2, 997};
  CHECK(sample_omega(few, 42, 7)(997) == a(997));
}

TEST_CASE("counter uniform stays in the unit interval") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = counter_uniform(3, i % 17, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("Haar means of omega(2) and omega(2) conj omega(3)") {
  const std::vector<std::uint64_t> ps{2, 3};
  const std::size_t m = 100000;
  cd sum = 0.0;
  std::vector<double> re, im;
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = sample_omega(ps, 2024, i);
    sum += w(2);
    const cd x = w(2) * std::conj(w(3));
    re.push_back(x.real());
    im.push_back(x.imag());
  }
  const double bound = 3.0 / std::sqrt(double(m)) / std::sqrt(2.0);
  CHECK(std::abs(sum.real() / m) < bound);
  CHECK(std::abs(sum.imag() / m) < bound);
  CHECK(std::abs(moments(re).mean) < 3 * se_of_mean(re));
  CHECK(std::abs(moments(im).mean) < 3 * se_of_mean(im));
}

TEST_CASE("completely multiplicative extension") {
  const auto w = OmegaSample::from_values({3, 2, 5}, {cd{-1.0, 0.0}, cd{0.0, 1.0}, std::polar(1.0, 0.4)});
  CHECK(omega_at_n(w, 1) == cd{1.0, 0.0});
  CHECK(omega_at_n(w, 12) == cd{1.0, 0.0});
  CHECK(std::abs(omega_at_n(w, 30) - w(2) * w(3) * w(5)) < 1e-15);
  CHECK_THROWS_AS(omega_at_n(w, 14), std::out_of_range);
  CHECK_THROWS_AS(omega_at_n(w, 0), std::invalid_argument);
  CHECK_THROWS_AS(OmegaSample::from_values({2}, {cd{0.5, 0.0}}), std::invalid_argument);

  const auto big = sample_omega(primes_upto(500), 1, 1);
  const auto table = omega_table(big, 500);
  for (std::uint64_t n = 1; n <= 500; ++n) CHECK(std::abs(table[n] - omega_at_n(big, n)) < 1e-13);
  CHECK_THROWS_AS(omega_table(big, 600), std::out_of_range);
}

TEST_CASE("log Euler factor examples") {
  const auto zero = EulerProductSpec::from_function(2, [](std::uint64_t) { return std::vector<cd>(2, 0.0); }, 0.5);
  CHECK(log_euler_factor(zero, 7, cd{0.0, 1.0}, 0.75) == cd{0.0, 0.0});
  CHECK_THAT(log_euler_factor(EulerProductSpec::zeta(), 2, 1.0, 1.0).real(), WithinAbs(std::log(2.0), 1e-15));
  CHECK_THROWS_AS(log_euler_factor(EulerProductSpec::zeta(), 2, 1.0, 0.0), std::domain_error);
  const auto spec = divisor_spec(3);
  for (double th : {0.0, 1.0, 2.5, -3.0}) {
    const cd z = std::polar(1.0, th);
    for (cd s : {cd{0.75, 0.0}, cd{0.55, 30.0}, cd{0.1, -2.0}}) {
      const cd direct = std::pow(1.0 - z * std::exp(-s * std::log(5.0)), -3.0);
      CHECK(std::abs(std::exp(log_euler_factor(spec, 5, z, s)) - direct) < 1e-12 * std::abs(direct));
    }
  }
}

TEST_CASE("log Euler factor has Haar mean zero") {
  const std::vector<std::uint64_t> ps{2};
  const std::size_t m = 100000;
  std::vector<double> re, im;
  for (std::size_t i = 0; i < m; ++i) {
    const cd v = log_euler_factor(EulerProductSpec::zeta(), 2, sample_omega(ps, 5, i)(2), 0.75);
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  CHECK(std::abs(moments(re).mean) < 3 * se_of_mean(re));
  CHECK(std::abs(moments(im).mean) < 3 * se_of_mean(im));
}

TEST_CASE("random log value") {
  const auto ps = primes_upto(10000);
  const auto spec = EulerProductSpec::zeta();
  const auto w = sample_omega(ps, 9, 3);
  CHECK(random_log_value(spec, w, 0.75, 1) == cd{0.0, 0.0});
  const cd lv = random_log_value(spec, w, 0.75, 1000);
  const cd prod = random_euler_product(spec, w, 0.75, 1000);
  CHECK(std::abs(std::exp(lv) - prod) < 1e-10 * std::abs(prod));
  CHECK_THROWS_AS(random_log_value(spec, w, 0.5, 100), std::domain_error);
  CHECK_THROWS_AS(random_log_value(spec, sample_omega(primes_upto(100), 1, 1), 0.75, 1000), std::out_of_range);

  double tail = 0.0;
  for (auto p : ps) {
    if (p > 1000) tail += std::pow(double(p), -0.75) + std::pow(double(p), -1.5);
  }
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    const auto ws = sample_omega(ps, 9, stream);
    CHECK(std::abs(random_log_value(spec, ws, 0.75, 10000) - random_log_value(spec, ws, 0.75, 1000)) <= tail);
  }
}

TEST_CASE("second moment of log factors is increasing and bounded", "[property]") {
  const auto ps = primes_upto(200);
  const std::size_t m = 4000;
  std::vector<double> per_prime(ps.size(), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto w = sample_omega(ps, 77, i);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      per_prime[j] += std::norm(log_euler_factor(EulerProductSpec::zeta(), ps[j], w(ps[j]), 0.75)) / m;
    }
  }
  double running = 0.0, bound = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const double prev = running;
    running += per_prime[j];
    CHECK(running > prev);
    double inner = 0.0;
    for (int k = 1; k < 60; ++k) inner += std::pow(double(ps[j]), -0.75 * k) / k;
    bound += inner * inner;
    CHECK(running <= bound);
  }
}

TEST_CASE("omega identically one reproduces the smoothed series") {
  const SmoothingKernel k;
  const auto t = coefficients_from_euler(EulerProductSpec::from_character(character_from_index(5, 2)), 1000);
  const auto ps = primes_upto(600);
  const auto ones = OmegaSample::from_values(ps, std::vector<cd>(ps.size(), 1.0));
  const cd s{0.75, 3.0};
  CHECK(std::abs(random_smoothed_value(t, k, ones, s, 200.0) - smoothed_value(t, k, s, 200.0)) < 1e-12);
  CHECK_THROWS_AS(random_smoothed_value(t, k, sample_omega(primes_upto(100), 1, 1), s, 200.0), std::out_of_range);
}

TEST_CASE("Monte Carlo moments of the random smoothed series") {
  const SmoothingKernel k;
  const double x = 200.0;
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 1000);
  const SmoothedSeries series(t, k, x);
  const auto ps = model_primes(series.terms());
  const PrimeSieve sieve(series.terms());
  const std::size_t m = 10000;
  std::vector<double> re, sq;
  for (std::size_t i = 0; i < m; ++i) {
    const cd v = series.twisted(0.75, omega_table(sample_omega(ps, 31337, i), series.terms(), sieve));
    re.push_back(v.real());
    sq.push_back(std::norm(v));
  }
  double var = 0.0;
  for (std::size_t i = 1; i < series.terms(); ++i) var += std::norm(series.weights()[i]) * std::exp(-1.5 * series.logs()[i]);
  const double se_closed = std::sqrt(0.5 * var / m);
  CHECK(std::abs(moments(re).mean - 1.0) < 3 * se_closed);
  CHECK(std::abs(moments(sq).mean - mean_square_diagonal(series, 0.75)) < 3 * moments(sq).mean_se);
}

TEST_CASE("first absolute moment below the root mean square", "[property]") {
  const SmoothingKernel k;
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 1000);
  const SmoothedSeries series(t, k, 200.0);
  const auto ps = model_primes(series.terms());
  const PrimeSieve sieve(series.terms());
  for (double sigma : {0.6, 0.75, 0.9}) {
    std::vector<double> a;
    for (std::size_t i = 0; i < 3000; ++i) {
      a.push_back(std::abs(series.twisted(sigma, omega_table(sample_omega(ps, 8, i), series.terms(), sieve))));
    }
    const auto mm = moments(a);
    CHECK(mm.mean <= std::sqrt(mean_square_diagonal(series, sigma)) + 3 * mm.mean_se);
  }
}

TEST_CASE("random truncations converge on a compact as X grows", "[property]") {
  const SmoothingKernel k;
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 10000);
  const CompactRectangle K{0.7, 0.8, 1.0, 5};
  const auto ps = primes_upto(9600);
  const PrimeSieve sieve(9600);
  double prev = 1e300;
  for (double x : {200.0, 400.0, 800.0}) {
    const SmoothedSeries small(t, k, x), large(t, k, 4 * x);
    const RectangleEvaluator a(small, K), b(large, K);
    double mean = 0.0;
    const std::size_t m = 500;
    for (std::size_t i = 0; i < m; ++i) {
      const auto table = omega_table(sample_omega(ps, 4, i), large.terms(), sieve);
      mean += seminorm(a.apply(table), b.apply(table)) / m;
    }
    CHECK(mean < prev);
    prev = mean;
  }
}

TEST_CASE("vertical growth of random series (diagnostic)") {
  const SmoothingKernel k;
  const auto t = coefficients_from_euler(EulerProductSpec::zeta(), 1000);
  const SmoothedSeries series(t, k, 200.0);
  const auto ps = model_primes(series.terms());
  const PrimeSieve sieve(series.terms());
  int sublinear = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto table = omega_table(sample_omega(ps, 99, i), series.terms(), sieve);
    const double a10 = std::abs(series.twisted(cd{0.75, 10.0}, table));
    const double a1000 = std::abs(series.twisted(cd{0.75, 1000.0}, table));
    if (a1000 / (1000.0 + 2.0) < a10 / (10.0 + 2.0)) ++sublinear;
  }
  WARN("draws with sublinear growth between |t| = 10 and 1000: " << sublinear << "/10");
}
