#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "srt/special.hpp"

using namespace srt::stats;

TEST_CASE("normal cdf basics") {
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std_normal_cdf(1e10) == doctest::Approx(1.0));
  CHECK(std_normal_cdf(-1e10) == doctest::Approx(0.0));
  // monotone over a coarse sweep
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    double c = std_normal_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("normal cdf against quadrature of the density") {
  // Phi(1.959964) ~ 0.975, expected value computed by integrating the
  // density independently
  auto phi = [](double x) {
    return 0.39894228040143267794 * std::exp(-0.5 * x * x);
  };
  double expected = 0.5 + oracle::integrate(phi, 0.0, 1.959964, 1e-12);
  CHECK(std_normal_cdf(1.959964) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(std::fabs(std_normal_cdf(1.959964) - 0.975) < 1e-6);

  for (double x : {-3.0, -1.2, 0.3, 0.9, 2.4, 4.0}) {
    double ref = 0.5 + oracle::integrate(phi, 0.0, x, 1e-13);
    CHECK(std_normal_cdf(x) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("two-sided tail probability matches the published Wald row") {
  // z = -3.80 maps to a two-sided p of 0.00014
  double p = 2.0 * std_normal_cdf(-3.80);
  CHECK(std::fabs(p - 0.00014) < 2e-5);
}

TEST_CASE("normal quantile round trip") {
  for (double p = 0.01; p < 0.995; p += 0.01)
    CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) < 1e-12);
  for (double p : {1e-8, 1e-12, 1e-100, 1.0 - 1e-9})
    CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) <
          1e-10 * std::max(p, 1e-3));
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.2), std::domain_error);
}

TEST_CASE("normal log survival stable in the far tail") {
  for (double x : {0.5, 2.0, 8.0, 20.0, 35.0, 50.0, 100.0}) {
    double lsf = std_normal_logsf(x);
    CHECK(std::isfinite(lsf));
    if (x <= 35.0) {
      double direct = std::log(std_normal_sf(x));
      CHECK(lsf == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("chi-square survival function") {
  CHECK(chi_square_sf(0.0, 1) == doctest::Approx(1.0));
  CHECK(chi_square_sf(0.0, 7) == doctest::Approx(1.0));

  // published model chi-square: sf(358.26, 8) ~ 1.6e-72
  double p = chi_square_sf(358.26, 8);
  CHECK(p == doctest::Approx(1.6e-72).epsilon(0.05));

  // sf(2.706, 1) ~ 0.100; quadrature oracle integrates the upper tail of
  // the density directly (the tail beyond 500 is far below any tolerance)
  auto tail_mass = [](int df, double x) {
    auto density = [df](double u) {
      double a = 0.5 * df;
      return std::exp((a - 1.0) * std::log(u) - 0.5 * u - a * std::log(2.0) -
                      std::lgamma(a));
    };
    double rough = oracle::integrate(density, x, 500.0, 1e-12);
    return oracle::integrate(density, x, 500.0,
                             std::max(rough * 1e-11, 1e-300), 60);
  };
  double ref = tail_mass(1, 2.706);
  CHECK(chi_square_sf(2.706, 1) == doctest::Approx(ref).epsilon(1e-7));
  CHECK(std::fabs(chi_square_sf(2.706, 1) - 0.100) < 1e-3);

  CHECK_THROWS_AS(chi_square_sf(-1.0, 3), std::domain_error);
  CHECK_THROWS_AS(chi_square_sf(1.0, 0), std::domain_error);
}

TEST_CASE("chi-square agrees with quadrature across the grid") {
  auto density = [](int df, double x) {
    double a = 0.5 * df;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) -
                    std::lgamma(a));
  };
  for (int df : {1, 2, 5, 12, 20}) {
    for (double x : {0.5, 3.0, 11.0, 27.0, 50.0}) {
      auto f = [&](double u) { return density(df, u); };
      double rough = oracle::integrate(f, x, 500.0, 1e-12);
      double sf = oracle::integrate(f, x, 500.0, std::max(rough * 1e-11, 1e-300), 60);
      CHECK(chi_square_sf(x, df) == doctest::Approx(sf).epsilon(1e-8));
    }
  }
}

TEST_CASE("digamma and trigamma against finite differences of lgamma") {
  CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-12));
  CHECK(trigamma(1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
  for (double x : {0.3, 1.7, 4.2, 9.5, 33.0}) {
    double h = 1e-5 * std::max(1.0, x);
    double fd1 = (std::lgamma(x + h) - std::lgamma(x - h)) / (2.0 * h);
    double fd2 = (std::lgamma(x + h) - 2.0 * std::lgamma(x) + std::lgamma(x - h)) /
                 (h * h);
    CHECK(digamma(x) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(trigamma(x) == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("incomplete gamma complements") {
  for (double a : {0.5, 1.0, 3.3, 10.0}) {
    for (double x : {0.1, 1.0, 4.0, 20.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
  CHECK(gamma_p(2.0, 0.0) == 0.0);
  CHECK(gamma_q(2.0, 0.0) == 1.0);
}

TEST_CASE("log1pexp and logistic_cdf stability") {
  CHECK(log1pexp(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(log1pexp(800.0) == doctest::Approx(800.0).epsilon(1e-12));
  CHECK(log1pexp(-800.0) == doctest::Approx(0.0));
  CHECK(logistic_cdf(0.0) == doctest::Approx(0.5));
  CHECK(logistic_cdf(800.0) == doctest::Approx(1.0));
  CHECK(logistic_cdf(-800.0) == doctest::Approx(0.0));
  CHECK(logistic_cdf(3.0) + logistic_cdf(-3.0) == doctest::Approx(1.0).epsilon(1e-14));
}
