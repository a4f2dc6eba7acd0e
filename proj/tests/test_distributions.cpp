#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "srt/distributions.hpp"

using namespace srt::surv;

namespace {

// representative valid parameters per family (shapes > 1 keep densities
// bounded at 0 for the quadrature check)
const std::vector<std::pair<DistFamily, std::vector<double>>> kCases = {
    {DistFamily::exponential, {0.7}},
    {DistFamily::weibull, {1.7, 3.2}},
    {DistFamily::lognormal, {0.4, 0.8}},
    {DistFamily::gamma, {2.3, 1.4}},
    {DistFamily::loglogistic, {4.5, 3.0}},
};

}  // namespace

TEST_CASE("closed-form anchors") {
  // exponential rate 0.5: S(2) = e^-1
  std::vector<double> exp_p = {0.5};
  CHECK(dist_survival(DistFamily::exponential, exp_p, 2.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  // log-logistic survival is 1/2 at the scale for any shape
  for (double shape : {0.8, 2.0, 11.0}) {
    std::vector<double> p = {4.5, shape};
    CHECK(dist_survival(DistFamily::loglogistic, p, 4.5) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }

  // published regression intercept/scale: alpha = exp(1.50079), p = 1/0.0896
  std::vector<double> table4 = {std::exp(1.50079), 1.0 / 0.0896};
  CHECK(dist_survival(DistFamily::loglogistic, table4, 4.485) ==
        doctest::Approx(0.5).epsilon(1e-3));
  CHECK(dist_survival(DistFamily::loglogistic, table4, std::exp(1.50079)) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quantile/cdf round trips across every family") {
  for (const auto& [family, params] : kCases) {
    for (int i = 1; i <= 99; ++i) {
      double q = i / 100.0;
      double t = dist_quantile(family, params, q);
      CHECK(std::fabs(dist_cdf(family, params, t) - q) < 1e-10);
    }
  }
}

TEST_CASE("survival is one minus cdf") {
  for (const auto& [family, params] : kCases)
    for (double t : {0.2, 1.0, 3.7, 12.0})
      CHECK(dist_survival(family, params, t) + dist_cdf(family, params, t) ==
            doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density quadrature normalizes to one") {
  for (const auto& [family, params] : kCases) {
    double upper = dist_quantile(family, params, 1.0 - 1e-9);
    auto pdf = [&, family = family, params = params](double t) {
      return t <= 0.0 ? 0.0 : std::exp(dist_logpdf(family, params, t));
    };
    double mass = oracle::integrate(pdf, 1e-12, upper, 1e-9, 60);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("weibull with shape 1 collapses to the exponential") {
  double scale = 2.5;
  std::vector<double> weib = {1.0, scale};
  std::vector<double> expo = {1.0 / scale};
  for (double t = 0.1; t < 12.0; t += 0.3)
    CHECK(std::fabs(dist_survival(DistFamily::weibull, weib, t) -
                    dist_survival(DistFamily::exponential, expo, t)) < 1e-12);
}

TEST_CASE("domain errors") {
  std::vector<double> ok = {1.0, 1.0};
  CHECK_THROWS_AS(dist_logpdf(DistFamily::weibull, ok, -1.0), std::domain_error);
  CHECK_THROWS_AS(dist_logpdf(DistFamily::weibull, ok, 0.0), std::domain_error);
  CHECK_THROWS_AS(dist_quantile(DistFamily::weibull, ok, 0.0), std::domain_error);
  CHECK_THROWS_AS(dist_quantile(DistFamily::weibull, ok, 1.0), std::domain_error);
  std::vector<double> bad_scale = {1.0, -2.0};
  CHECK_THROWS_AS(dist_cdf(DistFamily::weibull, bad_scale, 1.0), std::domain_error);
  std::vector<double> bad_rate = {0.0};
  CHECK_THROWS_AS(dist_cdf(DistFamily::exponential, bad_rate, 1.0), std::domain_error);
  std::vector<double> bad_sigma = {0.0, 0.0};
  CHECK_THROWS_AS(dist_cdf(DistFamily::lognormal, bad_sigma, 1.0), std::domain_error);
}

TEST_CASE("logpdf matches quadrature-free analytic spot checks") {
  // lognormal density at the median equals 1/(t sigma sqrt(2 pi))
  std::vector<double> ln_p = {1.2, 0.5};
  double median = std::exp(1.2);
  CHECK(std::exp(dist_logpdf(DistFamily::lognormal, ln_p, median)) ==
        doctest::Approx(1.0 / (median * 0.5 * std::sqrt(2.0 * M_PI))).epsilon(1e-12));

  // gamma(1, rate) is the exponential
  std::vector<double> g1 = {1.0, 0.8};
  std::vector<double> e1 = {0.8};
  for (double t : {0.5, 2.0, 6.0})
    CHECK(dist_logpdf(DistFamily::gamma, g1, t) ==
          doctest::Approx(dist_logpdf(DistFamily::exponential, e1, t)).epsilon(1e-12));
}

TEST_CASE("information criteria formulas") {
  auto [aic1, bic1] = information_criteria(-10.0, 2, 100);
  CHECK(aic1 == doctest::Approx(24.0));
  CHECK(bic1 == doctest::Approx(2.0 * std::log(100.0) + 20.0).epsilon(1e-12));
  CHECK(bic1 == doctest::Approx(29.21034).epsilon(1e-6));
  auto [aic2, bic2] = information_criteria(0.0, 3, 50);
  CHECK(aic2 == doctest::Approx(6.0));
  CHECK(bic2 == doctest::Approx(3.0 * std::log(50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(information_criteria(0.0, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(information_criteria(0.0, 1, 0), std::invalid_argument);
}
