#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "srt/distributions.hpp"
#include "srt/errors.hpp"

using namespace srt::surv;

namespace {

std::vector<SurvivalSample> events_only(const std::vector<double>& times) {
  std::vector<SurvivalSample> out;
  for (double t : times) out.push_back({t, true});
  return out;
}

}  // namespace

TEST_CASE("exponential closed-form MLE") {
  auto fit = fit_univariate(events_only({1.0, 2.0, 3.0}), DistFamily::exponential);
  CHECK(fit.params[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fit.log_likelihood ==
        doctest::Approx(3.0 * std::log(0.5) - 0.5 * 6.0).epsilon(1e-12));
  CHECK(fit.log_likelihood == doctest::Approx(-5.07944).epsilon(1e-5));
  CHECK(fit.aic == doctest::Approx(2.0 - 2.0 * fit.log_likelihood).epsilon(1e-12));
  CHECK(fit.bic ==
        doctest::Approx(std::log(3.0) - 2.0 * fit.log_likelihood).epsilon(1e-12));
  CHECK(fit.n == 3);
}

TEST_CASE("exponential MLE with censoring uses total exposure") {
  std::vector<SurvivalSample> samples = {{2.0, true}, {3.0, false}, {5.0, true}};
  auto fit = fit_univariate(samples, DistFamily::exponential);
  CHECK(fit.params[0] == doctest::Approx(2.0 / 10.0).epsilon(1e-14));
}

TEST_CASE("loglogistic parameter recovery within three standard errors") {
  oracle::Rng rng(20240811);
  std::vector<SurvivalSample> samples;
  const double scale = 4.5, shape = 11.0;
  for (int i = 0; i < 5000; ++i)
    samples.push_back({oracle::sample_loglogistic(rng, scale, shape), true});
  auto fit = fit_univariate(samples, DistFamily::loglogistic);
  REQUIRE(fit.params.size() == 2);
  REQUIRE(fit.std_errors.size() == 2);
  CHECK(std::fabs(fit.params[0] - scale) < 3.0 * fit.std_errors[0]);
  CHECK(std::fabs(fit.params[1] - shape) < 3.0 * fit.std_errors[1]);
  // sanity: the standard errors themselves are in a plausible band
  CHECK(fit.std_errors[0] > 1e-4);
  CHECK(fit.std_errors[0] < 0.1);
}

TEST_CASE("weibull and lognormal recovery") {
  oracle::Rng rng(77);
  std::vector<SurvivalSample> wb, ln;
  for (int i = 0; i < 4000; ++i) {
    wb.push_back({oracle::sample_weibull(rng, 2.2, 5.0), true});
    ln.push_back({oracle::sample_lognormal(rng, 1.1, 0.4), true});
  }
  auto fw = fit_univariate(wb, DistFamily::weibull);
  CHECK(std::fabs(fw.params[0] - 2.2) < 3.0 * fw.std_errors[0]);
  CHECK(std::fabs(fw.params[1] - 5.0) < 3.0 * fw.std_errors[1]);
  auto fl = fit_univariate(ln, DistFamily::lognormal);
  CHECK(std::fabs(fl.params[0] - 1.1) < 3.0 * fl.std_errors[0]);
  CHECK(std::fabs(fl.params[1] - 0.4) < 3.0 * fl.std_errors[1]);
  // lognormal MLE is closed form: mean and population sd of ln t
  double m = 0.0;
  for (const auto& s : ln) m += std::log(s.time);
  m /= ln.size();
  double v = 0.0;
  for (const auto& s : ln) v += (std::log(s.time) - m) * (std::log(s.time) - m);
  v /= ln.size();
  CHECK(fl.params[0] == doctest::Approx(m).epsilon(1e-7));
  CHECK(fl.params[1] == doctest::Approx(std::sqrt(v)).epsilon(1e-6));
}

TEST_CASE("gamma recovery, uncensored and censored") {
  oracle::Rng rng(99);
  std::vector<SurvivalSample> samples;
  for (int i = 0; i < 4000; ++i)
    samples.push_back({oracle::sample_gamma(rng, 3.0, 0.8), true});
  auto fit = fit_univariate(samples, DistFamily::gamma);
  CHECK(std::fabs(fit.params[0] - 3.0) < 3.0 * fit.std_errors[0]);
  CHECK(std::fabs(fit.params[1] - 0.8) < 3.0 * fit.std_errors[1]);

  // administrative censoring at t = 5
  std::vector<SurvivalSample> cens;
  for (const auto& s : samples)
    cens.push_back(s.time < 5.0 ? s : SurvivalSample{5.0, false});
  auto cfit = fit_univariate(cens, DistFamily::gamma);
  CHECK(std::fabs(cfit.params[0] - 3.0) < 4.0 * cfit.std_errors[0]);
  CHECK(std::fabs(cfit.params[1] - 0.8) < 4.0 * cfit.std_errors[1]);
}

TEST_CASE("every family sits at a local maximum") {
  oracle::Rng rng(5);
  std::vector<SurvivalSample> samples;
  for (int i = 0; i < 300; ++i)
    samples.push_back({oracle::sample_loglogistic(rng, 4.0, 6.0), true});
  // censor a tenth to exercise the censored terms
  for (std::size_t i = 0; i < samples.size(); i += 10) samples[i].event = false;

  for (auto family : {DistFamily::exponential, DistFamily::weibull,
                      DistFamily::lognormal, DistFamily::gamma,
                      DistFamily::loglogistic}) {
    auto fit = fit_univariate(samples, family);
    auto loglik = [&](const std::vector<double>& p) {
      double ll = 0.0;
      for (const auto& s : samples)
        ll += s.event ? dist_logpdf(family, p, s.time)
                      : std::log(dist_survival(family, p, s.time));
      return ll;
    };
    double base = loglik(fit.params);
    CHECK(base == doctest::Approx(fit.log_likelihood).epsilon(1e-10));
    for (std::size_t j = 0; j < fit.params.size(); ++j) {
      for (double delta : {-1e-4, 1e-4}) {
        auto p = fit.params;
        p[j] += delta;
        CHECK(loglik(p) <= base + 1e-9);
      }
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_univariate({}, DistFamily::exponential),
                  srt::InsufficientDataError);
  CHECK_THROWS_AS(fit_univariate({{1.0, true}}, DistFamily::weibull),
                  srt::InsufficientDataError);
  CHECK_THROWS_AS(fit_univariate({{1.0, false}, {2.0, false}}, DistFamily::weibull),
                  srt::InsufficientDataError);
  CHECK_THROWS_AS(fit_univariate({{0.0, true}, {2.0, true}}, DistFamily::weibull),
                  std::invalid_argument);
}
