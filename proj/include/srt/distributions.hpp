#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace srt::surv {

/// One observation for the survival estimators: a positive duration and
/// whether the event was observed (false = right-censored).
struct SurvivalSample {
  double time;
  bool event;
};

enum class DistFamily { exponential, weibull, lognormal, gamma, loglogistic };

// Natural parameterizations, in the order reported everywhere:
//   exponential: {rate}
//   weibull:     {shape, scale}
//   lognormal:   {mu, sigma}         (moments of ln T)
//   gamma:       {shape, rate}
//   loglogistic: {scale, shape}      (scale = median)
std::size_t param_count(DistFamily f);
std::vector<std::string> param_names(DistFamily f);
std::string family_name(DistFamily f);
DistFamily parse_family(const std::string& name);

double dist_logpdf(DistFamily f, std::span<const double> params, double t);
double dist_cdf(DistFamily f, std::span<const double> params, double t);
double dist_survival(DistFamily f, std::span<const double> params, double t);
double dist_quantile(DistFamily f, std::span<const double> params, double q);

struct FittedDistribution {
  DistFamily family;
  std::vector<double> params;
  std::vector<double> std_errors;  // observed-information standard errors
  double log_likelihood;
  double aic;
  double bic;
  int n;
};

/// Maximum-likelihood fit of one family, right-censoring supported.
/// Requires n >= 2 samples and at least one observed event.
FittedDistribution fit_univariate(const std::vector<SurvivalSample>& samples,
                                  DistFamily family);

/// (aic, bic) = (2k - 2 logL, k ln n - 2 logL).
std::pair<double, double> information_criteria(double log_likelihood, int k, int n);

}  // namespace srt::surv
