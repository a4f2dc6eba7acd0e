#pragma once

namespace srt::stats {

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal CDF, accurate over the full double range.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x) without cancellation.
double std_normal_sf(double x);

/// log(Phi(-x)), stable for large positive x (asymptotic series in the tail).
double std_normal_logsf(double x);

/// Inverse of the standard normal CDF. Throws std::domain_error unless
/// 0 < p < 1. Rational initial estimate polished by Newton steps against
/// the CDF above; round trip |p - Phi(Phi^-1(p))| stays below 1e-12.
double std_normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Chi-square survival function Q(df/2, x/2). Throws std::domain_error on
/// x < 0 or df < 1.
double chi_square_sf(double x, int df);

double log_gamma(double x);
double digamma(double x);
double trigamma(double x);

/// log(1 + e^x) without overflow.
double log1pexp(double x);

/// Logistic sigmoid 1 / (1 + e^-x), stable in both tails.
double logistic_cdf(double x);

}  // namespace srt::stats
