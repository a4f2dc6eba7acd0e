#include "srt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "srt/errors.hpp"
#include "srt/location_scale.hpp"
#include "srt/special.hpp"

namespace srt::surv {

namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467274178;
const double kNegInf = -std::numeric_limits<double>::infinity();

void check_params(DistFamily f, std::span<const double> p) {
  if (p.size() != param_count(f))
    throw std::domain_error("wrong parameter count for " + family_name(f));
  switch (f) {
    case DistFamily::exponential:
      if (!(p[0] > 0.0)) throw std::domain_error("exponential: rate must be positive");
      break;
    case DistFamily::weibull:
      if (!(p[0] > 0.0 && p[1] > 0.0))
        throw std::domain_error("weibull: shape and scale must be positive");
      break;
    case DistFamily::lognormal:
      if (!(p[1] > 0.0)) throw std::domain_error("lognormal: sigma must be positive");
      break;
    case DistFamily::gamma:
      if (!(p[0] > 0.0 && p[1] > 0.0))
        throw std::domain_error("gamma: shape and rate must be positive");
      break;
    case DistFamily::loglogistic:
      if (!(p[0] > 0.0 && p[1] > 0.0))
        throw std::domain_error("loglogistic: scale and shape must be positive");
      break;
  }
}

void check_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("time must be positive");
}

void check_samples(const std::vector<SurvivalSample>& samples) {
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!(samples[i].time > 0.0))
      throw std::invalid_argument("sample " + std::to_string(i) +
                                  ": time must be positive");
}

double gamma_quantile(double shape, double rate, double q) {
  // Wilson-Hilferty start, bisection bracket, Newton polish.
  double z = stats::std_normal_quantile(q);
  double g = 1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape));
  double x = shape * g * g * g / rate;
  if (!(x > 0.0) || !std::isfinite(x)) x = shape / rate;

  double lo = x, hi = x;
  for (int i = 0; i < 200 && stats::gamma_p(shape, rate * lo) > q; ++i) lo *= 0.5;
  for (int i = 0; i < 200 && stats::gamma_p(shape, rate * hi) < q; ++i) hi *= 2.0;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if (stats::gamma_p(shape, rate * mid) < q)
      lo = mid;
    else
      hi = mid;
  }
  x = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    double err = stats::gamma_p(shape, rate * x) - q;
    double pdf = std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) -
                          rate * x - std::lgamma(shape));
    if (pdf <= 0.0) break;
    double step = err / pdf;
    double next = x - step;
    if (next <= lo || next >= hi) break;  // keep the bisection bracket
    x = next;
    if (std::fabs(err) < 1e-13) break;
  }
  return x;
}

// ---- censored log-likelihood, shared by the generic fitters ----

double loglik_at(DistFamily f, std::span<const double> p,
                 const std::vector<SurvivalSample>& samples) {
  double ll = 0.0;
  for (const auto& s : samples) {
    double term = s.event ? dist_logpdf(f, p, s.time)
                          : std::log(dist_survival(f, p, s.time));
    if (!std::isfinite(term)) return kNegInf;
    ll += term;
  }
  return ll;
}

// Numeric Hessian of the log-likelihood in the natural parameterization,
// used for observed-information standard errors across all families.
std::vector<double> observed_std_errors(DistFamily f, const std::vector<double>& p,
                                        const std::vector<SurvivalSample>& samples) {
  const std::size_t k = p.size();
  auto ll = [&](const std::vector<double>& q) { return loglik_at(f, q, samples); };
  std::vector<double> h(k);
  for (std::size_t i = 0; i < k; ++i) h[i] = 1e-5 * std::max(1.0, std::fabs(p[i]));

  std::vector<std::vector<double>> hess(k, std::vector<double>(k, 0.0));
  double f0 = ll(p);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::vector<double> q = p;
      double v;
      if (i == j) {
        q[i] = p[i] + h[i];
        double fp = ll(q);
        q[i] = p[i] - h[i];
        double fm = ll(q);
        v = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
      } else {
        q[i] = p[i] + h[i]; q[j] = p[j] + h[j];
        double fpp = ll(q);
        q[j] = p[j] - h[j];
        double fpm = ll(q);
        q[i] = p[i] - h[i]; q[j] = p[j] + h[j];
        double fmp = ll(q);
        q[j] = p[j] - h[j];
        double fmm = ll(q);
        v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      }
      hess[i][j] = hess[j][i] = v;
    }
  }

  std::vector<double> se(k, std::numeric_limits<double>::quiet_NaN());
  if (k == 1) {
    if (hess[0][0] < 0.0) se[0] = std::sqrt(-1.0 / hess[0][0]);
  } else {
    // 2x2 inverse of the negative Hessian
    double a = -hess[0][0], b = -hess[0][1], d = -hess[1][1];
    double det = a * d - b * b;
    if (det > 0.0 && a > 0.0) {
      se[0] = std::sqrt(d / det);
      se[1] = std::sqrt(a / det);
    }
  }
  return se;
}

// ---- location-scale Newton fit (weibull / lognormal / loglogistic) ----

struct LsFit {
  double mu;
  double log_sigma;
  double loglik;
};

LsFit fit_location_scale(LsKernel kernel, const std::vector<SurvivalSample>& samples) {
  const std::size_t n = samples.size();
  std::vector<double> logt(n);
  for (std::size_t i = 0; i < n; ++i) logt[i] = std::log(samples[i].time);

  double mean = std::accumulate(logt.begin(), logt.end(), 0.0) / n;
  double var = 0.0;
  for (double y : logt) var += (y - mean) * (y - mean);
  var /= n;
  double sigma0 = std::sqrt(std::max(var, 1e-8)) / kernel_sd(kernel);

  double mu = mean;
  double ls = std::log(std::clamp(sigma0, 1e-4, 1e4));

  // logL(mu, ln sigma) with analytic gradient and Hessian; z = (ln t - mu)/sigma
  auto eval = [&](double m, double s, double out[6]) {
    double sigma = std::exp(s);
    double ll = 0.0, g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = (logt[i] - m) / sigma;
      KernelDerivs d = samples[i].event ? log_pdf_derivs(kernel, z)
                                        : log_sf_derivs(kernel, z);
      ll += samples[i].event ? (-s - logt[i] + d.v) : d.v;
      g0 += -d.d1 / sigma;
      g1 += (samples[i].event ? -1.0 : 0.0) - d.d1 * z;
      h00 += d.d2 / (sigma * sigma);
      h01 += (d.d2 * z + d.d1) / sigma;
      h11 += d.d2 * z * z + d.d1 * z;
    }
    out[0] = ll; out[1] = g0; out[2] = g1; out[3] = h00; out[4] = h01; out[5] = h11;
  };

  double cur[6];
  eval(mu, ls, cur);
  for (int iter = 0; iter < 200; ++iter) {
    if (std::max(std::fabs(cur[1]), std::fabs(cur[2])) < 1e-10)
      return {mu, ls, cur[0]};
    // solve (-H) step = grad
    double a = -cur[3], b = -cur[4], d = -cur[5];
    double det = a * d - b * b;
    if (!(det > 0.0) || !(a > 0.0)) {  // ridge fallback
      double r = 1e-6 * std::max(1.0, std::max(std::fabs(a), std::fabs(d)));
      a += r; d += r;
      det = a * d - b * b;
      if (!(det > 0.0)) throw SingularHessianError("univariate fit: singular Hessian");
    }
    double s0 = (d * cur[1] - b * cur[2]) / det;
    double s1 = (a * cur[2] - b * cur[1]) / det;
    double step = 1.0;
    double nxt[6];
    for (int half = 0; half < 50; ++half) {
      eval(mu + step * s0, ls + step * s1, nxt);
      if (std::isfinite(nxt[0]) && nxt[0] >= cur[0] - 1e-12 * (1.0 + std::fabs(cur[0])))
        break;
      step *= 0.5;
    }
    mu += step * s0;
    ls += step * s1;
    std::copy(nxt, nxt + 6, cur);
  }
  double gnorm = std::max(std::fabs(cur[1]), std::fabs(cur[2]));
  if (gnorm < 1e-6) return {mu, ls, cur[0]};  // flat but converged in practice
  throw NonConvergenceError(200, gnorm, "univariate location-scale fit");
}

// ---- gamma fit ----

std::vector<double> fit_gamma_params(const std::vector<SurvivalSample>& samples) {
  const std::size_t n = samples.size();
  bool censored = std::any_of(samples.begin(), samples.end(),
                              [](const SurvivalSample& s) { return !s.event; });
  double sum_t = 0.0, sum_logt = 0.0;
  for (const auto& s : samples) {
    sum_t += s.time;
    sum_logt += std::log(s.time);
  }

  if (!censored) {
    // Newton on ln(shape): solve ln a - digamma(a) = ln(mean) - mean(ln t)
    double target = std::log(sum_t / n) - sum_logt / n;
    if (!(target > 0.0)) target = 1e-10;  // degenerate: identical samples
    double a = (3.0 - target + std::sqrt((target - 3.0) * (target - 3.0) +
                                         24.0 * target)) /
               (12.0 * target);
    a = std::clamp(a, 1e-8, 1e8);
    for (int i = 0; i < 100; ++i) {
      double f = std::log(a) - stats::digamma(a) - target;
      double fp = 1.0 / a - stats::trigamma(a);  // negative for a > 0
      double step = f / (fp * a);                // Newton in ln a
      double la = std::log(a) - step;
      a = std::exp(std::clamp(la, -20.0, 20.0));
      if (std::fabs(f) < 1e-13) break;
    }
    return {a, a / (sum_t / n)};
  }

  // Censored gamma likelihood has no closed profile; Newton with central
  // finite differences in (ln shape, ln rate).
  double mean = sum_t / n;
  double la = 0.0, lb = -std::log(std::max(mean, 1e-12));
  auto ll = [&](double u, double v) {
    return loglik_at(DistFamily::gamma,
                     std::vector<double>{std::exp(u), std::exp(v)}, samples);
  };
  const double h = 1e-5;
  double cur = ll(la, lb);
  for (int iter = 0; iter < 200; ++iter) {
    double fpu = ll(la + h, lb), fmu = ll(la - h, lb);
    double fpv = ll(la, lb + h), fmv = ll(la, lb - h);
    double gu = (fpu - fmu) / (2 * h), gv = (fpv - fmv) / (2 * h);
    if (std::max(std::fabs(gu), std::fabs(gv)) < 1e-8 * (1.0 + std::fabs(cur)) &&
        iter > 0)
      break;
    double huu = (fpu - 2 * cur + fmu) / (h * h);
    double hvv = (fpv - 2 * cur + fmv) / (h * h);
    double huv = (ll(la + h, lb + h) - ll(la + h, lb - h) - ll(la - h, lb + h) +
                  ll(la - h, lb - h)) /
                 (4 * h * h);
    double a = -huu, b = -huv, d = -hvv;
    double det = a * d - b * b;
    if (!(det > 0.0) || !(a > 0.0)) {
      double r = 1e-4 * std::max(1.0, std::max(std::fabs(a), std::fabs(d)));
      a += r; d += r;
      det = a * d - b * b;
      if (!(det > 0.0))
        throw SingularHessianError("gamma fit: singular Hessian");
    }
    double su = (d * gu - b * gv) / det;
    double sv = (a * gv - b * gu) / det;
    double step = 1.0;
    double nxt = cur;
    for (int half = 0; half < 50; ++half) {
      nxt = ll(la + step * su, lb + step * sv);
      if (std::isfinite(nxt) && nxt >= cur - 1e-12 * (1.0 + std::fabs(cur))) break;
      step *= 0.5;
    }
    if (std::fabs(nxt - cur) < 1e-12 * (1.0 + std::fabs(cur)) && iter > 2) {
      la += step * su; lb += step * sv;
      break;
    }
    la += step * su;
    lb += step * sv;
    cur = nxt;
  }
  return {std::exp(la), std::exp(lb)};
}

}  // namespace

std::size_t param_count(DistFamily f) {
  return f == DistFamily::exponential ? 1 : 2;
}

std::vector<std::string> param_names(DistFamily f) {
  switch (f) {
    case DistFamily::exponential: return {"rate"};
    case DistFamily::weibull: return {"shape", "scale"};
    case DistFamily::lognormal: return {"mu", "sigma"};
    case DistFamily::gamma: return {"shape", "rate"};
    case DistFamily::loglogistic: return {"scale", "shape"};
  }
  return {};
}

std::string family_name(DistFamily f) {
  switch (f) {
    case DistFamily::exponential: return "exponential";
    case DistFamily::weibull: return "weibull";
    case DistFamily::lognormal: return "lognormal";
    case DistFamily::gamma: return "gamma";
    case DistFamily::loglogistic: return "loglogistic";
  }
  return "?";
}

DistFamily parse_family(const std::string& name) {
  if (name == "exponential") return DistFamily::exponential;
  if (name == "weibull") return DistFamily::weibull;
  if (name == "lognormal") return DistFamily::lognormal;
  if (name == "gamma") return DistFamily::gamma;
  if (name == "loglogistic") return DistFamily::loglogistic;
  throw std::invalid_argument("unknown distribution family '" + name + "'");
}

double dist_logpdf(DistFamily f, std::span<const double> p, double t) {
  check_params(f, p);
  check_time(t);
  switch (f) {
    case DistFamily::exponential:
      return std::log(p[0]) - p[0] * t;
    case DistFamily::weibull: {
      double u = p[0] * std::log(t / p[1]);
      return std::log(p[0] / t) + u - std::exp(u);
    }
    case DistFamily::lognormal: {
      double z = (std::log(t) - p[0]) / p[1];
      return -std::log(t * p[1]) - kLnSqrt2Pi - 0.5 * z * z;
    }
    case DistFamily::gamma:
      return p[0] * std::log(p[1]) + (p[0] - 1.0) * std::log(t) - p[1] * t -
             std::lgamma(p[0]);
    case DistFamily::loglogistic: {
      double w = p[1] * std::log(t / p[0]);
      return std::log(p[1] / t) + w - 2.0 * stats::log1pexp(w);
    }
  }
  return 0.0;
}

double dist_cdf(DistFamily f, std::span<const double> p, double t) {
  check_params(f, p);
  check_time(t);
  switch (f) {
    case DistFamily::exponential:
      return -std::expm1(-p[0] * t);
    case DistFamily::weibull: {
      double u = p[0] * std::log(t / p[1]);
      return u > 700.0 ? 1.0 : -std::expm1(-std::exp(u));
    }
    case DistFamily::lognormal:
      return stats::std_normal_cdf((std::log(t) - p[0]) / p[1]);
    case DistFamily::gamma:
      return stats::gamma_p(p[0], p[1] * t);
    case DistFamily::loglogistic:
      return stats::logistic_cdf(p[1] * std::log(t / p[0]));
  }
  return 0.0;
}

double dist_survival(DistFamily f, std::span<const double> p, double t) {
  check_params(f, p);
  check_time(t);
  switch (f) {
    case DistFamily::exponential:
      return std::exp(-p[0] * t);
    case DistFamily::weibull: {
      double u = p[0] * std::log(t / p[1]);
      return u > 700.0 ? 0.0 : std::exp(-std::exp(u));
    }
    case DistFamily::lognormal:
      return stats::std_normal_sf((std::log(t) - p[0]) / p[1]);
    case DistFamily::gamma:
      return stats::gamma_q(p[0], p[1] * t);
    case DistFamily::loglogistic:
      return stats::logistic_cdf(-p[1] * std::log(t / p[0]));
  }
  return 0.0;
}

double dist_quantile(DistFamily f, std::span<const double> p, double q) {
  check_params(f, p);
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("dist_quantile: q must lie in (0,1)");
  switch (f) {
    case DistFamily::exponential:
      return -std::log1p(-q) / p[0];
    case DistFamily::weibull:
      return p[1] * std::pow(-std::log1p(-q), 1.0 / p[0]);
    case DistFamily::lognormal:
      return std::exp(p[0] + p[1] * stats::std_normal_quantile(q));
    case DistFamily::gamma:
      return gamma_quantile(p[0], p[1], q);
    case DistFamily::loglogistic:
      return p[0] * std::pow(q / (1.0 - q), 1.0 / p[1]);
  }
  return 0.0;
}

FittedDistribution fit_univariate(const std::vector<SurvivalSample>& samples,
                                  DistFamily family) {
  check_samples(samples);
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw InsufficientDataError("fit_univariate: need at least 2 samples");
  int events = 0;
  for (const auto& s : samples) events += s.event ? 1 : 0;
  if (events == 0)
    throw InsufficientDataError("fit_univariate: need at least one observed event");

  std::vector<double> params;
  switch (family) {
    case DistFamily::exponential: {
      double total = 0.0;
      for (const auto& s : samples) total += s.time;
      params = {events / total};
      break;
    }
    case DistFamily::weibull: {
      LsFit fit = fit_location_scale(LsKernel::gumbel_min, samples);
      params = {std::exp(-fit.log_sigma), std::exp(fit.mu)};
      break;
    }
    case DistFamily::lognormal: {
      LsFit fit = fit_location_scale(LsKernel::normal, samples);
      params = {fit.mu, std::exp(fit.log_sigma)};
      break;
    }
    case DistFamily::loglogistic: {
      LsFit fit = fit_location_scale(LsKernel::logistic, samples);
      params = {std::exp(fit.mu), std::exp(-fit.log_sigma)};
      break;
    }
    case DistFamily::gamma:
      params = fit_gamma_params(samples);
      break;
  }

  FittedDistribution out;
  out.family = family;
  out.params = params;
  out.std_errors = observed_std_errors(family, params, samples);
  out.log_likelihood = loglik_at(family, params, samples);
  out.n = n;
  const int k = static_cast<int>(param_count(family));
  auto [aic, bic] = information_criteria(out.log_likelihood, k, n);
  out.aic = aic;
  out.bic = bic;
  return out;
}

std::pair<double, double> information_criteria(double log_likelihood, int k, int n) {
  if (k < 1) throw std::invalid_argument("information_criteria: k must be >= 1");
  if (n < 1) throw std::invalid_argument("information_criteria: n must be >= 1");
  return {2.0 * k - 2.0 * log_likelihood,
          k * std::log(static_cast<double>(n)) - 2.0 * log_likelihood};
}

}  // namespace srt::surv
