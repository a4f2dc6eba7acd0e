#include "srt/aft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "srt/errors.hpp"
#include "srt/location_scale.hpp"
#include "srt/special.hpp"

namespace srt::aft {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

surv::LsKernel kernel_for_family(surv::DistFamily family) {
  switch (family) {
    case surv::DistFamily::lognormal:
      return surv::LsKernel::normal;
    case surv::DistFamily::loglogistic:
      return surv::LsKernel::logistic;
    case surv::DistFamily::weibull:
    case surv::DistFamily::exponential:
      return surv::LsKernel::gumbel_min;
    default:
      throw std::invalid_argument("aft: family must be loglogistic, lognormal, "
                                  "weibull, or exponential");
  }
}

bool has_fixed_scale(surv::DistFamily family) {
  return family == surv::DistFamily::exponential;
}

std::string trace_line(int iter, double loglik, double gnorm, double step) {
  std::ostringstream out;
  out << "iter " << iter << "  logL " << loglik << "  grad_max " << gnorm
      << "  step " << step;
  return out.str();
}

}  // namespace

LoglikResult aft_loglik(const Eigen::VectorXd& theta, const DesignMatrix& design,
                        surv::DistFamily family) {
  const surv::LsKernel kernel = kernel_for_family(family);
  const bool fixed = has_fixed_scale(family);
  const Eigen::Index p1 = design.cols();
  const Eigen::Index dim = fixed ? p1 : p1 + 1;
  if (theta.size() != dim)
    throw std::invalid_argument("aft_loglik: theta has wrong dimension");

  const double log_sigma = fixed ? 0.0 : theta(p1);
  const double sigma = std::exp(log_sigma);
  const Eigen::VectorXd beta = theta.head(p1);
  const Eigen::VectorXd eta = design.x * beta;

  LoglikResult res;
  res.value = 0.0;
  res.gradient = Eigen::VectorXd::Zero(dim);
  res.hessian = Eigen::MatrixXd::Zero(dim, dim);

  for (Eigen::Index i = 0; i < design.n(); ++i) {
    const bool event = design.events[static_cast<std::size_t>(i)] != 0;
    const double z = (design.y(i) - eta(i)) / sigma;
    const surv::KernelDerivs d =
        event ? surv::log_pdf_derivs(kernel, z) : surv::log_sf_derivs(kernel, z);
    const double term = event ? (-log_sigma - design.y(i) + d.v) : d.v;
    if (!std::isfinite(term)) {
      res.value = -std::numeric_limits<double>::infinity();
      return res;
    }
    res.value += term;

    const Eigen::VectorXd xi = design.x.row(i).transpose();
    res.gradient.head(p1) += (-d.d1 / sigma) * xi;
    res.hessian.topLeftCorner(p1, p1) += (d.d2 / (sigma * sigma)) * (xi * xi.transpose());
    if (!fixed) {
      res.gradient(p1) += (event ? -1.0 : 0.0) - d.d1 * z;
      res.hessian.col(p1).head(p1) += ((d.d2 * z + d.d1) / sigma) * xi;
      res.hessian(p1, p1) += d.d2 * z * z + d.d1 * z;
    }
  }
  if (!fixed)
    res.hessian.row(p1).head(p1) = res.hessian.col(p1).head(p1).transpose();
  return res;
}

AftFit fit_aft(const DesignMatrix& design, surv::DistFamily family,
               const AftOptions& options) {
  const surv::LsKernel kernel = kernel_for_family(family);
  const bool fixed = has_fixed_scale(family);
  const Eigen::Index p1 = design.cols();
  const Eigen::Index dim = fixed ? p1 : p1 + 1;
  const Eigen::Index n = design.n();
  if (n < dim + 1)
    throw InsufficientDataError("fit_aft: fewer rows than parameters");

  // start from least squares of ln t on X, scale from residual spread
  Eigen::VectorXd theta(dim);
  Eigen::VectorXd beta0 = design.x.colPivHouseholderQr().solve(design.y);
  theta.head(p1) = beta0;
  if (!fixed) {
    Eigen::VectorXd resid = design.y - design.x * beta0;
    double sd = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
    double sigma0 = std::clamp(sd / surv::kernel_sd(kernel), 1e-4, 1e4);
    theta(p1) = std::log(sigma0);
  }

  std::ostringstream trace;
  LoglikResult cur = aft_loglik(theta, design, family);
  if (!std::isfinite(cur.value))
    throw NonConvergenceError(0, kNaN, "non-finite likelihood at the starting point");

  int iterations = 0;
  bool converged = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    double gnorm = cur.gradient.cwiseAbs().maxCoeff();
    if (gnorm < options.grad_tol) {
      converged = true;
      break;
    }

    Eigen::MatrixXd info = -cur.hessian;
    Eigen::VectorXd step;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::LLT<Eigen::MatrixXd> llt(info);
      if (llt.info() == Eigen::Success) {
        step = llt.solve(cur.gradient);
        if (step.dot(cur.gradient) > 0.0) break;  // ascent direction
      }
      ridge = ridge == 0.0 ? 1e-8 * std::max(1.0, info.diagonal().cwiseAbs().maxCoeff())
                           : ridge * 10.0;
      info = -cur.hessian + ridge * Eigen::MatrixXd::Identity(dim, dim);
      step.resize(0);
    }
    if (step.size() == 0)
      throw SingularHessianError("fit_aft: cannot factor the information matrix");

    double scale = 1.0;
    LoglikResult next;
    bool improved = false;
    for (int half = 0; half < 50; ++half) {
      next = aft_loglik(theta + scale * step, design, family);
      if (std::isfinite(next.value) &&
          next.value >= cur.value - 1e-12 * (1.0 + std::fabs(cur.value))) {
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved)
      throw NonConvergenceError(iterations, gnorm,
                                trace.str() + "step halving stalled\n");

    theta += scale * step;
    cur = next;
    ++iterations;
    trace << trace_line(iterations, cur.value, cur.gradient.cwiseAbs().maxCoeff(),
                        scale)
          << '\n';
  }
  if (!converged) {
    double gnorm = cur.gradient.cwiseAbs().maxCoeff();
    if (!(gnorm < options.grad_tol))
      throw NonConvergenceError(iterations, gnorm, trace.str());
  }

  Eigen::MatrixXd info = -cur.hessian;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() != Eigen::Success)
    throw SingularHessianError("fit_aft: information matrix not positive definite "
                               "at the optimum");
  Eigen::MatrixXd cov_free = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  cov_free = 0.5 * (cov_free + cov_free.transpose()).eval();

  AftFit fit;
  fit.family = family;
  fit.spec = design.spec;
  fit.column_names = design.column_names;
  fit.beta = theta.head(p1);
  fit.log_scale = fixed ? 0.0 : theta(p1);
  fit.scale_fixed = fixed;
  fit.covariance = Eigen::MatrixXd::Zero(p1 + 1, p1 + 1);
  fit.covariance.topLeftCorner(dim, dim) = cov_free;
  fit.log_likelihood = cur.value;
  fit.iterations = iterations;
  fit.n = static_cast<int>(n);
  auto [aic, bic] =
      surv::information_criteria(cur.value, static_cast<int>(dim), fit.n);
  fit.aic = aic;
  fit.bic = bic;
  return fit;
}

std::vector<WaldRow> wald_summary(const AftFit& fit) {
  std::vector<WaldRow> rows;
  auto push = [&](const std::string& name, double coef, double var) {
    double se = var > 0.0 ? std::sqrt(var) : 0.0;
    double z = coef == 0.0 && se == 0.0 ? 0.0 : coef / se;
    // clamp at the smallest normal double: |z| beyond ~38 underflows
    double p = std::max(2.0 * stats::std_normal_cdf(-std::fabs(z)),
                        std::numeric_limits<double>::min());
    rows.push_back({name, coef, se, z, p});
  };
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j)
    push(fit.column_names[static_cast<std::size_t>(j)], fit.beta(j),
         fit.covariance(j, j));
  if (!fit.scale_fixed) {
    Eigen::Index s = fit.beta.size();
    push("log_scale", fit.log_scale, fit.covariance(s, s));
  }
  return rows;
}

LrTestResult lr_test(const AftFit& full, const AftFit& null_fit) {
  if (full.family != null_fit.family)
    throw NotNestedError("lr_test: families differ");
  if (full.n != null_fit.n)
    throw NotNestedError("lr_test: sample sizes differ");
  for (const auto& name : null_fit.column_names)
    if (std::find(full.column_names.begin(), full.column_names.end(), name) ==
        full.column_names.end())
      throw NotNestedError("lr_test: column '" + name + "' absent from the full model");

  int df = static_cast<int>(full.column_names.size() - null_fit.column_names.size());
  double chisq = 2.0 * (full.log_likelihood - null_fit.log_likelihood);
  if (chisq < 0.0) chisq = 0.0;  // optimizer slack on identical fits
  double p = df == 0 ? 1.0 : stats::chi_square_sf(chisq, df);
  return {chisq, df, p};
}

double acceleration_factor(const AftFit& fit, const std::string& name) {
  auto it = std::find(fit.column_names.begin(), fit.column_names.end(), name);
  if (it != fit.column_names.end())
    return std::exp(fit.beta(it - fit.column_names.begin()));
  for (const auto& cat : fit.spec.categorical_columns)
    if (name == cat.name + "_" + cat.reference) return 1.0;
  throw UnknownCoefficientError(name);
}

namespace {

// Covariate row aligned with fit.column_names: intercept, numerics by name,
// dummies resolved from the factor levels (omitted factors at reference).
Eigen::VectorXd profile_row(const AftFit& fit, const PredictionProfile& profile) {
  std::map<std::string, std::string> factor_values;
  for (const auto& cat : fit.spec.categorical_columns) {
    auto it = profile.categorical.find(cat.name);
    std::string value = it == profile.categorical.end() ? cat.reference : it->second;
    if (std::find(cat.levels.begin(), cat.levels.end(), value) == cat.levels.end())
      throw UnknownLevelError("profile: level '" + value + "' not valid for factor '" +
                              cat.name + "'");
    factor_values[cat.name] = value;
  }

  Eigen::VectorXd x(fit.beta.size());
  for (std::size_t j = 0; j < fit.column_names.size(); ++j) {
    const std::string& name = fit.column_names[j];
    double value;
    if (name == "intercept") {
      value = 1.0;
    } else {
      bool dummy = false;
      value = 0.0;
      for (const auto& cat : fit.spec.categorical_columns) {
        const std::string prefix = cat.name + "_";
        if (name.rfind(prefix, 0) == 0) {
          value = factor_values[cat.name] == name.substr(prefix.size()) ? 1.0 : 0.0;
          dummy = true;
          break;
        }
      }
      if (!dummy) {
        auto it = profile.numeric.find(name);
        if (it == profile.numeric.end())
          throw std::invalid_argument("profile is missing covariate '" + name + "'");
        value = it->second;
      }
    }
    x(static_cast<Eigen::Index>(j)) = value;
  }
  return x;
}

}  // namespace

double linear_predictor(const AftFit& fit, const PredictionProfile& profile) {
  return fit.beta.dot(profile_row(fit, profile));
}

double predict_quantile(const AftFit& fit, const PredictionProfile& profile, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("predict_quantile: q must lie in (0,1)");
  double eta = linear_predictor(fit, profile);
  double sigma = std::exp(fit.log_scale);
  switch (fit.family) {
    case surv::DistFamily::loglogistic:
      return std::exp(eta) * std::pow(q / (1.0 - q), sigma);
    case surv::DistFamily::lognormal:
      return std::exp(eta + sigma * stats::std_normal_quantile(q));
    case surv::DistFamily::weibull:
    case surv::DistFamily::exponential:
      return std::exp(eta) * std::pow(-std::log1p(-q), sigma);
    default:
      throw std::invalid_argument("predict_quantile: unsupported family");
  }
}

std::vector<double> predict_survival_curve(const AftFit& fit,
                                           const PredictionProfile& profile,
                                           std::span<const double> times) {
  double eta = linear_predictor(fit, profile);
  double sigma = std::exp(fit.log_scale);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (!(t > 0.0))
      throw std::domain_error("predict_survival_curve: times must be positive");
    double z = (std::log(t) - eta) / sigma;
    double s;
    switch (fit.family) {
      case surv::DistFamily::loglogistic:
        s = stats::logistic_cdf(-z);
        break;
      case surv::DistFamily::lognormal:
        s = stats::std_normal_sf(z);
        break;
      default:  // weibull / exponential
        s = z > 700.0 ? 0.0 : std::exp(-std::exp(z));
        break;
    }
    out.push_back(s);
  }
  return out;
}

double predict_mean(const AftFit& fit, const PredictionProfile& profile) {
  double eta = linear_predictor(fit, profile);
  double sigma = std::exp(fit.log_scale);
  switch (fit.family) {
    case surv::DistFamily::loglogistic:
      return sigma < 1.0 ? std::exp(eta) * kPi * sigma / std::sin(kPi * sigma) : kNaN;
    case surv::DistFamily::lognormal:
      return std::exp(eta + 0.5 * sigma * sigma);
    case surv::DistFamily::weibull:
    case surv::DistFamily::exponential:
      return std::exp(eta) * std::tgamma(1.0 + sigma);
    default:
      throw std::invalid_argument("predict_mean: unsupported family");
  }
}

std::pair<double, double> predict_interval(const AftFit& fit,
                                           const PredictionProfile& profile,
                                           double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("predict_interval: level must lie in (0,1)");

  Eigen::VectorXd x = profile_row(fit, profile);
  Eigen::MatrixXd cov_beta =
      fit.covariance.topLeftCorner(fit.beta.size(), fit.beta.size());
  double var_eta = x.dot(cov_beta * x);
  double se = var_eta > 0.0 ? std::sqrt(var_eta) : 0.0;
  double z = stats::std_normal_quantile(0.5 + 0.5 * level);
  double median = predict_quantile(fit, profile, 0.5);
  return {median * std::exp(-z * se), median * std::exp(z * se)};
}

StepDirection parse_direction(const std::string& name) {
  if (name == "forward") return StepDirection::forward;
  if (name == "backward") return StepDirection::backward;
  if (name == "both") return StepDirection::both;
  throw std::invalid_argument("unknown stepwise direction '" + name + "'");
}

namespace {

struct Term {
  std::string name;
  bool categorical;
};

DesignSpec subset_spec(const DesignSpec& candidates, const std::vector<Term>& terms,
                       const std::vector<bool>& included) {
  DesignSpec spec;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!included[i]) continue;
    if (terms[i].categorical) {
      for (const auto& cat : candidates.categorical_columns)
        if (cat.name == terms[i].name) spec.categorical_columns.push_back(cat);
    } else {
      spec.numeric_columns.push_back(terms[i].name);
    }
  }
  return spec;
}

}  // namespace

StepwiseResult stepwise_select(const std::vector<scenario::ScenarioRecord>& records,
                               const DesignSpec& candidates, surv::DistFamily family,
                               StepDirection direction, const AftOptions& options) {
  candidates.validate();
  std::vector<Term> terms;
  for (const auto& name : candidates.numeric_columns) terms.push_back({name, false});
  for (const auto& cat : candidates.categorical_columns)
    terms.push_back({cat.name, true});
  if (terms.empty())
    throw std::invalid_argument("stepwise_select: no candidate terms");

  const bool allow_add = direction != StepDirection::backward;
  const bool allow_drop = direction != StepDirection::forward;
  std::vector<bool> included(terms.size(), direction != StepDirection::forward);

  auto fit_subset = [&](const std::vector<bool>& inc) {
    DesignMatrix d = build_design_matrix(records, subset_spec(candidates, terms, inc));
    return fit_aft(d, family, options);
  };

  StepwiseResult result;
  result.best = fit_subset(included);
  result.trace.push_back({"start", "", result.best.aic, {}});

  const double tie_tol = 1e-10;
  while (true) {
    StepEntry entry;
    double best_aic = std::numeric_limits<double>::infinity();
    std::size_t best_term = terms.size();
    bool best_is_drop = false;
    AftFit best_fit;

    for (std::size_t t = 0; t < terms.size(); ++t) {
      bool is_drop = included[t];
      if (is_drop && !allow_drop) continue;
      if (!is_drop && !allow_add) continue;
      std::vector<bool> trial = included;
      trial[t] = !trial[t];
      CandidateEval eval{is_drop ? "drop" : "add", terms[t].name, kNaN, ""};
      try {
        AftFit fit = fit_subset(trial);
        eval.aic = fit.aic;
        bool better = fit.aic < best_aic - tie_tol;
        bool tie = std::fabs(fit.aic - best_aic) <= tie_tol;
        // ties prefer the smaller model: drops beat adds
        if (better || (tie && is_drop && !best_is_drop)) {
          best_aic = fit.aic;
          best_term = t;
          best_is_drop = is_drop;
          best_fit = std::move(fit);
        }
      } catch (const std::exception& e) {
        eval.error = e.what();
      }
      entry.considered.push_back(std::move(eval));
    }

    bool accept = best_term != terms.size() &&
                  (best_aic < result.best.aic - tie_tol ||
                   (best_aic <= result.best.aic + tie_tol && best_is_drop));
    if (!accept) break;

    included[best_term] = !included[best_term];
    entry.action = best_is_drop ? "drop" : "add";
    entry.term = terms[best_term].name;
    entry.aic = best_aic;
    result.best = std::move(best_fit);
    result.trace.push_back(std::move(entry));
  }
  return result;
}

}  // namespace srt::aft
