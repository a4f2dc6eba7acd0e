#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "srt/design.hpp"
#include "srt/distributions.hpp"

namespace srt::aft {

/// Fitted accelerated-failure-time regression on the log-time scale,
/// canonical convention: ln T = x'beta + sigma * eps, so
/// S(t|x) = S_eps((ln t - x'beta)/sigma) and the median is exp(x'beta) for
/// the log-symmetric families. The exponential family fixes sigma at 1.
struct AftFit {
  surv::DistFamily family;
  DesignSpec spec;
  std::vector<std::string> column_names;  // "intercept" first
  Eigen::VectorXd beta;
  double log_scale;
  bool scale_fixed;          // true for the exponential family
  Eigen::MatrixXd covariance;  // (p+2)x(p+2) over (beta, ln sigma)
  double log_likelihood;
  double aic;
  double bic;
  int iterations;
  int n;
};

struct AftOptions {
  int max_iter = 100;
  double grad_tol = 1e-8;  // convergence at gradient max-norm below this
};

struct LoglikResult {
  double value;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Log-likelihood with analytic gradient and Hessian in
/// theta = (beta..., ln sigma); the exponential family takes beta only.
/// Families: loglogistic, lognormal, weibull, exponential.
LoglikResult aft_loglik(const Eigen::VectorXd& theta, const DesignMatrix& design,
                        surv::DistFamily family);

/// Newton-Raphson MLE with step halving; covariance is the inverse of the
/// negative Hessian at the optimum.
AftFit fit_aft(const DesignMatrix& design, surv::DistFamily family,
               const AftOptions& options = {});

struct WaldRow {
  std::string name;
  double coef;
  double std_error;
  double z;
  double p;
};

/// Coefficient table: one row per column plus a final log_scale row for
/// families with a free scale; p two-sided.
std::vector<WaldRow> wald_summary(const AftFit& fit);

struct LrTestResult {
  double chisq;
  int df;
  double p;
};

/// Likelihood-ratio test of a nested (same family, column subset) model.
LrTestResult lr_test(const AftFit& full, const AftFit& null_fit);

/// exp(beta_name); reference levels of the fit's factors yield exactly 1.
double acceleration_factor(const AftFit& fit, const std::string& name);

/// Covariate values at which to predict: numeric columns by name plus one
/// level per factor (omitted factors default to their reference level).
struct PredictionProfile {
  std::map<std::string, double> numeric;
  std::map<std::string, std::string> categorical;
};

double linear_predictor(const AftFit& fit, const PredictionProfile& profile);
double predict_quantile(const AftFit& fit, const PredictionProfile& profile, double q);
std::vector<double> predict_survival_curve(const AftFit& fit,
                                           const PredictionProfile& profile,
                                           std::span<const double> times);
/// Analytic mean event time; NaN when it does not exist (log-logistic with
/// sigma >= 1).
double predict_mean(const AftFit& fit, const PredictionProfile& profile);

/// Delta-method confidence interval for the median:
/// median * exp(-+ z * sqrt(x' Sigma_beta x)).
std::pair<double, double> predict_interval(const AftFit& fit,
                                           const PredictionProfile& profile,
                                           double level = 0.95);

enum class StepDirection { forward, backward, both };
StepDirection parse_direction(const std::string& name);

struct CandidateEval {
  std::string action;  // "add" or "drop"
  std::string term;
  double aic;          // NaN when the fit failed
  std::string error;   // failure message, empty on success
};

struct StepEntry {
  std::string action;  // "start", "add", "drop"
  std::string term;
  double aic;
  std::vector<CandidateEval> considered;
};

struct StepwiseResult {
  AftFit best;
  std::vector<StepEntry> trace;
};

/// Greedy AIC minimization over whole terms (factors move as blocks).
/// Forward starts from the intercept-only model, backward and both from the
/// full candidate set; ties prefer the smaller model.
StepwiseResult stepwise_select(const std::vector<scenario::ScenarioRecord>& records,
                               const DesignSpec& candidates, surv::DistFamily family,
                               StepDirection direction,
                               const AftOptions& options = {});

}  // namespace srt::aft
