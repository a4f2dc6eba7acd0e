#pragma once

#include <utility>
#include <vector>

#include "srt/distributions.hpp"

namespace srt::surv {

/// Product-limit curve: one entry per distinct event time, survival
/// evaluated just after that time, with Greenwood variance, risk-set size
/// and event count.
struct KmCurve {
  std::vector<double> event_times;
  std::vector<double> survival;
  std::vector<int> at_risk;
  std::vector<int> events;
  std::vector<double> greenwood_var;
};

/// Kaplan-Meier estimate. Tied events are processed before tied censorings.
/// When the input holds no censored sample the survival values are computed
/// as survivors/n, which is the identical estimator evaluated without
/// rounding from the running product. Greenwood variance is reported as 0
/// once survival reaches 0.
KmCurve kaplan_meier(const std::vector<SurvivalSample>& samples);

/// Linearization points for graphical AFT checks: (ln t, logit S) for the
/// log-logistic family, (ln t, Phi^-1(1 - S)) for the lognormal family.
/// Points with S in {0, 1} are dropped; fewer than 2 remaining points raise
/// TooFewPointsError. Other families are rejected.
std::vector<std::pair<double, double>> aft_diagnostic_points(const KmCurve& curve,
                                                             DistFamily family);

}  // namespace srt::surv
