#include "srt/kaplan_meier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "srt/errors.hpp"
#include "srt/special.hpp"

namespace srt::surv {

KmCurve kaplan_meier(const std::vector<SurvivalSample>& samples) {
  if (samples.empty()) throw InsufficientDataError("kaplan_meier: no samples");
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!(samples[i].time > 0.0))
      throw std::invalid_argument("sample " + std::to_string(i) +
                                  ": time must be positive");

  std::vector<const SurvivalSample*> sorted;
  sorted.reserve(samples.size());
  for (const auto& s : samples) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SurvivalSample* a, const SurvivalSample* b) {
                     if (a->time != b->time) return a->time < b->time;
                     return a->event > b->event;  // events before censorings
                   });

  const int n = static_cast<int>(samples.size());
  const bool any_censored = std::any_of(
      samples.begin(), samples.end(), [](const SurvivalSample& s) { return !s.event; });

  KmCurve curve;
  double s_hat = 1.0;
  double greenwood_sum = 0.0;
  int at_risk = n;
  int survivors = n;

  std::size_t i = 0;
  while (i < sorted.size()) {
    double t = sorted[i]->time;
    int d = 0, c = 0;
    std::size_t j = i;
    while (j < sorted.size() && sorted[j]->time == t) {
      if (sorted[j]->event)
        ++d;
      else
        ++c;
      ++j;
    }
    if (d > 0) {
      survivors -= d;
      if (any_censored)
        s_hat *= static_cast<double>(at_risk - d) / at_risk;
      else
        s_hat = static_cast<double>(survivors) / n;
      if (at_risk > d)
        greenwood_sum += static_cast<double>(d) /
                         (static_cast<double>(at_risk) * (at_risk - d));
      curve.event_times.push_back(t);
      curve.survival.push_back(s_hat);
      curve.at_risk.push_back(at_risk);
      curve.events.push_back(d);
      curve.greenwood_var.push_back(s_hat > 0.0 ? s_hat * s_hat * greenwood_sum : 0.0);
    } else {
      survivors -= c;
    }
    at_risk -= d + c;
    i = j;
  }
  return curve;
}

std::vector<std::pair<double, double>> aft_diagnostic_points(const KmCurve& curve,
                                                             DistFamily family) {
  if (family != DistFamily::loglogistic && family != DistFamily::lognormal)
    throw std::invalid_argument(
        "aft_diagnostic_points: family must be loglogistic or lognormal");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < curve.event_times.size(); ++i) {
    double s = curve.survival[i];
    if (!(s > 0.0 && s < 1.0)) continue;
    double y = family == DistFamily::loglogistic
                   ? std::log(s / (1.0 - s))
                   : stats::std_normal_quantile(1.0 - s);
    points.emplace_back(std::log(curve.event_times[i]), y);
  }
  if (points.size() < 2)
    throw TooFewPointsError(
        "aft_diagnostic_points: need at least 2 event times with 0 < S < 1");
  return points;
}

}  // namespace srt::surv
