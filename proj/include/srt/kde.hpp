#pragma once

#include <optional>
#include <vector>

namespace srt::surv {

struct KdePoint {
  double t;
  double density;
};

/// Silverman's rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5), with the
/// usual fallbacks when sd or IQR vanish.
double silverman_bandwidth(const std::vector<double>& samples);

/// Gaussian kernel density on a 512-point grid over
/// [min - 3h, max + 3h]. Needs at least 2 samples.
std::vector<KdePoint> kde_density(const std::vector<double>& samples,
                                  std::optional<double> bandwidth = std::nullopt);

}  // namespace srt::surv
