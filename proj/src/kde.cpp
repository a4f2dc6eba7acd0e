#include "srt/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "srt/errors.hpp"
#include "srt/special.hpp"

namespace srt::surv {

namespace {

// Type-7 (linear interpolation) quantile on a sorted copy.
double quantile7(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  double h = (x.size() - 1) * p;
  std::size_t lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - lo) * (x[hi] - x[lo]);
}

}  // namespace

double silverman_bandwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientDataError("silverman_bandwidth: need at least 2 samples");
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / (n - 1));
  double iqr = quantile7(samples, 0.75) - quantile7(samples, 0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::fabs(samples[0]);
  if (spread <= 0.0) spread = 1.0;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<KdePoint> kde_density(const std::vector<double>& samples,
                                  std::optional<double> bandwidth) {
  const std::size_t n = samples.size();
  if (n < 2) throw InsufficientDataError("kde_density: need at least 2 samples");
  double h = bandwidth.value_or(silverman_bandwidth(samples));
  if (!(h > 0.0)) throw std::invalid_argument("kde_density: bandwidth must be positive");

  auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  double lo = *mn - 3.0 * h;
  double hi = *mx + 3.0 * h;
  const int grid = 512;
  double step = (hi - lo) / (grid - 1);

  std::vector<KdePoint> out(grid);
  for (int g = 0; g < grid; ++g) {
    double t = lo + g * step;
    double acc = 0.0;
    for (double x : samples) acc += stats::std_normal_pdf((t - x) / h);
    out[g] = {t, acc / (n * h)};
  }
  return out;
}

}  // namespace srt::surv
