#include "srt/location_scale.hpp"

#include <cmath>

#include "srt/special.hpp"

namespace srt::surv {

namespace {
constexpr double kLnSqrt2Pi = 0.91893853320467274178;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

KernelDerivs log_pdf_derivs(LsKernel k, double z) {
  switch (k) {
    case LsKernel::normal:
      return {-kLnSqrt2Pi - 0.5 * z * z, -z, -1.0};
    case LsKernel::logistic: {
      double s = stats::logistic_cdf(z);
      return {z - 2.0 * stats::log1pexp(z), 1.0 - 2.0 * s, -2.0 * s * (1.0 - s)};
    }
    case LsKernel::gumbel_min: {
      double ez = std::exp(z);
      return {z - ez, 1.0 - ez, -ez};
    }
  }
  return {};
}

KernelDerivs log_sf_derivs(LsKernel k, double z) {
  switch (k) {
    case LsKernel::normal: {
      double v = stats::std_normal_logsf(z);
      // hazard of the standard normal: phi(z) / Phi(-z)
      double r = std::exp(-kLnSqrt2Pi - 0.5 * z * z - v);
      return {v, -r, r * (z - r)};
    }
    case LsKernel::logistic: {
      double s = stats::logistic_cdf(z);
      return {-stats::log1pexp(z), -s, -s * (1.0 - s)};
    }
    case LsKernel::gumbel_min: {
      double ez = std::exp(z);
      return {-ez, -ez, -ez};
    }
  }
  return {};
}

double kernel_sd(LsKernel k) {
  switch (k) {
    case LsKernel::normal:
      return 1.0;
    case LsKernel::logistic:
      return kPi / std::sqrt(3.0);
    case LsKernel::gumbel_min:
      return kPi / std::sqrt(6.0);
  }
  return 1.0;
}

}  // namespace srt::surv
