#pragma once

namespace srt::surv {

// Standardized error kernels for the log-location-scale lifetime families:
// ln T = mu + sigma * eps with eps ~ normal (lognormal), logistic
// (log-logistic), or minimum extreme value (Weibull; exponential when
// sigma is fixed at 1).
enum class LsKernel { normal, logistic, gumbel_min };

// Value and first two derivatives in z of either the log density g(z) or
// the log survival ln S(z) of the standardized error.
struct KernelDerivs {
  double v;
  double d1;
  double d2;
};

KernelDerivs log_pdf_derivs(LsKernel k, double z);
KernelDerivs log_sf_derivs(LsKernel k, double z);

/// Standard deviation of the standardized error (used to seed scale
/// estimates from log-scale residuals).
double kernel_sd(LsKernel k);

}  // namespace srt::surv
