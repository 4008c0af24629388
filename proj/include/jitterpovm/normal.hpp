#pragma once

namespace jitterpovm {

/// Standard normal cdf, Phi(x).
double normal_cdf(double x);

/// Standard normal pdf.
double normal_pdf(double x);

/// Inverse of normal_cdf on (0, 1), accurate to ~1e-15 after refinement.
double normal_quantile(double p);

}  // namespace jitterpovm
