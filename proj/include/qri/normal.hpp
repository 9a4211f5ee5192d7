#pragma once

namespace qri {

// Standard normal CDF, absolute error < 1e-15 (erfc based).
double normal_cdf(double x);

// Inverse standard normal CDF for p in the open interval (0, 1).
// Acklam's rational approximation polished with one Halley step; absolute
// error well below 1e-12. Throws ProbabilityOutOfRange otherwise.
double normal_quantile(double p);

}  // namespace qri
