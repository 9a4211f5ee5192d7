#pragma once

#include <functional>

namespace qri {

// Regularized incomplete beta function I_x(a, b) via the standard continued
// fraction (modified Lentz), relative accuracy ~1e-14.
double beta_inc(double a, double b, double x);

// Regularized lower incomplete gamma P(s, x) (series / continued fraction).
double gamma_p(double s, double x);

// Solve cdf(x) = p for a nondecreasing cdf on the bracket [lo, hi].
// Safeguarded Newton (optional derivative) falling back to bisection; stops
// when |cdf(x) - p| <= p_tol. Throws InversionFailure if the bracket does not
// straddle p or convergence stalls.
double invert_monotone_cdf(const std::function<double(double)>& cdf,
                           const std::function<double(double)>& pdf,  // may be null
                           double p, double lo, double hi, double p_tol = 1e-10);

}  // namespace qri
