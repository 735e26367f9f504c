#ifndef WSCAN_CHISQ_HPP
#define WSCAN_CHISQ_HPP

namespace wscan {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly
/// in the tail so small values keep full relative precision.
double gamma_q(double a, double x);

/// Upper tail of the chi-squared distribution with real-valued df:
/// Q(df/2, x/2). Throws ArgumentError unless x >= 0 and df > 0.
double chisq_sf(double x, double df);
double chisq_cdf(double x, double df);
double chisq_pdf(double x, double df);
/// Inverse of chisq_cdf for p in (0, 1).
double chisq_quantile(double p, double df);

}  // namespace wscan

#endif  // WSCAN_CHISQ_HPP
