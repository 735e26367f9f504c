#include "wscan/chisq.hpp"

#include "wscan/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wscan {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// log of x^a e^-x / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

// Power series for P(a, x); converges quickly for x < a + 1.
double p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Continued fraction for Q(a, x) by modified Lentz; used for x >= a + 1.
double q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x)) {
    throw ArgumentError("incomplete gamma requires a > 0 and x >= 0 (a=" + std::to_string(a) +
                        ", x=" + std::to_string(x) + ")");
  }
}

void check_chisq_args(double x, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    throw ArgumentError("chi-squared df must be positive and finite (df=" + std::to_string(df) + ")");
  }
  if (!(x >= 0.0)) throw ArgumentError("chi-squared argument must be >= 0 (x=" + std::to_string(x) + ")");
}

}  // namespace

double gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? p_series(a, x) : 1.0 - q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - p_series(a, x) : q_continued_fraction(a, x);
}

double chisq_sf(double x, double df) {
  check_chisq_args(x, df);
  return gamma_q(0.5 * df, 0.5 * x);
}

double chisq_cdf(double x, double df) {
  check_chisq_args(x, df);
  return gamma_p(0.5 * df, 0.5 * x);
}

double chisq_pdf(double x, double df) {
  check_chisq_args(x, df);
  const double a = 0.5 * df;
  if (x == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    return a == 1.0 ? 0.5 : 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

double chisq_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("quantile requires p in (0, 1)");
  check_chisq_args(0.0, df);

  // Bracket, then Newton steps guarded by bisection. Working on whichever tail
  // is smaller keeps precision for p close to 1.
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;
  auto residual = [&](double x) { return (upper ? chisq_sf(x, df) : chisq_cdf(x, df)) - target; };
  // residual is decreasing in x for the upper tail and increasing for the lower.
  const double sign = upper ? -1.0 : 1.0;

  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (sign * residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (sign * r < 0.0) lo = x;
    else hi = x;
    const double slope = sign * chisq_pdf(x, df);
    double next = x - r / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * lo) return next;
    x = next;
  }
  return x;
}

}  // namespace wscan
