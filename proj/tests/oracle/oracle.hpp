// Test-only reference implementations. Nothing here calls into the library's
// numerical code; each routine is a straight-line recomputation by a different
// route (long double, explicit loops, quadrature, hand-rolled elimination).
#ifndef WSCAN_TESTS_ORACLE_HPP
#define WSCAN_TESTS_ORACLE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

/// Case/control counts per category id, straight from raw code vectors.
/// Missing is any code outside 0..2.
struct RawTable {
  std::map<int, std::pair<long, long>> cells;  // id -> (cases, controls), nonempty only
  long N1 = 0;
  long N0 = 0;
};

inline RawTable raw_single(const std::vector<int>& g, const std::vector<int>& y) {
  RawTable t;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (g[s] < 0 || g[s] > 2) continue;
    auto& c = t.cells[g[s]];
    if (y[s] == 1) { ++c.first; ++t.N1; } else { ++c.second; ++t.N0; }
  }
  return t;
}

inline RawTable raw_pair(const std::vector<int>& g1, const std::vector<int>& g2,
                         const std::vector<int>& y) {
  RawTable t;
  for (std::size_t s = 0; s < g1.size(); ++s) {
    if (g1[s] < 0 || g1[s] > 2 || g2[s] < 0 || g2[s] > 2) continue;
    auto& c = t.cells[3 * g1[s] + g2[s]];
    if (y[s] == 1) { ++c.first; ++t.N1; } else { ++c.second; ++t.N0; }
  }
  return t;
}

/// S with Haldane correction and Woolf SE, accumulated in long double.
inline long double raw_s(const RawTable& t) {
  long double s = 0;
  for (const auto& [id, c] : t.cells) {
    long double e[4] = {static_cast<long double>(c.first), static_cast<long double>(t.N1 - c.first),
                        static_cast<long double>(c.second), static_cast<long double>(t.N0 - c.second)};
    if (e[0] == 0 || e[1] == 0 || e[2] == 0 || e[3] == 0) {
      for (auto& v : e) v += 0.5L;
    }
    const long double lor = std::log(e[0] * e[3] / (e[1] * e[2]));
    const long double var = 1 / e[0] + 1 / e[1] + 1 / e[2] + 1 / e[3];
    s += lor * lor / var;
  }
  return s;
}

/// Adaptive Gauss-Kronrod (7/15) on [a, b] in long double.
inline long double gk15(const std::function<long double(long double)>& fn, long double a,
                        long double b, long double* err) {
  static const long double xgk[8] = {
      0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
      0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
      0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
      0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
  static const long double wgk[8] = {
      0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
      0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
      0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
      0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
  static const long double wg[4] = {
      0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
      0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
  const long double c = (a + b) / 2, h = (b - a) / 2;
  const long double fc = fn(c);
  long double kron = fc * wgk[7];
  long double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const long double f1 = fn(c - h * xgk[j]);
    const long double f2 = fn(c + h * xgk[j]);
    kron += wgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  *err = std::fabs((kron - gauss) * h);
  return kron * h;
}

inline long double integrate_abs(const std::function<long double(long double)>& fn, long double a,
                                 long double b, long double tol, int depth) {
  long double err = 0;
  const long double whole = gk15(fn, a, b, &err);
  if (err <= tol || depth > 24) return whole;
  const long double m = (a + b) / 2;
  return integrate_abs(fn, a, m, tol / 2, depth + 1) + integrate_abs(fn, m, b, tol / 2, depth + 1);
}

/// Relative tolerance against a first coarse estimate of the integral.
inline long double integrate(const std::function<long double(long double)>& fn, long double a,
                             long double b, long double rel) {
  long double err = 0;
  const long double rough = gk15(fn, a, b, &err);
  return integrate_abs(fn, a, b, rel * std::fabs(rough) + 1e-4000L, 0);
}

/// Upper regularized gamma Q(a, x) by quadrature of the tail integral
///   Q = x^(a-1) e^(-x) / Gamma(a) * int_0^inf (1 + s/x)^(a-1) e^(-s) ds,
/// splitting the s-range so each piece is smooth.
inline long double quad_gamma_q(long double a, long double x) {
  auto integrand = [a, x](long double s) { return std::pow(1 + s / x, a - 1) * std::exp(-s); };
  long double total = 0;
  long double lo = 0;
  const long double scale = std::min<long double>(x, 1.0L);
  for (long double hi : {scale * 0.01L, scale * 0.1L, scale, 2 * scale, 5.0L, 15.0L, 40.0L, 80.0L, 200.0L}) {
    if (hi <= lo) continue;
    total += integrate(integrand, lo, hi, 1e-18L);
    lo = hi;
  }
  const long double log_pref = (a - 1) * std::log(x) - x - std::lgamma(a);
  return total * std::exp(log_pref);
}

inline long double quad_chisq_sf(long double x, long double df) { return quad_gamma_q(df / 2, x / 2); }

/// Newton-Raphson logistic regression with a hand-written Gauss-Jordan solve.
/// Returns deviance after convergence (max |step| < tol) or max_iter steps.
struct NewtonFit {
  std::vector<long double> beta;
  long double deviance;
  int iterations;
  bool converged;
};

inline long double deviance_of(const std::vector<std::vector<long double>>& X,
                               const std::vector<long double>& y, const std::vector<long double>& b) {
  long double dev = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    long double eta = 0;
    for (std::size_t j = 0; j < b.size(); ++j) eta += X[i][j] * b[j];
    const long double lp = eta > 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta));
    const long double lq = eta > 0 ? -eta - std::log1p(std::exp(-eta)) : -std::log1p(std::exp(eta));
    dev -= 2 * (y[i] * lp + (1 - y[i]) * lq);
  }
  return dev;
}

inline NewtonFit newton_logistic(const std::vector<std::vector<long double>>& X,
                                 const std::vector<long double>& y, int max_iter = 25,
                                 long double tol = 1e-8L) {
  const std::size_t p = X[0].size();
  NewtonFit fit{std::vector<long double>(p, 0), 0, 0, false};
  for (int it = 1; it <= max_iter; ++it) {
    fit.iterations = it;
    std::vector<std::vector<long double>> H(p, std::vector<long double>(p + 1, 0));
    for (std::size_t i = 0; i < X.size(); ++i) {
      long double eta = 0;
      for (std::size_t j = 0; j < p; ++j) eta += X[i][j] * fit.beta[j];
      const long double mu = 1 / (1 + std::exp(-eta));
      const long double w = mu * (1 - mu);
      for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = 0; c < p; ++c) H[r][c] += w * X[i][r] * X[i][c];
        H[r][p] += (y[i] - mu) * X[i][r];  // gradient
      }
    }
    for (std::size_t col = 0; col < p; ++col) {  // Gauss-Jordan with partial pivoting
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < p; ++r) {
        if (std::fabs(H[r][col]) > std::fabs(H[piv][col])) piv = r;
      }
      std::swap(H[col], H[piv]);
      for (std::size_t r = 0; r < p; ++r) {
        if (r == col) continue;
        const long double factor = H[r][col] / H[col][col];
        for (std::size_t c = col; c <= p; ++c) H[r][c] -= factor * H[col][c];
      }
    }
    long double change = 0;
    for (std::size_t j = 0; j < p; ++j) {
      const long double step = H[j][p] / H[j][j];
      fit.beta[j] += step;
      change = std::max(change, std::fabs(step));
    }
    if (change < tol) {
      fit.converged = true;
      break;
    }
  }
  fit.deviance = deviance_of(X, y, fit.beta);
  return fit;
}

/// Random genotype columns with std::mt19937_64 (independent of the library RNG).
struct RandomData {
  std::vector<std::vector<int>> markers;  // code 3 = missing
  std::vector<int> phenotype;
};

inline RandomData random_data(std::mt19937_64& gen, std::size_t n_subjects, std::size_t n_markers,
                              double missing_rate) {
  RandomData d;
  std::uniform_int_distribution<int> code(0, 2);
  std::bernoulli_distribution missing(missing_rate);
  std::bernoulli_distribution coin(0.5);
  d.phenotype.resize(n_subjects);
  for (auto& y : d.phenotype) y = coin(gen) ? 1 : 0;
  d.phenotype[0] = 1;
  d.phenotype[n_subjects - 1] = 0;
  d.markers.assign(n_markers, std::vector<int>(n_subjects));
  for (auto& col : d.markers) {
    for (auto& g : col) g = missing(gen) ? 3 : code(gen);
  }
  return d;
}

}  // namespace oracle

#endif  // WSCAN_TESTS_ORACLE_HPP
