#ifndef WSCAN_BASELINES_HPP
#define WSCAN_BASELINES_HPP

#include "wscan/genotype.hpp"
#include "wscan/hf_table.hpp"
#include "wscan/tabulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wscan {

struct ChisqAssociation {
  double statistic = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  std::size_t pooled_categories = 0;  // categories after pooling sparse ones
};

/// Pearson chi-squared on the k x 2 table. Categories with an expected count
/// below 1 in either group are merged into their adjacent category (the
/// smaller neighbour in category order) until none remain. A table pooled down
/// to one category reports statistic 0, df 0, p 1.
ChisqAssociation chisq_association(const ContingencyTable& table);

enum class FitStatus { Converged, NotConverged, Singular, Separated };

template <typename Scalar>
struct LogisticFit {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> beta;
  Scalar deviance = 0;
  int iterations = 0;
  FitStatus status = FitStatus::NotConverged;
  std::vector<Scalar> deviance_trace;  // deviance after each accepted step, starting at beta = 0
};

/// Binomial deviance -2 * log-likelihood for fitted probabilities mu.
template <typename Scalar>
Scalar logistic_deviance(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                         const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& eta) {
  // log(1 + exp(eta)) - y*eta, evaluated stably.
  Scalar dev(0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const Scalar e = eta(i);
    const Scalar softplus = e > 0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    dev += softplus - y(i) * e;
  }
  return Scalar(2) * dev;
}

/// Logistic regression by iteratively reweighted least squares with step
/// halving, so the deviance never increases between accepted steps.
/// Converged when the largest coefficient change drops below tol.
template <typename Scalar>
LogisticFit<Scalar> fit_logistic(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& X,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y,
                                 int max_iter = 25, Scalar tol = Scalar(1e-8)) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  LogisticFit<Scalar> fit;
  fit.beta = Vector::Zero(X.cols());
  Vector eta = Vector::Zero(X.rows());
  fit.deviance = logistic_deviance(y, eta);
  fit.deviance_trace.push_back(fit.deviance);

  for (int iter = 1; iter <= max_iter; ++iter) {
    fit.iterations = iter;
    const Vector mu = (Scalar(1) / (Scalar(1) + (-eta.array()).exp())).matrix();
    const Vector w = (mu.array() * (Scalar(1) - mu.array())).max(Scalar(1e-300)).matrix();
    const Vector z = eta + ((y - mu).array() / w.array()).matrix();
    const Matrix xtwx = X.transpose() * w.asDiagonal() * X;
    const Vector xtwz = X.transpose() * (w.asDiagonal() * z);
    const Eigen::LDLT<Matrix> ldlt(xtwx);
    const auto d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        d.minCoeff() <= Scalar(1e-12) * d.maxCoeff()) {
      fit.status = FitStatus::Singular;
      return fit;
    }
    Vector proposal = ldlt.solve(xtwz);
    Vector next_eta = X * proposal;
    Scalar next_dev = logistic_deviance(y, next_eta);
    for (int halving = 0; halving < 30 && !(next_dev <= fit.deviance); ++halving) {
      proposal = (proposal + fit.beta) / Scalar(2);
      next_eta = X * proposal;
      next_dev = logistic_deviance(y, next_eta);
    }
    if (!(next_dev <= fit.deviance)) {
      fit.status = FitStatus::NotConverged;
      return fit;
    }
    const Scalar change = (proposal - fit.beta).cwiseAbs().maxCoeff();
    fit.beta = proposal;
    eta = next_eta;
    fit.deviance = next_dev;
    fit.deviance_trace.push_back(next_dev);
    if (change < tol) {
      const Vector p = (Scalar(1) / (Scalar(1) + (-eta.array()).exp())).matrix();
      const bool saturated = (p.array() < Scalar(1e-10)).any() || (p.array() > Scalar(1 - 1e-10)).any();
      fit.status = saturated ? FitStatus::Separated : FitStatus::Converged;
      return fit;
    }
  }
  fit.status = FitStatus::NotConverged;
  return fit;
}

struct LogisticInteraction {
  FitStatus status = FitStatus::NotConverged;  // worst status of the two fits
  double deviance_full = 0.0;                  // with g1*g2
  double deviance_reduced = 0.0;               // without g1*g2
  double lrt = 0.0;
  std::optional<double> p_value;  // absent when either fit failed
};

/// Likelihood-ratio test of the g1*g2 term in
/// logit P(case) = b0 + b1*g1 + b2*g2 + b3*g1*g2 (additive 0/1/2 coding),
/// over subjects observed at both markers.
LogisticInteraction logistic_interaction(const GenotypeDataset& dataset, std::size_t m1,
                                         std::size_t m2);

/// p-value of logistic_interaction, or nullopt when the fit is untestable.
std::optional<double> logistic_interaction_p(const GenotypeDataset& dataset, std::size_t m1,
                                             std::size_t m2);

enum class Method { WTest, Chisq, Logistic };

/// "wtest", "chisq" or "logistic"; throws ArgumentError otherwise.
Method parse_method(const std::string& name);
std::string method_name(Method m);

struct BenchmarkRow {
  Method method;
  std::size_t n_tests = 0;
  std::size_t untestable = 0;
  double seconds = 0.0;
  double tests_per_second = 0.0;
};

struct BenchmarkReport {
  std::size_t n_subjects = 0;
  std::size_t n_markers = 0;
  std::vector<BenchmarkRow> rows;
};

struct BenchmarkConfig {
  std::size_t threads = 1;
  std::optional<HfTable> hf_main;  // defaults when absent
  std::optional<HfTable> hf_pair;
};

/// Times each method over the same exhaustive set of pairs of testable markers.
BenchmarkReport run_benchmark(const GenotypeDataset& dataset, const std::vector<Method>& methods,
                              const BenchmarkConfig& config);

/// TSV: method, n_tests, seconds, tests_per_second.
void write_benchmark(const BenchmarkReport& report, const std::filesystem::path& path);

}  // namespace wscan

#endif  // WSCAN_BASELINES_HPP
