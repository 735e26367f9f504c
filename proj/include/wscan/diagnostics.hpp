#ifndef WSCAN_DIAGNOSTICS_HPP
#define WSCAN_DIAGNOSTICS_HPP

#include "wscan/genotype.hpp"
#include "wscan/hf_table.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wscan {

/// W values computed under permuted phenotypes, bucketed by k.
struct NullWSamples {
  HfTable hf;
  std::map<int, std::vector<double>> by_k;

  int order() const noexcept { return hf.order(); }
  std::size_t total() const noexcept;
};

/// n_rep replicates of (permute phenotype, draw n_sample markers or pairs,
/// W = h(k) * S). Deterministic for a given seed and any thread count.
NullWSamples null_w_samples(const GenotypeDataset& dataset, const HfTable& hf, std::size_t n_rep,
                            std::size_t n_sample, std::uint64_t seed, std::size_t threads = 0);

/// Panels need at least this many samples; smaller buckets are omitted with a note.
inline constexpr std::size_t kMinPanelSamples = 100;

/// sup |F_n(x) - F(x)| between the empirical CDF of values and chi^2_df.
double ks_distance_chisq(std::span<const double> values, double df);

struct Histogram {
  std::vector<double> edges;    // bins + 1 ascending edges
  std::vector<double> density;  // count / (n * width)
  std::vector<std::size_t> counts;
};

/// Freedman-Diaconis bins over [0, max(values)]; Sturges when the IQR is zero.
Histogram freedman_diaconis(std::span<const double> values);

struct QqFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (chi^2_df quantile at (i - 0.5)/n, i-th smallest value).
QqFit qq_fit(std::span<const double> values, double df);

struct PanelSummary {
  int k = 0;
  std::size_t n = 0;
  double h = 0.0;
  double f = 0.0;
  bool plotted = false;
  std::string note;             // reason a panel was omitted
  double ks = 0.0;              // vs chi^2_f
  double total_variation = 0.0;  // histogram bin mass vs expected bin mass
  QqFit qq;
};

struct DiagnosticReport {
  std::vector<PanelSummary> panels;
  std::vector<std::filesystem::path> files;
};

/// Writes diag_density_k{K}.tsv / .svg per plotted k and diag_density.svg with
/// one panel per k. Throws EstimationError when no k has kMinPanelSamples.
DiagnosticReport density_report(const NullWSamples& samples, const std::filesystem::path& out_dir);

/// Writes diag_qq_k{K}.tsv / .svg per plotted k and diag_qq.svg with one
/// panel per k, identity line included. Same sample requirement.
DiagnosticReport qq_report(const NullWSamples& samples, const std::filesystem::path& out_dir);

}  // namespace wscan

#endif  // WSCAN_DIAGNOSTICS_HPP
