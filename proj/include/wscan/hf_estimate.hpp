#ifndef WSCAN_HF_ESTIMATE_HPP
#define WSCAN_HF_ESTIMATE_HPP

#include "wscan/genotype.hpp"
#include "wscan/hf_table.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace wscan {

/// Pools with fewer null values than this fall back to the default entry.
inline constexpr std::size_t kMinPoolSize = 30;

struct ScaledChiSquared {
  double h;
  double f;
};

/// Satterthwaite matching: the (h, f) for which h*S has mean f and variance 2f,
/// i.e. h = 2m/v and f = 2m^2/v. Throws ArgumentError unless m > 0 and v > 0.
ScaledChiSquared moment_match(double mean, double variance);

/// moment_match on the sample mean and unbiased sample variance of values.
ScaledChiSquared fit_scaled_chisq(std::span<const double> values);

/// Bootstrap estimate of the per-k calibration table from permuted-phenotype
/// null draws on the real genotypes (see NullSampler). Each k with at least
/// kMinPoolSize draws and positive variance gets moment-matched (h, f); the
/// rest keep the default entry. Bit-identical for any thread count.
HfTable estimate_hf(const GenotypeDataset& dataset, int order, std::size_t B,
                    std::size_t n_sample, std::uint64_t seed, std::size_t threads = 0);

struct HfConvergenceRow {
  std::size_t B = 0;
  int k = 0;
  std::size_t n_estimates = 0;  // seeds where k was estimated (not defaulted)
  double mean_f = 0.0;
  std::optional<double> sd_f;  // absent with fewer than two estimates
};

/// Spread of f-hat across seeds for each B in the grid. Rows cover every k
/// estimated for at least one seed, ordered by (B, k).
std::vector<HfConvergenceRow> hf_convergence_report(const GenotypeDataset& dataset, int order,
                                                    std::span<const std::size_t> B_grid,
                                                    std::span<const std::uint64_t> seeds,
                                                    std::size_t n_sample,
                                                    std::size_t threads = 0);

}  // namespace wscan

#endif  // WSCAN_HF_ESTIMATE_HPP
