#ifndef WSCAN_NULL_SAMPLING_HPP
#define WSCAN_NULL_SAMPLING_HPP

#include "wscan/genotype.hpp"
#include "wscan/packed.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wscan {

class Philox;

/// Running count, mean and sum of squared deviations (Welford); merges with
/// Chan's update so reductions in a fixed order are reproducible.
struct MomentAccumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const MomentAccumulator& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
  /// Unbiased sample variance; 0 for fewer than two values.
  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// One permuted-phenotype draw: category count and raw S of the drawn marker or pair.
struct NullDraw {
  std::uint8_t k;
  double s;
};

/// Draws null S values on the real genotypes. Replicate b permutes the
/// phenotype once, then draws n_sample markers (order 1) or marker pairs
/// (order 2) from the testable pool, without replacement unless the pool is
/// smaller than n_sample. Replicate b uses Philox(seed, b), so every replicate
/// is reproducible on its own.
class NullSampler {
 public:
  /// Throws EstimationError when the testable pool is empty.
  NullSampler(const GenotypeDataset& dataset, int order);

  int order() const noexcept { return order_; }
  /// Markers whose full-data table has k >= 2 (k does not depend on phenotype).
  const std::vector<std::size_t>& testable() const noexcept { return testable_; }
  /// Number of markers (order 1) or unordered pairs (order 2) to draw from.
  std::uint64_t pool_size() const noexcept { return pool_size_; }

  /// Appends the replicate's draws (k >= 2 only) to out in draw order.
  void replicate(std::uint64_t seed, std::uint64_t b, std::size_t n_sample,
                 std::vector<NullDraw>& out) const;

  /// Markers (i, j), i < j, for lexicographic pair index t over testable().
  std::pair<std::size_t, std::size_t> pair_at(std::uint64_t t) const;

 private:
  int order_;
  std::vector<std::uint8_t> phenotype_;
  SubjectPlanes planes_;
  std::vector<std::size_t> testable_;
  std::vector<std::uint64_t> row_start_;  // first pair index of each row i
  std::uint64_t pool_size_ = 0;
};

/// Distinct values in [0, population) chosen uniformly (Floyd), in selection order.
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::size_t n,
                                                      Philox& rng);

}  // namespace wscan

#endif  // WSCAN_NULL_SAMPLING_HPP
