#include "wscan/null_sampling.hpp"

#include "wscan/errors.hpp"
#include "wscan/rng.hpp"
#include "wscan/tabulate.hpp"
#include "wscan/wtest.hpp"

#include <algorithm>
#include <unordered_set>

namespace wscan {

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::size_t n,
                                                      Philox& rng) {
  if (n > population) throw ArgumentError("sample larger than population");
  std::vector<std::uint64_t> chosen;
  chosen.reserve(n);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(n * 2);
  for (std::uint64_t j = population - n; j < population; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = seen.count(t) ? j : t;
    seen.insert(pick);
    chosen.push_back(pick);
  }
  return chosen;
}

NullSampler::NullSampler(const GenotypeDataset& dataset, int order)
    : order_(order),
      phenotype_(dataset.phenotype().data(), dataset.phenotype().data() + dataset.n_subjects()),
      planes_(dataset) {
  if (order != 1 && order != 2) throw ArgumentError("order must be 1 or 2");
  for (std::size_t m = 0; m < dataset.n_markers(); ++m) {
    std::size_t present = 0;
    for (GenotypeCode g = 0; g < 3; ++g) present += planes_.code_count(m, g) > 0 ? 1 : 0;
    if (present >= 2) testable_.push_back(m);
  }
  const std::uint64_t t = testable_.size();
  if (order == 1) {
    pool_size_ = t;
  } else {
    row_start_.resize(t);
    std::uint64_t start = 0;
    for (std::uint64_t i = 0; i < t; ++i) {
      row_start_[i] = start;
      start += t - 1 - i;
    }
    pool_size_ = start;
  }
  if (pool_size_ == 0) {
    throw EstimationError(order == 1 ? "no testable markers (every marker has k < 2)"
                                     : "fewer than two testable markers; no pairs to sample");
  }
}

std::pair<std::size_t, std::size_t> NullSampler::pair_at(std::uint64_t t) const {
  const auto it = std::upper_bound(row_start_.begin(), row_start_.end(), t);
  const auto i = static_cast<std::size_t>(std::distance(row_start_.begin(), it) - 1);
  const auto j = static_cast<std::size_t>(i + 1 + (t - row_start_[i]));
  return {testable_[i], testable_[j]};
}

void NullSampler::replicate(std::uint64_t seed, std::uint64_t b, std::size_t n_sample,
                            std::vector<NullDraw>& out) const {
  Philox rng(seed, b);
  std::vector<std::uint8_t> permuted = phenotype_;
  shuffle(std::span<std::uint8_t>(permuted), rng);
  const auto cases = case_mask(permuted);

  std::vector<std::uint64_t> picks;
  if (pool_size_ >= n_sample) {
    picks = sample_without_replacement(pool_size_, n_sample, rng);
  } else {
    picks.resize(n_sample);
    for (auto& p : picks) p = rng.below(pool_size_);
  }

  out.reserve(out.size() + picks.size());
  for (const std::uint64_t pick : picks) {
    ContingencyTable table;
    try {
      if (order_ == 1) {
        table = tabulate_single_masked(planes_, cases, testable_[pick]);
      } else {
        const auto [i, j] = pair_at(pick);
        table = tabulate_pair_masked(planes_, cases, i, j);
      }
    } catch (const DegenerateError&) {
      continue;  // pair with no jointly observed subject
    }
    if (table.k() < 2) continue;
    out.push_back({static_cast<std::uint8_t>(table.k()), s_statistic_of(table)});
  }
}

}  // namespace wscan
