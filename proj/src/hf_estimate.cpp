#include "wscan/hf_estimate.hpp"

#include "wscan/errors.hpp"
#include "wscan/null_sampling.hpp"
#include "wscan/parallel.hpp"

#include <array>
#include <cmath>

namespace wscan {

namespace {

using PerK = std::array<MomentAccumulator, 10>;  // indexed by k

// Per-replicate moments, slot b for replicate b.
std::vector<PerK> replicate_moments(const NullSampler& sampler, std::uint64_t seed, std::size_t B,
                                    std::size_t n_sample, std::size_t threads) {
  std::vector<PerK> moments(B);
  parallel_chunks(B, 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<NullDraw> draws;
    for (std::size_t b = begin; b < end; ++b) {
      draws.clear();
      sampler.replicate(seed, b, n_sample, draws);
      for (const auto& d : draws) moments[b][d.k].add(d.s);
    }
  });
  return moments;
}

HfTable table_from_moments(std::span<const PerK> moments, int order, std::size_t n_sample,
                           std::uint64_t seed) {
  PerK pooled{};
  for (const auto& per_k : moments) {
    for (std::size_t k = 0; k < per_k.size(); ++k) pooled[k].merge(per_k[k]);
  }
  std::map<int, HfEntry> entries;
  for (int k = 2; k <= HfTable::max_k(order); ++k) {
    const auto& acc = pooled[static_cast<std::size_t>(k)];
    const double v = acc.variance();
    if (acc.n >= kMinPoolSize && v > 0.0 && acc.mean > 0.0) {
      const auto fit = moment_match(acc.mean, v);
      entries[k] = HfEntry{fit.h, fit.f, true, acc.n};
    } else {
      entries[k] = HfEntry{(k - 1.0) / k, k - 1.0, false, acc.n};
    }
  }
  return HfTable(order, std::move(entries), HfProvenance{true, moments.size(), n_sample, seed});
}

void check_args(int order, std::size_t B, std::size_t n_sample) {
  HfTable::max_k(order);
  if (B == 0) throw ArgumentError("B must be at least 1");
  if (n_sample == 0) throw ArgumentError("n_sample must be at least 1");
}

}  // namespace

ScaledChiSquared moment_match(double mean, double variance) {
  if (!(mean > 0.0) || !(variance > 0.0)) {
    throw ArgumentError("moment matching requires positive mean and variance");
  }
  return {2.0 * mean / variance, 2.0 * mean * mean / variance};
}

ScaledChiSquared fit_scaled_chisq(std::span<const double> values) {
  MomentAccumulator acc;
  for (const double v : values) acc.add(v);
  return moment_match(acc.mean, acc.variance());
}

HfTable estimate_hf(const GenotypeDataset& dataset, int order, std::size_t B,
                    std::size_t n_sample, std::uint64_t seed, std::size_t threads) {
  check_args(order, B, n_sample);
  const NullSampler sampler(dataset, order);
  const auto moments = replicate_moments(sampler, seed, B, n_sample, threads);
  return table_from_moments(moments, order, n_sample, seed);
}

std::vector<HfConvergenceRow> hf_convergence_report(const GenotypeDataset& dataset, int order,
                                                    std::span<const std::size_t> B_grid,
                                                    std::span<const std::uint64_t> seeds,
                                                    std::size_t n_sample, std::size_t threads) {
  if (B_grid.empty() || seeds.empty()) throw ArgumentError("B grid and seed list must be nonempty");
  std::size_t B_max = 0;
  for (const auto B : B_grid) {
    check_args(order, B, n_sample);
    B_max = std::max(B_max, B);
  }
  const NullSampler sampler(dataset, order);

  // Replicate b is keyed by (seed, b), so the table for B is the reduction of
  // the first B replicates of the longest run.
  std::vector<std::vector<HfTable>> tables(B_grid.size());
  for (const auto seed : seeds) {
    const auto moments = replicate_moments(sampler, seed, B_max, n_sample, threads);
    for (std::size_t g = 0; g < B_grid.size(); ++g) {
      tables[g].push_back(table_from_moments(std::span(moments).first(B_grid[g]), order,
                                             n_sample, seed));
    }
  }

  std::vector<HfConvergenceRow> rows;
  for (std::size_t g = 0; g < B_grid.size(); ++g) {
    for (int k = 2; k <= HfTable::max_k(order); ++k) {
      MomentAccumulator f_acc;
      for (const auto& t : tables[g]) {
        const auto& e = t.at(k);
        if (e.estimated) f_acc.add(e.f);
      }
      if (f_acc.n == 0) continue;
      HfConvergenceRow row{B_grid[g], k, f_acc.n, f_acc.mean, std::nullopt};
      if (f_acc.n > 1) row.sd_f = std::sqrt(f_acc.variance());
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace wscan
