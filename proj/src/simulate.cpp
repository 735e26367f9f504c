#include "wscan/simulate.hpp"

#include "wscan/errors.hpp"
#include "wscan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wscan {

GenotypeDataset simulate_null(const NullSimulation& spec, std::uint64_t seed) {
  if (spec.n_subjects < 2) throw ArgumentError("simulation needs at least two subjects");
  if (!(spec.maf_min >= 0.0 && spec.maf_min <= spec.maf_max && spec.maf_max <= 1.0)) {
    throw ArgumentError("allele frequency range must satisfy 0 <= min <= max <= 1");
  }
  const auto n = static_cast<Eigen::Index>(spec.n_subjects);
  auto n_cases = static_cast<std::size_t>(std::llround(spec.case_fraction * static_cast<double>(n)));
  n_cases = std::clamp<std::size_t>(n_cases, 1, spec.n_subjects - 1);

  std::vector<std::uint8_t> pheno(spec.n_subjects, 0);
  std::fill(pheno.begin(), pheno.begin() + static_cast<std::ptrdiff_t>(n_cases), 1);
  Philox pheno_rng(seed, ~std::uint64_t{0});
  shuffle(std::span<std::uint8_t>(pheno), pheno_rng);
  PhenotypeVector y = Eigen::Map<PhenotypeVector>(pheno.data(), n);

  GenotypeMatrix g(n, static_cast<Eigen::Index>(spec.n_markers));
  std::vector<std::string> names;
  names.reserve(spec.n_markers);
  for (std::size_t m = 0; m < spec.n_markers; ++m) {
    names.push_back("snp" + std::to_string(m + 1));
    Philox rng(seed, m);
    const double maf = spec.maf_min + (spec.maf_max - spec.maf_min) * rng.uniform();
    for (Eigen::Index s = 0; s < n; ++s) {
      GenotypeCode code = static_cast<GenotypeCode>((rng.uniform() < maf) + (rng.uniform() < maf));
      if (spec.missing_rate > 0.0 && rng.uniform() < spec.missing_rate) code = kMissing;
      g(s, static_cast<Eigen::Index>(m)) = code;
    }
  }
  return GenotypeDataset(std::move(names), std::move(g), std::move(y));
}

}  // namespace wscan
