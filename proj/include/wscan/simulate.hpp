#ifndef WSCAN_SIMULATE_HPP
#define WSCAN_SIMULATE_HPP

#include "wscan/genotype.hpp"

#include <cstdint>

namespace wscan {

/// Null genotype data: independent markers in Hardy-Weinberg equilibrium with
/// minor-allele frequency uniform in [maf_min, maf_max], and a phenotype
/// independent of every marker.
struct NullSimulation {
  std::size_t n_subjects = 1000;
  std::size_t n_markers = 100;
  double maf_min = 0.05;
  double maf_max = 0.5;
  double case_fraction = 0.5;  // exact count round(n * fraction), randomly placed
  double missing_rate = 0.0;
};

GenotypeDataset simulate_null(const NullSimulation& spec, std::uint64_t seed);

}  // namespace wscan

#endif  // WSCAN_SIMULATE_HPP
