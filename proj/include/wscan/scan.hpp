#ifndef WSCAN_SCAN_HPP
#define WSCAN_SCAN_HPP

#include "wscan/genotype.hpp"
#include "wscan/hf_table.hpp"
#include "wscan/packed.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wscan {

struct ScanConfig {
  int order = 1;
  std::optional<double> input_pval;         // stage 1: keep markers with main p <= input_pval
  std::optional<std::size_t> input_poolsize;  // stage 1: keep the n smallest main p-values
  std::optional<double> output_pval;        // keep rows with p < output_pval
  std::size_t threads = 0;                  // 0 = auto
  std::ostream* progress = nullptr;         // rows/s and ETA; null for quiet
};

struct AssociationResult {
  std::size_t marker1 = 0;  // index into the dataset
  std::optional<std::size_t> marker2;
  std::string name1;
  std::optional<std::string> name2;
  double w = 0.0;
  std::size_t k = 0;
  double p_value = 1.0;
  std::optional<double> marker1_main_p;  // order 2 only
  std::optional<double> marker2_main_p;
};

struct ScanReport {
  int order = 1;
  std::vector<AssociationResult> rows;  // ascending p, ties by (name1, name2)
  std::size_t tests = 0;                // tables evaluated in the final stage
  std::size_t untestable = 0;           // markers/pairs skipped with k < 2
  std::vector<std::string> warnings;
};

/// Main-effect W-test for every testable marker.
ScanReport scan_main(const PackedGenotypes& data, const HfTable& hf, const ScanConfig& config);

/// Stage 1 main effects, then every unordered pair of retained markers.
ScanReport scan_pairs(const PackedGenotypes& data, const HfTable& hf_main, const HfTable& hf_pair,
                      const ScanConfig& config);

/// Sorts rows by p-value, ties broken by (name1, name2).
void sort_results(std::vector<AssociationResult>& rows);

/// TSV: rank, marker1, marker2, w, k, pair_pval, marker1_pval, marker2_pval
/// (order 1: rank, marker1, w, k, pval). p-values use 3 significant digits.
void write_results(const ScanReport& report, const std::filesystem::path& path);
void write_results(const ScanReport& report, std::ostream& out);

}  // namespace wscan

#endif  // WSCAN_SCAN_HPP
