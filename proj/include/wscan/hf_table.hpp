#ifndef WSCAN_HF_TABLE_HPP
#define WSCAN_HF_TABLE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wscan {

/// Calibration pair for one category count k: W = h * S is referred to chi^2_f.
struct HfEntry {
  double h = 0.0;
  double f = 0.0;
  bool estimated = false;     // false: large-sample default (possibly a fallback)
  std::size_t pool_size = 0;  // null S values behind an estimate (0 for defaults)

  friend bool operator==(const HfEntry&, const HfEntry&) = default;
};

struct HfProvenance {
  bool estimated = false;
  std::size_t B = 0;
  std::size_t n_sample = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const HfProvenance&, const HfProvenance&) = default;
};

/// Map k -> (h, f) for one test order. Covers every k in [2, max_k(order)].
class HfTable {
 public:
  HfTable(int order, std::map<int, HfEntry> entries, HfProvenance provenance);

  static int max_k(int order);

  int order() const noexcept { return order_; }
  const std::map<int, HfEntry>& entries() const noexcept { return entries_; }
  const HfProvenance& provenance() const noexcept { return provenance_; }

  bool contains(int k) const noexcept { return entries_.count(k) != 0; }
  /// Throws ConfigError when k has no entry.
  const HfEntry& at(int k) const;

  /// Copy with h scaled and/or f shifted for every entry (negative controls).
  HfTable perturbed(double h_scale, double f_shift) const;

  friend bool operator==(const HfTable&, const HfTable&) = default;

 private:
  int order_;
  std::map<int, HfEntry> entries_;
  HfProvenance provenance_;
};

/// h(k) = (k-1)/k, f(k) = k-1 for k in [2, max_k(order)].
HfTable default_hf(int order);

/// TSV with columns order, k, h, f, provenance. Several tables (different
/// orders) may share one file.
void write_hf_tsv(std::span<const HfTable> tables, const std::filesystem::path& path);
std::vector<HfTable> read_hf_tsv(const std::filesystem::path& path);

}  // namespace wscan

#endif  // WSCAN_HF_TABLE_HPP
