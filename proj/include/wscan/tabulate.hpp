#ifndef WSCAN_TABULATE_HPP
#define WSCAN_TABULATE_HPP

#include "wscan/genotype.hpp"
#include "wscan/packed.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace wscan {

struct Cell {
  std::uint8_t category = 0;  // g for a single marker, 3*g1 + g2 for a pair
  std::uint32_t n1 = 0;       // cases
  std::uint32_t n0 = 0;       // controls

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Case/control counts for the non-empty categories of one marker or pair,
/// ordered by category id. Cells empty in both groups are dropped.
class ContingencyTable {
 public:
  static constexpr std::size_t kMaxCells = 9;

  ContingencyTable() = default;

  /// Builds from dense per-category counts, dropping categories empty in both groups.
  template <std::size_t N>
  static ContingencyTable from_counts(const std::array<std::uint32_t, N>& n1,
                                      const std::array<std::uint32_t, N>& n0) {
    static_assert(N <= kMaxCells);
    ContingencyTable t;
    for (std::size_t c = 0; c < N; ++c) {
      if (n1[c] + n0[c] == 0) continue;
      t.cells_[t.k_++] = Cell{static_cast<std::uint8_t>(c), n1[c], n0[c]};
      t.cases_ += n1[c];
      t.controls_ += n0[c];
    }
    return t;
  }

  std::span<const Cell> cells() const noexcept { return {cells_.data(), k_}; }
  std::size_t k() const noexcept { return k_; }
  std::size_t n_cases() const noexcept { return cases_; }
  std::size_t n_controls() const noexcept { return controls_; }

  friend bool operator==(const ContingencyTable& a, const ContingencyTable& b) {
    if (a.k_ != b.k_ || a.cases_ != b.cases_ || a.controls_ != b.controls_) return false;
    for (std::size_t i = 0; i < a.k_; ++i) {
      if (!(a.cells_[i] == b.cells_[i])) return false;
    }
    return true;
  }

 private:
  std::array<Cell, kMaxCells> cells_{};
  std::size_t k_ = 0;
  std::size_t cases_ = 0;
  std::size_t controls_ = 0;
};

// Naive reference path: walks subjects one by one. Subjects missing any
// involved marker are excluded from that table only. Throws DegenerateError
// when no category is populated.

ContingencyTable tabulate_single(const GenotypeDataset& dataset, std::size_t marker);
ContingencyTable tabulate_pair(const GenotypeDataset& dataset, std::size_t m1, std::size_t m2);

/// Naive path against an alternative phenotype (e.g. a permutation).
ContingencyTable tabulate_single(const GenotypeDataset& dataset,
                                 std::span<const std::uint8_t> phenotype, std::size_t marker);
ContingencyTable tabulate_pair(const GenotypeDataset& dataset,
                               std::span<const std::uint8_t> phenotype, std::size_t m1,
                               std::size_t m2);

// Bitwise fast paths; results are identical to the naive path.

ContingencyTable tabulate_single_packed(const PackedGenotypes& packed, std::size_t marker);
ContingencyTable tabulate_pair_packed(const PackedGenotypes& packed, std::size_t m1,
                                      std::size_t m2);

/// Unsplit planes plus a case bitset over all subjects.
ContingencyTable tabulate_single_masked(const SubjectPlanes& planes, std::span<const Word> cases,
                                        std::size_t marker);
ContingencyTable tabulate_pair_masked(const SubjectPlanes& planes, std::span<const Word> cases,
                                      std::size_t m1, std::size_t m2);

}  // namespace wscan

#endif  // WSCAN_TABULATE_HPP
