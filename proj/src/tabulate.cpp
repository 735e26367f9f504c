#include "wscan/tabulate.hpp"

#include "wscan/errors.hpp"

#include <string>

namespace wscan {

namespace {

void check_marker(std::size_t n_markers, std::size_t m) {
  if (m >= n_markers) {
    throw ArgumentError("marker index " + std::to_string(m) + " out of range (" +
                        std::to_string(n_markers) + " markers)");
  }
}

void check_pair(std::size_t n_markers, std::size_t m1, std::size_t m2) {
  check_marker(n_markers, m1);
  check_marker(n_markers, m2);
  if (m1 == m2) throw ArgumentError("pair requires two distinct markers");
}

ContingencyTable nonempty(ContingencyTable t, const char* what, std::size_t m1, std::size_t m2) {
  if (t.k() == 0) {
    std::string msg = std::string(what) + " " + std::to_string(m1);
    if (m2 != m1) msg += "," + std::to_string(m2);
    throw DegenerateError(msg + " has no non-missing subjects");
  }
  return t;
}

}  // namespace

ContingencyTable tabulate_single(const GenotypeDataset& dataset,
                                 std::span<const std::uint8_t> phenotype, std::size_t marker) {
  check_marker(dataset.n_markers(), marker);
  std::array<std::uint32_t, 3> n1{};
  std::array<std::uint32_t, 3> n0{};
  for (std::size_t s = 0; s < dataset.n_subjects(); ++s) {
    const GenotypeCode g = dataset.at(s, marker);
    if (g == kMissing) continue;
    (phenotype[s] == 1 ? n1 : n0)[g] += 1;
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "marker", marker, marker);
}

ContingencyTable tabulate_pair(const GenotypeDataset& dataset,
                               std::span<const std::uint8_t> phenotype, std::size_t m1,
                               std::size_t m2) {
  check_pair(dataset.n_markers(), m1, m2);
  std::array<std::uint32_t, 9> n1{};
  std::array<std::uint32_t, 9> n0{};
  for (std::size_t s = 0; s < dataset.n_subjects(); ++s) {
    const GenotypeCode g1 = dataset.at(s, m1);
    const GenotypeCode g2 = dataset.at(s, m2);
    if (g1 == kMissing || g2 == kMissing) continue;
    (phenotype[s] == 1 ? n1 : n0)[3 * g1 + g2] += 1;
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "pair", m1, m2);
}

ContingencyTable tabulate_single(const GenotypeDataset& dataset, std::size_t marker) {
  const auto& y = dataset.phenotype();
  return tabulate_single(dataset, {y.data(), static_cast<std::size_t>(y.size())}, marker);
}

ContingencyTable tabulate_pair(const GenotypeDataset& dataset, std::size_t m1, std::size_t m2) {
  const auto& y = dataset.phenotype();
  return tabulate_pair(dataset, {y.data(), static_cast<std::size_t>(y.size())}, m1, m2);
}

ContingencyTable tabulate_single_packed(const PackedGenotypes& packed, std::size_t marker) {
  check_marker(packed.n_markers(), marker);
  std::array<std::uint32_t, 3> n1{};
  std::array<std::uint32_t, 3> n0{};
  for (GenotypeCode g = 0; g < 3; ++g) {
    n1[g] = static_cast<std::uint32_t>(popcount(packed.plane(marker, g, Group::Case)));
    n0[g] = static_cast<std::uint32_t>(popcount(packed.plane(marker, g, Group::Control)));
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "marker", marker, marker);
}

ContingencyTable tabulate_pair_packed(const PackedGenotypes& packed, std::size_t m1,
                                      std::size_t m2) {
  check_pair(packed.n_markers(), m1, m2);
  std::array<std::uint32_t, 9> n1{};
  std::array<std::uint32_t, 9> n0{};
  for (GenotypeCode g1 = 0; g1 < 3; ++g1) {
    const auto a1 = packed.plane(m1, g1, Group::Case);
    const auto a0 = packed.plane(m1, g1, Group::Control);
    for (GenotypeCode g2 = 0; g2 < 3; ++g2) {
      n1[3 * g1 + g2] =
          static_cast<std::uint32_t>(popcount_and(a1, packed.plane(m2, g2, Group::Case)));
      n0[3 * g1 + g2] =
          static_cast<std::uint32_t>(popcount_and(a0, packed.plane(m2, g2, Group::Control)));
    }
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "pair", m1, m2);
}

ContingencyTable tabulate_single_masked(const SubjectPlanes& planes, std::span<const Word> cases,
                                        std::size_t marker) {
  check_marker(planes.n_markers(), marker);
  std::array<std::uint32_t, 3> n1{};
  std::array<std::uint32_t, 3> n0{};
  for (GenotypeCode g = 0; g < 3; ++g) {
    const auto total = planes.code_count(marker, g);
    n1[g] = static_cast<std::uint32_t>(popcount_and(planes.plane(marker, g), cases));
    n0[g] = static_cast<std::uint32_t>(total - n1[g]);
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "marker", marker, marker);
}

ContingencyTable tabulate_pair_masked(const SubjectPlanes& planes, std::span<const Word> cases,
                                      std::size_t m1, std::size_t m2) {
  check_pair(planes.n_markers(), m1, m2);
  std::array<std::uint32_t, 9> n1{};
  std::array<std::uint32_t, 9> n0{};
  const std::size_t nw = planes.words();
  for (GenotypeCode g1 = 0; g1 < 3; ++g1) {
    const auto a = planes.plane(m1, g1);
    if (planes.code_count(m1, g1) == 0) continue;
    for (GenotypeCode g2 = 0; g2 < 3; ++g2) {
      const auto b = planes.plane(m2, g2);
      std::size_t both = 0;
      std::size_t in_cases = 0;
      for (std::size_t i = 0; i < nw; ++i) {
        const Word joint = a[i] & b[i];
        both += static_cast<std::size_t>(std::popcount(joint));
        in_cases += static_cast<std::size_t>(std::popcount(joint & cases[i]));
      }
      n1[3 * g1 + g2] = static_cast<std::uint32_t>(in_cases);
      n0[3 * g1 + g2] = static_cast<std::uint32_t>(both - in_cases);
    }
  }
  return nonempty(ContingencyTable::from_counts(n1, n0), "pair", m1, m2);
}

}  // namespace wscan
