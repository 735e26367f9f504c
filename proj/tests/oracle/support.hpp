// Shared fixtures for the unit tests.
#ifndef WSCAN_TESTS_SUPPORT_HPP
#define WSCAN_TESTS_SUPPORT_HPP

#include "oracle.hpp"
#include "wscan/genotype.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace support {

inline wscan::GenotypeDataset to_dataset(const oracle::RandomData& d,
                                         std::vector<std::string> names = {}) {
  const auto n = static_cast<Eigen::Index>(d.phenotype.size());
  const auto m = static_cast<Eigen::Index>(d.markers.size());
  wscan::GenotypeMatrix g(n, m);
  wscan::PhenotypeVector y(n);
  const bool named = !names.empty();
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!named) names.push_back("m" + std::to_string(j));
    for (Eigen::Index s = 0; s < n; ++s) g(s, j) = static_cast<std::uint8_t>(d.markers[j][s]);
  }
  for (Eigen::Index s = 0; s < n; ++s) y(s) = static_cast<std::uint8_t>(d.phenotype[s]);
  return wscan::GenotypeDataset(std::move(names), std::move(g), std::move(y));
}

/// Eight subjects, markers A and B; the worked example used across tests.
inline oracle::RandomData d0_raw() {
  oracle::RandomData d;
  d.phenotype = {1, 1, 1, 1, 0, 0, 0, 0};
  d.markers = {{0, 0, 1, 2, 0, 1, 1, 2}, {2, 2, 1, 0, 0, 0, 1, 1}};
  return d;
}

inline wscan::GenotypeDataset d0() {
  return to_dataset(d0_raw(), {"A", "B"});
}

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(WSCAN_TEST_DATA) / name;
}

/// Fresh scratch directory for the running test binary.
inline std::filesystem::path scratch(const std::string& sub) {
  const auto dir = std::filesystem::path(WSCAN_TEST_TMP) / sub;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace support

#endif  // WSCAN_TESTS_SUPPORT_HPP
