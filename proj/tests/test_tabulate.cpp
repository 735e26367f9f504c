#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "wscan/errors.hpp"
#include "wscan/packed.hpp"
#include "wscan/rng.hpp"
#include "wscan/tabulate.hpp"

#include <random>

using namespace wscan;

namespace {

bool same(const ContingencyTable& t, const oracle::RawTable& raw) {
  if (t.k() != raw.cells.size()) return false;
  if (static_cast<long>(t.n_cases()) != raw.N1 || static_cast<long>(t.n_controls()) != raw.N0) return false;
  auto it = raw.cells.begin();
  for (const auto& c : t.cells()) {
    if (c.category != it->first || static_cast<long>(c.n1) != it->second.first ||
        static_cast<long>(c.n0) != it->second.second) {
      return false;
    }
    ++it;
  }
  return true;
}

}  // namespace

TEST_CASE("worked example tables") {
  const auto ds = support::d0();
  const auto a = tabulate_single(ds, 0);
  REQUIRE(a.k() == 3);
  CHECK(a.cells()[0] == Cell{0, 2, 1});
  CHECK(a.cells()[1] == Cell{1, 1, 2});
  CHECK(a.cells()[2] == Cell{2, 1, 1});

  const auto ab = tabulate_pair(ds, 0, 1);
  REQUIRE(ab.k() == 6);
  const Cell want[] = {{0, 0, 1}, {2, 2, 0}, {3, 0, 1}, {4, 1, 1}, {6, 1, 0}, {7, 0, 1}};
  for (std::size_t i = 0; i < 6; ++i) CHECK(ab.cells()[i] == want[i]);
  CHECK(ab.n_cases() == 4);
  CHECK(ab.n_controls() == 4);
}

TEST_CASE("all tabulation routes agree with raw counting") {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + gen() % 300;
    const auto raw = oracle::random_data(gen, n, 3, (rep % 4) * 0.1);
    const auto ds = support::to_dataset(raw);
    const auto packed = pack(ds);
    const SubjectPlanes planes(ds);
    const auto mask = case_mask(std::vector<std::uint8_t>(raw.phenotype.begin(), raw.phenotype.end()));
    for (std::size_t m = 0; m < 3; ++m) {
      const auto want = oracle::raw_single(raw.markers[m], raw.phenotype);
      if (want.cells.empty()) {
        CHECK_THROWS_AS(tabulate_single(ds, m), DegenerateError);
        continue;
      }
      const auto naive = tabulate_single(ds, m);
      REQUIRE(same(naive, want));
      REQUIRE(tabulate_single_packed(packed, m) == naive);
      REQUIRE(tabulate_single_masked(planes, mask, m) == naive);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i + 1; j < 3; ++j) {
        const auto want = oracle::raw_pair(raw.markers[i], raw.markers[j], raw.phenotype);
        if (want.cells.empty()) {
          CHECK_THROWS_AS(tabulate_pair(ds, i, j), DegenerateError);
          continue;
        }
        const auto naive = tabulate_pair(ds, i, j);
        REQUIRE(same(naive, want));
        REQUIRE(tabulate_pair_packed(packed, i, j) == naive);
        REQUIRE(tabulate_pair_masked(planes, mask, i, j) == naive);
      }
    }
  }
}

TEST_CASE("permuted phenotype routes agree") {
  std::mt19937_64 gen(7);
  const auto raw = oracle::random_data(gen, 257, 4, 0.05);
  const auto ds = support::to_dataset(raw);
  const SubjectPlanes planes(ds);
  std::vector<std::uint8_t> y(raw.phenotype.begin(), raw.phenotype.end());
  Philox rng(1, 2);
  for (int rep = 0; rep < 20; ++rep) {
    shuffle(std::span<std::uint8_t>(y), rng);
    const auto mask = case_mask(y);
    std::vector<int> yi(y.begin(), y.end());
    for (std::size_t m = 0; m < 4; ++m) {
      CHECK(same(tabulate_single(ds, y, m), oracle::raw_single(raw.markers[m], yi)));
      CHECK(tabulate_single_masked(planes, mask, m) == tabulate_single(ds, y, m));
    }
    CHECK(tabulate_pair_masked(planes, mask, 1, 3) == tabulate_pair(ds, y, 1, 3));
  }
}

TEST_CASE("pair tables transpose under marker swap") {
  std::mt19937_64 gen(8);
  const auto ds = support::to_dataset(oracle::random_data(gen, 100, 2, 0.1));
  const auto ab = tabulate_pair(ds, 0, 1);
  const auto ba = tabulate_pair(ds, 1, 0);
  REQUIRE(ab.k() == ba.k());
  CHECK(ab.n_cases() == ba.n_cases());
  for (const auto& c : ab.cells()) {
    const int swapped = 3 * (c.category % 3) + c.category / 3;
    bool found = false;
    for (const auto& d : ba.cells()) {
      if (d.category == swapped) {
        found = true;
        CHECK(d.n1 == c.n1);
        CHECK(d.n0 == c.n0);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("cell counts sum to the subjects observed") {
  std::mt19937_64 gen(9);
  const auto raw = oracle::random_data(gen, 500, 2, 0.2);
  const auto ds = support::to_dataset(raw);
  const auto t = tabulate_pair(ds, 0, 1);
  std::size_t observed = 0;
  for (std::size_t s = 0; s < 500; ++s) observed += raw.markers[0][s] < 3 && raw.markers[1][s] < 3;
  std::size_t sum = 0;
  for (const auto& c : t.cells()) sum += c.n1 + c.n0;
  CHECK(sum == observed);
  CHECK(t.n_cases() + t.n_controls() == observed);
}

TEST_CASE("degenerate and invalid requests") {
  GenotypeMatrix g(4, 2);
  g << 3, 0, 3, 1, 3, 2, 3, 0;
  PhenotypeVector y(4);
  y << 1, 0, 1, 0;
  const GenotypeDataset ds({"allmissing", "ok"}, g, y);
  CHECK_THROWS_AS(tabulate_single(ds, 0), DegenerateError);
  CHECK_THROWS_AS(tabulate_single_packed(pack(ds), 0), DegenerateError);
  CHECK_THROWS_AS(tabulate_pair(ds, 0, 1), DegenerateError);
  CHECK_THROWS_AS(tabulate_single(ds, 5), ArgumentError);
  CHECK_THROWS_AS(tabulate_pair(ds, 1, 1), ArgumentError);
  CHECK_THROWS_AS(tabulate_pair_packed(pack(ds), 1, 1), ArgumentError);

  const auto mono = tabulate_single(support::d0().with_phenotype(y.replicate(2, 1)), 0);
  CHECK(mono.k() == 3);
}
