#ifndef WSCAN_WTEST_HPP
#define WSCAN_WTEST_HPP

#include "wscan/hf_table.hpp"
#include "wscan/tabulate.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace wscan {

/// Log odds ratio of one category against the rest, and its Woolf standard error.
template <typename Scalar>
struct BasicOddsCell {
  Scalar log_or;
  Scalar se;
};
using OddsCell = BasicOddsCell<double>;

/// Odds cell for n1 of N1 cases and n0 of N0 controls in the category. When any
/// of the four 2x2 entries is zero, 0.5 is added to all four (Haldane-Anscombe).
template <typename Scalar = double>
BasicOddsCell<Scalar> odds_cell(std::size_t n1, std::size_t N1, std::size_t n0, std::size_t N0) {
  Scalar a = static_cast<Scalar>(n1);
  Scalar c = static_cast<Scalar>(N1 - n1);
  Scalar b = static_cast<Scalar>(n0);
  Scalar d = static_cast<Scalar>(N0 - n0);
  if (n1 == 0 || n1 == N1 || n0 == 0 || n0 == N0) {
    const Scalar half(0.5);
    a += half;
    b += half;
    c += half;
    d += half;
  }
  using std::log;
  using std::sqrt;
  const Scalar one(1);
  return {log((a / c) / (b / d)), sqrt(one / a + one / c + one / b + one / d)};
}

/// One OddsCell per retained cell, in table order. Natural log throughout.
std::vector<OddsCell> cell_log_odds(const ContingencyTable& table);

/// S = sum over cells of (log_or / se)^2.
double s_statistic(std::span<const OddsCell> cells);

/// Same value as s_statistic(cell_log_odds(table)) without the allocation.
template <typename Scalar = double>
Scalar s_statistic_of(const ContingencyTable& table) {
  Scalar s(0);
  for (const auto& cell : table.cells()) {
    const auto oc = odds_cell<Scalar>(cell.n1, table.n_cases(), cell.n0, table.n_controls());
    const Scalar z = oc.log_or / oc.se;
    s += z * z;
  }
  return s;
}

struct WStatistic {
  double w = 0.0;
  std::size_t k = 0;
  double h_used = 0.0;
  double f_used = 0.0;
  double p_value = 1.0;
};

/// W = h(k) * S referred to chi^2 with f(k) degrees of freedom.
/// Throws UntestableError for k < 2 and ConfigError when hf lacks k.
WStatistic w_test(const ContingencyTable& table, const HfTable& hf);

}  // namespace wscan

#endif  // WSCAN_WTEST_HPP
