#include "wscan/wtest.hpp"

#include "wscan/chisq.hpp"
#include "wscan/errors.hpp"

namespace wscan {

std::vector<OddsCell> cell_log_odds(const ContingencyTable& table) {
  std::vector<OddsCell> out;
  out.reserve(table.k());
  for (const auto& cell : table.cells()) {
    out.push_back(odds_cell(cell.n1, table.n_cases(), cell.n0, table.n_controls()));
  }
  return out;
}

double s_statistic(std::span<const OddsCell> cells) {
  double s = 0.0;
  for (const auto& c : cells) {
    const double z = c.log_or / c.se;
    s += z * z;
  }
  return s;
}

WStatistic w_test(const ContingencyTable& table, const HfTable& hf) {
  if (table.k() < 2) {
    throw UntestableError("k=" + std::to_string(table.k()) + ": no odds contrast to test");
  }
  const auto& entry = hf.at(static_cast<int>(table.k()));
  WStatistic out;
  out.k = table.k();
  out.h_used = entry.h;
  out.f_used = entry.f;
  out.w = entry.h * s_statistic_of(table);
  out.p_value = chisq_sf(out.w, entry.f);
  return out;
}

}  // namespace wscan
