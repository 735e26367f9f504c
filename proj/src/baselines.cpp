#include "wscan/baselines.hpp"

#include "wscan/chisq.hpp"
#include "wscan/errors.hpp"
#include "wscan/packed.hpp"
#include "wscan/parallel.hpp"
#include "wscan/scan.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace wscan {

ChisqAssociation chisq_association(const ContingencyTable& table) {
  if (table.k() < 2) throw UntestableError("chi-squared association needs k >= 2");
  struct Counts {
    double n1;
    double n0;
  };
  std::vector<Counts> cells;
  for (const auto& c : table.cells()) cells.push_back({double(c.n1), double(c.n0)});
  const double N1 = static_cast<double>(table.n_cases());
  const double N0 = static_cast<double>(table.n_controls());
  const double N = N1 + N0;
  auto min_expected = [&](const Counts& c) { return (c.n1 + c.n0) * std::min(N1, N0) / N; };

  while (cells.size() > 1) {
    std::size_t worst = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (min_expected(cells[i]) < 1.0 &&
          (worst == cells.size() || min_expected(cells[i]) < min_expected(cells[worst]))) {
        worst = i;
      }
    }
    if (worst == cells.size()) break;
    std::size_t into;
    if (worst == 0) into = 1;
    else if (worst + 1 == cells.size()) into = worst - 1;
    else {
      const auto& l = cells[worst - 1];
      const auto& r = cells[worst + 1];
      into = (r.n1 + r.n0 < l.n1 + l.n0) ? worst + 1 : worst - 1;
    }
    cells[into].n1 += cells[worst].n1;
    cells[into].n0 += cells[worst].n0;
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(worst));
  }

  ChisqAssociation out;
  out.pooled_categories = cells.size();
  if (cells.size() < 2) return out;
  double stat = 0.0;
  for (const auto& c : cells) {
    const double total = c.n1 + c.n0;
    const double e1 = total * N1 / N;
    const double e0 = total * N0 / N;
    stat += (c.n1 - e1) * (c.n1 - e1) / e1 + (c.n0 - e0) * (c.n0 - e0) / e0;
  }
  out.statistic = stat;
  out.df = cells.size() - 1;
  out.p_value = chisq_sf(stat, static_cast<double>(out.df));
  return out;
}

namespace {

bool failed(FitStatus s) { return s != FitStatus::Converged; }

}  // namespace

LogisticInteraction logistic_interaction(const GenotypeDataset& dataset, std::size_t m1,
                                         std::size_t m2) {
  if (m1 >= dataset.n_markers() || m2 >= dataset.n_markers() || m1 == m2) {
    throw ArgumentError("logistic interaction needs two distinct markers in range");
  }
  std::vector<std::size_t> rows;
  rows.reserve(dataset.n_subjects());
  for (std::size_t s = 0; s < dataset.n_subjects(); ++s) {
    if (dataset.at(s, m1) != kMissing && dataset.at(s, m2) != kMissing) rows.push_back(s);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd full(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto s = rows[static_cast<std::size_t>(i)];
    const double g1 = dataset.at(s, m1);
    const double g2 = dataset.at(s, m2);
    full.row(i) << 1.0, g1, g2, g1 * g2;
    y(i) = dataset.phenotype()(static_cast<Eigen::Index>(s));
  }
  const Eigen::MatrixXd reduced = full.leftCols(3);

  LogisticInteraction out;
  const auto fit_full = fit_logistic<double>(full, y);
  const auto fit_reduced = fit_logistic<double>(reduced, y);
  out.deviance_full = fit_full.deviance;
  out.deviance_reduced = fit_reduced.deviance;
  out.status = failed(fit_full.status) ? fit_full.status : fit_reduced.status;
  if (failed(fit_full.status) || failed(fit_reduced.status)) return out;
  out.lrt = std::max(0.0, fit_reduced.deviance - fit_full.deviance);
  out.p_value = chisq_sf(out.lrt, 1.0);
  return out;
}

std::optional<double> logistic_interaction_p(const GenotypeDataset& dataset, std::size_t m1,
                                             std::size_t m2) {
  return logistic_interaction(dataset, m1, m2).p_value;
}

Method parse_method(const std::string& name) {
  if (name == "wtest") return Method::WTest;
  if (name == "chisq") return Method::Chisq;
  if (name == "logistic") return Method::Logistic;
  throw ArgumentError("unknown method '" + name + "' (expected wtest, chisq or logistic)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::WTest: return "wtest";
    case Method::Chisq: return "chisq";
    case Method::Logistic: return "logistic";
  }
  return "?";
}

namespace {

// Pairs (i, j), i < j, of testable markers, in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> testable_pairs(const GenotypeDataset& dataset) {
  std::vector<std::size_t> testable;
  for (std::size_t m = 0; m < dataset.n_markers(); ++m) {
    try {
      if (tabulate_single(dataset, m).k() >= 2) testable.push_back(m);
    } catch (const DegenerateError&) {
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < testable.size(); ++a) {
    for (std::size_t b = a + 1; b < testable.size(); ++b) pairs.emplace_back(testable[a], testable[b]);
  }
  return pairs;
}

template <typename PerPair>
std::size_t count_untestable(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                             std::size_t threads, PerPair&& test) {
  std::vector<std::uint8_t> bad(pairs.size(), 0);
  parallel_chunks(pairs.size(), 256, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) bad[t] = test(pairs[t].first, pairs[t].second) ? 0 : 1;
  });
  std::size_t n = 0;
  for (const auto b : bad) n += b;
  return n;
}

}  // namespace

BenchmarkReport run_benchmark(const GenotypeDataset& dataset, const std::vector<Method>& methods,
                              const BenchmarkConfig& config) {
  if (methods.empty()) throw ArgumentError("benchmark needs at least one method");
  BenchmarkReport report;
  report.n_subjects = dataset.n_subjects();
  report.n_markers = dataset.n_markers();
  const auto pairs = testable_pairs(dataset);
  const HfTable hf_main = config.hf_main.value_or(default_hf(1));
  const HfTable hf_pair = config.hf_pair.value_or(default_hf(2));

  for (const Method method : methods) {
    BenchmarkRow row{method};
    row.n_tests = pairs.size();
    const auto start = std::chrono::steady_clock::now();
    switch (method) {
      case Method::WTest: {
        const auto packed = pack(dataset);
        ScanConfig sc;
        sc.order = 2;
        sc.threads = config.threads;
        row.untestable = scan_pairs(packed, hf_main, hf_pair, sc).untestable;
        break;
      }
      case Method::Chisq:
        row.untestable = count_untestable(pairs, config.threads, [&](std::size_t a, std::size_t b) {
          try {
            const auto table = tabulate_pair(dataset, a, b);
            return table.k() >= 2 && chisq_association(table).df > 0;
          } catch (const DegenerateError&) {
            return false;
          }
        });
        break;
      case Method::Logistic:
        row.untestable = count_untestable(pairs, config.threads, [&](std::size_t a, std::size_t b) {
          return logistic_interaction_p(dataset, a, b).has_value();
        });
        break;
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.tests_per_second = row.seconds > 0 ? static_cast<double>(row.n_tests) / row.seconds : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

void write_benchmark(const BenchmarkReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "method\tn_tests\tseconds\ttests_per_second\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%s\t%zu\t%.6f\t%.1f\n", method_name(r.method).c_str(),
                  r.n_tests, r.seconds, r.tests_per_second);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace wscan
