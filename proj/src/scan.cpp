#include "wscan/scan.hpp"

#include "wscan/errors.hpp"
#include "wscan/parallel.hpp"
#include "wscan/tabulate.hpp"
#include "wscan/wtest.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>

namespace wscan {

namespace {

class Progress {
 public:
  Progress(std::ostream* out, const char* what, std::size_t total)
      : out_(out), what_(what), total_(total), start_(Clock::now()), last_(start_) {}

  void advance(std::size_t n) {
    const std::size_t done = done_ += n;
    if (!out_) return;
    std::lock_guard lock(mu_);
    const auto now = Clock::now();
    if (now - last_ < std::chrono::seconds(1) && done < total_) return;
    last_ = now;
    const double elapsed = std::chrono::duration<double>(now - start_).count();
    const double rate = elapsed > 0 ? static_cast<double>(done) / elapsed : 0.0;
    const double eta = rate > 0 ? static_cast<double>(total_ - done) / rate : 0.0;
    char line[160];
    std::snprintf(line, sizeof line, "\r%s: %zu/%zu (%.0f rows/s, ETA %.0f s)", what_, done,
                  total_, rate, eta);
    *out_ << line << (done >= total_ ? "\n" : "") << std::flush;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::ostream* out_;
  const char* what_;
  std::size_t total_;
  std::atomic<std::size_t> done_{0};
  std::mutex mu_;
  Clock::time_point start_;
  Clock::time_point last_;
};

void check_order(const HfTable& hf, int order, const char* role) {
  if (hf.order() != order) {
    throw ConfigError(std::string(role) + " h/f table must have order " + std::to_string(order) +
                      ", got " + std::to_string(hf.order()));
  }
}

// Main effects for every marker, unfiltered; untestable markers yield nullopt.
std::vector<std::optional<AssociationResult>> main_effects(const PackedGenotypes& data,
                                                           const HfTable& hf,
                                                           const ScanConfig& config) {
  const std::size_t n = data.n_markers();
  std::vector<std::optional<AssociationResult>> out(n);
  Progress progress(config.progress, "markers", n);
  parallel_chunks(n, 512, config.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      ContingencyTable table;
      try {
        table = tabulate_single_packed(data, m);
      } catch (const DegenerateError&) {
        continue;
      }
      if (table.k() < 2) continue;
      const auto w = w_test(table, hf);
      AssociationResult r;
      r.marker1 = m;
      r.name1 = data.marker_names()[m];
      r.w = w.w;
      r.k = w.k;
      r.p_value = w.p_value;
      out[m] = std::move(r);
    }
    progress.advance(end - begin);
  });
  return out;
}

bool keep_output(const ScanConfig& config, double p) {
  return !config.output_pval || p < *config.output_pval;
}

}  // namespace

void sort_results(std::vector<AssociationResult>& rows) {
  std::sort(rows.begin(), rows.end(), [](const AssociationResult& a, const AssociationResult& b) {
    if (a.p_value != b.p_value) return a.p_value < b.p_value;
    if (a.name1 != b.name1) return a.name1 < b.name1;
    return a.name2.value_or("") < b.name2.value_or("");
  });
}

ScanReport scan_main(const PackedGenotypes& data, const HfTable& hf, const ScanConfig& config) {
  check_order(hf, 1, "main-effect");
  ScanReport report;
  report.order = 1;
  for (auto& r : main_effects(data, hf, config)) {
    if (!r) {
      ++report.untestable;
      continue;
    }
    ++report.tests;
    if (keep_output(config, r->p_value)) report.rows.push_back(std::move(*r));
  }
  if (report.untestable > 0) {
    report.warnings.push_back(std::to_string(report.untestable) +
                              " untestable marker(s) with k < 2 skipped");
  }
  if (report.tests == 0) report.warnings.push_back("no testable markers; result is empty");
  sort_results(report.rows);
  return report;
}

ScanReport scan_pairs(const PackedGenotypes& data, const HfTable& hf_main, const HfTable& hf_pair,
                      const ScanConfig& config) {
  check_order(hf_main, 1, "main-effect");
  check_order(hf_pair, 2, "pair");
  ScanReport report;
  report.order = 2;

  // Stage 1.
  auto main = main_effects(data, hf_main, config);
  std::vector<double> main_p(data.n_markers(), 1.0);
  std::vector<AssociationResult> testable;
  std::size_t untestable_markers = 0;
  for (auto& r : main) {
    if (!r) {
      ++untestable_markers;
      continue;
    }
    main_p[r->marker1] = r->p_value;
    testable.push_back(*r);
  }
  if (untestable_markers > 0) {
    report.warnings.push_back(std::to_string(untestable_markers) +
                              " untestable marker(s) with k < 2 excluded from stage 1");
  }

  std::vector<std::size_t> retained;
  if (config.input_pval) {
    if (config.input_poolsize) {
      report.warnings.push_back("both input_pval and input_poolsize given; using input_pval");
    }
    const double threshold = *config.input_pval;
    for (const auto& r : testable) {
      if (threshold > 0.0 && r.p_value <= threshold) retained.push_back(r.marker1);
    }
  } else if (config.input_poolsize) {
    sort_results(testable);
    const std::size_t n = std::min(*config.input_poolsize, testable.size());
    for (std::size_t i = 0; i < n; ++i) retained.push_back(testable[i].marker1);
  } else {
    for (const auto& r : testable) retained.push_back(r.marker1);
  }
  std::sort(retained.begin(), retained.end());

  if (retained.size() < 2) {
    report.warnings.push_back("fewer than two markers retained after stage 1; result is empty");
    return report;
  }

  // Stage 2: pairs (i, j), i < j over retained, in lexicographic order.
  const std::size_t r = retained.size();
  const std::size_t n_pairs = r * (r - 1) / 2;
  std::vector<std::size_t> row_start(r);
  for (std::size_t i = 0, start = 0; i < r; ++i) {
    row_start[i] = start;
    start += r - 1 - i;
  }
  constexpr std::size_t kChunk = 4096;
  std::vector<std::vector<AssociationResult>> chunk_rows((n_pairs + kChunk - 1) / kChunk);
  std::vector<std::size_t> chunk_untestable(chunk_rows.size(), 0);
  Progress progress(config.progress, "pairs", n_pairs);

  parallel_chunks(n_pairs, kChunk, config.threads,
                  [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& out = chunk_rows[chunk];
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(row_start.begin(), row_start.end(), begin) - row_start.begin() - 1);
    std::size_t j = i + 1 + (begin - row_start[i]);
    for (std::size_t t = begin; t < end; ++t) {
      const std::size_t m1 = retained[i];
      const std::size_t m2 = retained[j];
      ContingencyTable table;
      bool ok = true;
      try {
        table = tabulate_pair_packed(data, m1, m2);
      } catch (const DegenerateError&) {
        ok = false;
      }
      if (!ok || table.k() < 2) {
        ++chunk_untestable[chunk];
      } else {
        const auto w = w_test(table, hf_pair);
        if (keep_output(config, w.p_value)) {
          AssociationResult row;
          row.marker1 = m1;
          row.marker2 = m2;
          row.name1 = data.marker_names()[m1];
          row.name2 = data.marker_names()[m2];
          row.w = w.w;
          row.k = w.k;
          row.p_value = w.p_value;
          row.marker1_main_p = main_p[m1];
          row.marker2_main_p = main_p[m2];
          out.push_back(std::move(row));
        }
      }
      if (++j == r) {
        ++i;
        j = i + 1;
      }
    }
    progress.advance(end - begin);
  });

  for (std::size_t c = 0; c < chunk_rows.size(); ++c) {
    report.untestable += chunk_untestable[c];
    for (auto& row : chunk_rows[c]) report.rows.push_back(std::move(row));
  }
  report.tests = n_pairs - report.untestable;
  if (report.untestable > 0) {
    report.warnings.push_back(std::to_string(report.untestable) +
                              " untestable pair(s) with k < 2 skipped");
  }
  sort_results(report.rows);
  return report;
}

namespace {

std::string sci3(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", p);
  return buf;
}

std::string general(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_results(const ScanReport& report, std::ostream& out) {
  if (report.order == 1) {
    out << "rank\tmarker1\tw\tk\tpval\n";
  } else {
    out << "rank\tmarker1\tmarker2\tw\tk\tpair_pval\tmarker1_pval\tmarker2_pval\n";
  }
  std::size_t rank = 0;
  for (const auto& r : report.rows) {
    out << ++rank << '\t' << r.name1 << '\t';
    if (report.order == 2) out << r.name2.value_or("") << '\t';
    out << general(r.w) << '\t' << r.k << '\t' << sci3(r.p_value);
    if (report.order == 2) {
      out << '\t' << sci3(r.marker1_main_p.value_or(1.0)) << '\t'
          << sci3(r.marker2_main_p.value_or(1.0));
    }
    out << '\n';
  }
}

void write_results(const ScanReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_results(report, out);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace wscan
