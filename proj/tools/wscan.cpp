// wscan: W-test association scans for case/control genotype data.

#include "wscan/baselines.hpp"
#include "wscan/diagnostics.hpp"
#include "wscan/errors.hpp"
#include "wscan/hf_estimate.hpp"
#include "wscan/packed.hpp"
#include "wscan/scan.hpp"
#include "wscan/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum ExitCode : int { kOk = 0, kIo = 1, kFormat = 2, kEstimation = 3, kUsage = 64 };

struct DataOptions {
  std::string path;
  std::string pheno_col = "phenotype";
  std::string pheno_file;
  std::string missing = "NA";

  void add_to(CLI::App& app) {
    app.add_option("data", path, "Genotype file (delimited text or WPK1)")->required();
    app.add_option("--pheno-col", pheno_col, "Phenotype column name in a text file");
    app.add_option("--pheno-file", pheno_file, "Separate phenotype file, one 0/1 per line");
    app.add_option("--missing", missing, "Token for a missing genotype in text files");
  }

  wscan::PhenotypeSource source() const {
    if (!pheno_file.empty()) return wscan::PhenotypeFile{pheno_file};
    return wscan::PhenotypeColumn{pheno_col};
  }

  wscan::GenotypeDataset load() const {
    if (wscan::is_packed_file(path)) return wscan::unpack(wscan::read_packed(path));
    return wscan::load_text(path, source(), missing);
  }
};

std::uint64_t seed_or_default(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::cerr << "warning: --seed not given; using seed 1 (pass --seed for reproducible scripts)\n";
  return 1;
}

// Collects h/f tables from every --hf file; absent orders fall back to defaults.
wscan::HfTable pick_hf(const std::vector<std::string>& files, int order) {
  for (const auto& f : files) {
    for (auto& t : wscan::read_hf_tsv(f)) {
      if (t.order() == order) return t;
    }
  }
  std::cerr << "notice: no order-" << order
            << " h/f table given; the W-test will be calculated using default hf values\n";
  return wscan::default_hf(order);
}

std::string cpu_model() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(colon + 2);
    }
  }
  return "unknown CPU";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"W-test main-effect and pairwise interaction scans for binary traits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wscan 1.0.0");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert between delimited text and WPK1");
  DataOptions convert_in;
  std::string convert_out;
  std::string convert_delim = "comma";
  convert_in.add_to(*convert);
  convert->add_option("out", convert_out, "Output path")->required();
  convert->add_option("--delim", convert_delim, "Text output delimiter")
      ->check(CLI::IsMember({"comma", "tab"}));

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Write a simulated null dataset");
  wscan::NullSimulation sim;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  bool sim_packed = false;
  simulate->add_option("--subjects", sim.n_subjects)->capture_default_str();
  simulate->add_option("--markers", sim.n_markers)->capture_default_str();
  simulate->add_option("--maf-min", sim.maf_min)->capture_default_str();
  simulate->add_option("--maf-max", sim.maf_max)->capture_default_str();
  simulate->add_option("--case-fraction", sim.case_fraction)->capture_default_str();
  simulate->add_option("--missing-rate", sim.missing_rate)->capture_default_str();
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--out", sim_out)->required();
  simulate->add_flag("--packed", sim_packed, "Write WPK1 instead of CSV");

  // estimate-hf
  auto* estimate = app.add_subcommand("estimate-hf", "Bootstrap estimate of the h/f table");
  DataOptions est_data;
  int est_order = 1;
  std::size_t est_B = 400;
  std::size_t est_n_sample = 1000;
  std::optional<std::uint64_t> est_seed;
  std::size_t est_threads = 0;
  std::string est_out;
  est_data.add_to(*estimate);
  estimate->add_option("--order", est_order)->check(CLI::IsMember({1, 2}))->capture_default_str();
  estimate->add_option("--B", est_B, "Bootstrap replicates")->check(CLI::PositiveNumber)->capture_default_str();
  estimate->add_option("--n-sample", est_n_sample, "Markers or pairs drawn per replicate")
      ->check(CLI::PositiveNumber)->capture_default_str();
  estimate->add_option("--seed", est_seed);
  estimate->add_option("--threads", est_threads, "Worker threads (0 = WSCAN_THREADS or all cores)");
  estimate->add_option("--out", est_out)->required();

  // scan
  auto* scan = app.add_subcommand("scan", "Main-effect or pairwise W-test scan");
  DataOptions scan_data;
  int scan_order = 1;
  std::vector<std::string> scan_hf;
  std::optional<double> input_pval;
  std::optional<std::size_t> input_poolsize;
  std::optional<double> output_pval;
  std::size_t scan_threads = 0;
  std::string scan_out;
  bool quiet = false;
  scan_data.add_to(*scan);
  scan->add_option("--order", scan_order)->check(CLI::IsMember({1, 2}))->capture_default_str();
  scan->add_option("--hf", scan_hf, "h/f TSV file(s); defaults are used for missing orders");
  scan->add_option("--input-pval", input_pval, "Stage 1: keep markers with main p <= value")
      ->check(CLI::Range(0.0, 1.0));
  scan->add_option("--input-poolsize", input_poolsize, "Stage 1: keep the n best markers");
  scan->add_option("--output-pval", output_pval, "Report rows with p < value")
      ->check(CLI::Range(0.0, 1.0));
  scan->add_option("--threads", scan_threads, "Worker threads (0 = WSCAN_THREADS or all cores)");
  scan->add_option("--out", scan_out, "Results TSV (stdout when absent)");
  scan->add_flag("--quiet,-q", quiet, "No progress output");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Null W density and QQ diagnostics");
  DataOptions diag_data;
  std::vector<std::string> diag_hf;
  int diag_order = 1;
  std::size_t diag_n_rep = 100;
  std::size_t diag_n_sample = 1000;
  std::optional<std::uint64_t> diag_seed;
  std::size_t diag_threads = 0;
  std::string diag_out;
  diag_data.add_to(*diagnose);
  diagnose->add_option("--hf", diag_hf, "h/f TSV file(s)");
  diagnose->add_option("--order", diag_order)->check(CLI::IsMember({1, 2}))->capture_default_str();
  diagnose->add_option("--n-rep", diag_n_rep, "Permutation replicates")->capture_default_str();
  diagnose->add_option("--n-sample", diag_n_sample)->check(CLI::PositiveNumber)->capture_default_str();
  diagnose->add_option("--seed", diag_seed);
  diagnose->add_option("--threads", diag_threads);
  diagnose->add_option("--out-dir", diag_out)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Time W-test against chi-squared and logistic baselines");
  DataOptions bench_data;
  std::vector<std::string> bench_methods{"wtest", "chisq", "logistic"};
  std::vector<std::string> bench_hf;
  std::size_t bench_threads = 1;
  std::string bench_out;
  bench_data.add_to(*bench);
  bench->add_option("--methods", bench_methods, "Comma-separated: wtest, chisq, logistic")
      ->delimiter(',')
      ->check(CLI::IsMember({"wtest", "chisq", "logistic"}));
  bench->add_option("--hf", bench_hf, "h/f TSV file(s)");
  bench->add_option("--threads", bench_threads)->capture_default_str();
  bench->add_option("--out", bench_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*convert) {
      if (wscan::is_packed_file(convert_in.path)) {
        const auto dataset = wscan::unpack(wscan::read_packed(convert_in.path));
        wscan::write_text(dataset, convert_out, convert_delim == "tab" ? '\t' : ',',
                          convert_in.pheno_col, convert_in.missing);
      } else {
        wscan::write_packed(wscan::pack(convert_in.load()), convert_out);
      }
    } else if (*simulate) {
      const auto dataset = wscan::simulate_null(sim, seed_or_default(sim_seed));
      if (sim_packed) wscan::write_packed(wscan::pack(dataset), sim_out);
      else wscan::write_text(dataset, sim_out);
    } else if (*estimate) {
      const auto dataset = est_data.load();
      const auto table = wscan::estimate_hf(dataset, est_order, est_B, est_n_sample,
                                            seed_or_default(est_seed), est_threads);
      for (const auto& [k, e] : table.entries()) {
        if (!e.estimated) {
          std::cerr << "notice: k=" << k << " kept the default (pool of " << e.pool_size
                    << " null values)\n";
        }
      }
      wscan::write_hf_tsv(std::span(&table, 1), est_out);
    } else if (*scan) {
      const auto dataset = scan_data.load();
      const auto packed = wscan::pack(dataset);
      wscan::ScanConfig config;
      config.order = scan_order;
      config.input_pval = input_pval;
      config.input_poolsize = input_poolsize;
      config.output_pval = output_pval;
      config.threads = scan_threads;
      config.progress = quiet ? nullptr : &std::cerr;
      const auto hf_main = pick_hf(scan_hf, 1);
      const auto report = scan_order == 1
                              ? wscan::scan_main(packed, hf_main, config)
                              : wscan::scan_pairs(packed, hf_main, pick_hf(scan_hf, 2), config);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      if (scan_out.empty()) wscan::write_results(report, std::cout);
      else wscan::write_results(report, scan_out);
    } else if (*diagnose) {
      const auto dataset = diag_data.load();
      const auto hf = pick_hf(diag_hf, diag_order);
      const auto samples = wscan::null_w_samples(dataset, hf, diag_n_rep, diag_n_sample,
                                                 seed_or_default(diag_seed), diag_threads);
      const auto density = wscan::density_report(samples, diag_out);
      wscan::qq_report(samples, diag_out);
      std::ofstream summary(std::filesystem::path(diag_out) / "diag_summary.tsv", std::ios::binary);
      summary << "k\tn\th\tf\tks\ttotal_variation\tqq_slope\tqq_intercept\tnote\n";
      for (const auto& p : density.panels) {
        char line[256];
        std::snprintf(line, sizeof line, "%d\t%zu\t%.6g\t%.6g\t%.4f\t%.4f\t%.4f\t%.4f\t%s\n", p.k,
                      p.n, p.h, p.f, p.ks, p.total_variation, p.qq.slope, p.qq.intercept,
                      p.plotted ? "" : p.note.c_str());
        summary << line;
        if (p.plotted) {
          std::fprintf(stderr, "k=%d n=%zu KS=%.4f QQ slope=%.3f\n", p.k, p.n, p.ks, p.qq.slope);
        } else {
          std::fprintf(stderr, "k=%d panel omitted: %s\n", p.k, p.note.c_str());
        }
      }
      if (!summary) throw wscan::IoError("cannot write diag_summary.tsv");
    } else if (*bench) {
      const auto dataset = bench_data.load();
      std::vector<wscan::Method> methods;
      for (const auto& m : bench_methods) methods.push_back(wscan::parse_method(m));
      wscan::BenchmarkConfig config;
      config.threads = bench_threads;
      if (!bench_hf.empty()) {
        config.hf_main = pick_hf(bench_hf, 1);
        config.hf_pair = pick_hf(bench_hf, 2);
      }
      const auto report = wscan::run_benchmark(dataset, methods, config);
      wscan::write_benchmark(report, bench_out);
      std::cerr << "hardware: " << cpu_model() << ", " << bench_threads << " thread(s); dataset "
                << report.n_subjects << " subjects x " << report.n_markers << " markers\n";
      for (const auto& r : report.rows) {
        std::fprintf(stderr, "%-9s %8zu tests %10.4f s\n", wscan::method_name(r.method).c_str(),
                     r.n_tests, r.seconds);
      }
    }
  } catch (const wscan::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const wscan::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const wscan::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const wscan::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const wscan::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const wscan::EstimationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEstimation;
  } catch (const wscan::DegenerateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEstimation;
  } catch (const wscan::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
