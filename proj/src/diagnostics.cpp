#include "wscan/diagnostics.hpp"

#include "wscan/chisq.hpp"
#include "wscan/errors.hpp"
#include "wscan/null_sampling.hpp"
#include "wscan/parallel.hpp"
#include "wscan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

namespace wscan {

std::size_t NullWSamples::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [k, v] : by_k) n += v.size();
  return n;
}

NullWSamples null_w_samples(const GenotypeDataset& dataset, const HfTable& hf, std::size_t n_rep,
                            std::size_t n_sample, std::uint64_t seed, std::size_t threads) {
  NullWSamples out{hf, {}};
  if (n_rep == 0) return out;
  const NullSampler sampler(dataset, hf.order());
  std::vector<std::vector<NullDraw>> per_rep(n_rep);
  parallel_chunks(n_rep, 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) sampler.replicate(seed, b, n_sample, per_rep[b]);
  });
  for (const auto& draws : per_rep) {
    for (const auto& d : draws) out.by_k[d.k].push_back(hf.at(d.k).h * d.s);
  }
  return out;
}

double ks_distance_chisq(std::span<const double> values, double df) {
  if (values.empty()) throw ArgumentError("KS distance of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = chisq_cdf(std::max(0.0, sorted[i]), df);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

Histogram freedman_diaconis(std::span<const double> values) {
  if (values.size() < 2) throw ArgumentError("histogram needs at least two values");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  const double top = std::max(s.back(), 1e-12);
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  std::size_t bins;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(n);
    bins = static_cast<std::size_t>(std::ceil(top / width));
  } else {
    bins = static_cast<std::size_t>(std::ceil(std::log2(n) + 1.0));
  }
  bins = std::clamp<std::size_t>(bins, 5, 200);

  Histogram h;
  const double width = top / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = width * static_cast<double>(i);
  h.counts.assign(bins, 0);
  for (const double v : s) {
    auto b = static_cast<std::size_t>(std::max(0.0, v) / width);
    h.counts[std::min(b, bins - 1)] += 1;
  }
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.density[i] = static_cast<double>(h.counts[i]) / (n * width);
  return h;
}

QqFit qq_fit(std::span<const double> values, double df) {
  if (values.size() < 2) throw ArgumentError("QQ fit needs at least two values");
  std::vector<double> obs(values.begin(), values.end());
  std::sort(obs.begin(), obs.end());
  const double n = static_cast<double>(obs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double x = chisq_quantile((static_cast<double>(i) + 0.5) / n, df);
    sx += x;
    sy += obs[i];
    sxx += x * x;
    sxy += x * obs[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

namespace {

constexpr double kPanelW = 360;
constexpr double kPanelH = 270;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<PanelSummary> summarize(const NullWSamples& samples) {
  std::vector<PanelSummary> panels;
  for (int k = 2; k <= HfTable::max_k(samples.order()); ++k) {
    PanelSummary p;
    p.k = k;
    const auto& e = samples.hf.at(k);
    p.h = e.h;
    p.f = e.f;
    const auto it = samples.by_k.find(k);
    p.n = it == samples.by_k.end() ? 0 : it->second.size();
    if (p.n < kMinPanelSamples) {
      p.note = p.n == 0 ? "no samples" : "only " + std::to_string(p.n) + " samples (need " +
                                             std::to_string(kMinPanelSamples) + ")";
      panels.push_back(p);
      continue;
    }
    p.plotted = true;
    const auto& values = it->second;
    p.ks = ks_distance_chisq(values, p.f);
    p.qq = qq_fit(values, p.f);
    const auto hist = freedman_diaconis(values);
    double tv = 0.0;
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
      const double expected = chisq_cdf(hist.edges[b + 1], p.f) - chisq_cdf(hist.edges[b], p.f);
      tv += std::fabs(static_cast<double>(hist.counts[b]) / static_cast<double>(p.n) - expected);
    }
    tv += chisq_sf(hist.edges.back(), p.f);  // expected mass beyond the last bin
    p.total_variation = 0.5 * tv;
    panels.push_back(p);
  }
  const bool any = std::any_of(panels.begin(), panels.end(), [](const auto& p) { return p.plotted; });
  if (!any) {
    std::string msg = "insufficient null samples for diagnostics:";
    for (const auto& p : panels) msg += " k=" + std::to_string(p.k) + " has " + std::to_string(p.n) + ";";
    msg += " need " + std::to_string(kMinPanelSamples) + " for at least one k";
    throw EstimationError(msg);
  }
  return panels;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                DiagnosticReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
  report.files.push_back(path);
}

void omitted_panel(svg::Document& doc, const PanelSummary& p) {
  doc.rect(55, 30, kPanelW - 75, kPanelH - 80, {"#f4f4f4", "#bbbbbb", 1.0, "4,3"});
  doc.text(kPanelW / 2, 20, "k = " + std::to_string(p.k), 12, "middle");
  doc.text(kPanelW / 2, kPanelH / 2, "panel omitted: " + p.note, 11, "middle", "#666666");
}

using PanelDrawer = std::function<void(svg::Document&, const PanelSummary&, const std::vector<double>&)>;

std::string panel_grid(const NullWSamples& samples, const std::vector<PanelSummary>& panels,
                       const std::string& title, const PanelDrawer& draw) {
  const std::size_t cols = std::min<std::size_t>(3, panels.size());
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  svg::Document doc(kPanelW * static_cast<double>(cols), kPanelH * static_cast<double>(rows) + 30);
  doc.text(kPanelW * static_cast<double>(cols) / 2, 20, title, 14, "middle");
  for (std::size_t i = 0; i < panels.size(); ++i) {
    doc.begin_group(kPanelW * static_cast<double>(i % cols), 30 + kPanelH * static_cast<double>(i / cols));
    if (panels[i].plotted) draw(doc, panels[i], samples.by_k.at(panels[i].k));
    else omitted_panel(doc, panels[i]);
    doc.end_group();
  }
  return doc.str();
}

std::string single_panel(const PanelSummary& p, const std::vector<double>& values,
                         const PanelDrawer& draw) {
  svg::Document doc(kPanelW, kPanelH);
  draw(doc, p, values);
  return doc.str();
}

void draw_density(svg::Document& doc, const PanelSummary& p, const std::vector<double>& values) {
  const auto hist = freedman_diaconis(values);
  const double xmax = std::max(hist.edges.back(), chisq_quantile(0.999, p.f));
  const double hist_peak = *std::max_element(hist.density.begin(), hist.density.end());
  std::vector<std::pair<double, double>> curve;
  double curve_peak = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double x = xmax * i / 200.0;
    const double y = chisq_pdf(x, p.f);
    curve_peak = std::max(curve_peak, y);
    curve.emplace_back(x, y);
  }
  const double ymax = 1.1 * std::min(std::max(hist_peak, curve_peak), 1.5 * std::max(hist_peak, 1e-12));
  const svg::Axes ax(55, 30, kPanelW - 75, kPanelH - 80, 0.0, xmax, 0.0, ymax);

  const svg::Style bar{"#9ecae1", "#4a7fa8", 0.5};
  for (std::size_t b = 0; b < hist.density.size(); ++b) {
    const double top = std::min(hist.density[b], ymax);
    doc.rect(ax.px(hist.edges[b]), ax.py(top), ax.px(hist.edges[b + 1]) - ax.px(hist.edges[b]),
             ax.py(0.0) - ax.py(top), bar);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [x, y] : curve) pts.emplace_back(ax.px(x), ax.py(std::min(y, ymax)));
  doc.polyline(pts, {"none", "#d62728", 2.0});
  ax.draw(doc, "W", "density");
  doc.text(kPanelW / 2, 18, fmt("k = %.0f   h = %.3f   f = %.3f", p.k, p.h, p.f), 12, "middle");
  doc.text(ax.left() + ax.width() - 4, ax.top() + 14, "observed (histogram)", 9, "end", "#4a7fa8");
  doc.text(ax.left() + ax.width() - 4, ax.top() + 26, "expected chi-sq(f) density", 9, "end", "#d62728");
  doc.text(ax.left() + ax.width() - 4, ax.top() + 38, fmt("n = %.0f  KS = %.3f", double(p.n), p.ks), 9, "end");
}

void draw_qq(svg::Document& doc, const PanelSummary& p, const std::vector<double>& values) {
  std::vector<double> obs(values);
  std::sort(obs.begin(), obs.end());
  const double n = static_cast<double>(obs.size());
  std::vector<double> expected(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    expected[i] = chisq_quantile((static_cast<double>(i) + 0.5) / n, p.f);
  }
  const double top = std::max(obs.back(), expected.back()) * 1.05;
  const svg::Axes ax(55, 30, kPanelW - 75, kPanelH - 80, 0.0, top, 0.0, top);
  doc.line(ax.px(0), ax.py(0), ax.px(top), ax.py(top), {"none", "#888888", 1.0, "5,4"});
  const svg::Style dot{"#1f77b4", "none", 0.0, "", 0.7};
  for (std::size_t i = 0; i < obs.size(); ++i) doc.circle(ax.px(expected[i]), ax.py(obs[i]), 1.6, dot);
  ax.draw(doc, "expected chi-sq(f) quantile", "observed W");
  doc.text(kPanelW / 2, 18, fmt("k = %.0f   h = %.3f   f = %.3f", p.k, p.h, p.f), 12, "middle");
  doc.text(ax.left() + 6, ax.top() + 14, fmt("slope = %.3f  intercept = %.3f", p.qq.slope, p.qq.intercept), 9);
}

}  // namespace

DiagnosticReport density_report(const NullWSamples& samples, const std::filesystem::path& out_dir) {
  DiagnosticReport report;
  report.panels = summarize(samples);
  std::filesystem::create_directories(out_dir);
  for (const auto& p : report.panels) {
    if (!p.plotted) continue;
    const auto& values = samples.by_k.at(p.k);
    const auto hist = freedman_diaconis(values);
    std::string tsv = "series\tx0\tx1\tvalue\n";
    char buf[128];
    for (std::size_t b = 0; b < hist.density.size(); ++b) {
      std::snprintf(buf, sizeof buf, "histogram\t%.10g\t%.10g\t%.10g\n", hist.edges[b], hist.edges[b + 1],
                    hist.density[b]);
      tsv += buf;
    }
    const double xmax = std::max(hist.edges.back(), chisq_quantile(0.999, p.f));
    for (int i = 1; i <= 200; ++i) {
      const double x = xmax * i / 200.0;
      std::snprintf(buf, sizeof buf, "expected\t%.10g\t%.10g\t%.10g\n", x, x, chisq_pdf(x, p.f));
      tsv += buf;
    }
    const std::string stem = "diag_density_k" + std::to_string(p.k);
    write_file(out_dir / (stem + ".tsv"), tsv, report);
    write_file(out_dir / (stem + ".svg"), single_panel(p, values, draw_density), report);
  }
  write_file(out_dir / "diag_density.svg",
             panel_grid(samples, report.panels, "Null W: observed histogram vs expected chi-squared density",
                        draw_density),
             report);
  return report;
}

DiagnosticReport qq_report(const NullWSamples& samples, const std::filesystem::path& out_dir) {
  DiagnosticReport report;
  report.panels = summarize(samples);
  std::filesystem::create_directories(out_dir);
  for (const auto& p : report.panels) {
    if (!p.plotted) continue;
    std::vector<double> obs = samples.by_k.at(p.k);
    std::sort(obs.begin(), obs.end());
    const double n = static_cast<double>(obs.size());
    std::string tsv = "i\tplotting_position\texpected\tobserved\n";
    char buf[128];
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const double pp = (static_cast<double>(i) + 0.5) / n;
      std::snprintf(buf, sizeof buf, "%zu\t%.10g\t%.10g\t%.10g\n", i + 1, pp, chisq_quantile(pp, p.f), obs[i]);
      tsv += buf;
    }
    const std::string stem = "diag_qq_k" + std::to_string(p.k);
    write_file(out_dir / (stem + ".tsv"), tsv, report);
    write_file(out_dir / (stem + ".svg"), single_panel(p, samples.by_k.at(p.k), draw_qq), report);
  }
  write_file(out_dir / "diag_qq.svg",
             panel_grid(samples, report.panels, "Null W: QQ against chi-squared(f)", draw_qq), report);
  return report;
}

}  // namespace wscan
