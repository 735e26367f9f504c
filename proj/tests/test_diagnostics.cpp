#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "wscan/chisq.hpp"
#include "wscan/diagnostics.hpp"
#include "wscan/errors.hpp"
#include "wscan/simulate.hpp"

#include <fstream>
#include <random>

using namespace wscan;

namespace {

std::vector<double> chi2_sample(std::size_t n, double df, double scale, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::chi_squared_distribution<double> chi(df);
  std::vector<double> v(n);
  for (auto& x : v) x = scale * chi(gen);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("KS distance") {
  const auto v = chi2_sample(5000, 2.0, 1.0, 1);
  CHECK(ks_distance_chisq(v, 2.0) < 0.03);
  CHECK(ks_distance_chisq(v, 5.0) > 0.3);
  // One point at the median: distance exactly 0.5.
  const std::vector<double> one{chisq_quantile(0.5, 3.0)};
  CHECK(ks_distance_chisq(one, 3.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(ks_distance_chisq(std::vector<double>{}, 1.0), ArgumentError);
}

TEST_CASE("QQ slope tracks the scale") {
  const auto v = chi2_sample(20000, 4.0, 1.0, 2);
  const auto fit = qq_fit(v, 4.0);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::fabs(fit.intercept) < 0.1);
  const auto doubled = chi2_sample(20000, 4.0, 2.0, 2);
  CHECK(qq_fit(doubled, 4.0).slope == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("Freedman-Diaconis histogram") {
  const auto v = chi2_sample(1000, 3.0, 1.0, 3);
  const auto h = freedman_diaconis(v);
  REQUIRE(h.edges.size() == h.counts.size() + 1);
  std::size_t total = 0;
  double mass = 0;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    total += h.counts[i];
    mass += h.density[i] * (h.edges[i + 1] - h.edges[i]);
  }
  CHECK(total == 1000);
  CHECK(mass == doctest::Approx(1.0));
  CHECK(h.edges.front() == 0.0);
  CHECK(h.edges.back() == doctest::Approx(*std::max_element(v.begin(), v.end())));
}

TEST_CASE("reports write per-k and combined files and omit sparse panels") {
  NullWSamples samples{default_hf(1), {}};
  samples.by_k[3] = chi2_sample(2000, 2.0, 1.0, 4);
  samples.by_k[2] = chi2_sample(20, 1.0, 1.0, 5);
  const auto dir = support::scratch("reports");

  const auto dens = density_report(samples, dir);
  REQUIRE(dens.panels.size() == 2);
  CHECK_FALSE(dens.panels[0].plotted);
  CHECK(dens.panels[0].note.find("20") != std::string::npos);
  CHECK(dens.panels[1].plotted);
  CHECK(dens.panels[1].ks < 0.05);
  CHECK(std::filesystem::exists(dir / "diag_density_k3.tsv"));
  CHECK(std::filesystem::exists(dir / "diag_density_k3.svg"));
  CHECK_FALSE(std::filesystem::exists(dir / "diag_density_k2.svg"));
  const auto combined = slurp(dir / "diag_density.svg");
  CHECK(combined.find("<svg") != std::string::npos);
  CHECK(combined.find("</svg>") != std::string::npos);
  CHECK(combined.find("panel omitted") != std::string::npos);

  const auto qq = qq_report(samples, dir);
  CHECK(std::filesystem::exists(dir / "diag_qq_k3.tsv"));
  CHECK(std::filesystem::exists(dir / "diag_qq.svg"));
  CHECK(qq.panels[1].qq.slope == doctest::Approx(1.0).epsilon(0.05));
  for (const auto& f : qq.files) CHECK(std::filesystem::file_size(f) > 0);
}

TEST_CASE("a wrong f is visible in every metric") {
  NullWSamples good{default_hf(1), {}};
  good.by_k[3] = chi2_sample(3000, 2.0, 1.0, 6);
  NullWSamples bad{default_hf(1).perturbed(1.0, 3.0), good.by_k};
  const auto dir = support::scratch("wrongf");
  const auto g = density_report(good, dir).panels[1];
  const auto b = density_report(bad, dir).panels[1];
  CHECK(b.f == 5.0);
  CHECK(b.ks > 0.1);
  CHECK(b.total_variation > g.total_variation + 0.1);
}

TEST_CASE("too few samples is an estimation error naming the shortfall") {
  NullWSamples samples{default_hf(2), {}};
  samples.by_k[4] = chi2_sample(50, 3.0, 1.0, 7);
  const auto dir = support::scratch("few");
  try {
    density_report(samples, dir);
    FAIL("expected EstimationError");
  } catch (const EstimationError& e) {
    CHECK(std::string(e.what()).find("k=4 has 50") != std::string::npos);
  }
  NullWSamples empty{default_hf(1), {}};
  CHECK_THROWS_AS(qq_report(empty, dir), EstimationError);
}

TEST_CASE("null W samples are deterministic and scaled by h") {
  NullSimulation spec;
  spec.n_subjects = 300;
  spec.n_markers = 30;
  const auto ds = simulate_null(spec, 9);
  const auto a = null_w_samples(ds, default_hf(1), 20, 30, 4, 1);
  const auto b = null_w_samples(ds, default_hf(1), 20, 30, 4, 3);
  CHECK(a.by_k == b.by_k);
  const auto doubled = null_w_samples(ds, default_hf(1).perturbed(2.0, 0.0), 20, 30, 4, 1);
  for (const auto& [k, v] : a.by_k) {
    REQUIRE(doubled.by_k.at(k).size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(doubled.by_k.at(k)[i] == doctest::Approx(2 * v[i]));
  }
  CHECK(null_w_samples(ds, default_hf(1), 0, 30, 4).total() == 0);
}
