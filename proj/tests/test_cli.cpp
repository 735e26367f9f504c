#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"
#include "wscan/genotype.hpp"
#include "wscan/hf_table.hpp"
#include "wscan/packed.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Run run(const std::string& args) {
  static const fs::path dir = support::scratch("io");
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(WSCAN_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

std::string d0() { return support::data_file("d0.csv").string(); }

}  // namespace

TEST_CASE("usage errors exit 64") {
  CHECK(run("").code == 64);
  CHECK(run("scan").code == 64);
  CHECK(run("scan " + d0() + " --order 3").code == 64);
  CHECK(run("bench " + d0() + " --methods fisher --out x.tsv").code == 64);
  CHECK(run("--help").code == 0);
}

TEST_CASE("input problems map to exit codes") {
  const auto dir = support::scratch("codes");
  CHECK(run("scan " + (dir / "absent.csv").string()).code == 1);
  std::ofstream(dir / "bad.csv") << "A,phenotype\n0,1\n9,0\n";
  const auto bad = run("scan " + (dir / "bad.csv").string());
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 3") != std::string::npos);
  std::ofstream(dir / "bad_hf.tsv") << "nonsense\n";
  CHECK(run("scan " + d0() + " --hf " + (dir / "bad_hf.tsv").string()).code == 2);
  std::ofstream(dir / "mono.csv") << "A,phenotype\n1,1\n1,0\n1,1\n1,0\n";
  CHECK(run("estimate-hf " + (dir / "mono.csv").string() + " --seed 1 --out " +
            (dir / "hf.tsv").string()).code == 3);
}

TEST_CASE("scan of the worked example") {
  const auto r = run("scan " + d0() + " --order 2 --quiet");
  CHECK(r.code == 0);
  CHECK(r.out ==
        "rank\tmarker1\tmarker2\tw\tk\tpair_pval\tmarker1_pval\tmarker2_pval\n"
        "1\tA\tB\t3.24461\t6\t6.62e-01\t7.08e-01\t4.16e-01\n");
  CHECK(r.err.find("default hf") != std::string::npos);
  const auto main = run("scan " + d0() + " --order 1 -q");
  CHECK(main.out == "rank\tmarker1\tw\tk\tpval\n1\tB\t1.75464\t3\t4.16e-01\n2\tA\t0.689685\t3\t7.08e-01\n");
}

TEST_CASE("convert round trip and packed input") {
  const auto dir = support::scratch("convert");
  const auto wpk = (dir / "d0.wpk").string();
  REQUIRE(run("convert " + d0() + " " + wpk).code == 0);
  CHECK(wscan::is_packed_file(wpk));
  REQUIRE(run("convert " + wpk + " " + (dir / "back.tsv").string() + " --delim tab").code == 0);
  CHECK(wscan::load_text(dir / "back.tsv", wscan::PhenotypeColumn{"phenotype"}) == support::d0());
  const auto a = run("scan " + wpk + " --order 2 -q");
  const auto b = run("scan " + d0() + " --order 2 -q");
  CHECK(a.out == b.out);
}

TEST_CASE("simulate, estimate and scan with an estimated table") {
  const auto dir = support::scratch("pipeline");
  const auto data = (dir / "sim.wpk").string();
  REQUIRE(run("simulate --subjects 300 --markers 30 --seed 4 --packed --out " + data).code == 0);
  const auto hf1 = (dir / "hf1.tsv").string();
  const auto hf1b = (dir / "hf1b.tsv").string();
  REQUIRE(run("estimate-hf " + data + " --order 1 --B 20 --n-sample 30 --seed 9 --threads 1 --out " + hf1).code == 0);
  REQUIRE(run("estimate-hf " + data + " --order 1 --B 20 --n-sample 30 --seed 9 --threads 3 --out " + hf1b).code == 0);
  CHECK(slurp(hf1) == slurp(hf1b));
  const auto tables = wscan::read_hf_tsv(hf1);
  REQUIRE(tables.size() == 1);
  CHECK(tables[0].provenance().seed == 9);

  const auto hf2 = (dir / "hf2.tsv").string();
  REQUIRE(run("estimate-hf " + data + " --order 2 --B 10 --n-sample 100 --seed 9 --out " + hf2).code == 0);
  const auto out = (dir / "res.tsv").string();
  const auto r = run("scan " + data + " --order 2 --hf " + hf1 + " --hf " + hf2 +
                     " --input-pval 0.5 --output-pval 0.5 -q --out " + out);
  CHECK(r.code == 0);
  CHECK(r.err.find("default hf") == std::string::npos);
  CHECK(slurp(out).rfind("rank\tmarker1\tmarker2", 0) == 0);
}

TEST_CASE("missing seed warns and defaults") {
  const auto dir = support::scratch("seed");
  const auto r = run("simulate --subjects 20 --markers 3 --out " + (dir / "s.csv").string());
  CHECK(r.code == 0);
  CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("diagnose writes plots and a summary") {
  const auto dir = support::scratch("diag");
  const auto data = (dir / "sim.csv").string();
  REQUIRE(run("simulate --subjects 300 --markers 40 --maf-min 0.2 --seed 2 --out " + data).code == 0);
  const auto out = dir / "plots";
  fs::create_directories(out);
  const auto r = run("diagnose " + data + " --order 1 --n-rep 20 --n-sample 40 --seed 3 --out-dir " + out.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "diag_density.svg"));
  CHECK(fs::exists(out / "diag_qq.svg"));
  CHECK(fs::exists(out / "diag_summary.tsv"));
  CHECK(r.err.find("KS=") != std::string::npos);
  const auto few = run("diagnose " + data + " --order 1 --n-rep 1 --n-sample 10 --seed 3 --out-dir " + out.string());
  CHECK(few.code == 3);
}

TEST_CASE("bench writes a timing table") {
  const auto dir = support::scratch("bench");
  const auto data = (dir / "sim.csv").string();
  REQUIRE(run("simulate --subjects 200 --markers 10 --seed 2 --out " + data).code == 0);
  const auto r = run("bench " + data + " --methods wtest,chisq,logistic --out " + (dir / "b.tsv").string());
  CHECK(r.code == 0);
  CHECK(r.err.find("hardware") != std::string::npos);
  const auto body = slurp(dir / "b.tsv");
  CHECK(std::count(body.begin(), body.end(), '\n') == 4);
}
