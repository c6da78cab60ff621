#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "logcartier/cli.hpp"

using namespace logcartier;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  bool has(const std::string& line) const { return ("\n" + out).find("\n" + line + "\n") != std::string::npos; }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(LOGCARTIER_SOURCE_DIR) + "/data/" + name; }
std::string input(const std::string& name) { return std::string(LOGCARTIER_SOURCE_DIR) + "/tests/cli/inputs/" + name; }

}  // namespace

TEST_CASE("verify-all on the line at p = 3 exits 0") {
  Run r = run({"--format", "structured", "verify-all", data("line_p3.chart")});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("logcartier-report/1\n", 0) == 0);
  CHECK(r.has("summary.failed=0"));
  CHECK(r.has("check.cohomology.quasi_iso.jordan.s[0]=pass"));
  CHECK(r.has("check.transform.jordan.canonical.roundtrip=pass"));
  CHECK(r.out.find("=fail") == std::string::npos);
}

TEST_CASE("verify-all passes on every shipped chart") {
  for (const char* f : {"line_p2.chart", "line_p5.chart", "cone_p2.chart", "cone_p3.chart"}) {
    Run r = run({"verify-all", data(f), "--format", "structured"});
    CHECK_MESSAGE(r.code == 0, f);
  }
}

TEST_CASE("chart-info lists both minimal elements of the (1,1) coset") {
  Run r = run({"--format", "structured", "chart-info", data("cone_p2.chart")});
  CHECK(r.code == 0);
  CHECK(r.has("chart.coset[1,1].minimal=[[1,-1],[1,1]]"));
  CHECK(r.has("chart.cosets=4"));
  CHECK(r.has("chart.minimal_total=6"));
}

TEST_CASE("azumaya at p = 2, r = 1 prints the triangular transition matrices") {
  Run r = run({"--format", "structured", "azumaya", data("line_p2.chart")});
  CHECK(r.code == 0);
  CHECK(r.has("azumaya.beta[0].theta=[e[0]; 0]"));
  CHECK(r.has("azumaya.beta[1].theta=[e[0]; e[-1]]"));
  CHECK(r.has("azumaya.beta[0].action=[(1) * D_[0]; (1) * D_[1]]"));
  CHECK(r.has("azumaya.beta[1].action=[0; (1) * D_[0]]"));
  CHECK(r.has("check.azumaya.action=pass"));
}

TEST_CASE("operator literals in either basis") {
  Run r = run({"azumaya", data("line_p3.chart"), "--op", "D^[3] - D^[1]", "--format", "structured"});
  CHECK(r.code == 0);
  CHECK(r.has("azumaya.op.eta=(1) * D_[3]"));
  CHECK(r.has("azumaya.op.central=yes"));
  Run e = run({"azumaya", data("line_p3.chart"), "--op", "D^[1]", "--basis", "eta", "--format", "structured"});
  CHECK(e.has("azumaya.op.central=no"));
}

TEST_CASE("p-curvature and residue of the log pole") {
  Run r = run({"--format", "structured", "p-curvature", data("line_p3.chart"), "--module", "logpole"});
  CHECK(r.code == 0);
  CHECK(r.has("p_curvature.logpole.psi1=[0]"));
  CHECK(r.has("p_curvature.logpole.residue1.pth_power_identity=yes"));
  CHECK(r.has("p_curvature.logpole.residue1.pth_power_zero=no"));
}

TEST_CASE("transform of the log pole warns about surjectivity") {
  Run r = run({"--format", "structured", "transform", data("line_p3.chart"), "--module", "logpole", "--window", "8"});
  CHECK(r.code == 0);
  CHECK(r.has("transform.logpole.canonical.comparison_surjective=no"));
  CHECK(r.has("transform.logpole.canonical.generator_degrees=[[2]]"));
  CHECK(r.out.find("skipped.transform.logpole.canonical.roundtrip=") != std::string::npos);
}

TEST_CASE("cartier-op on a closed form") {
  Run r = run({"cartier-op", data("line_p3.chart"), "--form", "x^[3] * dlog[1] + x^[1] * dlog[1]", "--format",
               "structured"});
  CHECK(r.code == 0);
  CHECK(r.has("cartier_op.C=(x^[3]) * dlog[1]"));
  CHECK(r.has("check.cartier_op.oracle_identity=pass"));
  Run s = run({"cartier-op", data("line_p3.chart"), "--splitting", "shifted", "--format", "structured"});
  CHECK(s.code == 0);
  CHECK(s.has("check.cartier_op.shifted.C_after_zeta_is_identity=pass"));
}

TEST_CASE("inverse transform and cohomology modes") {
  Run r = run({"inverse-transform", data("line_p5.chart"), "--module", "jordan3", "--format", "structured"});
  CHECK(r.code == 0);
  CHECK(r.has("inverse_transform.jordan3.canonical.level=2"));
  Run q = run({"cohomology", data("line_p3.chart"), "--mode", "quasi-iso", "--module", "jordan", "--n", "2",
               "--window", "6", "--format", "structured"});
  CHECK(q.code == 0);
  CHECK(q.has("cohomology.quasi_iso.jordan.s[0].u[0]=source=1,1 target=1,1 total=1,1,0 b=1,1 a=1,1 sections=2 ok"));
  Run c = run({"cohomology", data("cone_p2.chart"), "--degrees", "[[0,0],[1,1]]", "--window", "4", "--format",
               "structured"});
  CHECK(c.code == 0);
  CHECK(c.has("cohomology.offsets=[[0,0],[1,1]]"));
  CHECK(c.has("cohomology.cartier_iso.s[1,1].u[1,-1]=1,2,1"));
}

TEST_CASE("failed checks give exit code 1") {
  Run r = run({"p-curvature", input("nonintegrable.chart"), "--module", "curved"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL p_curvature.curved.integrable") != std::string::npos);
}

TEST_CASE("input and usage errors give exit code 2") {
  CHECK(run({"chart-info", data("line_p3.chart"), "--bogus"}).code == 2);
  CHECK(run({"chart-info"}).code == 2);
  CHECK(run({"frobnicate", data("line_p3.chart")}).code == 2);
  CHECK(run({"chart-info", input("does_not_exist.chart")}).code == 2);
  CHECK(run({"--format", "xml", "chart-info", data("line_p3.chart")}).code == 2);
  Run t = run({"chart-info", input("torsion.chart")});
  CHECK(t.code == 2);
  CHECK(t.err.find("torsion.chart:4: Q_generators:") != std::string::npos);
  Run s = run({"verify-all", input("syntax.chart")});
  CHECK(s.code == 2);
  CHECK(s.err.find("syntax.chart:8: A1:") != std::string::npos);
  CHECK(run({"transform", data("line_p2.chart"), "--module", "nosuch"}).code == 2);
  CHECK(run({"cartier-op", data("line_p3.chart"), "--form", "x^[1] * dlog[1] + "}).code == 2);
}

TEST_CASE("minimal chart and determinism") {
  Run a = run({"--format", "structured", "verify-all", input("minimal.chart")});
  Run b = run({"--format", "structured", "verify-all", input("minimal.chart")});
  CHECK(a.code == 0);
  CHECK(a.has("chart.r=1"));
  CHECK(a.out == b.out);
}

TEST_CASE("report goes to --output") {
  std::string path = "cli_report_test.txt";
  Run r = run({"--output", path, "--format", "structured", "chart-info", data("line_p3.chart")});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().rfind("logcartier-report/1\nchart.p=3\n", 0) == 0);
  std::remove(path.c_str());
}
