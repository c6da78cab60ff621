#include <functional>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "logcartier/error.hpp"
#include "logcartier/parse.hpp"

using namespace logcartier;
using namespace fixtures;

namespace {

const char* kCone = R"(# comment line
p = 2
ambient_rank = 2
P_generators = [[1, 1],
                [1, -1], [1, 0]]   # continued over two lines
log_coords = [(1, 0), (0, 1)]

[connection n]
rank = 2
A1 = [(1, 2, 1)]
A2 = [(1, 2, x^[2,0] + 1)]

[higgs h]
rank = 1
Theta2 = [(1, 1, 0)]

[splitting z]
zeta.b = [x^[1,1], 0]
)";

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("chart file structure") {
  ChartFile f = parse_chart_text(kCone, "cone.chart");
  CHECK(f.top.at("p").value == "2");
  CHECK(f.top.at("P_generators").line == 4);
  CHECK(f.top.at("log_coords").line == 6);
  REQUIRE(f.sections.size() == 3);
  CHECK(f.sections[0].kind == "connection");
  CHECK(f.sections[0].line == 8);
  CHECK(section_names(f, "higgs") == std::vector<std::string>{"h"});
  Chart c = chart_from(f);
  CHECK(c.r() == 2);
  CHECK(c.P().generators().size() == 3);
}

TEST_CASE("minimal chart parses with r = 1") {
  Chart c = chart_from(parse_chart_text("p = 3\nambient_rank = 1\nP_generators = [[1]]\nlog_coords = [1]\n"));
  CHECK(c.r() == 1);
  CHECK(c.p() == 3);
}

TEST_CASE("modules from a chart file") {
  ChartFile f = parse_chart_text(kCone, "cone.chart");
  Chart c = chart_from(f);
  ConnModule n = connection_from(c, f, "n");
  CHECK(n.rank == 2);
  CHECK(n.A[0](0, 1) == AlgElt::constant(2, 2, 1));
  CHECK(n.A[1](0, 1) == AlgElt::constant(2, 2, 1) + AlgElt::monomial(2, LatticePoint{2, 0}));
  CHECK(n.A[0](1, 0).is_zero());
  HiggsModule h = higgs_from(c, f, "h");
  CHECK(h.rank == 1);
  CHECK(h.theta[0].is_zero());
  Splitting z = splitting_from(c, f, "z");
  CHECK(z.b[0] == AlgElt::monomial(2, LatticePoint{1, 1}));
  CHECK_FALSE(z.canonical());
  CHECK_THROWS_AS(connection_from(c, f, "missing"), Error);
}

TEST_CASE("element literals") {
  Chart c = cone_chart(3);
  AlgElt a = parse_element(c, "2*x^[1,0] - x^[1,1] + 4");
  AlgElt b = AlgElt::monomial(3, LatticePoint{1, 0}, 2) + AlgElt::monomial(3, LatticePoint{1, 1}, 2) +
             AlgElt::constant(3, 2, 1);
  CHECK(a == b);
  CHECK(parse_element(c, "(x^[1,0] + 1) * (x^[1,0] - 1)") ==
        AlgElt::monomial(3, LatticePoint{2, 0}) - AlgElt::constant(3, 2, 1));
  CHECK(parse_element(c, "-3").is_zero());
  IndexedElt x = parse_indexed(c, "x^[1,1]*e[1,0] + 2*e[1,0]");
  CHECK(x.degree == LatticePoint{1, 0});
  CHECK(x.coeff == AlgElt::monomial(3, LatticePoint{1, 1}) + AlgElt::constant(3, 2, 2));
  CHECK_THROWS_AS(parse_element(c, "x^[1,0]*e[1,0]"), Error);
  CHECK_THROWS_AS(parse_indexed(c, "e[1,0] + e[0,1]"), Error);
  CHECK_THROWS_AS(parse_element(c, "x^[1]"), Error);
  CHECK_THROWS_AS(parse_element(c, "x^[1,0] +"), Error);
  CHECK_THROWS_AS(parse_element(c, "dlog[1]"), Error);
}

TEST_CASE("printed elements parse back") {
  std::mt19937 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Chart c = cone_chart(p);
    for (int t = 0; t < 30; ++t) {
      AlgElt a = random_elt(c, rng, 4, 5);
      CHECK(parse_element(c, a.str()) == a);
      if (a.is_zero()) continue;  // 0 prints without its degree
      IndexedElt x{random_point(2, rng, 3), a};
      CHECK(parse_indexed(c, x.str()) == x);
    }
  }
}

TEST_CASE("form and operator literals") {
  Chart c = cone_chart(3);
  LogForm w = parse_form(c, "x^[1,0] * dlog[1] + 2 * dlog[2] + x^[1,0]*dlog[1]");
  CHECK(w.j == 1);
  CHECK(w.coeff({0}, 3) == AlgElt::monomial(3, LatticePoint{1, 0}, 2));
  CHECK(w.coeff({1}, 3) == AlgElt::constant(3, 2, 2));
  CHECK(parse_form(c, w.str()).terms == w.terms);
  CHECK_THROWS_AS(parse_form(c, "dlog[3]"), Error);
  CHECK_THROWS_AS(parse_form(c, "dlog[1] * dlog[2]"), Error);

  PDOp op = parse_operator(c, "x^[1,1] * D^[1,0] + D^[0,2]", OpBasis::Zeta, 5);
  CHECK(op.terms.size() == 2);
  CHECK(op.terms.at({1, 0}) == AlgElt::monomial(3, LatticePoint{1, 1}));
  CHECK(parse_operator(c, op.str(), OpBasis::Zeta, 5) == op);
  PDOp eta = parse_operator(c, "D^[3,0]", OpBasis::Eta, 5);
  CHECK(eta.basis == OpBasis::Eta);
  CHECK_THROWS_AS(parse_operator(c, "D^[1]", OpBasis::Zeta, 5), Error);
  CHECK_THROWS_AS(parse_operator(c, "D^[1,0] * D^[0,1]", OpBasis::Zeta, 5), Error);
}

TEST_CASE("diagnostics name file, line and field") {
  CHECK(error_of([] { parse_chart_text("p = 3\nambient_rank = 1\nP_generators = [[1]\n", "a.chart"); }) ==
        "a.chart:3: unbalanced brackets");
  std::string torsion = error_of([] {
    chart_from(parse_chart_text("p = 3\nambient_rank = 1\nP_generators = [[1]]\nQ_generators = [[3]]\nlog_coords = [[1]]\n",
                                "t.chart"));
  });
  CHECK(torsion.rfind("t.chart:4: Q_generators:", 0) == 0);
  CHECK(error_of([] { chart_from(parse_chart_text("p = 3\nambient_rank = 1\nlog_coords = [[1]]\n", "m.chart")); })
            .find("P_generators: missing field") != std::string::npos);
  CHECK(error_of([] { chart_from(parse_chart_text("p = x\n", "b.chart")); }).rfind("b.chart:1: p:", 0) == 0);
  CHECK(error_of([] { parse_chart_text("p = 3\np = 5\n", "d.chart"); }) == "d.chart:2: p: duplicate key");
  CHECK(error_of([] { parse_chart_text("[module x]\n", "s.chart"); }).rfind("s.chart:1: unknown section kind", 0) == 0);
  std::string entry = error_of([] {
    ChartFile f = parse_chart_text(
        "p = 3\nambient_rank = 1\nP_generators = [[1]]\nlog_coords = [[1]]\n[connection c]\nrank = 1\nA1 = [(1, 2, 1)]\n",
        "e.chart");
    connection_from(chart_from(f), f, "c");
  });
  CHECK(entry.rfind("e.chart:7: A1:", 0) == 0);
  std::string support = error_of([] {
    ChartFile f = parse_chart_text(
        "p = 3\nambient_rank = 1\nP_generators = [[1]]\nlog_coords = [[1]]\n[higgs h]\nrank = 1\nTheta1 = [(1, 1, x^[1])]\n",
        "h.chart");
    higgs_from(chart_from(f), f, "h");
  });
  CHECK(support.rfind("h.chart:5: higgs h:", 0) == 0);
}

TEST_CASE("top-level splitting of lists") {
  CHECK(split_top_level("[1,2], (3, 4), x", ',') == std::vector<std::string>{"[1,2]", "(3, 4)", "x"});
  CHECK(split_top_level("", ',').empty());
  CHECK(parse_points("[[1,2],[3,4]]", 2) == std::vector<LatticePoint>{LatticePoint{1, 2}, LatticePoint{3, 4}});
  CHECK(parse_points("[]", 2).empty());
  CHECK_THROWS_AS(parse_points("[[1,2,3]]", 2), Error);
}
