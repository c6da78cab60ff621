#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "logcartier/cli.hpp"
#include "logcartier/cohomology.hpp"
#include "logcartier/error.hpp"
#include "logcartier/parse.hpp"
#include "logcartier/transform.hpp"

namespace py = pybind11;
using namespace logcartier;

namespace {

using Point = std::vector<std::int64_t>;

LatticePoint to_point(const Point& v) { return LatticePoint(v); }

Point from_point(const LatticePoint& u) {
  Point v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i];
  return v;
}

std::vector<LatticePoint> to_points(const std::vector<Point>& vs) {
  std::vector<LatticePoint> out;
  for (const auto& v : vs) out.push_back(to_point(v));
  return out;
}

std::vector<Point> from_points(const std::vector<LatticePoint>& us) {
  std::vector<Point> out;
  for (const auto& u : us) out.push_back(from_point(u));
  return out;
}

std::vector<std::string> matrices_str(const std::vector<PolyMatrix>& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) out.push_back(m.str());
  return out;
}

Chart make_chart(std::uint32_t p, std::size_t ambient_rank, const std::vector<Point>& P,
                 const std::vector<Point>& Q, const std::vector<Point>& log_coords) {
  ChartSpec s;
  s.p = p;
  s.ambient_rank = ambient_rank;
  s.P_generators = to_points(P);
  s.Q_generators = to_points(Q);
  s.log_coords = to_points(log_coords);
  return Chart(s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact log differential calculus over toric charts in characteristic p";

  py::register_exception<Error>(m, "LogCartierError", PyExc_ValueError);

  py::class_<Chart>(m, "Chart")
      .def(py::init(&make_chart), py::arg("p"), py::arg("ambient_rank"), py::arg("P_generators"),
           py::arg("Q_generators") = std::vector<Point>{}, py::arg("log_coords"))
      .def_property_readonly("p", &Chart::p)
      .def_property_readonly("r", &Chart::r)
      .def_property_readonly("ambient_rank", &Chart::ambient_rank)
      .def_property_readonly("coset_reps", [](const Chart& c) { return from_points(c.coset_reps()); })
      .def("coords_modp", [](const Chart& c, const Point& u) { return c.coords_modp(to_point(u)); })
      .def("in_P", [](const Chart& c, const Point& u) { return c.in_P(to_point(u)); })
      .def("in_Hgp", [](const Chart& c, const Point& u) { return c.in_Hgp(to_point(u)); })
      .def("window", [](const Chart& c, std::int64_t bound) { return from_points(c.window(bound)); });

  py::class_<ConnModule>(m, "Connection")
      .def_readonly("rank", &ConnModule::rank)
      .def_property_readonly("matrices", [](const ConnModule& c) { return matrices_str(c.A); })
      .def_property_readonly("graded", &ConnModule::graded);

  py::class_<HiggsModule>(m, "Higgs")
      .def_readonly("rank", &HiggsModule::rank)
      .def_property_readonly("matrices", [](const HiggsModule& h) { return matrices_str(h.theta); });

  m.def("load_chart", [](const std::string& path) { return chart_from(read_chart_file(path)); }, py::arg("path"));
  m.def(
      "load_connection",
      [](const Chart& c, const std::string& path, const std::string& name) {
        return connection_from(c, read_chart_file(path), name);
      },
      py::arg("chart"), py::arg("path"), py::arg("name"));
  m.def(
      "load_higgs",
      [](const Chart& c, const std::string& path, const std::string& name) {
        return higgs_from(c, read_chart_file(path), name);
      },
      py::arg("chart"), py::arg("path"), py::arg("name"));
  m.def(
      "constant_connection",
      [](const Chart& c, const std::vector<std::vector<std::vector<std::int64_t>>>& mats) {
        std::vector<FpMatrix> lam;
        for (const auto& rows : mats) {
          FpMatrix a(c.p(), rows.size(), rows.size());
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw Error(ErrorKind::Dimension, "matrices must be square");
            for (std::size_t j = 0; j < rows.size(); ++j) a(i, j) = c.field().reduce(rows[i][j]);
          }
          lam.push_back(a);
        }
        return constant_connection(c, lam);
      },
      py::arg("chart"), py::arg("matrices"));

  m.def(
      "minimal_elements",
      [](const Chart& c) {
        std::vector<std::pair<Point, std::vector<Point>>> out;
        for (const auto& cr : frobenius_data(c).cosets) out.emplace_back(from_point(cr.rep), from_points(cr.minimal_elements));
        return out;
      },
      py::arg("chart"), "Coset representatives with the minimal elements of each coset");

  m.def(
      "element_str",
      [](const Chart& c, const std::string& literal) { return parse_indexed(c, literal).str(); },
      py::arg("chart"), py::arg("literal"));
  m.def(
      "in_B", [](const Chart& c, const std::string& literal) { return b_membership(c, parse_indexed(c, literal)); },
      py::arg("chart"), py::arg("literal"));

  m.def(
      "is_integrable", [](const Chart& c, const ConnModule& conn) { return check_integrable(c, conn); },
      py::arg("chart"), py::arg("connection"));
  m.def(
      "p_curvature", [](const Chart& c, const ConnModule& conn) { return matrices_str(p_curvature(c, conn).psi); },
      py::arg("chart"), py::arg("connection"));
  m.def(
      "nilpotence_level",
      [](const Chart& c, const ConnModule& conn) { return nilpotence_level(p_curvature(c, conn).psi); },
      py::arg("chart"), py::arg("connection"));

  m.def(
      "cartier_transform",
      [](const Chart& c, const ConnModule& conn, std::int64_t window) {
        TransformResult tr = cartier_transform(c, canonical_splitting(c), conn, c.window(window));
        py::dict d;
        d["level"] = tr.report.level;
        d["free"] = tr.report.free;
        d["comparison_surjective"] = tr.report.comparison_surjective;
        d["warnings"] = tr.report.warnings;
        d["generator_degrees"] = from_points(tr.generator_degrees);
        d["higgs"] = tr.higgs ? py::cast(*tr.higgs) : py::none();
        return d;
      },
      py::arg("chart"), py::arg("connection"), py::arg("window"), "Transform with the canonical splitting");
  m.def(
      "inverse_cartier_transform",
      [](const Chart& c, const HiggsModule& h) { return inverse_cartier_transform(c, canonical_splitting(c), h); },
      py::arg("chart"), py::arg("higgs"));

  m.def(
      "cartier_iso_check",
      [](const Chart& c, std::int64_t window) {
        auto rep = cartier_iso_check(c, c.coset_reps(), c.window(window));
        return std::make_pair(rep.slices, rep.mismatches.size());
      },
      py::arg("chart"), py::arg("window"), "Returns (slices, mismatches) over all coset offsets");
  m.def(
      "quasi_iso_check",
      [](const Chart& c, const ConnModule& conn, int n, std::int64_t window) {
        auto rep = quasi_iso_check(c, conn, n, c.window(window));
        py::dict d;
        d["ok"] = rep.ok();
        d["level"] = rep.level;
        d["truncation"] = rep.truncation;
        d["degrees"] = rep.degrees.size();
        d["counterexample"] = rep.counterexample ? py::cast(*rep.counterexample) : py::none();
        return d;
      },
      py::arg("chart"), py::arg("connection"), py::arg("n"), py::arg("window"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool; returns (exit code, stdout, stderr)");
}
