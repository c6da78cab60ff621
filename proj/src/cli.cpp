#include "logcartier/cli.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "logcartier/cohomology.hpp"
#include "logcartier/error.hpp"
#include "logcartier/parse.hpp"
#include "logcartier/transform.hpp"

namespace logcartier {

void Report::set(const std::string& key, const std::string& value) { fields_.emplace_back(key, value); }

void Report::check(const std::string& name, bool passed) { checks_.emplace_back(name, passed); }

void Report::skip(const std::string& name, const std::string& reason) { set("skipped." + name, reason); }

std::size_t Report::failed() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.second ? 0 : 1;
  return n;
}

void Report::write(std::ostream& os, ReportFormat format) const {
  if (format == ReportFormat::Structured) {
    os << kReportSchema << '\n';
    for (const auto& [k, v] : fields_) os << k << '=' << v << '\n';
    for (const auto& [k, ok] : checks_) os << "check." << k << '=' << (ok ? "pass" : "fail") << '\n';
    os << "summary.checks=" << checks_.size() << '\n';
    os << "summary.failed=" << failed() << '\n';
    return;
  }
  for (const auto& [k, v] : fields_) os << k << ": " << v << '\n';
  if (!checks_.empty()) os << '\n';
  for (const auto& [k, ok] : checks_) os << (ok ? "PASS " : "FAIL ") << k << '\n';
  os << checks_.size() << " checks, " << failed() << " failed\n";
}

namespace {

struct Options {
  std::string chart_path;
  std::string format = "human";
  std::string output;
  std::string op;
  std::string basis = "zeta";
  std::string element;
  std::string form;
  std::string module;
  std::string higgs;
  std::string splitting;
  std::string mode = "cartier-iso";
  std::string degrees;
  int n = -1;
  int window = -1;
};

struct Context {
  ChartFile file;
  Chart chart;
  Options opt;
};

template <class T>
std::string join(const std::vector<T>& xs, const std::string& sep, std::function<std::string(const T&)> f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + f(xs[i]);
  return out;
}

std::string points_str(const std::vector<LatticePoint>& pts) {
  return "[" + join<LatticePoint>(pts, ",", [](const LatticePoint& u) { return u.str(); }) + "]";
}

std::string fp_list(const std::vector<Fp>& v) {
  return join<Fp>(v, ",", [](const Fp& x) { return std::to_string(x); });
}

std::string size_list(const std::vector<std::size_t>& v) {
  return join<std::size_t>(v, ",", [](const std::size_t& x) { return std::to_string(x); });
}

std::string index_str(const std::vector<int>& I) {
  return "[" + join<int>(I, ",", [](const int& x) { return std::to_string(x); }) + "]";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int window_bound(const Context& ctx) { return ctx.opt.window >= 0 ? ctx.opt.window : 2 * static_cast<int>(ctx.chart.p()); }

Splitting chosen_splitting(const Context& ctx, const std::string& name) {
  if (name.empty() || name == "canonical") return canonical_splitting(ctx.chart);
  return splitting_from(ctx.chart, ctx.file, name);
}

bool forms_equal(const LogForm& a, const LogForm& b, std::uint32_t p) {
  if (a.degree != b.degree) return false;
  std::set<std::vector<int>> keys;
  for (const auto& [K, f] : a.terms) keys.insert(K);
  for (const auto& [K, f] : b.terms) keys.insert(K);
  for (const auto& K : keys)
    if (!(a.coeff(K, p) == b.coeff(K, p))) return false;
  return true;
}

// ---------------------------------------------------------------- chart-info

void chart_info(const Context& ctx, Report& rep) {
  const Chart& c = ctx.chart;
  const auto& spec = c.spec();
  rep.set("chart.p", std::to_string(c.p()));
  rep.set("chart.ambient_rank", std::to_string(c.ambient_rank()));
  rep.set("chart.r", std::to_string(c.r()));
  rep.set("chart.P_generators", points_str(spec.P_generators));
  rep.set("chart.Q_generators", points_str(spec.Q_generators));
  rep.set("chart.log_coords", points_str(spec.log_coords));
  FrobeniusData fd = frobenius_data(c);
  rep.set("chart.Hgp_basis", points_str(fd.Hgp.basis()));
  rep.set("chart.cosets", std::to_string(fd.cosets.size()));
  std::size_t total = 0;
  bool in_coset = true, minimal = true;
  for (const auto& cr : fd.cosets) {
    std::string key = "chart.coset[" + fp_list(cr.label) + "]";
    rep.set(key + ".rep", cr.rep.str());
    rep.set(key + ".minimal", points_str(cr.minimal_elements));
    rep.set(key + ".minimal_count", std::to_string(cr.minimal_elements.size()));
    total += cr.minimal_elements.size();
    for (const auto& m : cr.minimal_elements) {
      if (!c.in_P(m) || !c.in_Hgp(m - cr.rep)) in_coset = false;
      for (const auto& g : c.P().generators()) {
        LatticePoint d = m - g;
        if (c.in_P(d) && c.in_Hgp(d - cr.rep)) minimal = false;
      }
    }
  }
  rep.set("chart.minimal_total", std::to_string(total));
  std::size_t expected = 1;
  for (int k = 0; k < c.r(); ++k) expected *= c.p();
  rep.check("chart.coset_count", fd.cosets.size() == expected);
  rep.check("chart.minimal_in_coset", in_coset);
  rep.check("chart.minimal_elements_minimal", minimal);
}

// ---------------------------------------------------------------- b-basis

bool decomposition_ok(const Chart& c, const IndexedElt& x) {
  auto parts = theta_decompose(c, x);
  for (const auto& [I, b] : parts)
    if (!b_membership(c, b)) return false;
  return theta_reassemble(c, x.degree, parts) == x;
}

void b_basis(const Context& ctx, Report& rep) {
  const Chart& c = ctx.chart;
  auto box = box_indices(c.p(), c.r());
  for (const auto& I : box) rep.set("b_basis.theta" + index_str(I) + ".degree", c.theta_degree(I).str());
  std::size_t expected = 1;
  for (int k = 0; k < c.r(); ++k) expected *= c.p();
  rep.check("b_basis.cardinality", box.size() == expected);

  if (!ctx.opt.element.empty()) {
    IndexedElt x = parse_indexed(c, ctx.opt.element);
    rep.set("b_basis.element", x.str());
    bool in_b = b_membership(c, x);
    rep.set("b_basis.element.in_B", yes_no(in_b));
    LogForm dx = canonical_d(c, x);
    rep.set("b_basis.element.d", dx.str());
    for (const auto& [I, b] : theta_decompose(c, x)) rep.set("b_basis.element.part" + index_str(I), b.str());
    rep.check("b_basis.element.in_B_iff_closed", in_b == dx.is_zero());
    rep.check("b_basis.element.roundtrip", decomposition_ok(c, x));
    return;
  }

  // Every window monomial in every coset offset, plus one dense element per offset.
  auto window = c.window(window_bound(ctx));
  bool roundtrip = true, closed = true;
  std::size_t tested = 0;
  for (const auto& s : c.coset_reps()) {
    AlgElt dense(c.p(), c.ambient_rank());
    std::int64_t coef = 1;
    for (const auto& u : window) {
      IndexedElt x{s, AlgElt::monomial(c.p(), u)};
      roundtrip = roundtrip && decomposition_ok(c, x);
      closed = closed && (b_membership(c, x) == canonical_d(c, x).is_zero());
      dense += AlgElt::monomial(c.p(), u, coef++);
      ++tested;
    }
    IndexedElt x{s, dense};
    roundtrip = roundtrip && decomposition_ok(c, x);
    ++tested;
  }
  rep.set("b_basis.window", std::to_string(window_bound(ctx)));
  rep.set("b_basis.tested", std::to_string(tested));
  rep.check("b_basis.roundtrip", roundtrip);
  rep.check("b_basis.in_B_iff_closed", closed);
}

// ---------------------------------------------------------------- azumaya

void azumaya(const Context& ctx, Report& rep) {
  const Chart& c = ctx.chart;
  if (!ctx.opt.op.empty()) {
    if (ctx.opt.basis != "eta" && ctx.opt.basis != "zeta")
      throw Error(ErrorKind::Parse, "--basis: expected eta or zeta");
    OpBasis basis = ctx.opt.basis == "eta" ? OpBasis::Eta : OpBasis::Zeta;
    PDOp op = parse_operator(c, ctx.opt.op, basis, default_order(c));
    PDOp zeta = basis == OpBasis::Zeta ? op : to_zeta(c, op);
    PDOp eta = to_eta(c, zeta);
    rep.set("azumaya.op", op.str());
    rep.set("azumaya.op.zeta", zeta.str());
    rep.set("azumaya.op.eta", eta.str());
    rep.set("azumaya.op.central", yes_no(center_membership(c, eta)));
    rep.check("azumaya.op.basis_roundtrip", to_zeta(c, eta) == zeta);
    return;
  }
  if (!c.Q().is_zero()) throw Error(ErrorKind::Unsupported, "azumaya: the splitting check needs Q = 0");
  AzumayaReport ar = azumaya_beta_check(c);
  std::vector<std::string> labels;
  for (const auto& J : ar.window) labels.push_back(index_str(J));
  rep.set("azumaya.window", join<std::string>(labels, ",", [](const std::string& s) { return s; }));
  for (std::size_t j = 0; j < ar.window.size(); ++j) {
    std::vector<std::string> th, al;
    for (std::size_t i = 0; i < ar.window.size(); ++i) {
      th.push_back(ar.to_theta[j][i].str());
      al.push_back(ar.to_alpha[j][i].str());
    }
    auto id = [](const std::string& s) { return s; };
    rep.set("azumaya.beta" + labels[j] + ".theta", "[" + join<std::string>(th, "; ", id) + "]");
    rep.set("azumaya.beta" + labels[j] + ".action", "[" + join<std::string>(al, "; ", id) + "]");
  }
  for (const auto& f : ar.failures) rep.set("azumaya.failure", f);
  rep.check("azumaya.beta_formula", ar.beta_formula_ok);
  rep.check("azumaya.theta_triangular", ar.theta_triangular);
  rep.check("azumaya.alpha_triangular", ar.alpha_triangular);
  rep.check("azumaya.action", ar.action_ok);
}

// ---------------------------------------------------------------- p-curvature

void p_curvature_cmd(const Context& ctx, Report& rep, const std::string& name) {
  const Chart& c = ctx.chart;
  ConnModule conn = connection_from(c, ctx.file, name);
  std::string key = "p_curvature." + name;
  rep.set(key + ".rank", std::to_string(conn.rank));
  rep.set(key + ".graded", yes_no(conn.graded()));
  for (int k = 0; k < c.r(); ++k) rep.set(key + ".A" + std::to_string(k + 1), conn.A[k].str());
  bool integrable = check_integrable(c, conn);
  rep.check(key + ".integrable", integrable);
  if (!integrable) return;
  PCurvature psi = p_curvature(c, conn);
  for (int k = 0; k < c.r(); ++k) rep.set(key + ".psi" + std::to_string(k + 1), psi.psi[k].str());
  auto level = nilpotence_level(psi.psi);
  rep.set(key + ".level", level ? std::to_string(*level) : "none");
  Residue res = residue(c, conn);
  for (int k = 0; k < c.r(); ++k) {
    std::string rk = key + ".residue" + std::to_string(k + 1);
    rep.set(rk, res.rho[k].str());
    rep.set(rk + ".pth_power_zero", yes_no(res.pth_power_zero[k]));
    rep.set(rk + ".pth_power_identity", yes_no(res.pth_power_identity[k]));
  }
  // ψ_{aD_k} = a^p ψ_k for a = 1 + x^g over the generators g of P, and additivity over k.
  bool linear = true;
  std::vector<AlgElt> all(c.r(), AlgElt::constant(c.p(), c.ambient_rank(), 1));
  PolyMatrix sum(c.p(), c.ambient_rank(), conn.rank, conn.rank);
  for (int k = 0; k < c.r(); ++k) {
    sum = sum + psi.psi[k];
    for (const auto& g : c.P().generators()) {
      AlgElt a = AlgElt::constant(c.p(), c.ambient_rank(), 1) + AlgElt::monomial(c.p(), g);
      std::vector<AlgElt> lam(c.r(), AlgElt(c.p(), c.ambient_rank()));
      lam[k] = a;
      linear = linear && p_curvature_along(c, conn, lam) == psi.psi[k].times(a.pow(c.p()));
    }
  }
  linear = linear && p_curvature_along(c, conn, all) == sum;
  rep.check(key + ".f_linear", linear);
}

// ---------------------------------------------------------------- cartier-op

void cartier_op(const Context& ctx, Report& rep, const std::string& split_name) {
  const Chart& c = ctx.chart;
  std::string label = split_name.empty() ? "canonical" : split_name;
  if (!ctx.opt.form.empty()) {
    LogForm w = parse_form(c, ctx.opt.form);
    if (!w.degree.is_zero()) throw Error(ErrorKind::Parse, "--form: indexed degrees are not supported here");
    rep.set("cartier_op.form", w.str());
    bool closed = is_closed(c, w);
    rep.set("cartier_op.form.closed", yes_no(closed));
    if (!closed) throw Error(ErrorKind::Precondition, "cartier-op: the form is not closed");
    LogForm cw = cartier_operator(c, w);
    rep.set("cartier_op.C", cw.str());
    rep.check("cartier_op.oracle_identity", cartier_oracle_identity(c, w, cw));
    return;
  }
  Splitting zeta = chosen_splitting(ctx, split_name);
  std::string key = "cartier_op." + label;
  rep.set(key + ".b", "[" + join<AlgElt>(zeta.b, ", ", [](const AlgElt& f) { return f.str(); }) + "]");
  bool closed = true, section = true, identity = true;
  for (int j = 0; j < c.r(); ++j) {
    LogForm w = zeta_image(c, zeta, j);
    rep.set(key + ".zeta" + std::to_string(j + 1), w.str());
    if (!is_closed(c, w)) {
      closed = false;
      continue;
    }
    LogForm cw = cartier_operator(c, w);
    LogForm expected = zero_form(c, 1);
    expected.add({j}, AlgElt::constant(c.p(), c.ambient_rank(), 1));
    section = section && forms_equal(cw, expected, c.p());
    identity = identity && cartier_oracle_identity(c, w, cw);
  }
  bool kills_exact = true;
  for (const auto& g : c.P().generators()) {
    AlgElt f = AlgElt::monomial(c.p(), g) + AlgElt::monomial(c.p(), g * 2, 2);
    kills_exact = kills_exact && cartier_operator(c, d0(c, f)).is_zero();
  }
  rep.check(key + ".zeta_closed", closed);
  rep.check(key + ".C_after_zeta_is_identity", section);
  rep.check(key + ".oracle_identity", identity);
  rep.check(key + ".C_kills_exact", kills_exact);
}

// ---------------------------------------------------------------- transform

void transform_cmd(const Context& ctx, Report& rep, const std::string& name, const std::string& split_name) {
  const Chart& c = ctx.chart;
  ConnModule conn = connection_from(c, ctx.file, name);
  Splitting zeta = chosen_splitting(ctx, split_name);
  std::string key = "transform." + name + "." + (split_name.empty() ? "canonical" : split_name);
  auto window = c.window(window_bound(ctx));
  TransformResult tr = cartier_transform(c, zeta, conn, window);
  const auto& r = tr.report;
  rep.set(key + ".window", std::to_string(window_bound(ctx)));
  rep.set(key + ".level", std::to_string(r.level));
  rep.set(key + ".residue_nilpotent", yes_no(r.residue_nilpotent));
  rep.set(key + ".comparison_surjective", yes_no(r.comparison_surjective));
  rep.set(key + ".free", yes_no(r.free));
  for (const auto& w : r.warnings) rep.set(key + ".warning", w);
  for (int k = 0; k < c.r(); ++k) {
    rep.set(key + ".psi" + std::to_string(k + 1), r.psi.psi[k].str());
    rep.set(key + ".correction" + std::to_string(k + 1), r.correction[k].str());
  }
  for (const auto& cs : r.cosets) {
    std::string ck = key + ".coset[" + fp_list(cs.label) + "]";
    rep.set(ck + ".sections", std::to_string(cs.basis.cols()));
    rep.set(ck + ".minimal", points_str(cs.minimal_elements));
  }
  rep.set(key + ".generator_degrees", points_str(tr.generator_degrees));
  rep.set(key + ".generators", tr.generators.str());
  std::size_t horizontal = 0;
  for (const auto& d : r.degrees) horizontal += d.kernel_dim;
  rep.set(key + ".horizontal_sections_in_window", std::to_string(horizontal));
  rep.check(key + ".degrees", r.degrees_ok);
  if (!tr.higgs) {
    rep.skip(key + ".roundtrip", "section module is not free");
    return;
  }
  for (int k = 0; k < c.r(); ++k) rep.set(key + ".theta" + std::to_string(k + 1), tr.higgs->theta[k].str());
  if (!r.comparison_surjective) {
    rep.skip(key + ".roundtrip", "comparison map is not surjective");
    return;
  }
  auto level = nilpotence_level(tr.higgs->theta);
  rep.check(key + ".level_preserved", level && *level == r.level);
  RoundtripReport rt = roundtrip_connection(c, zeta, conn, window);
  if (!rt.detail.empty()) rep.set(key + ".roundtrip.detail", rt.detail);
  rep.check(key + ".roundtrip", rt.ok);
}

void inverse_transform_cmd(const Context& ctx, Report& rep, const std::string& name, const std::string& split_name) {
  const Chart& c = ctx.chart;
  HiggsModule h = higgs_from(c, ctx.file, name);
  Splitting zeta = chosen_splitting(ctx, split_name);
  std::string key = "inverse_transform." + name + "." + (split_name.empty() ? "canonical" : split_name);
  auto level = nilpotence_level(h.theta);
  if (!level || *level >= static_cast<int>(c.p()))
    throw Error(ErrorKind::Precondition, "inverse-transform: Higgs field " + name + " is not nilpotent of level < p");
  rep.set(key + ".level", std::to_string(*level));
  ConnModule conn = inverse_cartier_transform(c, zeta, h);
  for (int k = 0; k < c.r(); ++k) rep.set(key + ".A" + std::to_string(k + 1), conn.A[k].str());
  bool integrable = check_integrable(c, conn);
  rep.check(key + ".integrable", integrable);
  if (!integrable) return;
  PCurvature psi = p_curvature(c, conn);
  HiggsModule corrected{h.rank, alpha_correction(c, zeta, h)};
  auto predicted = predicted_p_curvature(c, zeta, corrected);
  bool formula = true;
  for (int k = 0; k < c.r(); ++k) {
    rep.set(key + ".psi" + std::to_string(k + 1), psi.psi[k].str());
    formula = formula && psi.psi[k] == predicted[k];
  }
  rep.check(key + ".p_curvature_formula", formula);
  RoundtripReport rt;
  try {
    rt = roundtrip_higgs(c, zeta, h, c.window(window_bound(ctx)));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Unsupported) throw;
    rep.skip(key + ".roundtrip", e.what());
    return;
  }
  if (!rt.detail.empty()) rep.set(key + ".roundtrip.detail", rt.detail);
  rep.check(key + ".roundtrip", rt.ok);
}

// ---------------------------------------------------------------- cohomology

std::vector<LatticePoint> offsets(const Context& ctx, std::vector<LatticePoint> fallback) {
  if (ctx.opt.degrees.empty()) return fallback;
  try {
    return parse_points(ctx.opt.degrees, ctx.chart.ambient_rank());
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, std::string("--degrees: ") + e.what());
  }
}

ConnModule trivial_connection(const Chart& c) {
  return constant_connection(c, std::vector<FpMatrix>(c.r(), FpMatrix(c.p(), 1, 1)));
}

void cartier_iso_cmd(const Context& ctx, Report& rep) {
  const Chart& c = ctx.chart;
  auto offs = offsets(ctx, c.coset_reps());
  auto window = c.window(window_bound(ctx));
  ConnModule triv = trivial_connection(c);
  rep.set("cohomology.window", std::to_string(window_bound(ctx)));
  rep.set("cohomology.offsets", points_str(offs));
  for (const auto& s : offs)
    for (const auto& slice : derham_slices(c, triv, s, window))
      rep.set("cohomology.cartier_iso.s" + s.str() + ".u" + slice.degree.str(), size_list(cohomology_dims(slice)));
  CartierIsoReport cr = cartier_iso_check(c, offs, window);
  rep.set("cohomology.cartier_iso.slices", std::to_string(cr.slices));
  rep.set("cohomology.cartier_iso.mismatches", std::to_string(cr.mismatches.size()));
  for (const auto& m : cr.mismatches)
    rep.set("cohomology.cartier_iso.mismatch.s" + m.s.str() + ".u" + m.u.str(),
            "got " + size_list(m.dims) + " expected " + size_list(m.expected));
  rep.check("cohomology.cartier_iso", cr.ok());
}

void quasi_iso_cmd(const Context& ctx, Report& rep, const std::string& name) {
  const Chart& c = ctx.chart;
  ConnModule conn = name.empty() ? trivial_connection(c) : connection_from(c, ctx.file, name);
  std::string label = name.empty() ? "trivial" : name;
  int n = ctx.opt.n >= 0 ? ctx.opt.n : static_cast<int>(c.p()) - 1;
  auto window = c.window(window_bound(ctx));
  for (const auto& s : offsets(ctx, {c.zero()})) {
    std::string key = "cohomology.quasi_iso." + label + ".s" + s.str();
    QuasiIsoReport qr = quasi_iso_check(c, conn, n, window, s);
    rep.set(key + ".level", std::to_string(qr.level));
    rep.set(key + ".n", std::to_string(qr.n));
    rep.set(key + ".truncation", std::to_string(qr.truncation));
    for (const auto& d : qr.degrees) {
      std::ostringstream v;
      v << "source=" << size_list(d.source_dims) << " target=" << size_list(d.target_dims)
        << " total=" << size_list(d.total_dims) << " b=" << size_list(d.b_ranks) << " a=" << size_list(d.a_ranks)
        << " sections=" << d.sections << (d.ok() ? " ok" : " FAILED");
      rep.set(key + ".u" + d.u.str(), v.str());
    }
    if (qr.counterexample) rep.set(key + ".counterexample", *qr.counterexample);
    rep.check(key, qr.ok());
  }
}

void cohomology_cmd(const Context& ctx, Report& rep) {
  rep.set("cohomology.mode", ctx.opt.mode);
  if (ctx.opt.mode == "cartier-iso")
    cartier_iso_cmd(ctx, rep);
  else if (ctx.opt.mode == "quasi-iso")
    quasi_iso_cmd(ctx, rep, ctx.opt.module);
  else
    throw Error(ErrorKind::Parse, "--mode: expected cartier-iso or quasi-iso");
}

// ---------------------------------------------------------------- verify-all

void verify_all(const Context& ctx, Report& rep) {
  const Chart& c = ctx.chart;
  const int p = static_cast<int>(c.p());
  chart_info(ctx, rep);
  b_basis(ctx, rep);
  if (c.Q().is_zero())
    azumaya(ctx, rep);
  else
    rep.skip("azumaya", "Q is nonzero");
  auto splittings = section_names(ctx.file, "splitting");
  splittings.insert(splittings.begin(), "");
  for (const auto& s : splittings) cartier_op(ctx, rep, s);
  cartier_iso_cmd(ctx, rep);
  for (const auto& name : section_names(ctx.file, "connection")) {
    p_curvature_cmd(ctx, rep, name);
    ConnModule conn = connection_from(c, ctx.file, name);
    if (!check_integrable(c, conn)) continue;
    auto level = nilpotence_level(p_curvature(c, conn).psi);
    if (!conn.graded() || !level || *level >= p) {
      rep.skip("transform." + name, "needs a graded connection with p-curvature of level < p");
      continue;
    }
    for (const auto& s : splittings) {
      try {
        transform_cmd(ctx, rep, name, s);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unsupported) throw;
        rep.skip("transform." + name + "." + (s.empty() ? "canonical" : s), e.what());
      }
    }
    quasi_iso_cmd(ctx, rep, name);
  }
  for (const auto& name : section_names(ctx.file, "higgs"))
    for (const auto& s : splittings) inverse_transform_cmd(ctx, rep, name, s);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Exact checks for log differential calculus in characteristic p", "logcartier"};
  app.require_subcommand(1);
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"human", "structured"}));
  app.add_option("--output", opt.output, "Write the report to this file");

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("chart", opt.chart_path, "Chart file")->required()->check(CLI::ExistingFile);
    s->fallthrough();
    return s;
  };
  auto window_opt = [&](CLI::App* s) {
    s->add_option("--window", opt.window, "Degree window |u|_1 <= bound (default 2p)")->check(CLI::NonNegativeNumber);
  };

  CLI::App* chart_info_cmd = sub("chart-info", "Frobenius twist, cosets and minimal elements");
  CLI::App* b_basis_cmd = sub("b-basis", "Theta basis of the indexed algebra over B");
  b_basis_cmd->add_option("--element", opt.element, "Indexed element literal to decompose");
  window_opt(b_basis_cmd);
  CLI::App* azumaya_cmd = sub("azumaya", "Splitting of the twisted operator ring, or one operator");
  azumaya_cmd->add_option("--op", opt.op, "Operator literal f * D^[I] + ...");
  azumaya_cmd->add_option("--basis", opt.basis, "Basis of the operator literal")->check(CLI::IsMember({"eta", "zeta"}));
  CLI::App* pcurv_cmd = sub("p-curvature", "Integrability, p-curvature, residue and nilpotence level");
  pcurv_cmd->add_option("--module", opt.module, "Connection block name")->required();
  CLI::App* cartier_cmd = sub("cartier-op", "Cartier operator and splitting checks");
  cartier_cmd->add_option("--form", opt.form, "Closed 1-form literal");
  cartier_cmd->add_option("--splitting", opt.splitting, "Splitting block name (default canonical)");
  CLI::App* transform_sub = sub("transform", "Cartier transform of a nilpotent connection");
  transform_sub->add_option("--module", opt.module, "Connection block name")->required();
  transform_sub->add_option("--splitting", opt.splitting, "Splitting block name (default canonical)");
  window_opt(transform_sub);
  CLI::App* inverse_sub = sub("inverse-transform", "Inverse Cartier transform of a nilpotent Higgs field");
  inverse_sub->add_option("--module", opt.higgs, "Higgs block name")->required();
  inverse_sub->add_option("--splitting", opt.splitting, "Splitting block name (default canonical)");
  window_opt(inverse_sub);
  CLI::App* cohom_sub = sub("cohomology", "Per-degree cohomology comparisons");
  cohom_sub->add_option("--mode", opt.mode, "cartier-iso or quasi-iso")->check(CLI::IsMember({"cartier-iso", "quasi-iso"}));
  cohom_sub->add_option("--n", opt.n, "Truncation bound n < p (default p-1)")->check(CLI::NonNegativeNumber);
  cohom_sub->add_option("--degrees", opt.degrees, "Offsets s as a point list, e.g. [[0],[1]]");
  cohom_sub->add_option("--module", opt.module, "Connection block name (default trivial)");
  window_opt(cohom_sub);
  CLI::App* verify_sub = sub("verify-all", "Run every check on every block in the file");
  window_opt(verify_sub);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  Report rep;
  try {
    ChartFile file = read_chart_file(opt.chart_path);
    Context ctx{file, chart_from(file), opt};
    if (chart_info_cmd->parsed()) chart_info(ctx, rep);
    else if (b_basis_cmd->parsed()) b_basis(ctx, rep);
    else if (azumaya_cmd->parsed()) azumaya(ctx, rep);
    else if (pcurv_cmd->parsed()) p_curvature_cmd(ctx, rep, opt.module);
    else if (cartier_cmd->parsed()) cartier_op(ctx, rep, opt.splitting);
    else if (transform_sub->parsed()) transform_cmd(ctx, rep, opt.module, opt.splitting);
    else if (inverse_sub->parsed()) inverse_transform_cmd(ctx, rep, opt.higgs, opt.splitting);
    else if (cohom_sub->parsed()) cohomology_cmd(ctx, rep);
    else if (verify_sub->parsed()) verify_all(ctx, rep);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  ReportFormat format = opt.format == "structured" ? ReportFormat::Structured : ReportFormat::Human;
  if (opt.output.empty()) {
    rep.write(out, format);
  } else {
    std::ofstream f(opt.output);
    if (!f) {
      err << "error: cannot write " << opt.output << '\n';
      return 2;
    }
    rep.write(f, format);
  }
  return rep.failed() == 0 ? 0 : 1;
}

}  // namespace logcartier
