#include "logcartier/transform.hpp"

#include <map>

#include "logcartier/diffop.hpp"
#include "logcartier/error.hpp"

namespace logcartier {

ConnModule inverse_psi(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs) {
  validate_higgs(chart, higgs);
  ConnModule conn;
  conn.rank = higgs.rank;
  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix a(chart.p(), chart.ambient_rank(), higgs.rank, higgs.rank);
    for (int j = 0; j < chart.r(); ++j)
      if (!zeta.z[j][k].is_zero()) a = a + higgs.theta[j].times(zeta.z[j][k]);
    conn.A.push_back(std::move(a));
  }
  if (!check_integrable(chart, conn)) throw Error(ErrorKind::Internal, "inverse_psi produced a non-integrable connection");
  return conn;
}

std::vector<PolyMatrix> predicted_p_curvature(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs) {
  validate_higgs(chart, higgs);
  std::vector<PolyMatrix> out;
  std::vector<PolyMatrix> powers;
  for (const auto& t : higgs.theta) powers.push_back(t.pow(chart.p()));
  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix m = -higgs.theta[k];
    for (int j = 0; j < chart.r(); ++j) m = m + powers[j].times(pi_star(chart, zeta.z[j][k]));
    out.push_back(std::move(m));
  }
  return out;
}

namespace {

// Span of the columns of `basis` is T-stable; returns the matrix of T on it.
FpMatrix restrict_to(const FpMatrix& t, const FpMatrix& basis) {
  FpMatrix out(t.p(), basis.cols(), basis.cols());
  FpMatrix tb = t * basis;
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    std::vector<Fp> col(tb.rows()), x;
    for (std::size_t i = 0; i < tb.rows(); ++i) col[i] = tb(i, c);
    if (!solve(basis, col, x)) throw Error(ErrorKind::Internal, "Higgs field does not preserve horizontal sections");
    for (std::size_t i = 0; i < basis.cols(); ++i) out(i, c) = x[i];
  }
  return out;
}

FpMatrix stacked_shift(const std::vector<FpMatrix>& n, const std::vector<Fp>& nu) {
  const std::size_t rank = n.front().rows();
  FpMatrix m(n.front().p(), rank * n.size(), rank);
  for (std::size_t k = 0; k < n.size(); ++k)
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) {
        Fp v = n[k](i, j);
        if (i == j) v = (v + nu[k]) % n.front().p();
        m(k * rank + i, j) = v;
      }
  return m;
}

}  // namespace

TransformResult cartier_transform(const Chart& chart, const Splitting& zeta, const ConnModule& conn,
                                  const std::vector<LatticePoint>& window) {
  validate_connection(chart, conn);
  TransformResult res;
  TransformReport& rep = res.report;
  rep.psi = p_curvature(chart, conn);
  for (const auto& m : rep.psi.psi)
    if (!m.is_constant()) throw Error(ErrorKind::Unsupported, "transform needs a constant p-curvature");
  auto level = nilpotence_level(rep.psi.psi, static_cast<int>(chart.p()));
  if (!level || *level >= static_cast<int>(chart.p()))
    throw Error(ErrorKind::Precondition, "p-curvature is not nilpotent of level < p");
  rep.level = *level;
  Residue resid = residue(chart, conn);
  rep.residue_nilpotent = resid.nilpotent_residues();
  if (!rep.residue_nilpotent) rep.warnings.push_back("residue is not nilpotent; comparison map is not surjective");

  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix n = conn.A[k];
    for (int j = 0; j < chart.r(); ++j) n = n + rep.psi.psi[j].times(zeta.z[j][k]);
    if (!n.is_constant()) throw Error(ErrorKind::Unsupported, "transform needs a constant corrected connection");
    rep.correction.push_back(n.to_fp());
  }

  FrobeniusData fd = frobenius_data(chart);
  std::map<std::vector<Fp>, const CosetReport*> by_label;
  for (const auto& c : fd.cosets) by_label[c.label] = &c;

  const std::uint32_t p = chart.p();
  const std::size_t rank = conn.rank;
  std::vector<std::vector<FpMatrix>> blocks(chart.r());
  std::vector<std::vector<Fp>> gen_cols;
  std::map<std::vector<Fp>, std::size_t> kernel_dims;
  for (const auto& I : box_indices(p, chart.r())) {
    std::vector<Fp> nu(I.begin(), I.end());
    auto ker = kernel_basis(stacked_shift(rep.correction, nu));
    kernel_dims[nu] = ker.size();
    CosetSections cs;
    cs.label = nu;
    cs.basis = from_columns(p, rank, ker);
    cs.minimal_elements = by_label.at(nu)->minimal_elements;
    if (!ker.empty()) {
      if (cs.minimal_elements.size() != 1) rep.free = false;
      for (const auto& mu : cs.minimal_elements)
        for (const auto& v : ker) {
          res.generator_degrees.push_back(mu);
          gen_cols.push_back(v);
        }
      for (int k = 0; k < chart.r(); ++k) {
        FpMatrix minus_psi = rep.psi.psi[k].to_fp().scaled(p - 1);
        blocks[k].push_back(restrict_to(minus_psi, cs.basis));
      }
    }
    rep.cosets.push_back(std::move(cs));
  }

  res.generators = PolyMatrix(p, chart.ambient_rank(), rank, gen_cols.size());
  for (std::size_t c = 0; c < gen_cols.size(); ++c)
    for (std::size_t i = 0; i < rank; ++i)
      res.generators(i, c) = AlgElt::monomial(p, res.generator_degrees[c], gen_cols[c][i]);

  std::vector<std::vector<Fp>> constant_cols;
  for (std::size_t c = 0; c < gen_cols.size(); ++c)
    if (res.generator_degrees[c].is_zero()) constant_cols.push_back(gen_cols[c]);
  rep.comparison_surjective = logcartier::rank(from_columns(p, rank, constant_cols)) == rank;

  for (const auto& u : window) {
    if (!chart.in_P(u)) continue;
    DegreeSections ds;
    ds.u = u;
    auto nu = chart.coords_modp(u);
    ds.kernel_dim = kernel_dims.at(nu);
    for (const auto& mu : by_label.at(nu)->minimal_elements)
      if (chart.in_P(u - mu)) {
        ds.generated_dim = ds.kernel_dim;
        break;
      }
    if (ds.generated_dim != ds.kernel_dim) rep.degrees_ok = false;
    rep.degrees.push_back(std::move(ds));
  }

  if (rep.free) {
    HiggsModule h;
    h.rank = gen_cols.size();
    for (int k = 0; k < chart.r(); ++k) {
      FpMatrix t(p, h.rank, h.rank);
      std::size_t off = 0;
      for (const auto& b : blocks[k]) {
        for (std::size_t i = 0; i < b.rows(); ++i)
          for (std::size_t j = 0; j < b.cols(); ++j) t(off + i, off + j) = b(i, j);
        off += b.rows();
      }
      h.theta.push_back(PolyMatrix::constant(t, chart.ambient_rank()));
    }
    res.higgs = std::move(h);
  } else {
    rep.warnings.push_back("horizontal sections do not form a free module over the twist chart");
  }
  return res;
}

namespace {

using SymPoly = std::map<MultiIndex, AlgElt>;

SymPoly sym_mul(const SymPoly& a, const SymPoly& b) {
  SymPoly out;
  for (const auto& [e, c] : a)
    for (const auto& [f, d] : b) {
      MultiIndex g(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) g[i] = e[i] + f[i];
      AlgElt prod = c * d;
      auto it = out.find(g);
      if (it == out.end())
        out.emplace(g, prod);
      else
        it->second += prod;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

std::vector<PolyMatrix> alpha_correction(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs) {
  validate_higgs(chart, higgs);
  auto level = nilpotence_level(higgs.theta);
  if (!level) throw Error(ErrorKind::Precondition, "inverse transform needs a nilpotent Higgs field");
  const int r = chart.r();
  const std::uint32_t p = chart.p();
  const AlgElt one = AlgElt::constant(p, chart.ambient_rank(), 1);
  // h(D'_i) = Σ_l z_li^p D'_l^p
  std::vector<SymPoly> h(r);
  for (int i = 0; i < r; ++i)
    for (int l = 0; l < r; ++l) {
      AlgElt c = pi_star(chart, zeta.z[l][i]);
      if (c.is_zero()) continue;
      MultiIndex e(r, 0);
      e[l] = static_cast<int>(p);
      h[i][e] = c;
    }
  auto apply_h = [&](const SymPoly& f) {
    SymPoly out;
    for (const auto& [e, c] : f) {
      SymPoly term{{MultiIndex(r, 0), c}};
      for (int i = 0; i < r; ++i)
        for (int t = 0; t < e[i]; ++t) term = sym_mul(term, h[i]);
      for (const auto& [g, d] : term) {
        auto it = out.find(g);
        if (it == out.end())
          out.emplace(g, d);
        else
          it->second += d;
      }
    }
    return out;
  };
  auto evaluate = [&](const SymPoly& f) {
    PolyMatrix m(p, chart.ambient_rank(), higgs.rank, higgs.rank);
    for (const auto& [e, c] : f) {
      PolyMatrix t = PolyMatrix::identity(p, chart.ambient_rank(), higgs.rank).times(c);
      for (int i = 0; i < r; ++i)
        if (e[i]) t = t * higgs.theta[i].pow(e[i]);
      m = m + t;
    }
    return m;
  };
  std::vector<PolyMatrix> out;
  for (int k = 0; k < r; ++k) {
    MultiIndex e(r, 0);
    e[k] = 1;
    SymPoly f{{e, one}};
    PolyMatrix phi = higgs.theta[k];
    for (std::uint64_t deg = p; deg <= static_cast<std::uint64_t>(*level); deg *= p) {
      f = apply_h(f);
      phi = phi + evaluate(f);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

ConnModule inverse_cartier_transform(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs) {
  HiggsModule corrected;
  corrected.rank = higgs.rank;
  corrected.theta = alpha_correction(chart, zeta, higgs);
  return inverse_psi(chart, zeta, corrected);
}

bool intertwines(const Chart& chart, const ConnModule& a, const ConnModule& b, const PolyMatrix& g) {
  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix lhs = a.A[k] * g;
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) lhs(i, j) += derive(chart, g(i, j), k);
    if (!(lhs == g * b.A[k])) return false;
  }
  return true;
}

namespace {

bool invertible_constant(const PolyMatrix& g) {
  return g.rows() == g.cols() && g.is_constant() && rank(g.to_fp()) == g.rows();
}

}  // namespace

bool higgs_isomorphic_via(const HiggsModule& theta, const HiggsModule& theta2, const PolyMatrix& g) {
  if (!invertible_constant(g) || theta.theta.size() != theta2.theta.size()) return false;
  for (std::size_t k = 0; k < theta.theta.size(); ++k)
    if (!(theta.theta[k] * g == g * theta2.theta[k])) return false;
  return true;
}

RoundtripReport roundtrip_higgs(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs,
                                const std::vector<LatticePoint>& window) {
  RoundtripReport out;
  ConnModule e = inverse_cartier_transform(chart, zeta, higgs);
  TransformResult back = cartier_transform(chart, zeta, e, window);
  if (!back.higgs) {
    out.detail = "transform of the inverse is not free";
    return out;
  }
  if (!back.report.degrees_ok) {
    out.detail = "per-degree section count mismatch";
    return out;
  }
  if (!higgs_isomorphic_via(higgs, *back.higgs, back.generators)) {
    out.detail = "recovered Higgs field is not isomorphic via the comparison map";
    return out;
  }
  out.ok = true;
  return out;
}

RoundtripReport roundtrip_connection(const Chart& chart, const Splitting& zeta, const ConnModule& conn,
                                     const std::vector<LatticePoint>& window) {
  RoundtripReport out;
  TransformResult fwd = cartier_transform(chart, zeta, conn, window);
  if (!fwd.higgs) {
    out.detail = "transform is not free";
    return out;
  }
  if (!fwd.report.comparison_surjective || !invertible_constant(fwd.generators)) {
    out.detail = "comparison map is not an isomorphism";
    return out;
  }
  ConnModule back = inverse_cartier_transform(chart, zeta, *fwd.higgs);
  if (!intertwines(chart, conn, back, fwd.generators)) {
    out.detail = "comparison map is not horizontal";
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace logcartier
