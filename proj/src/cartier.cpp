#include "logcartier/cartier.hpp"

#include <algorithm>

#include "logcartier/error.hpp"

namespace logcartier {

bool Splitting::canonical() const {
  return std::all_of(b.begin(), b.end(), [](const AlgElt& x) { return x.is_zero(); });
}

LogForm zero_form(const Chart& chart, int j) {
  LogForm w;
  w.j = j;
  w.degree = chart.zero();
  return w;
}

LogForm d0(const Chart& chart, const AlgElt& f) {
  LogForm w = zero_form(chart, 1);
  for (int k = 0; k < chart.r(); ++k) w.add({k}, derive(chart, f, k));
  return w;
}

bool wedge_front(int k, const std::vector<int>& K, std::vector<int>& out, int& sign) {
  if (std::find(K.begin(), K.end(), k) != K.end()) return false;
  int before = 0;
  for (int x : K) before += x < k;
  sign = before % 2 ? -1 : 1;
  out = K;
  out.insert(out.begin() + before, k);
  return true;
}

LogForm d_form(const Chart& chart, const LogForm& w) {
  LogForm out = zero_form(chart, w.j + 1);
  out.degree = w.degree;
  for (const auto& [K, f] : w.terms)
    for (int k = 0; k < chart.r(); ++k) {
      std::vector<int> L;
      int sign = 1;
      if (!wedge_front(k, K, L, sign)) continue;
      AlgElt df = derive(chart, f, k, w.degree);
      out.add(L, sign < 0 ? -df : df);
    }
  return out;
}

bool is_closed(const Chart& chart, const LogForm& w) { return d_form(chart, w).is_zero(); }

AlgElt pi_star(const Chart& chart, const AlgElt& g) { return g.pow(chart.p()); }

LogForm cartier_operator(const Chart& chart, const LogForm& w) {
  if (w.j != 1) throw Error(ErrorKind::Precondition, "Cartier operator expects a 1-form");
  if (!w.degree.is_zero()) throw Error(ErrorKind::Precondition, "Cartier operator expects an untwisted form");
  if (!is_closed(chart, w)) throw Error(ErrorKind::Precondition, "Cartier operator requires a closed form");
  LogForm out = zero_form(chart, 1);
  for (const auto& [K, f] : w.terms) {
    AlgElt g(chart.p(), chart.ambient_rank());
    for (const auto& [u, c] : f.terms())
      if (chart.in_Hgp(u)) g.add_term(u, c);
    out.add(K, g);
  }
  if (!cartier_oracle_identity(chart, w, out))
    throw Error(ErrorKind::Internal, "Cartier operator disagrees with the D^(p) identity");
  return out;
}

bool cartier_oracle_identity(const Chart& chart, const LogForm& w, const LogForm& cw) {
  // D_k^(p) = D_k on the chart, so the right side is f_k − D_k^{p−1}(f_k).
  for (int k = 0; k < chart.r(); ++k) {
    AlgElt f = w.coeff({k}, chart.p());
    AlgElt iter = f;
    for (std::uint32_t i = 1; i < chart.p(); ++i) iter = derive(chart, iter, k);
    if (!(cw.coeff({k}, chart.p()) == f - iter)) return false;
  }
  return true;
}

LogForm zeta_image(const Chart& chart, const Splitting& zeta, int j) {
  LogForm w = zero_form(chart, 1);
  for (int k = 0; k < chart.r(); ++k) w.add({k}, zeta.z[j][k]);
  return w;
}

Splitting make_splitting(const Chart& chart, std::vector<AlgElt> b) {
  if (b.size() != static_cast<std::size_t>(chart.r()))
    throw Error(ErrorKind::Precondition, "splitting needs one perturbation per log coordinate");
  for (const auto& x : b) {
    if (x.p() != chart.p() || x.ambient() != chart.ambient_rank())
      throw Error(ErrorKind::Precondition, "splitting perturbation belongs to another chart");
    for (const auto& [u, c] : x.terms())
      if (!chart.in_P(u)) throw Error(ErrorKind::Precondition, "splitting perturbation e^" + u.str() + " lies outside P");
  }
  Splitting s;
  s.b = std::move(b);
  const int r = chart.r();
  s.z.assign(r, std::vector<AlgElt>(r, AlgElt(chart.p(), chart.ambient_rank())));
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) {
      s.z[j][k] = derive(chart, s.b[j], k);
      if (j == k) s.z[j][k] += AlgElt::constant(chart.p(), chart.ambient_rank(), 1);
    }
  for (int j = 0; j < r; ++j) {
    LogForm w = zeta_image(chart, s, j);
    if (!is_closed(chart, w)) throw Error(ErrorKind::Internal, "splitting image is not closed");
    LogForm expect = zero_form(chart, 1);
    expect.add({j}, AlgElt::constant(chart.p(), chart.ambient_rank(), 1));
    LogForm cw = cartier_operator(chart, w);
    if (cw.terms != expect.terms) throw Error(ErrorKind::Internal, "splitting is not a section of C");
  }
  return s;
}

Splitting canonical_splitting(const Chart& chart) {
  return make_splitting(chart, std::vector<AlgElt>(chart.r(), AlgElt(chart.p(), chart.ambient_rank())));
}

}  // namespace logcartier
