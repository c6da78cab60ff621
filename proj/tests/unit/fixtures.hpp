#pragma once

#include <random>

#include "logcartier/chart.hpp"
#include "logcartier/connection.hpp"
#include "logcartier/monalg.hpp"

namespace fixtures {

using namespace logcartier;

// P = ⟨1⟩ ⊂ Z, Q = 0, m_1 = 1.
inline Chart line_chart(std::uint32_t p) {
  ChartSpec s;
  s.p = p;
  s.ambient_rank = 1;
  s.P_generators = {LatticePoint{1}};
  s.log_coords = {LatticePoint{1}};
  return Chart(s);
}

// P = {(m, n) : m ≥ |n|}, Q = 0, m = e_1, e_2.
inline Chart cone_chart(std::uint32_t p) {
  ChartSpec s;
  s.p = p;
  s.ambient_rank = 2;
  s.P_generators = {LatticePoint{1, 1}, LatticePoint{1, -1}, LatticePoint{1, 0}};
  s.log_coords = {LatticePoint{1, 0}, LatticePoint{0, 1}};
  return Chart(s);
}

// P = N², Q = 0, m = e_1, e_2.
inline Chart plane_chart(std::uint32_t p) {
  ChartSpec s;
  s.p = p;
  s.ambient_rank = 2;
  s.P_generators = {LatticePoint{1, 0}, LatticePoint{0, 1}};
  s.log_coords = {LatticePoint{1, 0}, LatticePoint{0, 1}};
  return Chart(s);
}

inline AlgElt random_elt(const Chart& chart, std::mt19937& rng, int terms, std::int64_t bound) {
  AlgElt a(chart.p(), chart.ambient_rank());
  auto win = chart.window(bound);
  std::uniform_int_distribution<std::size_t> pick(0, win.size() - 1);
  std::uniform_int_distribution<int> coef(0, static_cast<int>(chart.p()) - 1);
  for (int i = 0; i < terms; ++i) a.add_term(win[pick(rng)], coef(rng));
  return a;
}

inline LatticePoint random_point(std::size_t n, std::mt19937& rng, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  LatticePoint u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = d(rng);
  return u;
}

// Random element supported in H.
inline AlgElt random_h_elt(const Chart& chart, std::mt19937& rng, int terms, std::int64_t bound) {
  std::vector<LatticePoint> win;
  for (const auto& u : chart.window(bound))
    if (chart.in_H(u)) win.push_back(u);
  AlgElt a(chart.p(), chart.ambient_rank());
  std::uniform_int_distribution<std::size_t> pick(0, win.size() - 1);
  std::uniform_int_distribution<int> coef(0, static_cast<int>(chart.p()) - 1);
  for (int i = 0; i < terms; ++i) a.add_term(win[pick(rng)], coef(rng));
  return a;
}

inline FpMatrix random_invertible(std::uint32_t p, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(0, static_cast<int>(p) - 1);
  while (true) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = coef(rng);
    if (rank(m) == n) return m;
  }
}

// r commuting nilpotent matrices: polynomials without constant term in one
// conjugated strictly upper triangular matrix. Coefficients lie in F_p[H]
// when `twisted` is set, otherwise in F_p.
inline std::vector<PolyMatrix> random_commuting_nilpotent(const Chart& chart, std::mt19937& rng, std::size_t n,
                                                          bool twisted) {
  const std::uint32_t p = chart.p();
  std::uniform_int_distribution<int> coef(0, static_cast<int>(p) - 1);
  FpMatrix N(p, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) N(i, j) = coef(rng);
  FpMatrix S = random_invertible(p, n, rng);
  FpMatrix Nc = S * N * inverse(S);
  std::vector<PolyMatrix> out;
  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix t(p, chart.ambient_rank(), n, n);
    FpMatrix pw = Nc;
    for (std::size_t i = 1; i < n; ++i) {
      AlgElt a = twisted ? random_h_elt(chart, rng, 2, 2 * p) : AlgElt::constant(p, chart.ambient_rank(), coef(rng));
      t = t + PolyMatrix::constant(pw, chart.ambient_rank()).times(a);
      pw = pw * Nc;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace fixtures
