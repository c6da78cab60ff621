#pragma once

#include <vector>

#include "logcartier/monalg.hpp"

namespace logcartier {

// Splitting of the Cartier operator with ζ(π*dlog m_k) = dlog m_k + d(b_k).
struct Splitting {
  std::vector<AlgElt> b;
  // z[j][k] = ⟨ζ(π*dlog m_j), D_k⟩ = δ_jk + D_k(b_j)
  std::vector<std::vector<AlgElt>> z;

  bool canonical() const;
};

// Validates closedness and C∘ζ = id; failures are internal errors.
Splitting make_splitting(const Chart& chart, std::vector<AlgElt> b);
Splitting canonical_splitting(const Chart& chart);
LogForm zeta_image(const Chart& chart, const Splitting& zeta, int j);

LogForm zero_form(const Chart& chart, int j);
LogForm d0(const Chart& chart, const AlgElt& f);
// Exterior derivative of a j-form.
LogForm d_form(const Chart& chart, const LogForm& w);
bool is_closed(const Chart& chart, const LogForm& w);

// dlog m_k ∧ dlog m_K: the sorted tuple and its sign, or empty when k ∈ K.
bool wedge_front(int k, const std::vector<int>& K, std::vector<int>& out, int& sign);

// Cartier operator on closed 1-forms. Twist-chart functions are written with
// their F*-images (exponents in H); throws Precondition on non-closed input.
LogForm cartier_operator(const Chart& chart, const LogForm& w);
// Both sides of F*⟨Cω, π*D_k⟩ = ⟨ω, D_k^(p)⟩ − D_k^{p−1}⟨ω, D_k⟩.
bool cartier_oracle_identity(const Chart& chart, const LogForm& w, const LogForm& cw);

// π*g = g^p in the F*-image representation.
AlgElt pi_star(const Chart& chart, const AlgElt& g);

}  // namespace logcartier
