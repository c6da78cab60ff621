#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logcartier/cartier.hpp"
#include "logcartier/connection.hpp"

namespace logcartier {

// A_k = Σ_j z_jk · F*(Θ_j); integrability is asserted.
ConnModule inverse_psi(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs);

// Σ_j z_jk^p Θ_j^p − Θ_k, the predicted p-curvature of inverse_psi(ζ, Θ).
std::vector<PolyMatrix> predicted_p_curvature(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs);

struct CosetSections {
  std::vector<Fp> label;
  FpMatrix basis;  // columns span ∩_k ker(ν_k + N'_k)
  std::vector<LatticePoint> minimal_elements;
};

struct DegreeSections {
  LatticePoint u;
  std::size_t kernel_dim = 0;     // horizontal sections of ∇' in degree u
  std::size_t generated_dim = 0;  // part reached from the generators over F_p[H]
};

struct TransformReport {
  int level = 0;
  bool residue_nilpotent = true;
  bool comparison_surjective = true;
  bool free = true;
  bool degrees_ok = true;
  std::vector<std::string> warnings;
  PCurvature psi;
  std::vector<FpMatrix> correction;  // N'_k with ∇'_k = D_k + N'_k
  std::vector<CosetSections> cosets;
  std::vector<DegreeSections> degrees;
};

struct TransformResult {
  std::optional<HiggsModule> higgs;  // present when the section module is free
  PolyMatrix generators;             // columns e^μ v in coordinates of E
  std::vector<LatticePoint> generator_degrees;
  TransformReport report;
};

// Horizontal sections of ∇' = ∇ + (id ⊗ ζ)∘ψ with Higgs field −ψ.
// Requires ψ and N' constant; throws Precondition when the level is ≥ p.
TransformResult cartier_transform(const Chart& chart, const Splitting& zeta, const ConnModule& conn,
                                  const std::vector<LatticePoint>& window);

// Θ corrected by Σ_j h^j evaluated at Θ, then inverse_psi.
std::vector<PolyMatrix> alpha_correction(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs);
ConnModule inverse_cartier_transform(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs);

// D_k(G) + A_k G = G B_k: G is a horizontal map from (target B) to (source A).
bool intertwines(const Chart& chart, const ConnModule& a, const ConnModule& b, const PolyMatrix& g);
// G Θ'_k = Θ_k G with G constant and invertible.
bool higgs_isomorphic_via(const HiggsModule& theta, const HiggsModule& theta2, const PolyMatrix& g);

struct RoundtripReport {
  bool ok = false;
  std::string detail;
};

RoundtripReport roundtrip_higgs(const Chart& chart, const Splitting& zeta, const HiggsModule& higgs,
                                const std::vector<LatticePoint>& window);
RoundtripReport roundtrip_connection(const Chart& chart, const Splitting& zeta, const ConnModule& conn,
                                     const std::vector<LatticePoint>& window);

}  // namespace logcartier
