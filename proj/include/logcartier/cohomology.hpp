#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logcartier/cartier.hpp"
#include "logcartier/connection.hpp"

namespace logcartier {

// Finite complex C^0 → ... → C^r of F_p-spaces in one lattice degree.
struct GradedComplexSlice {
  LatticePoint degree;
  std::vector<std::size_t> dims;
  std::vector<FpMatrix> d;  // d[j] : C^j → C^{j+1}
};

// Increasing j-tuples from {0..r-1}, lexicographic.
std::vector<std::vector<int>> wedge_basis(int r, int j);
// Complex V ⊗ Λ^• with x ⊗ ω ↦ Σ_k L_k x ⊗ dlog m_k ∧ ω; basis index is tuple·dim V + i.
GradedComplexSlice koszul_slice(const LatticePoint& degree, const std::vector<FpMatrix>& L);

// One slice per u in window ∩ P with L_k = c_k(u+s) + Λ_k; requires a graded connection.
std::vector<GradedComplexSlice> derham_slices(const Chart& chart, const ConnModule& conn, const LatticePoint& s,
                                              const std::vector<LatticePoint>& window);
// One slice per u in window ∩ H with L_k = Θ_k; requires graded commuting matrices.
std::vector<GradedComplexSlice> higgs_slices(const Chart& chart, const HiggsModule& higgs,
                                             const std::vector<LatticePoint>& window);

// dim ker − dim im per index; throws Internal when d∘d ≠ 0.
std::vector<std::size_t> cohomology_dims(const GradedComplexSlice& slice);

struct CartierIsoEntry {
  LatticePoint s, u;
  std::vector<std::size_t> dims, expected;
};

struct CartierIsoReport {
  std::size_t slices = 0;
  std::vector<CartierIsoEntry> mismatches;
  bool ok() const { return mismatches.empty(); }
};

CartierIsoReport cartier_iso_check(const Chart& chart, const std::vector<LatticePoint>& offsets,
                                   const std::vector<LatticePoint>& window);

struct QuasiIsoDegree {
  LatticePoint u;
  std::vector<std::size_t> source_dims;  // H^q(E ⊗ Ω, ∇)
  std::vector<std::size_t> target_dims;  // H^q(E' ⊗ Ω', θ')
  std::vector<std::size_t> total_dims;   // H^q(N_n K(E))
  std::vector<std::size_t> b_ranks, a_ranks;  // ranks of induced maps, q ≤ n − ℓ
  std::size_t sections = 0;                   // dim E'_u
  bool commutes = false;         // d² = 0, d'² = 0, dd' = d'd
  bool chain_maps = false;       // a and b commute with the differentials
  bool rows_exact = false;       // d'-rows resolve E ⊗ Ω^j
  bool columns_exact = false;    // d-columns exact in positive rows (untruncated, with margin)
  bool transform_agrees = false; // E'_u and θ' match the Cartier transform
  bool euler_ok = false;
  bool bijective = false;
  bool ok() const {
    return commutes && chain_maps && rows_exact && columns_exact && transform_agrees && euler_ok && bijective;
  }
};

struct QuasiIsoReport {
  int level = 0;
  int n = 0;
  int truncation = 0;  // n − ℓ
  std::vector<QuasiIsoDegree> degrees;
  std::optional<std::string> counterexample;
  bool ok() const { return !counterexample.has_value(); }
};

// Per-degree comparison of τ≤(n−ℓ) of the de Rham complex, the double complex N_n K(E),
// and the Higgs complex of the Cartier transform, for a graded connection twisted by e_s.
QuasiIsoReport quasi_iso_check(const Chart& chart, const ConnModule& conn, int n,
                               const std::vector<LatticePoint>& window, const LatticePoint& s);
QuasiIsoReport quasi_iso_check(const Chart& chart, const ConnModule& conn, int n,
                               const std::vector<LatticePoint>& window);

}  // namespace logcartier
