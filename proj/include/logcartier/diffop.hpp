#pragma once

#include <map>
#include <string>
#include <vector>

#include "logcartier/monalg.hpp"

namespace logcartier {

using MultiIndex = std::vector<int>;

enum class OpBasis { Zeta, Eta };  // D^I (ζ-dual) or D_I (η-dual)

// Σ_I f_I e_s · D^I (or D_I); every coefficient has indexed degree `degree`.
struct PDOp {
  LatticePoint degree;
  std::map<MultiIndex, AlgElt> terms;
  OpBasis basis = OpBasis::Zeta;
  int order_bound = 0;

  static PDOp zero(const Chart& chart, int order_bound, OpBasis basis = OpBasis::Zeta);
  static PDOp zero(const Chart& chart, const LatticePoint& degree, int order_bound, OpBasis basis = OpBasis::Zeta);
  static PDOp multiplication(const Chart& chart, const IndexedElt& a, int order_bound);
  static PDOp basis_element(const Chart& chart, const MultiIndex& I, OpBasis basis, int order_bound);

  void add(const MultiIndex& I, const AlgElt& f);
  PDOp operator+(const PDOp& o) const;
  PDOp operator-(const PDOp& o) const;
  PDOp scaled(Fp c) const;
  bool is_zero() const;
  int order() const;  // max |I| with nonzero coefficient, -1 for zero
  bool operator==(const PDOp& o) const {
    return degree == o.degree && basis == o.basis && terms == o.terms;
  }
  std::string str() const;
};

inline int weight_of(const MultiIndex& I) {
  int s = 0;
  for (int x : I) s += x;
  return s;
}

std::vector<MultiIndex> indices_up_to(int r, int order);
int default_order(const Chart& chart);

// Conversion data between the η-dual and ζ-dual operator bases.
// D_N = Σ_J s(N,J) D^J with s the signed Stirling numbers of the first kind,
// D^J = Σ_N S(J,N) D_N with S the Stirling numbers of the second kind.
struct BasisChange {
  std::uint32_t p = 2;
  int r = 0;
  int order_bound = 0;
  std::vector<MultiIndex> indices;
  FpMatrix eta_to_zeta;  // row N, column J: coefficient of D^J in D_N
  FpMatrix zeta_to_eta;  // row J, column N: coefficient of D_N in D^J
  std::vector<std::vector<Fp>> s1, s2;  // one-variable tables
};

BasisChange eta_zeta_change(std::uint32_t p, int r, int order_bound);
PDOp to_zeta(const Chart& chart, const PDOp& phi);
PDOp to_eta(const Chart& chart, const PDOp& phi);

IndexedElt apply(const Chart& chart, const PDOp& phi, const IndexedElt& x);

struct ComposeOptions {
  bool allow_truncation = false;
};

// Exact product; result order bound is the sum of the operand bounds.
PDOp compose_exact(const Chart& chart, const PDOp& phi, const PDOp& psi);
// Product narrowed to max(order bounds); overflow is an error unless truncation is allowed.
PDOp compose(const Chart& chart, const PDOp& phi, const PDOp& psi, ComposeOptions opts = {});
PDOp commutator(const Chart& chart, const PDOp& phi, const PDOp& psi);
PDOp narrow(const PDOp& phi, int order_bound, bool allow_truncation);

// Derivation Σ λ_k D_k as an operator.
PDOp derivation_op(const Chart& chart, const std::vector<AlgElt>& lambda, int order_bound);
// Coefficients μ_k of D^(p) for D = Σ λ_k D_k: μ_k = D^{p-1}(λ_k) + λ_k^p.
std::vector<AlgElt> frobenius_derivation(const Chart& chart, const std::vector<AlgElt>& lambda);

struct PthPowerReport {
  bool expansion_ok = false;  // (D+a)^k = Σ binom(k,i) b_i D^{k-i}, k = 0..p
  bool pth_ok = false;        // (D+a)^p = D^p + b_p
  bool window_ok = false;     // same identity evaluated on window monomials
  bool hochschild_ok = false; // D^p and D^(p) act identically on the window
  bool dp_equals_d = false;
  std::vector<AlgElt> dp;
  bool ok() const { return expansion_ok && pth_ok && window_ok && hochschild_ok; }
};

PthPowerReport pth_power_identities(const Chart& chart, const std::vector<AlgElt>& lambda, const AlgElt& a,
                                    const std::vector<LatticePoint>& window);

struct CommutingLemmaReport {
  bool hypothesis = false;  // β_0..β_{p-1} commute pairwise
  bool identity = false;    // (α+β)^p = α^p + β_{p-1} + β^p
};

CommutingLemmaReport commuting_power_lemma(const FpMatrix& alpha, const FpMatrix& beta);

bool center_membership(const Chart& chart, const PDOp& phi);

struct CenterWindowReport {
  std::size_t domain_dim = 0;
  std::size_t kernel_dim = 0;
  std::size_t predicted_dim = 0;
  bool predicted_in_kernel = false;
  bool ok() const { return predicted_in_kernel && kernel_dim == predicted_dim; }
};

// Brute-force commutant of {θ_k, D_{ε_k}} among Σ f_N D_N of degree s,
// |N| ≤ order, f_N supported on the window.
CenterWindowReport center_window_check(const Chart& chart, const LatticePoint& s,
                                       const std::vector<LatticePoint>& window, int order);

// Element Σ_L a_L ⊗ θ^L of tildeD ⊗ C, L in {0..p-1}^r.
using SplitElt = std::map<MultiIndex, IndexedElt>;

SplitElt split_mul(const Chart& chart, const SplitElt& x, const SplitElt& y);

struct AzumayaReport {
  std::vector<MultiIndex> window;
  std::vector<std::vector<IndexedElt>> to_theta;  // [J][I]: coefficient of 1⊗θ^I in β^J
  std::vector<std::vector<PDOp>> to_alpha;        // [J][I]: β^J(D_I)
  bool beta_formula_ok = false;
  bool theta_triangular = false;
  bool alpha_triangular = false;
  bool action_ok = false;
  std::vector<std::string> failures;
  bool ok() const { return beta_formula_ok && theta_triangular && alpha_triangular && action_ok; }
};

AzumayaReport azumaya_beta_check(const Chart& chart);

}  // namespace logcartier
