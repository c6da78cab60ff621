#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logcartier/monalg.hpp"

namespace logcartier {

// Matrix with entries in F_p[P^gp].
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::uint32_t p, std::size_t ambient, std::size_t rows, std::size_t cols);
  static PolyMatrix identity(std::uint32_t p, std::size_t ambient, std::size_t n);
  static PolyMatrix constant(const FpMatrix& m, std::size_t ambient);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t ambient() const noexcept { return n_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  AlgElt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const AlgElt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  PolyMatrix operator+(const PolyMatrix& o) const;
  PolyMatrix operator-(const PolyMatrix& o) const;
  PolyMatrix operator-() const;
  PolyMatrix operator*(const PolyMatrix& o) const;
  PolyMatrix times(const AlgElt& f) const;
  PolyMatrix pow(std::uint64_t e) const;
  std::vector<AlgElt> apply(const std::vector<AlgElt>& v) const;
  bool is_zero() const;
  bool is_constant() const;
  // Constant part; throws unless is_constant().
  FpMatrix to_fp() const;
  bool operator==(const PolyMatrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  std::string str() const;

 private:
  std::uint32_t p_ = 2;
  std::size_t n_ = 0, rows_ = 0, cols_ = 0;
  std::vector<AlgElt> a_;
};

using ModuleVec = std::vector<AlgElt>;

// Free module of rank `rank` with ∇_{D_k} x = D_k(x) + A_k x.
struct ConnModule {
  std::size_t rank = 0;
  std::vector<PolyMatrix> A;

  bool graded() const;
};

// Free module over F_p[H] with commuting Higgs matrices Θ_k.
struct HiggsModule {
  std::size_t rank = 0;
  std::vector<PolyMatrix> theta;

  bool graded() const;
};

struct PCurvature {
  std::vector<PolyMatrix> psi;
};

struct Residue {
  std::vector<PolyMatrix> rho;
  std::vector<bool> pth_power_zero;      // ρ_k^p = 0
  std::vector<bool> pth_power_identity;  // ρ_k^p = ρ_k
  bool nilpotent_residues() const;
};

// Throws Precondition on shape mismatch or coefficients outside P.
void validate_connection(const Chart& chart, const ConnModule& conn);
// Throws Precondition on shape mismatch, coefficients outside H, or non-commuting matrices.
void validate_higgs(const Chart& chart, const HiggsModule& higgs);

ConnModule constant_connection(const Chart& chart, const std::vector<FpMatrix>& lambda);
HiggsModule constant_higgs(const Chart& chart, const std::vector<FpMatrix>& theta);

ModuleVec basis_vector(const Chart& chart, std::size_t rank, std::size_t i);
ModuleVec nabla(const Chart& chart, const ConnModule& conn, int k, const ModuleVec& x);
// ∇_D for D = Σ λ_k D_k.
ModuleVec nabla_along(const Chart& chart, const ConnModule& conn, const std::vector<AlgElt>& lambda,
                      const ModuleVec& x);

bool check_integrable(const Chart& chart, const ConnModule& conn);

// ψ_k = ∇_{D_k}^p − ∇_{D_k} by iteration; throws on non-integrable input.
PCurvature p_curvature(const Chart& chart, const ConnModule& conn);
// ψ_D for D = Σ λ_k D_k, using D^(p) for the correction term.
PolyMatrix p_curvature_along(const Chart& chart, const ConnModule& conn, const std::vector<AlgElt>& lambda);

// Coefficient k reduced modulo the ideal generated by monomials with c_k ≠ 0.
AlgElt residue_reduce(const Chart& chart, int k, const AlgElt& f);
Residue residue(const Chart& chart, const ConnModule& conn);

// Smallest ℓ with every product of ℓ+1 of the (commuting) matrices zero,
// or nullopt when none exists up to the cap (default rank·r·p).
std::optional<int> nilpotence_level(const std::vector<PolyMatrix>& mats, std::optional<int> cap = std::nullopt);
std::optional<int> nilpotence_level(const std::vector<FpMatrix>& mats, std::optional<int> cap = std::nullopt);

bool pairwise_commute(const std::vector<PolyMatrix>& mats);

}  // namespace logcartier
