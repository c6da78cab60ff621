#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logcartier/fp.hpp"
#include "logcartier/lattice.hpp"

namespace logcartier {

// Submonoid of Z^n generated by finitely many points. An empty generator
// list is the zero monoid.
class AffineMonoid {
 public:
  AffineMonoid() = default;
  AffineMonoid(std::size_t ambient_rank, std::vector<LatticePoint> generators);

  std::size_t ambient_rank() const noexcept { return n_; }
  const std::vector<LatticePoint>& generators() const noexcept { return gens_; }
  bool is_zero() const noexcept { return gens_.empty(); }
  // Strictly positive functional on every generator; absent when not pointed.
  const std::optional<LatticePoint>& grading() const noexcept { return grading_; }

 private:
  std::size_t n_ = 0;
  std::vector<LatticePoint> gens_;
  std::optional<LatticePoint> grading_;
};

inline constexpr std::uint64_t kDefaultSearchGuard = 5'000'000;

bool monoid_contains(const AffineMonoid& m, const LatticePoint& u,
                     std::uint64_t guard = kDefaultSearchGuard);
Lattice group_lattice(const AffineMonoid& m);

struct ChartDiagnostics {
  bool valid = false;
  int r = 0;
  std::string field;  // first offending field when invalid
  std::vector<std::string> problems;
};

struct CosetReport {
  LatticePoint rep;
  std::vector<Fp> label;  // c(rep)
  std::vector<LatticePoint> minimal_elements;
};

struct ChartSpec {
  std::uint32_t p = 2;
  std::size_t ambient_rank = 0;
  std::vector<LatticePoint> P_generators;
  std::vector<LatticePoint> Q_generators;
  std::vector<LatticePoint> log_coords;
};

ChartDiagnostics validate_chart(const ChartSpec& spec);

// Validated chart Q ⊆ P ⊂ Z^n at a prime p with log coordinates m_1..m_r.
class Chart {
 public:
  // Throws ChartError naming the offending field.
  explicit Chart(const ChartSpec& spec);

  std::uint32_t p() const noexcept { return field_.p(); }
  const PrimeField& field() const noexcept { return field_; }
  std::size_t ambient_rank() const noexcept { return P_.ambient_rank(); }
  int r() const noexcept { return r_; }
  const AffineMonoid& P() const noexcept { return P_; }
  const AffineMonoid& Q() const noexcept { return Q_; }
  const std::vector<LatticePoint>& log_coords() const noexcept { return m_; }
  const Lattice& Pgp() const noexcept { return pgp_; }
  const Lattice& Hgp() const noexcept { return hgp_; }
  const std::vector<LatticePoint>& coset_reps() const noexcept { return reps_; }
  const ChartSpec& spec() const noexcept { return spec_; }

  // c(u) in F_p^r; throws if u is not in P^gp.
  std::vector<Fp> coords_modp(const LatticePoint& u) const;
  bool in_Hgp(const LatticePoint& u) const;
  bool in_P(const LatticePoint& u) const { return monoid_contains(P_, u); }
  bool in_H(const LatticePoint& u) const { return in_Hgp(u) && in_P(u); }
  // Σ I_k m_k
  LatticePoint theta_degree(const std::vector<int>& I) const;
  LatticePoint zero() const { return LatticePoint(ambient_rank()); }
  // Points u of P with |u|_1 ≤ bound, sorted.
  std::vector<LatticePoint> window(std::int64_t bound) const;

  bool same_as(const Chart& o) const noexcept;

 private:
  ChartSpec spec_;
  PrimeField field_;
  AffineMonoid P_, Q_;
  std::vector<LatticePoint> m_;
  Lattice pgp_, hgp_;
  int r_ = 0;
  FpMatrix to_logc_;  // row vector (coords of u mod p) times this gives (c, q-part)
  std::vector<LatticePoint> reps_;
};

struct FrobeniusData {
  Lattice Hgp;
  std::vector<LatticePoint> coset_reps;
  std::vector<CosetReport> cosets;
};

FrobeniusData frobenius_data(const Chart& chart);

// All I in {0..p-1}^r in lexicographic order.
std::vector<std::vector<int>> box_indices(std::uint32_t p, int r);

}  // namespace logcartier
