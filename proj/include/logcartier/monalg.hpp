#pragma once

#include <map>
#include <string>
#include <vector>

#include "logcartier/chart.hpp"

namespace logcartier {

// Finite F_p-combination of monomials e^u, u in Z^n. No zero coefficients are stored.
class AlgElt {
 public:
  using Terms = std::map<LatticePoint, Fp>;

  AlgElt() = default;
  AlgElt(std::uint32_t p, std::size_t n) : p_(p), n_(n) {}
  static AlgElt constant(std::uint32_t p, std::size_t n, std::int64_t c);
  static AlgElt monomial(std::uint32_t p, const LatticePoint& u, std::int64_t c = 1);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t ambient() const noexcept { return n_; }
  const Terms& terms() const noexcept { return t_; }
  bool is_zero() const noexcept { return t_.empty(); }
  bool is_constant() const;
  Fp constant_term() const;
  Fp coeff(const LatticePoint& u) const;
  void add_term(const LatticePoint& u, Fp c);

  AlgElt operator+(const AlgElt& o) const;
  AlgElt operator-(const AlgElt& o) const;
  AlgElt operator-() const;
  AlgElt operator*(const AlgElt& o) const;
  AlgElt scaled(Fp c) const;
  AlgElt shifted(const LatticePoint& s) const;  // multiply by e^s
  AlgElt pow(std::uint64_t e) const;
  AlgElt& operator+=(const AlgElt& o);
  bool operator==(const AlgElt& o) const { return p_ == o.p_ && n_ == o.n_ && t_ == o.t_; }

  std::string str() const;

 private:
  void require_compatible(const AlgElt& o) const;
  std::uint32_t p_ = 2;
  std::size_t n_ = 0;
  Terms t_;
};

// coeff · e_s in the indexed algebra A^gp.
struct IndexedElt {
  LatticePoint degree;
  AlgElt coeff;

  IndexedElt operator+(const IndexedElt& o) const;
  IndexedElt operator-(const IndexedElt& o) const;
  bool operator==(const IndexedElt& o) const { return degree == o.degree && coeff == o.coeff; }
  bool is_zero() const { return coeff.is_zero(); }
  std::string str() const;
};

// j-form Σ_K f_K dlog m_K over increasing tuples K (0-based indices).
// Coefficients carry a common indexed degree (zero for plain forms).
struct LogForm {
  int j = 0;
  LatticePoint degree;
  std::map<std::vector<int>, AlgElt> terms;

  AlgElt coeff(const std::vector<int>& K, std::uint32_t p) const;
  bool is_zero() const;
  void add(const std::vector<int>& K, const AlgElt& f);
  std::string str() const;
};

// Weight of e^u e_s under the coordinate derivations: c(u+s).
std::vector<Fp> weight(const Chart& chart, const LatticePoint& u, const LatticePoint& s);

// D_k on F_p[P] (indexed degree s, zero by default).
AlgElt derive(const Chart& chart, const AlgElt& f, int k);
AlgElt derive(const Chart& chart, const AlgElt& f, int k, const LatticePoint& s);

IndexedElt indexed_mul(const Chart& chart, const IndexedElt& x, const IndexedElt& y);
LogForm canonical_d(const Chart& chart, const IndexedElt& x);
bool b_membership(const Chart& chart, const IndexedElt& x);
std::map<std::vector<int>, IndexedElt> theta_decompose(const Chart& chart, const IndexedElt& x);
IndexedElt theta_reassemble(const Chart& chart, const LatticePoint& degree,
                            const std::map<std::vector<int>, IndexedElt>& parts);

}  // namespace logcartier
