#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace logcartier {

// A point of Z^n.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t n) : c_(n, 0) {}
  explicit LatticePoint(std::vector<std::int64_t> c) : c_(std::move(c)) {}
  LatticePoint(std::initializer_list<std::int64_t> c) : c_(c) {}

  std::size_t size() const noexcept { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::int64_t& operator[](std::size_t i) { return c_[i]; }
  const std::vector<std::int64_t>& coords() const noexcept { return c_; }

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator-() const;
  LatticePoint operator*(std::int64_t k) const;
  LatticePoint& operator+=(const LatticePoint& o);
  bool is_zero() const noexcept;
  std::int64_t dot(const LatticePoint& o) const;
  std::int64_t l1() const noexcept;

  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;

  std::string str() const;

 private:
  std::vector<std::int64_t> c_;
};

// Subgroup of Z^n stored by an echelon basis: rows with strictly increasing
// pivot columns, positive pivots, entries above each pivot reduced into [0, pivot).
class Lattice {
 public:
  Lattice() = default;
  Lattice(std::size_t ambient, const std::vector<LatticePoint>& generators);

  std::size_t ambient() const noexcept { return n_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<LatticePoint>& basis() const noexcept { return basis_; }
  bool contains(const LatticePoint& u) const;
  // Integer coordinates of u in the echelon basis.
  std::optional<std::vector<std::int64_t>> coordinates(const LatticePoint& u) const;
  bool operator==(const Lattice& o) const { return n_ == o.n_ && basis_ == o.basis_; }

 private:
  std::size_t n_ = 0;
  std::vector<LatticePoint> basis_;
  std::vector<std::size_t> pivots_;
};

// Rank over Q of a list of integer vectors.
std::size_t integer_rank(std::size_t ambient, const std::vector<LatticePoint>& vs);

}  // namespace logcartier
