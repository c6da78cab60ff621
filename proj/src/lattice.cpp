#include "logcartier/lattice.hpp"

#include <cstdlib>
#include <sstream>
#include <utility>

#include "logcartier/error.hpp"

namespace logcartier {

namespace {

void require_same(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::Dimension, "lattice point length mismatch");
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  require_same(*this, o);
  LatticePoint r(*this);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  require_same(*this, o);
  LatticePoint r(*this);
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r(*this);
  for (auto& x : r.c_) x = -x;
  return r;
}

LatticePoint LatticePoint::operator*(std::int64_t k) const {
  LatticePoint r(*this);
  for (auto& x : r.c_) x *= k;
  return r;
}

LatticePoint& LatticePoint::operator+=(const LatticePoint& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

bool LatticePoint::is_zero() const noexcept {
  for (auto x : c_)
    if (x) return false;
  return true;
}

std::int64_t LatticePoint::dot(const LatticePoint& o) const {
  require_same(*this, o);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < c_.size(); ++i) s += c_[i] * o.c_[i];
  return s;
}

std::int64_t LatticePoint::l1() const noexcept {
  std::int64_t s = 0;
  for (auto x : c_) s += std::llabs(x);
  return s;
}

std::string LatticePoint::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ']';
  return os.str();
}

Lattice::Lattice(std::size_t ambient, const std::vector<LatticePoint>& generators) : n_(ambient) {
  std::vector<LatticePoint> rows;
  for (const auto& g : generators) {
    if (g.size() != ambient) throw Error(ErrorKind::Dimension, "generator length differs from ambient rank");
    if (!g.is_zero()) rows.push_back(g);
  }
  std::size_t top = 0;
  for (std::size_t col = 0; col < n_ && top < rows.size(); ++col) {
    // Euclid on column col among rows[top..]
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      std::swap(rows[top], rows[best]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        std::int64_t q = rows[i][col] / rows[top][col];
        rows[i] = rows[i] - rows[top] * q;
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0) rows[top] = -rows[top];
    for (std::size_t i = 0; i < top; ++i) {
      std::int64_t q = floor_div(rows[i][col], rows[top][col]);
      if (q) rows[i] = rows[i] - rows[top] * q;
    }
    pivots_.push_back(col);
    ++top;
  }
  rows.resize(top);
  basis_ = std::move(rows);
}

std::optional<std::vector<std::int64_t>> Lattice::coordinates(const LatticePoint& u) const {
  if (u.size() != n_) throw Error(ErrorKind::Dimension, "point length differs from ambient rank");
  LatticePoint rem = u;
  std::vector<std::int64_t> x(basis_.size(), 0);
  for (std::size_t t = 0; t < basis_.size(); ++t) {
    std::int64_t piv = basis_[t][pivots_[t]];
    std::int64_t v = rem[pivots_[t]];
    if (v % piv != 0) return std::nullopt;
    x[t] = v / piv;
    if (x[t]) rem = rem - basis_[t] * x[t];
  }
  if (!rem.is_zero()) return std::nullopt;
  return x;
}

bool Lattice::contains(const LatticePoint& u) const { return coordinates(u).has_value(); }

std::size_t integer_rank(std::size_t ambient, const std::vector<LatticePoint>& vs) {
  return Lattice(ambient, vs).rank();
}

}  // namespace logcartier
