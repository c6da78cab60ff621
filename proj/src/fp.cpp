#include "logcartier/fp.hpp"

#include <sstream>
#include <utility>

#include "logcartier/error.hpp"

namespace logcartier {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (!is_prime(p) || p > 65521) throw Error(ErrorKind::Precondition, "p must be a prime below 2^16");
}

Fp PrimeField::pow(Fp a, std::uint64_t e) const noexcept {
  Fp r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Fp PrimeField::inv(Fp a) const {
  if (a % p_ == 0) throw Error(ErrorKind::Internal, "inverse of zero in F_p");
  return pow(a, p_ - 2);
}

Fp PrimeField::factorial(std::int64_t n) const noexcept {
  Fp r = 1 % p_;
  for (std::int64_t i = 2; i <= n; ++i) r = mul(r, reduce(i));
  return r;
}

Fp PrimeField::binom(std::int64_t n, std::int64_t k) const noexcept {
  if (k < 0 || n < 0 || k > n) return 0;
  Fp r = 1;
  while (n > 0 || k > 0) {
    std::int64_t ni = n % p_, ki = k % p_;
    if (ki > ni) return 0;
    Fp num = factorial(ni), den = mul(factorial(ki), factorial(ni - ki));
    r = mul(r, mul(num, pow(den, p_ - 2)));
    n /= p_;
    k /= p_;
  }
  return r;
}

std::int64_t PrimeField::centered(Fp a) const noexcept {
  std::int64_t v = a;
  return 2 * v > static_cast<std::int64_t>(p_) ? v - p_ : v;
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % p;
  return m;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::Dimension, "matrix sum shape");
  PrimeField f(p_);
  FpMatrix r(p_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f.add(a_[i], o.a_[i]);
  return r;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::Dimension, "matrix difference shape");
  PrimeField f(p_);
  FpMatrix r(p_, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f.sub(a_[i], o.a_[i]);
  return r;
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::Dimension, "matrix product shape");
  FpMatrix r(p_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      std::uint64_t a = (*this)(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        r(i, j) = static_cast<Fp>((r(i, j) + a * o(k, j)) % p_);
    }
  return r;
}

FpMatrix FpMatrix::scaled(Fp c) const {
  PrimeField f(p_);
  FpMatrix r = *this;
  for (auto& x : r.a_) x = f.mul(x, c);
  return r;
}

std::vector<Fp> FpMatrix::apply(const std::vector<Fp>& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::Dimension, "matrix-vector shape");
  std::vector<Fp> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += static_cast<std::uint64_t>((*this)(i, j)) * v[j];
    out[i] = static_cast<Fp>(s % p_);
  }
  return out;
}

FpMatrix FpMatrix::pow(std::uint64_t e) const {
  FpMatrix r = identity(p_, rows_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool FpMatrix::is_zero() const noexcept {
  for (Fp x : a_)
    if (x) return false;
  return true;
}

std::string FpMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << ']';
  }
  os << ']';
  return os.str();
}

std::vector<std::size_t> row_reduce(FpMatrix& m) {
  PrimeField f(m.p());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    Fp iv = f.inv(m(row, col));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), iv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Fp c = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(c, m(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(const FpMatrix& m) {
  FpMatrix c = m;
  return row_reduce(c).size();
}

std::vector<std::vector<Fp>> kernel_basis(const FpMatrix& m) {
  FpMatrix r = m;
  auto piv = row_reduce(r);
  PrimeField f(m.p());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<Fp>> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Fp> v(m.cols(), 0);
    v[free] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.neg(r(i, free));
    out.push_back(std::move(v));
  }
  return out;
}

FpMatrix inverse(const FpMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::Dimension, "inverse of non-square matrix");
  std::size_t n = m.rows();
  FpMatrix aug(m.p(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) throw Error(ErrorKind::Internal, "singular matrix");
  FpMatrix inv(m.p(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

bool solve(const FpMatrix& m, const std::vector<Fp>& b, std::vector<Fp>& x) {
  if (b.size() != m.rows()) throw Error(ErrorKind::Dimension, "solve shape");
  FpMatrix aug(m.p(), m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  auto piv = row_reduce(aug);
  if (!piv.empty() && piv.back() == m.cols()) return false;
  x.assign(m.cols(), 0);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, m.cols());
  return true;
}

FpMatrix from_columns(std::uint32_t p, std::size_t n, const std::vector<std::vector<Fp>>& cols) {
  FpMatrix m(p, n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != n) throw Error(ErrorKind::Dimension, "column length");
    for (std::size_t i = 0; i < n; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

}  // namespace logcartier
