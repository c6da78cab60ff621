#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logcartier {

using Fp = std::uint32_t;

// Arithmetic in F_p for a small prime p; elements are stored reduced in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const noexcept { return p_; }
  Fp reduce(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Fp>(r < 0 ? r + p_ : r);
  }
  Fp add(Fp a, Fp b) const noexcept { Fp s = a + b; return s >= p_ ? s - p_ : s; }
  Fp sub(Fp a, Fp b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Fp neg(Fp a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Fp mul(Fp a, Fp b) const noexcept {
    return static_cast<Fp>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Fp pow(Fp a, std::uint64_t e) const noexcept;
  Fp inv(Fp a) const;
  // binom(n, k) mod p via Lucas.
  Fp binom(std::int64_t n, std::int64_t k) const noexcept;
  // n! mod p (zero once n >= p).
  Fp factorial(std::int64_t n) const noexcept;
  // signed representative in (-p/2, p/2], used for printing
  std::int64_t centered(Fp a) const noexcept;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n) noexcept;

// Dense matrix over F_p.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static FpMatrix identity(std::uint32_t p, std::size_t n);

  std::uint32_t p() const noexcept { return p_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Fp& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  Fp operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  FpMatrix operator+(const FpMatrix& o) const;
  FpMatrix operator-(const FpMatrix& o) const;
  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix scaled(Fp c) const;
  std::vector<Fp> apply(const std::vector<Fp>& v) const;
  FpMatrix pow(std::uint64_t e) const;
  FpMatrix transpose() const;
  bool is_zero() const noexcept;
  bool operator==(const FpMatrix& o) const noexcept {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  std::string str() const;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Fp> a_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(FpMatrix& m);
std::size_t rank(const FpMatrix& m);
// Basis of the right kernel {x : m x = 0}, one vector per free column.
std::vector<std::vector<Fp>> kernel_basis(const FpMatrix& m);
// Inverse of a square matrix; throws if singular.
FpMatrix inverse(const FpMatrix& m);
// Some x with m x = b, or empty optional-like flag false.
bool solve(const FpMatrix& m, const std::vector<Fp>& b, std::vector<Fp>& x);
// Matrix whose columns are the given vectors (all of length n).
FpMatrix from_columns(std::uint32_t p, std::size_t n, const std::vector<std::vector<Fp>>& cols);

}  // namespace logcartier
