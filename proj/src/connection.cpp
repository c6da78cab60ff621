#include "logcartier/connection.hpp"

#include <functional>
#include <sstream>

#include "logcartier/diffop.hpp"
#include "logcartier/error.hpp"

namespace logcartier {

PolyMatrix::PolyMatrix(std::uint32_t p, std::size_t ambient, std::size_t rows, std::size_t cols)
    : p_(p), n_(ambient), rows_(rows), cols_(cols), a_(rows * cols, AlgElt(p, ambient)) {}

PolyMatrix PolyMatrix::identity(std::uint32_t p, std::size_t ambient, std::size_t n) {
  PolyMatrix m(p, ambient, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = AlgElt::constant(p, ambient, 1);
  return m;
}

PolyMatrix PolyMatrix::constant(const FpMatrix& c, std::size_t ambient) {
  PolyMatrix m(c.p(), ambient, c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) m(i, j) = AlgElt::constant(c.p(), ambient, c(i, j));
  return m;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::Dimension, "matrix shapes differ");
  PolyMatrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix r = *this;
  for (auto& x : r.a_) x = -x;
  return r;
}

PolyMatrix PolyMatrix::operator-(const PolyMatrix& o) const { return *this + (-o); }

PolyMatrix PolyMatrix::operator*(const PolyMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::Dimension, "matrix shapes do not compose");
  PolyMatrix r(p_, n_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const AlgElt& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) r(i, j) += x * o(k, j);
    }
  return r;
}

PolyMatrix PolyMatrix::times(const AlgElt& f) const {
  PolyMatrix r = *this;
  for (auto& x : r.a_) x = x * f;
  return r;
}

PolyMatrix PolyMatrix::pow(std::uint64_t e) const {
  PolyMatrix result = identity(p_, n_, rows_), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::vector<AlgElt> PolyMatrix::apply(const std::vector<AlgElt>& v) const {
  if (v.size() != cols_) throw Error(ErrorKind::Dimension, "vector length differs from column count");
  std::vector<AlgElt> r(rows_, AlgElt(p_, n_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero()) r[i] += (*this)(i, j) * v[j];
  return r;
}

bool PolyMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool PolyMatrix::is_constant() const {
  for (const auto& x : a_)
    if (!x.is_constant()) return false;
  return true;
}

FpMatrix PolyMatrix::to_fp() const {
  if (!is_constant()) throw Error(ErrorKind::Unsupported, "matrix has non-constant entries");
  FpMatrix m(p_, rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).constant_term();
  return m;
}

std::string PolyMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
  }
  os << ']';
  return os.str();
}

bool ConnModule::graded() const {
  for (const auto& m : A)
    if (!m.is_constant()) return false;
  return true;
}

bool HiggsModule::graded() const {
  for (const auto& m : theta)
    if (!m.is_constant()) return false;
  return true;
}

bool Residue::nilpotent_residues() const {
  for (bool b : pth_power_zero)
    if (!b) return false;
  return true;
}

namespace {

void check_shapes(const Chart& chart, std::size_t rank, const std::vector<PolyMatrix>& mats, const char* what) {
  if (mats.size() != static_cast<std::size_t>(chart.r()))
    throw Error(ErrorKind::Precondition, std::string(what) + ": expected one matrix per log coordinate");
  for (const auto& m : mats) {
    if (m.rows() != rank || m.cols() != rank)
      throw Error(ErrorKind::Precondition, std::string(what) + ": matrix shape differs from module rank");
    if (m.p() != chart.p() || m.ambient() != chart.ambient_rank())
      throw Error(ErrorKind::Precondition, std::string(what) + ": matrix entries belong to another chart");
  }
}

}  // namespace

void validate_connection(const Chart& chart, const ConnModule& conn) {
  check_shapes(chart, conn.rank, conn.A, "connection");
  for (const auto& m : conn.A)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& [u, c] : m(i, j).terms())
          if (!chart.in_P(u))
            throw Error(ErrorKind::Precondition, "connection coefficient e^" + u.str() + " lies outside P");
}

void validate_higgs(const Chart& chart, const HiggsModule& higgs) {
  check_shapes(chart, higgs.rank, higgs.theta, "higgs");
  for (const auto& m : higgs.theta)
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& [u, c] : m(i, j).terms())
          if (!chart.in_H(u))
            throw Error(ErrorKind::Precondition, "higgs coefficient e^" + u.str() + " lies outside H");
  if (!pairwise_commute(higgs.theta)) throw Error(ErrorKind::Precondition, "higgs matrices do not commute");
}

ConnModule constant_connection(const Chart& chart, const std::vector<FpMatrix>& lambda) {
  ConnModule c;
  c.rank = lambda.empty() ? 0 : lambda.front().rows();
  for (const auto& m : lambda) c.A.push_back(PolyMatrix::constant(m, chart.ambient_rank()));
  validate_connection(chart, c);
  return c;
}

HiggsModule constant_higgs(const Chart& chart, const std::vector<FpMatrix>& theta) {
  HiggsModule h;
  h.rank = theta.empty() ? 0 : theta.front().rows();
  for (const auto& m : theta) h.theta.push_back(PolyMatrix::constant(m, chart.ambient_rank()));
  validate_higgs(chart, h);
  return h;
}

ModuleVec basis_vector(const Chart& chart, std::size_t rank, std::size_t i) {
  ModuleVec v(rank, AlgElt(chart.p(), chart.ambient_rank()));
  v.at(i) = AlgElt::constant(chart.p(), chart.ambient_rank(), 1);
  return v;
}

ModuleVec nabla(const Chart& chart, const ConnModule& conn, int k, const ModuleVec& x) {
  ModuleVec r = conn.A.at(k).apply(x);
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += derive(chart, x[i], k);
  return r;
}

ModuleVec nabla_along(const Chart& chart, const ConnModule& conn, const std::vector<AlgElt>& lambda,
                      const ModuleVec& x) {
  ModuleVec r(x.size(), AlgElt(chart.p(), chart.ambient_rank()));
  for (int k = 0; k < chart.r(); ++k) {
    if (lambda.at(k).is_zero()) continue;
    ModuleVec y = nabla(chart, conn, k, x);
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += lambda[k] * y[i];
  }
  return r;
}

bool check_integrable(const Chart& chart, const ConnModule& conn) {
  for (int j = 0; j < chart.r(); ++j)
    for (int k = j + 1; k < chart.r(); ++k) {
      const PolyMatrix& Aj = conn.A[j];
      const PolyMatrix& Ak = conn.A[k];
      PolyMatrix curv = Aj * Ak - Ak * Aj;
      for (std::size_t a = 0; a < conn.rank; ++a)
        for (std::size_t b = 0; b < conn.rank; ++b)
          curv(a, b) += derive(chart, Ak(a, b), j) - derive(chart, Aj(a, b), k);
      if (!curv.is_zero()) return false;
    }
  return true;
}

namespace {

PolyMatrix columns_to_matrix(const Chart& chart, const std::vector<ModuleVec>& cols) {
  PolyMatrix m(chart.p(), chart.ambient_rank(), cols.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols.size(); ++i) m(i, j) = cols[j][i];
  return m;
}

template <class Op>
ModuleVec pth_iterate_minus(const Chart& chart, const Op& op, const Op& correction, const ModuleVec& x) {
  ModuleVec y = x;
  for (std::uint32_t i = 0; i < chart.p(); ++i) y = op(y);
  ModuleVec z = correction(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += -z[i];
  return y;
}

// ψ commutes with multiplication by e^u for u among the generators and a small window.
template <class Op>
bool o_linear(const Chart& chart, const Op& op, const Op& correction, const PolyMatrix& psi, std::size_t rank) {
  std::vector<LatticePoint> probes = chart.P().generators();
  for (const auto& u : chart.window(2)) probes.push_back(u);
  for (const auto& u : probes) {
    AlgElt e = AlgElt::monomial(chart.p(), u);
    for (std::size_t i = 0; i < rank; ++i) {
      ModuleVec x = basis_vector(chart, rank, i);
      for (auto& c : x) c = c * e;
      ModuleVec lhs = pth_iterate_minus(chart, op, correction, x);
      ModuleVec rhs = psi.apply(x);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

}  // namespace

PCurvature p_curvature(const Chart& chart, const ConnModule& conn) {
  validate_connection(chart, conn);
  if (!check_integrable(chart, conn))
    throw Error(ErrorKind::Precondition, "p-curvature requires an integrable connection");
  PCurvature out;
  for (int k = 0; k < chart.r(); ++k) {
    auto op = [&](const ModuleVec& x) { return nabla(chart, conn, k, x); };
    std::vector<ModuleVec> cols;
    for (std::size_t i = 0; i < conn.rank; ++i)
      cols.push_back(pth_iterate_minus(chart, op, op, basis_vector(chart, conn.rank, i)));
    PolyMatrix psi = columns_to_matrix(chart, cols);
    if (!o_linear(chart, std::function<ModuleVec(const ModuleVec&)>(op),
                  std::function<ModuleVec(const ModuleVec&)>(op), psi, conn.rank))
      throw Error(ErrorKind::Internal, "p-curvature failed the O-linearity check");
    out.psi.push_back(std::move(psi));
  }
  return out;
}

PolyMatrix p_curvature_along(const Chart& chart, const ConnModule& conn, const std::vector<AlgElt>& lambda) {
  validate_connection(chart, conn);
  if (!check_integrable(chart, conn))
    throw Error(ErrorKind::Precondition, "p-curvature requires an integrable connection");
  std::vector<AlgElt> lp = frobenius_derivation(chart, lambda);
  std::function<ModuleVec(const ModuleVec&)> op = [&](const ModuleVec& x) {
    return nabla_along(chart, conn, lambda, x);
  };
  std::function<ModuleVec(const ModuleVec&)> corr = [&](const ModuleVec& x) {
    return nabla_along(chart, conn, lp, x);
  };
  std::vector<ModuleVec> cols;
  for (std::size_t i = 0; i < conn.rank; ++i)
    cols.push_back(pth_iterate_minus(chart, op, corr, basis_vector(chart, conn.rank, i)));
  PolyMatrix psi = columns_to_matrix(chart, cols);
  if (!o_linear(chart, op, corr, psi, conn.rank))
    throw Error(ErrorKind::Internal, "p-curvature failed the O-linearity check");
  return psi;
}

AlgElt residue_reduce(const Chart& chart, int k, const AlgElt& f) {
  std::vector<LatticePoint> movers;
  for (const auto& g : chart.P().generators())
    if (chart.coords_modp(g)[k] != 0) movers.push_back(g);
  AlgElt r(chart.p(), chart.ambient_rank());
  for (const auto& [u, c] : f.terms()) {
    bool in_ideal = false;
    for (const auto& g : movers)
      if (chart.in_P(u - g)) {
        in_ideal = true;
        break;
      }
    if (!in_ideal) r.add_term(u, c);
  }
  return r;
}

Residue residue(const Chart& chart, const ConnModule& conn) {
  validate_connection(chart, conn);
  Residue out;
  auto reduce = [&](int k, PolyMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = residue_reduce(chart, k, m(i, j));
    return m;
  };
  for (int k = 0; k < chart.r(); ++k) {
    PolyMatrix rho = reduce(k, conn.A[k]);
    PolyMatrix acc = rho;
    for (std::uint32_t i = 1; i < chart.p(); ++i) acc = reduce(k, acc * rho);
    out.pth_power_zero.push_back(acc.is_zero());
    out.pth_power_identity.push_back(acc == rho);
    out.rho.push_back(std::move(rho));
  }
  return out;
}

bool pairwise_commute(const std::vector<PolyMatrix>& mats) {
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      if (!(mats[i] * mats[j] == mats[j] * mats[i])) return false;
  return true;
}

std::optional<int> nilpotence_level(const std::vector<PolyMatrix>& mats, std::optional<int> cap) {
  if (mats.empty()) return 0;
  const int limit = cap.value_or(static_cast<int>(mats.front().rows() * mats.size() * mats.front().p()));
  // Products over non-decreasing index sequences; `last` is the final index used.
  struct Prod {
    std::size_t last;
    PolyMatrix m;
  };
  std::vector<Prod> layer;
  for (std::size_t k = 0; k < mats.size(); ++k)
    if (!mats[k].is_zero()) layer.push_back({k, mats[k]});
  int len = 1;
  while (!layer.empty()) {
    if (len > limit) return std::nullopt;
    std::vector<Prod> next;
    for (const auto& pr : layer)
      for (std::size_t k = pr.last; k < mats.size(); ++k) {
        PolyMatrix q = pr.m * mats[k];
        if (!q.is_zero()) next.push_back({k, std::move(q)});
      }
    layer = std::move(next);
    ++len;
  }
  return len - 1;
}

std::optional<int> nilpotence_level(const std::vector<FpMatrix>& mats, std::optional<int> cap) {
  std::vector<PolyMatrix> pm;
  for (const auto& m : mats) pm.push_back(PolyMatrix::constant(m, 0));
  return nilpotence_level(pm, cap);
}

}  // namespace logcartier
