#include "logcartier/monalg.hpp"

#include <sstream>

#include "logcartier/error.hpp"

namespace logcartier {

AlgElt AlgElt::constant(std::uint32_t p, std::size_t n, std::int64_t c) {
  AlgElt a(p, n);
  a.add_term(LatticePoint(n), PrimeField(p).reduce(c));
  return a;
}

AlgElt AlgElt::monomial(std::uint32_t p, const LatticePoint& u, std::int64_t c) {
  AlgElt a(p, u.size());
  a.add_term(u, PrimeField(p).reduce(c));
  return a;
}

bool AlgElt::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_zero());
}

Fp AlgElt::constant_term() const { return coeff(LatticePoint(n_)); }

Fp AlgElt::coeff(const LatticePoint& u) const {
  auto it = t_.find(u);
  return it == t_.end() ? 0 : it->second;
}

void AlgElt::add_term(const LatticePoint& u, Fp c) {
  if (u.size() != n_) throw Error(ErrorKind::Dimension, "monomial exponent length differs from ambient rank");
  c %= p_;
  if (!c) return;
  auto [it, fresh] = t_.emplace(u, c);
  if (!fresh) {
    it->second = (it->second + c) % p_;
    if (!it->second) t_.erase(it);
  }
}

void AlgElt::require_compatible(const AlgElt& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw Error(ErrorKind::Dimension, "algebra elements from different charts");
}

AlgElt AlgElt::operator+(const AlgElt& o) const {
  AlgElt r = *this;
  r += o;
  return r;
}

AlgElt& AlgElt::operator+=(const AlgElt& o) {
  require_compatible(o);
  for (const auto& [u, c] : o.t_) add_term(u, c);
  return *this;
}

AlgElt AlgElt::operator-() const {
  AlgElt r(p_, n_);
  for (const auto& [u, c] : t_) r.t_.emplace(u, p_ - c);
  return r;
}

AlgElt AlgElt::operator-(const AlgElt& o) const { return *this + (-o); }

AlgElt AlgElt::operator*(const AlgElt& o) const {
  require_compatible(o);
  AlgElt r(p_, n_);
  for (const auto& [u, a] : t_)
    for (const auto& [v, b] : o.t_)
      r.add_term(u + v, static_cast<Fp>((static_cast<std::uint64_t>(a) * b) % p_));
  return r;
}

AlgElt AlgElt::scaled(Fp c) const {
  AlgElt r(p_, n_);
  for (const auto& [u, a] : t_) r.add_term(u, static_cast<Fp>((static_cast<std::uint64_t>(a) * c) % p_));
  return r;
}

AlgElt AlgElt::shifted(const LatticePoint& s) const {
  AlgElt r(p_, n_);
  for (const auto& [u, a] : t_) r.t_.emplace(u + s, a);
  return r;
}

AlgElt AlgElt::pow(std::uint64_t e) const {
  AlgElt r = constant(p_, n_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

std::string AlgElt::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [u, c] : t_) {
    if (!first) os << " + ";
    first = false;
    if (u.is_zero()) {
      os << c;
    } else {
      if (c != 1) os << c << "*";
      os << "x^" << u.str();
    }
  }
  return os.str();
}

IndexedElt IndexedElt::operator+(const IndexedElt& o) const {
  if (degree != o.degree) throw Error(ErrorKind::Precondition, "sum of indexed elements of different degrees");
  return {degree, coeff + o.coeff};
}

IndexedElt IndexedElt::operator-(const IndexedElt& o) const {
  if (degree != o.degree) throw Error(ErrorKind::Precondition, "difference of indexed elements of different degrees");
  return {degree, coeff - o.coeff};
}

std::string IndexedElt::str() const {
  if (coeff.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [u, c] : coeff.terms()) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c << "*";
    if (!u.is_zero()) os << "x^" << u.str() << "*";
    os << "e" << degree.str();
  }
  return os.str();
}

AlgElt LogForm::coeff(const std::vector<int>& K, std::uint32_t p) const {
  auto it = terms.find(K);
  if (it != terms.end()) return it->second;
  return AlgElt(p, degree.size());
}

bool LogForm::is_zero() const {
  for (const auto& [K, f] : terms)
    if (!f.is_zero()) return false;
  return true;
}

void LogForm::add(const std::vector<int>& K, const AlgElt& f) {
  if (f.is_zero()) return;
  auto it = terms.find(K);
  if (it == terms.end()) {
    terms.emplace(K, f);
  } else {
    it->second += f;
    if (it->second.is_zero()) terms.erase(it);
  }
}

std::string LogForm::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [K, f] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << f.str() << ")";
    if (!degree.is_zero()) os << "*e" << degree.str();
    for (std::size_t i = 0; i < K.size(); ++i) os << (i ? "^" : " * ") << "dlog[" << K[i] + 1 << "]";
  }
  return os.str();
}

std::vector<Fp> weight(const Chart& chart, const LatticePoint& u, const LatticePoint& s) {
  return chart.coords_modp(u + s);
}

AlgElt derive(const Chart& chart, const AlgElt& f, int k) { return derive(chart, f, k, chart.zero()); }

AlgElt derive(const Chart& chart, const AlgElt& f, int k, const LatticePoint& s) {
  AlgElt r(f.p(), f.ambient());
  for (const auto& [u, a] : f.terms()) r.add_term(u, chart.field().mul(a, weight(chart, u, s)[k]));
  return r;
}

namespace {

void require_chart(const Chart& chart, const AlgElt& a) {
  if (a.p() != chart.p() || a.ambient() != chart.ambient_rank())
    throw Error(ErrorKind::Dimension, "element does not belong to this chart");
}

}  // namespace

IndexedElt indexed_mul(const Chart& chart, const IndexedElt& x, const IndexedElt& y) {
  require_chart(chart, x.coeff);
  require_chart(chart, y.coeff);
  return {x.degree + y.degree, x.coeff * y.coeff};
}

LogForm canonical_d(const Chart& chart, const IndexedElt& x) {
  require_chart(chart, x.coeff);
  LogForm w;
  w.j = 1;
  w.degree = x.degree;
  for (int k = 0; k < chart.r(); ++k) w.add({k}, derive(chart, x.coeff, k, x.degree));
  return w;
}

bool b_membership(const Chart& chart, const IndexedElt& x) {
  require_chart(chart, x.coeff);
  for (const auto& [u, a] : x.coeff.terms())
    if (!chart.in_Hgp(u + x.degree)) return false;
  return true;
}

std::map<std::vector<int>, IndexedElt> theta_decompose(const Chart& chart, const IndexedElt& x) {
  if (!chart.Q().is_zero()) throw Error(ErrorKind::Unsupported, "theta decomposition needs Q = 0");
  require_chart(chart, x.coeff);
  std::map<std::vector<int>, IndexedElt> out;
  for (const auto& [u, a] : x.coeff.terms()) {
    auto c = chart.coords_modp(u + x.degree);
    std::vector<int> I(c.begin(), c.end());
    auto it = out.find(I);
    if (it == out.end())
      it = out.emplace(I, IndexedElt{x.degree - chart.theta_degree(I), AlgElt(chart.p(), chart.ambient_rank())})
               .first;
    it->second.coeff.add_term(u, a);
  }
  return out;
}

IndexedElt theta_reassemble(const Chart& chart, const LatticePoint& degree,
                            const std::map<std::vector<int>, IndexedElt>& parts) {
  IndexedElt x{degree, AlgElt(chart.p(), chart.ambient_rank())};
  for (const auto& [I, b] : parts) {
    IndexedElt theta{chart.theta_degree(I), AlgElt::constant(chart.p(), chart.ambient_rank(), 1)};
    x = x + indexed_mul(chart, b, theta);
  }
  return x;
}

}  // namespace logcartier
