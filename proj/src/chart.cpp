#include "logcartier/chart.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "logcartier/error.hpp"

namespace logcartier {

namespace {

bool positive_on(const LatticePoint& w, const std::vector<LatticePoint>& gens) {
  for (const auto& g : gens)
    if (w.dot(g) <= 0) return false;
  return true;
}

std::optional<LatticePoint> find_grading(std::size_t n, const std::vector<LatticePoint>& gens) {
  if (gens.empty()) return LatticePoint(n);
  LatticePoint sum(n);
  for (const auto& g : gens) sum += g;
  if (positive_on(sum, gens)) return sum;
  for (std::int64_t bound = 1; bound <= 4; ++bound) {
    LatticePoint w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = -bound;
    for (;;) {
      if (positive_on(w, gens)) return w;
      std::size_t i = 0;
      while (i < n && w[i] == bound) w[i++] = -bound;
      if (i == n) break;
      ++w[i];
    }
  }
  return std::nullopt;
}

}  // namespace

AffineMonoid::AffineMonoid(std::size_t ambient_rank, std::vector<LatticePoint> generators) : n_(ambient_rank) {
  for (auto& g : generators) {
    if (g.size() != n_) throw Error(ErrorKind::Dimension, "monoid generator length differs from ambient rank");
    if (!g.is_zero() && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(std::move(g));
  }
  grading_ = find_grading(n_, gens_);
}

bool monoid_contains(const AffineMonoid& m, const LatticePoint& u, std::uint64_t guard) {
  if (u.size() != m.ambient_rank()) throw Error(ErrorKind::Dimension, "point length differs from monoid ambient rank");
  if (u.is_zero()) return true;
  if (m.is_zero()) return false;
  if (!m.grading()) throw Error(ErrorKind::SearchGuard, "monoid is not pointed; membership search unbounded");
  const LatticePoint& w = *m.grading();
  const auto& gens = m.generators();
  std::vector<std::int64_t> gw;
  for (const auto& g : gens) gw.push_back(w.dot(g));
  std::set<std::pair<std::size_t, LatticePoint>> failed;
  std::uint64_t nodes = 0;
  std::function<bool(std::size_t, const LatticePoint&)> search = [&](std::size_t idx, const LatticePoint& rem) -> bool {
    if (rem.is_zero()) return true;
    if (idx == gens.size()) return false;
    std::int64_t h = w.dot(rem);
    if (h <= 0) return false;
    if (++nodes > guard) throw Error(ErrorKind::SearchGuard, "membership search guard exceeded");
    if (failed.count({idx, rem})) return false;
    std::int64_t top = h / gw[idx];
    for (std::int64_t a = top; a >= 0; --a)
      if (search(idx + 1, rem - gens[idx] * a)) return true;
    failed.insert({idx, rem});
    return false;
  };
  return search(0, u);
}

Lattice group_lattice(const AffineMonoid& m) { return Lattice(m.ambient_rank(), m.generators()); }

std::vector<std::vector<int>> box_indices(std::uint32_t p, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> I(r, 0);
  for (;;) {
    out.push_back(I);
    int k = r - 1;
    while (k >= 0 && I[k] == static_cast<int>(p) - 1) I[k--] = 0;
    if (k < 0) break;
    ++I[k];
  }
  return out;
}

namespace {

FpMatrix modp_rows(std::uint32_t p, std::size_t d, const std::vector<std::vector<std::int64_t>>& rows) {
  PrimeField f(p);
  FpMatrix m(p, rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = f.reduce(rows[i][j]);
  return m;
}

struct Analysis {
  ChartDiagnostics diag;
  std::size_t d = 0;
  std::vector<std::vector<std::int64_t>> qc, mc;
};

Analysis analyse(const ChartSpec& s) {
  Analysis a;
  auto fail = [&](const std::string& field, const std::string& what) {
    if (a.diag.problems.empty()) a.diag.field = field;
    a.diag.problems.push_back(field + ": " + what);
  };
  if (!is_prime(s.p)) fail("p", "not a prime");
  if (s.ambient_rank == 0) fail("ambient_rank", "must be positive");
  auto check_len = [&](const std::string& field, const std::vector<LatticePoint>& vs) {
    for (const auto& v : vs)
      if (v.size() != s.ambient_rank) {
        fail(field, "vector " + v.str() + " has length " + std::to_string(v.size()) + ", expected " +
                        std::to_string(s.ambient_rank));
        return false;
      }
    return true;
  };
  bool lens = check_len("P_generators", s.P_generators) & check_len("Q_generators", s.Q_generators) &
              check_len("log_coords", s.log_coords);
  if (!a.diag.problems.empty() || !lens) return a;

  AffineMonoid P(s.ambient_rank, s.P_generators);
  if (P.is_zero()) {
    fail("P_generators", "no nonzero generators");
    return a;
  }
  if (!P.grading()) {
    fail("P_generators", "monoid is not pointed (no strictly positive grading)");
    return a;
  }
  for (const auto& q : s.Q_generators)
    if (!monoid_contains(P, q)) {
      fail("Q_generators", "Q not inside P: " + q.str() + " is not in P");
      return a;
    }
  Lattice pgp = group_lattice(P);
  a.d = pgp.rank();
  for (const auto& q : s.Q_generators) a.qc.push_back(*pgp.coordinates(q));
  PrimeField f(s.p);
  std::size_t rank_z = integer_rank(s.ambient_rank, s.Q_generators);
  std::size_t rank_p = a.qc.empty() ? 0 : rank(modp_rows(s.p, a.d, a.qc));
  if (rank_z != rank_p) {
    fail("Q_generators", "torsion of P^gp/Q^gp has order divisible by p");
    return a;
  }
  int r = static_cast<int>(a.d - rank_p);
  a.diag.r = r;
  for (const auto& m : s.log_coords) {
    auto c = pgp.coordinates(m);
    if (!c) {
      fail("log_coords", m.str() + " is not in P^gp");
      return a;
    }
    a.mc.push_back(*c);
  }
  if (static_cast<int>(s.log_coords.size()) != r) {
    fail("log_coords", "log_coords not a basis: expected " + std::to_string(r) + " coordinates, got " +
                           std::to_string(s.log_coords.size()));
    return a;
  }
  auto all = a.qc;
  all.insert(all.end(), a.mc.begin(), a.mc.end());
  if (!all.empty() && rank(modp_rows(s.p, a.d, all)) != a.d) {
    fail("log_coords", "log_coords not a basis of F_p ⊗ (P^gp/Q^gp)");
    return a;
  }
  a.diag.valid = true;
  return a;
}

}  // namespace

ChartDiagnostics validate_chart(const ChartSpec& spec) { return analyse(spec).diag; }

Chart::Chart(const ChartSpec& spec) : spec_(spec), field_(is_prime(spec.p) ? spec.p : 2) {
  Analysis a = analyse(spec);
  if (!a.diag.valid) {
    std::string msg;
    for (std::size_t i = 0; i < a.diag.problems.size(); ++i) msg += (i ? "; " : "") + a.diag.problems[i];
    auto colon = msg.find(": ");
    throw ChartError(a.diag.field, colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  P_ = AffineMonoid(spec.ambient_rank, spec.P_generators);
  Q_ = AffineMonoid(spec.ambient_rank, spec.Q_generators);
  m_ = spec.log_coords;
  r_ = a.diag.r;
  pgp_ = group_lattice(P_);
  std::vector<LatticePoint> hgens;
  for (const auto& b : pgp_.basis()) hgens.push_back(b * static_cast<std::int64_t>(p()));
  for (const auto& q : Q_.generators()) hgens.push_back(q);
  hgp_ = Lattice(ambient_rank(), hgens);

  // Basis of F_p^d: m̄_1..m̄_r followed by an echelon basis of the image of Q.
  std::size_t d = a.d;
  FpMatrix B(p(), d, d);
  for (int k = 0; k < r_; ++k)
    for (std::size_t j = 0; j < d; ++j) B(k, j) = field_.reduce(a.mc[k][j]);
  if (!a.qc.empty()) {
    FpMatrix q = modp_rows(p(), d, a.qc);
    auto piv = row_reduce(q);
    for (std::size_t i = 0; i < piv.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) B(r_ + i, j) = q(i, j);
  }
  to_logc_ = inverse(B).transpose();

  for (const auto& I : box_indices(p(), r_)) reps_.push_back(theta_degree(I));
}

std::vector<Fp> Chart::coords_modp(const LatticePoint& u) const {
  auto x = pgp_.coordinates(u);
  if (!x) throw Error(ErrorKind::NotInLattice, "point " + u.str() + " is not in P^gp");
  std::vector<Fp> xv(x->size());
  for (std::size_t i = 0; i < x->size(); ++i) xv[i] = field_.reduce((*x)[i]);
  auto y = to_logc_.apply(xv);
  y.resize(r_);
  return y;
}

bool Chart::in_Hgp(const LatticePoint& u) const { return hgp_.contains(u); }

LatticePoint Chart::theta_degree(const std::vector<int>& I) const {
  if (static_cast<int>(I.size()) != r_) throw Error(ErrorKind::Dimension, "multi-index length differs from r");
  LatticePoint s(ambient_rank());
  for (int k = 0; k < r_; ++k) s += m_[k] * I[k];
  return s;
}

std::vector<LatticePoint> Chart::window(std::int64_t bound) const {
  std::vector<LatticePoint> out;
  std::size_t n = ambient_rank();
  LatticePoint u(n);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i == n) {
      if (in_P(u)) out.push_back(u);
      return;
    }
    for (std::int64_t v = -left; v <= left; ++v) {
      u[i] = v;
      rec(i + 1, left - (v < 0 ? -v : v));
    }
    u[i] = 0;
  };
  rec(0, bound);
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.l1() != b.l1()) return a.l1() < b.l1();
    return a < b;
  });
  return out;
}

bool Chart::same_as(const Chart& o) const noexcept {
  return p() == o.p() && P_.generators() == o.P_.generators() && Q_.generators() == o.Q_.generators() &&
         m_ == o.m_;
}

FrobeniusData frobenius_data(const Chart& chart) {
  FrobeniusData fd;
  fd.Hgp = chart.Hgp();
  fd.coset_reps = chart.coset_reps();
  const auto& gens = chart.P().generators();
  const std::int64_t p = chart.p();
  // Minimal elements have every representation with coefficients < p.
  std::set<LatticePoint> cand;
  std::vector<std::int64_t> a(gens.size(), 0);
  for (;;) {
    LatticePoint x = chart.zero();
    for (std::size_t i = 0; i < gens.size(); ++i) x += gens[i] * a[i];
    cand.insert(x);
    std::size_t i = 0;
    while (i < a.size() && a[i] == p - 1) a[i++] = 0;
    if (i == a.size()) break;
    ++a[i];
  }
  std::map<std::vector<Fp>, std::vector<LatticePoint>> by_coset;
  for (const auto& x : cand) by_coset[chart.coords_modp(x)].push_back(x);
  for (const auto& rep : fd.coset_reps) {
    CosetReport cr;
    cr.rep = rep;
    cr.label = chart.coords_modp(rep);
    const auto& members = by_coset[cr.label];
    for (const auto& x : members) {
      bool minimal = true;
      for (const auto& y : members)
        if (y != x && chart.in_P(x - y)) {
          minimal = false;
          break;
        }
      if (minimal) cr.minimal_elements.push_back(x);
    }
    fd.cosets.push_back(std::move(cr));
  }
  return fd;
}

}  // namespace logcartier
