#include "logcartier/diffop.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "logcartier/error.hpp"

namespace logcartier {

namespace {

AlgElt zero_of(const Chart& chart) { return AlgElt(chart.p(), chart.ambient_rank()); }
AlgElt one_of(const Chart& chart) { return AlgElt::constant(chart.p(), chart.ambient_rank(), 1); }

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

MultiIndex add_mi(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c(a);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += b[i];
  return c;
}

MultiIndex sub_mi(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex c(a);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
  return c;
}

MultiIndex unit(int r, int k) {
  MultiIndex e(r, 0);
  e[k] = 1;
  return e;
}

// All K with 0 ≤ K ≤ I.
std::vector<MultiIndex> below(const MultiIndex& I) {
  std::vector<MultiIndex> out;
  MultiIndex K(I.size(), 0);
  for (;;) {
    out.push_back(K);
    std::size_t i = 0;
    while (i < K.size() && K[i] == I[i]) K[i++] = 0;
    if (i == K.size()) break;
    ++K[i];
  }
  return out;
}

Fp multi_binom(const PrimeField& f, const MultiIndex& I, const MultiIndex& K) {
  Fp b = 1;
  for (std::size_t i = 0; i < I.size(); ++i) b = f.mul(b, f.binom(I[i], K[i]));
  return b;
}

void require_zeta(const PDOp& phi, const char* what) {
  if (phi.basis != OpBasis::Zeta) throw Error(ErrorKind::Precondition, std::string(what) + " needs the ζ-dual basis");
}

}  // namespace

std::vector<MultiIndex> indices_up_to(int r, int order) {
  std::vector<MultiIndex> out;
  MultiIndex I(r, 0);
  std::function<void(int, int)> rec = [&](int k, int left) {
    if (k == r) {
      out.push_back(I);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      I[k] = v;
      rec(k + 1, left - v);
    }
    I[k] = 0;
  };
  rec(0, order);
  std::stable_sort(out.begin(), out.end(),
                   [](const MultiIndex& a, const MultiIndex& b) { return weight_of(a) < weight_of(b); });
  return out;
}

int default_order(const Chart& chart) { return 2 * static_cast<int>(chart.p()) - 1; }

PDOp PDOp::zero(const Chart& chart, int order_bound, OpBasis basis) {
  return zero(chart, chart.zero(), order_bound, basis);
}

PDOp PDOp::zero(const Chart&, const LatticePoint& degree, int order_bound, OpBasis basis) {
  PDOp op;
  op.degree = degree;
  op.order_bound = order_bound;
  op.basis = basis;
  return op;
}

PDOp PDOp::multiplication(const Chart& chart, const IndexedElt& a, int order_bound) {
  PDOp op = zero(chart, a.degree, order_bound);
  op.add(MultiIndex(chart.r(), 0), a.coeff);
  return op;
}

PDOp PDOp::basis_element(const Chart& chart, const MultiIndex& I, OpBasis basis, int order_bound) {
  PDOp op = zero(chart, order_bound, basis);
  op.add(I, one_of(chart));
  return op;
}

void PDOp::add(const MultiIndex& I, const AlgElt& f) {
  if (f.is_zero()) return;
  if (weight_of(I) > order_bound) throw Error(ErrorKind::Overflow, "operator term beyond order bound");
  auto it = terms.find(I);
  if (it == terms.end()) {
    terms.emplace(I, f);
  } else {
    it->second += f;
    if (it->second.is_zero()) terms.erase(it);
  }
}

PDOp PDOp::operator+(const PDOp& o) const {
  if (basis != o.basis) throw Error(ErrorKind::Precondition, "operator sum across bases");
  if (degree != o.degree) throw Error(ErrorKind::Precondition, "operator sum across degrees");
  PDOp r = *this;
  r.order_bound = std::max(order_bound, o.order_bound);
  for (const auto& [I, f] : o.terms) r.add(I, f);
  return r;
}

PDOp PDOp::operator-(const PDOp& o) const {
  PDOp neg = o;
  neg.terms.clear();
  for (const auto& [I, f] : o.terms) neg.terms.emplace(I, -f);
  return *this + neg;
}

PDOp PDOp::scaled(Fp c) const {
  PDOp r = *this;
  r.terms.clear();
  for (const auto& [I, f] : terms) r.add(I, f.scaled(c));
  return r;
}

bool PDOp::is_zero() const { return terms.empty(); }

int PDOp::order() const {
  int o = -1;
  for (const auto& [I, f] : terms) o = std::max(o, weight_of(I));
  return o;
}

std::string PDOp::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [I, f] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << f.str() << ")";
    if (!degree.is_zero()) os << "*e" << degree.str();
    os << " * D" << (basis == OpBasis::Zeta ? "^" : "_") << "[";
    for (std::size_t i = 0; i < I.size(); ++i) os << (i ? "," : "") << I[i];
    os << "]";
  }
  return os.str();
}

BasisChange eta_zeta_change(std::uint32_t p, int r, int order_bound) {
  PrimeField f(p);
  BasisChange bc;
  bc.p = p;
  bc.r = r;
  bc.order_bound = order_bound;
  int n = order_bound;
  bc.s1.assign(n + 1, std::vector<Fp>(n + 1, 0));
  bc.s2.assign(n + 1, std::vector<Fp>(n + 1, 0));
  bc.s1[0][0] = bc.s2[0][0] = 1;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k <= m + 1; ++k) {
      // falling factorial x(x-1)...(x-m) and its inverse expansion
      Fp a = k > 0 ? bc.s1[m][k - 1] : 0;
      Fp b = k <= m ? f.mul(f.reduce(m), bc.s1[m][k]) : 0;
      bc.s1[m + 1][k] = f.sub(a, b);
      Fp c = k > 0 ? bc.s2[m][k - 1] : 0;
      Fp d = k <= m ? f.mul(f.reduce(k), bc.s2[m][k]) : 0;
      bc.s2[m + 1][k] = f.add(c, d);
    }
  bc.indices = indices_up_to(r, order_bound);
  std::size_t N = bc.indices.size();
  bc.eta_to_zeta = FpMatrix(p, N, N);
  bc.zeta_to_eta = FpMatrix(p, N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Fp a = 1, b = 1;
      for (int k = 0; k < r; ++k) {
        a = f.mul(a, bc.s1[bc.indices[i][k]][bc.indices[j][k]]);
        b = f.mul(b, bc.s2[bc.indices[i][k]][bc.indices[j][k]]);
      }
      bc.eta_to_zeta(i, j) = a;
      bc.zeta_to_eta(i, j) = b;
    }
  return bc;
}

namespace {

PDOp convert(const Chart& chart, const PDOp& phi, OpBasis target) {
  if (phi.basis == target) return phi;
  int top = std::max(phi.order(), 0);
  BasisChange bc = eta_zeta_change(chart.p(), chart.r(), top);
  const auto& table = target == OpBasis::Zeta ? bc.s1 : bc.s2;
  PDOp out = PDOp::zero(chart, phi.degree, phi.order_bound, target);
  for (const auto& [I, f] : phi.terms)
    for (const auto& J : below(I)) {
      Fp c = 1;
      for (int k = 0; k < chart.r(); ++k) c = chart.field().mul(c, table[I[k]][J[k]]);
      if (c) out.add(J, f.scaled(c));
    }
  return out;
}

}  // namespace

PDOp to_zeta(const Chart& chart, const PDOp& phi) { return convert(chart, phi, OpBasis::Zeta); }
PDOp to_eta(const Chart& chart, const PDOp& phi) { return convert(chart, phi, OpBasis::Eta); }

IndexedElt apply(const Chart& chart, const PDOp& phi, const IndexedElt& x) {
  require_zeta(phi, "apply");
  const PrimeField& f = chart.field();
  IndexedElt out{phi.degree + x.degree, zero_of(chart)};
  std::vector<std::pair<LatticePoint, std::vector<Fp>>> w;
  for (const auto& [u, a] : x.coeff.terms()) w.emplace_back(u, weight(chart, u, x.degree));
  for (const auto& [I, g] : phi.terms) {
    AlgElt dx = zero_of(chart);
    for (const auto& [u, c] : w) {
      Fp v = x.coeff.coeff(u);
      for (int k = 0; k < chart.r(); ++k) v = f.mul(v, f.pow(c[k], I[k]));
      dx.add_term(u, v);
    }
    out.coeff += g * dx;
  }
  return out;
}

PDOp compose_exact(const Chart& chart, const PDOp& phi, const PDOp& psi) {
  require_zeta(phi, "compose");
  require_zeta(psi, "compose");
  const PrimeField& f = chart.field();
  PDOp out = PDOp::zero(chart, phi.degree + psi.degree, phi.order_bound + psi.order_bound);
  for (const auto& [J, g] : psi.terms) {
    std::vector<std::pair<LatticePoint, std::vector<Fp>>> w;
    for (const auto& [u, a] : g.terms()) w.emplace_back(u, weight(chart, u, psi.degree));
    for (const auto& [I, fi] : phi.terms)
      for (const auto& K : below(I)) {
        Fp b = multi_binom(f, I, K);
        if (!b) continue;
        MultiIndex L = sub_mi(I, K);
        AlgElt h = zero_of(chart);
        for (const auto& [u, c] : w) {
          Fp v = g.coeff(u);
          for (int k = 0; k < chart.r(); ++k) v = f.mul(v, f.pow(c[k], L[k]));
          h.add_term(u, v);
        }
        out.add(add_mi(K, J), (fi * h).scaled(b));
      }
  }
  return out;
}

PDOp narrow(const PDOp& phi, int order_bound, bool allow_truncation) {
  PDOp out = phi;
  out.order_bound = order_bound;
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    if (weight_of(it->first) > order_bound) {
      if (!allow_truncation) throw Error(ErrorKind::Overflow, "composition exceeds the order bound");
      it = out.terms.erase(it);
    } else {
      ++it;
    }
  }
  return out;
}

PDOp compose(const Chart& chart, const PDOp& phi, const PDOp& psi, ComposeOptions opts) {
  return narrow(compose_exact(chart, phi, psi), std::max(phi.order_bound, psi.order_bound), opts.allow_truncation);
}

PDOp commutator(const Chart& chart, const PDOp& phi, const PDOp& psi) {
  PDOp a = compose_exact(chart, phi, psi), b = compose_exact(chart, psi, phi);
  b.order_bound = a.order_bound;
  return narrow(a - b, std::max(phi.order_bound, psi.order_bound), false);
}

PDOp derivation_op(const Chart& chart, const std::vector<AlgElt>& lambda, int order_bound) {
  if (static_cast<int>(lambda.size()) != chart.r()) throw Error(ErrorKind::Dimension, "derivation needs r coefficients");
  PDOp d = PDOp::zero(chart, order_bound);
  for (int k = 0; k < chart.r(); ++k) d.add(unit(chart.r(), k), lambda[k]);
  return d;
}

std::vector<AlgElt> frobenius_derivation(const Chart& chart, const std::vector<AlgElt>& lambda) {
  PDOp d = derivation_op(chart, lambda, 1);
  std::vector<AlgElt> mu;
  for (const auto& l : lambda) {
    IndexedElt x{chart.zero(), l};
    for (std::uint32_t i = 0; i + 1 < chart.p(); ++i) x = apply(chart, d, x);
    mu.push_back(x.coeff + l.pow(chart.p()));
  }
  return mu;
}

PthPowerReport pth_power_identities(const Chart& chart, const std::vector<AlgElt>& lambda, const AlgElt& a,
                                    const std::vector<LatticePoint>& window) {
  const PrimeField& f = chart.field();
  const int p = static_cast<int>(chart.p());
  const int bound = default_order(chart);
  PthPowerReport rep;
  PDOp D = derivation_op(chart, lambda, bound);
  PDOp Da = D + PDOp::multiplication(chart, {chart.zero(), a}, bound);

  std::vector<PDOp> Dpow{PDOp::basis_element(chart, MultiIndex(chart.r(), 0), OpBasis::Zeta, bound)};
  std::vector<PDOp> Dapow{Dpow[0]};
  std::vector<AlgElt> b{one_of(chart)};
  for (int k = 1; k <= p; ++k) {
    Dpow.push_back(compose(chart, D, Dpow.back()));
    Dapow.push_back(compose(chart, Da, Dapow.back()));
    b.push_back(apply(chart, Da, {chart.zero(), b.back()}).coeff);
  }
  rep.expansion_ok = true;
  for (int k = 0; k <= p; ++k) {
    PDOp rhs = PDOp::zero(chart, bound);
    for (int i = 0; i <= k; ++i) {
      Fp c = f.binom(k, i);
      if (!c) continue;
      rhs = rhs + compose(chart, PDOp::multiplication(chart, {chart.zero(), b[i]}, bound), Dpow[k - i]).scaled(c);
    }
    if (!(rhs == Dapow[k])) rep.expansion_ok = false;
  }
  PDOp pth = Dpow[p] + PDOp::multiplication(chart, {chart.zero(), b[p]}, bound);
  rep.pth_ok = pth == Dapow[p];

  rep.dp = frobenius_derivation(chart, lambda);
  PDOp Dp = derivation_op(chart, rep.dp, bound);
  rep.dp_equals_d = Dp == D;
  rep.window_ok = rep.hochschild_ok = true;
  for (const auto& u : window) {
    IndexedElt x{chart.zero(), AlgElt::monomial(chart.p(), u)};
    IndexedElt lhs = apply(chart, Dapow[p], x);
    IndexedElt rhs = apply(chart, Dpow[p], x) + IndexedElt{chart.zero(), b[p] * x.coeff};
    if (!(lhs == rhs)) rep.window_ok = false;
    if (!(apply(chart, Dpow[p], x) == apply(chart, Dp, x))) rep.hochschild_ok = false;
  }
  return rep;
}

CommutingLemmaReport commuting_power_lemma(const FpMatrix& alpha, const FpMatrix& beta) {
  const std::uint32_t p = alpha.p();
  CommutingLemmaReport rep;
  std::vector<FpMatrix> bs{beta};
  for (std::uint32_t n = 1; n < p; ++n) bs.push_back(alpha * bs.back() - bs.back() * alpha);
  rep.hypothesis = true;
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = i + 1; j < bs.size(); ++j)
      if (!(bs[i] * bs[j] == bs[j] * bs[i])) rep.hypothesis = false;
  rep.identity = (alpha + beta).pow(p) == alpha.pow(p) + bs[p - 1] + beta.pow(p);
  return rep;
}

bool center_membership(const Chart& chart, const PDOp& phi) {
  if (phi.basis != OpBasis::Eta) return center_membership(chart, to_eta(chart, phi));
  for (const auto& [N, fN] : phi.terms) {
    for (int x : N)
      if (x % static_cast<int>(chart.p()) != 0) return false;
    if (!b_membership(chart, {phi.degree, fN})) return false;
  }
  return true;
}

CenterWindowReport center_window_check(const Chart& chart, const LatticePoint& s,
                                       const std::vector<LatticePoint>& window, int order) {
  const int r = chart.r();
  const std::uint32_t p = chart.p();
  auto idx = indices_up_to(r, order);
  std::vector<std::pair<MultiIndex, LatticePoint>> domain;
  for (const auto& N : idx)
    for (const auto& u : window) domain.emplace_back(N, u);

  std::vector<PDOp> gens;
  for (int k = 0; k < r; ++k) {
    IndexedElt theta{chart.log_coords()[k], one_of(chart)};
    gens.push_back(PDOp::multiplication(chart, theta, order));
    gens.push_back(PDOp::basis_element(chart, unit(r, k), OpBasis::Zeta, order));
  }
  // Output coordinates keyed by (generator, multi-index, monomial).
  std::map<std::tuple<std::size_t, MultiIndex, LatticePoint>, std::size_t> keys;
  std::vector<std::vector<std::pair<std::size_t, Fp>>> cols;
  for (const auto& [N, u] : domain) {
    PDOp phi = PDOp::zero(chart, s, order, OpBasis::Eta);
    phi.add(N, AlgElt::monomial(p, u));
    PDOp z = to_zeta(chart, phi);
    std::vector<std::pair<std::size_t, Fp>> col;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      PDOp c = commutator(chart, z, gens[g]);
      for (const auto& [I, f] : c.terms)
        for (const auto& [v, a] : f.terms()) {
          auto key = std::make_tuple(g, I, v);
          auto it = keys.emplace(key, keys.size()).first;
          col.emplace_back(it->second, a);
        }
    }
    cols.push_back(std::move(col));
  }
  FpMatrix M(p, keys.size(), domain.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, a] : cols[j]) M(i, j) = a;

  CenterWindowReport rep;
  rep.domain_dim = domain.size();
  rep.kernel_dim = domain.size() - rank(M);
  rep.predicted_in_kernel = true;
  for (std::size_t j = 0; j < domain.size(); ++j) {
    const auto& [N, u] = domain[j];
    bool pred = chart.in_Hgp(u + s);
    for (int x : N) pred = pred && x % static_cast<int>(p) == 0;
    if (!pred) continue;
    ++rep.predicted_dim;
    if (!cols[j].empty()) rep.predicted_in_kernel = false;
  }
  return rep;
}

SplitElt split_mul(const Chart& chart, const SplitElt& x, const SplitElt& y) {
  const int p = static_cast<int>(chart.p());
  SplitElt out;
  for (const auto& [I, a] : x)
    for (const auto& [J, b] : y) {
      MultiIndex K(I.size()), C(I.size());
      for (std::size_t k = 0; k < I.size(); ++k) {
        K[k] = (I[k] + J[k]) % p;
        C[k] = (I[k] + J[k]) / p;
      }
      // θ^{pC} = e_{pC·m} lies in B and moves to the left factor.
      IndexedElt carry{chart.theta_degree(C) * p, one_of(chart)};
      IndexedElt c = indexed_mul(chart, indexed_mul(chart, a, b), carry);
      auto it = out.find(K);
      if (it == out.end()) {
        if (!c.is_zero()) out.emplace(K, c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  return out;
}

AzumayaReport azumaya_beta_check(const Chart& chart) {
  if (!chart.Q().is_zero()) throw Error(ErrorKind::Unsupported, "Azumaya check needs Q = 0");
  const PrimeField& f = chart.field();
  const int r = chart.r();
  const int p = static_cast<int>(chart.p());
  AzumayaReport rep;
  rep.window = box_indices(chart.p(), r);
  const auto& M = rep.window;
  const int bound = std::max(r * (p - 1), 1);
  MultiIndex zero(r, 0);

  auto one_split = [&]() {
    return SplitElt{{zero, IndexedElt{chart.zero(), one_of(chart)}}};
  };
  std::vector<SplitElt> beta_i;
  for (int i = 0; i < r; ++i) {
    SplitElt b;
    b.emplace(unit(r, i), IndexedElt{-chart.log_coords()[i], one_of(chart)});
    b.emplace(zero, IndexedElt{chart.zero(), AlgElt::constant(chart.p(), chart.ambient_rank(), -1)});
    beta_i.push_back(std::move(b));
  }

  rep.beta_formula_ok = rep.theta_triangular = rep.alpha_triangular = rep.action_ok = true;
  std::vector<SplitElt> betas;
  for (const auto& J : M) {
    SplitElt bj = one_split();
    for (int i = 0; i < r; ++i)
      for (int t = 0; t < J[i]; ++t) bj = split_mul(chart, bj, beta_i[i]);
    SplitElt closed;
    for (const auto& I : below(J)) {
      int sign = (weight_of(J) - weight_of(I)) % 2 ? -1 : 1;
      Fp c = f.mul(multi_binom(f, J, I), f.reduce(sign));
      closed.emplace(I, IndexedElt{-chart.theta_degree(I), AlgElt::constant(chart.p(), chart.ambient_rank(), c)});
    }
    if (bj != closed) {
      rep.beta_formula_ok = false;
      rep.failures.push_back("closed form of beta^J differs from the product expansion");
    }
    betas.push_back(bj);
  }

  for (std::size_t a = 0; a < M.size(); ++a) {
    const auto& J = M[a];
    std::vector<IndexedElt> row;
    for (const auto& I : M) {
      auto it = betas[a].find(I);
      IndexedElt e = it == betas[a].end() ? IndexedElt{-chart.theta_degree(I), zero_of(chart)} : it->second;
      if (!leq(I, J) && !e.is_zero()) rep.theta_triangular = false;
      if (I == J && !(e == IndexedElt{-chart.theta_degree(J), one_of(chart)})) rep.theta_triangular = false;
      row.push_back(e);
    }
    rep.to_theta.push_back(std::move(row));
  }

  for (std::size_t a = 0; a < M.size(); ++a) {
    const auto& J = M[a];
    std::vector<PDOp> row;
    for (const auto& I : M) {
      PDOp x = to_zeta(chart, PDOp::basis_element(chart, I, OpBasis::Eta, bound));
      PDOp acc = PDOp::zero(chart, bound);
      for (const auto& [L, aL] : betas[a]) {
        PDOp right = PDOp::multiplication(chart, {chart.theta_degree(L), one_of(chart)}, bound);
        PDOp left = PDOp::multiplication(chart, aL, bound);
        acc = acc + compose(chart, left, compose(chart, x, right));
      }
      PDOp got = to_eta(chart, acc);
      PDOp expected = PDOp::zero(chart, bound, OpBasis::Eta);
      if (leq(J, I)) {
        Fp c = 1;
        for (int k = 0; k < r; ++k) c = f.mul(c, f.mul(f.factorial(I[k]), f.inv(f.factorial(I[k] - J[k]))));
        expected.add(sub_mi(I, J), AlgElt::constant(chart.p(), chart.ambient_rank(), c));
      }
      if (!(got == expected)) {
        rep.action_ok = false;
        rep.failures.push_back("beta^J(D_I) differs from I!/(I-J)! D_{I-J}");
      }
      if (!leq(J, I) && !got.is_zero()) rep.alpha_triangular = false;
      if (I == J) {
        auto it = got.terms.find(zero);
        bool unit_diag = got.terms.size() == 1 && it != got.terms.end() && it->second.is_constant() &&
                         it->second.constant_term() != 0;
        if (!unit_diag) rep.alpha_triangular = false;
      }
      row.push_back(got);
    }
    rep.to_alpha.push_back(std::move(row));
  }
  return rep;
}

}  // namespace logcartier
