#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "logcartier/diffop.hpp"
#include "logcartier/error.hpp"

using namespace logcartier;
using namespace fixtures;

namespace {

AlgElt one(const Chart& c) { return AlgElt::constant(c.p(), c.ambient_rank(), 1); }
AlgElt mono(const Chart& c, LatticePoint u, std::int64_t k = 1) { return AlgElt::monomial(c.p(), u, k); }

PDOp Dz(const Chart& c, MultiIndex I, int bound) { return PDOp::basis_element(c, I, OpBasis::Zeta, bound); }
PDOp De(const Chart& c, MultiIndex I, int bound) { return PDOp::basis_element(c, I, OpBasis::Eta, bound); }
PDOp mult(const Chart& c, LatticePoint s, AlgElt a, int bound) {
  return PDOp::multiplication(c, IndexedElt{std::move(s), std::move(a)}, bound);
}

PDOp random_op(const Chart& c, std::mt19937& rng, int order, int bound, LatticePoint degree) {
  PDOp op = PDOp::zero(c, degree, bound);
  auto idx = indices_up_to(c.r(), order);
  std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
  for (int t = 0; t < 3; ++t) op.add(idx[pick(rng)], random_elt(c, rng, 2, 3));
  return op;
}

// Exact rationals for the series oracle.
struct Q {
  __int128 n = 0, d = 1;
  static __int128 g(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  Q norm() const {
    __int128 k = g(n, d);
    if (k == 0) return {0, 1};
    Q r{n / k, d / k};
    if (r.d < 0) r = {-r.n, -r.d};
    return r;
  }
  Q operator+(Q o) const { return Q{n * o.d + o.n * d, d * o.d}.norm(); }
  Q operator*(Q o) const { return Q{n * o.n, d * o.d}.norm(); }
};

// Coefficient of η^[n] in ζ^[j] = (log(1+η))^j / j!, computed by series arithmetic.
std::vector<std::vector<std::int64_t>> zeta_in_eta(int top) {
  std::vector<Q> logs(top + 1);
  for (int n = 1; n <= top; ++n) logs[n] = Q{(n % 2) ? 1 : -1, n};
  std::vector<std::vector<std::int64_t>> out(top + 1, std::vector<std::int64_t>(top + 1, 0));
  std::vector<Q> pw(top + 1);
  pw[0] = Q{1, 1};
  __int128 jf = 1;
  for (int j = 0; j <= top; ++j) {
    if (j > 0) {
      std::vector<Q> next(top + 1);
      for (int a = 0; a <= top; ++a)
        for (int b = 1; a + b <= top; ++b) next[a + b] = next[a + b] + pw[a] * logs[b];
      pw = next;
      jf *= j;
    }
    __int128 nf = 1;
    for (int n = 0; n <= top; ++n) {
      if (n > 0) nf *= n;
      Q c = pw[n] * Q{nf, jf};
      REQUIRE(c.d == 1);
      out[j][n] = static_cast<std::int64_t>(c.n);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("apply examples") {
  Chart c = line_chart(3);
  IndexedElt x{{1}, mono(c, {1})};
  CHECK(apply(c, Dz(c, {1}, 5), x) == IndexedElt{{1}, mono(c, {1}, 2)});
  CHECK(apply(c, Dz(c, {1}, 5), IndexedElt{{0}, one(c)}).is_zero());
  for (int u = -4; u <= 7; ++u)
    for (int s = -2; s <= 2; ++s) {
      IndexedElt y{{s}, mono(c, {u})};
      CHECK(apply(c, Dz(c, {3}, 5), y) == apply(c, Dz(c, {1}, 5), y));
    }
  CHECK_THROWS_AS(apply(c, De(c, {1}, 5), x), Error);
}

TEST_CASE("composition examples") {
  Chart c = line_chart(3);
  PDOp D = Dz(c, {1}, 5);
  PDOp t = mult(c, {0}, mono(c, {1}), 5);
  CHECK(commutator(c, D, t) == t);
  PDOp theta = mult(c, {1}, one(c), 5);
  CHECK(commutator(c, D, theta) == theta);
  CHECK(compose(c, Dz(c, {2}, 5), Dz(c, {3}, 5)) == Dz(c, {5}, 5));
  CHECK_THROWS_AS(compose(c, Dz(c, {3}, 5), Dz(c, {3}, 5)), Error);
  ComposeOptions trunc;
  trunc.allow_truncation = true;
  CHECK(compose(c, Dz(c, {3}, 5), Dz(c, {3}, 5), trunc).is_zero());
}

TEST_CASE("composition is associative and unital") {
  std::mt19937 rng(17);
  for (const Chart& c : {line_chart(3), cone_chart(2)}) {
    PDOp id = Dz(c, MultiIndex(c.r(), 0), 9);
    for (int t = 0; t < 20; ++t) {
      PDOp a = random_op(c, rng, 2, 9, random_point(c.ambient_rank(), rng, 2));
      PDOp b = random_op(c, rng, 2, 9, random_point(c.ambient_rank(), rng, 2));
      PDOp d = random_op(c, rng, 2, 9, random_point(c.ambient_rank(), rng, 2));
      CHECK(compose(c, compose(c, a, b), d) == compose(c, a, compose(c, b, d)));
      CHECK(compose(c, id, a) == a);
      CHECK(compose(c, a, id) == a);
    }
  }
}

TEST_CASE("composition agrees with operator action") {
  std::mt19937 rng(23);
  Chart c = cone_chart(3);
  for (int t = 0; t < 20; ++t) {
    PDOp a = random_op(c, rng, 2, 9, random_point(2, rng, 2));
    PDOp b = random_op(c, rng, 2, 9, random_point(2, rng, 2));
    IndexedElt x{random_point(2, rng, 3), random_elt(c, rng, 3, 5)};
    CHECK(apply(c, compose(c, a, b), x) == apply(c, a, apply(c, b, x)));
  }
}

TEST_CASE("basis change examples") {
  Chart c2 = line_chart(2);
  PDOp d2 = to_zeta(c2, De(c2, {2}, 3));
  CHECK(d2 == Dz(c2, {2}, 3) - Dz(c2, {1}, 3));
  Chart c3 = line_chart(3);
  CHECK(to_zeta(c3, De(c3, {3}, 5)) == Dz(c3, {3}, 5) - Dz(c3, {1}, 5));
  CHECK(to_zeta(c3, De(c3, {1}, 5)) == Dz(c3, {1}, 5));
  BasisChange bc1 = eta_zeta_change(5, 2, 1);
  CHECK(bc1.eta_to_zeta == FpMatrix::identity(5, bc1.indices.size()));
}

TEST_CASE("basis change matches the log series expansion") {
  const int top = 9;
  auto table = zeta_in_eta(top);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    BasisChange bc = eta_zeta_change(p, 1, top);
    PrimeField f(p);
    // D_N = Σ_J <ζ^[J], D_N> D^J and <ζ^[J], D_N> is the η^[N] coefficient of ζ^[J].
    for (int N = 0; N <= top; ++N)
      for (int J = 0; J <= top; ++J) CHECK(bc.s1[N][J] == f.reduce(table[J][N]));
  }
}

TEST_CASE("basis change matrices are unitriangular and inverse") {
  for (std::uint32_t p : {2u, 3u}) {
    BasisChange bc = eta_zeta_change(p, 2, 2 * p - 1);
    std::size_t n = bc.indices.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(bc.eta_to_zeta(i, i) == 1);
      for (std::size_t j = 0; j < n; ++j)
        if (weight_of(bc.indices[j]) > weight_of(bc.indices[i])) CHECK(bc.eta_to_zeta(i, j) == 0);
    }
    CHECK(bc.eta_to_zeta * bc.zeta_to_eta == FpMatrix::identity(p, n));
  }
  std::mt19937 rng(29);
  Chart c = cone_chart(3);
  for (int t = 0; t < 20; ++t) {
    PDOp a = random_op(c, rng, 5, 5, c.zero());
    CHECK(to_zeta(c, to_eta(c, a)) == a);
  }
}

TEST_CASE("eta-basis Leibniz rule in tildeD") {
  // (D_N)∘a = Σ_{I≤N} binom(N,I) (D_{N-I}.a) D_I
  std::mt19937 rng(31);
  for (const Chart& c : {line_chart(3), cone_chart(2)}) {
    PrimeField f(c.p());
    for (int t = 0; t < 15; ++t) {
      IndexedElt a{random_point(c.ambient_rank(), rng, 2), random_elt(c, rng, 3, 4)};
      for (const auto& N : indices_up_to(c.r(), 3)) {
        PDOp lhs = to_eta(c, compose(c, to_zeta(c, De(c, N, 5)), mult(c, a.degree, a.coeff, 5)));
        PDOp rhs = PDOp::zero(c, a.degree, 5, OpBasis::Eta);
        for (const auto& I : indices_up_to(c.r(), 3)) {
          bool le = true;
          Fp b = 1;
          MultiIndex NI(N);
          for (int k = 0; k < c.r(); ++k) {
            le = le && I[k] <= N[k];
            NI[k] = N[k] - I[k];
            b = f.mul(b, f.binom(N[k], I[k]));
          }
          if (!le) continue;
          IndexedElt da = apply(c, to_zeta(c, De(c, NI, 5)), a);
          rhs.add(I, da.coeff.scaled(b));
        }
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("conjugation by theta elements is multiplicative") {
  std::mt19937 rng(37);
  Chart c = cone_chart(2);
  for (int t = 0; t < 10; ++t) {
    LatticePoint m = random_point(2, rng, 3);
    PDOp a = random_op(c, rng, 2, 6, c.zero()), b = random_op(c, rng, 2, 6, c.zero());
    auto conj = [&](const PDOp& x) {
      return compose(c, mult(c, -m, one(c), 6), compose(c, x, mult(c, m, one(c), 6)));
    };
    CHECK(conj(compose(c, a, b)) == compose(c, conj(a), conj(b)));
  }
}

TEST_CASE("center membership examples") {
  Chart c = line_chart(3);
  CHECK(center_membership(c, De(c, {3}, 5)));
  CHECK_FALSE(center_membership(c, De(c, {1}, 5)));
  PDOp b = PDOp::zero(c, {1}, 5, OpBasis::Eta);
  b.add({0}, mono(c, {2}));
  CHECK(center_membership(c, b));
  PDOp nb = PDOp::zero(c, {1}, 5, OpBasis::Eta);
  nb.add({0}, mono(c, {1}));
  CHECK_FALSE(center_membership(c, nb));
}

TEST_CASE("center membership agrees with commutation on random operators") {
  std::mt19937 rng(41);
  Chart c = line_chart(2);
  PDOp theta = mult(c, {1}, one(c), 3);
  PDOp D = Dz(c, {1}, 3);
  int central = 0;
  for (int t = 0; t < 200; ++t) {
    PDOp phi = PDOp::zero(c, {t % 3}, 3, OpBasis::Eta);
    std::uniform_int_distribution<int> ord(0, 3), ex(0, 4);
    for (int k = 0; k < 2; ++k) phi.add({ord(rng) & 2}, mono(c, {ex(rng)}));
    PDOp z = to_zeta(c, phi);
    bool commutes = commutator(c, z, theta).is_zero() && commutator(c, z, D).is_zero();
    CHECK(commutes == center_membership(c, phi));
    central += commutes;
  }
  CHECK(central > 0);
}

TEST_CASE("brute-force center on a window") {
  for (std::uint32_t p : {2u, 3u}) {
    Chart c = line_chart(p);
    auto win = c.window(6);
    for (int s = -1; s <= 2; ++s) {
      auto rep = center_window_check(c, LatticePoint{s}, win, 2 * p - 1);
      CHECK(rep.ok());
      CHECK(rep.predicted_dim > 0);
    }
  }
}

TEST_CASE("p-th power identities") {
  Chart c = line_chart(3);
  auto win = c.window(8);
  auto rep = pth_power_identities(c, {one(c)}, AlgElt(3, 1), win);
  CHECK(rep.ok());
  CHECK(rep.dp_equals_d);
  std::mt19937 rng(43);
  Chart c2 = line_chart(2);
  for (int t = 0; t < 10; ++t) {
    auto r2 = pth_power_identities(c2, {one(c2)}, random_elt(c2, rng, 3, 4), c2.window(8));
    CHECK(r2.ok());
  }
  Chart cone = cone_chart(3);
  for (int t = 0; t < 5; ++t) {
    auto r3 = pth_power_identities(cone, {random_elt(cone, rng, 2, 2), random_elt(cone, rng, 2, 2)},
                                   random_elt(cone, rng, 2, 3), cone.window(4));
    CHECK(r3.ok());
  }
}

TEST_CASE("D^(p) is D for constant coordinate derivations") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Chart c = plane_chart(p);
    for (int a = 0; a < static_cast<int>(p); ++a) {
      std::vector<AlgElt> lam{AlgElt::constant(p, 2, a), AlgElt::constant(p, 2, 1)};
      CHECK(frobenius_derivation(c, lam) == lam);
    }
  }
}

TEST_CASE("operator p-curvature is F-linear") {
  // (aD)^p - (aD)^(p) = a^p (D^p - D^(p)) and additivity, as ring elements.
  std::mt19937 rng(47);
  for (std::uint32_t p : {2u, 3u}) {
    Chart c = plane_chart(p);
    int bound = 2 * p - 1;
    auto psi = [&](const std::vector<AlgElt>& lam) {
      PDOp D = derivation_op(c, lam, bound), acc = Dz(c, {0, 0}, bound);
      for (std::uint32_t i = 0; i < p; ++i) acc = compose(c, D, acc);
      return acc - derivation_op(c, frobenius_derivation(c, lam), bound);
    };
    for (int t = 0; t < 8; ++t) {
      std::vector<AlgElt> lam{random_elt(c, rng, 2, 2), random_elt(c, rng, 2, 2)};
      std::vector<AlgElt> mu{random_elt(c, rng, 2, 2), random_elt(c, rng, 2, 2)};
      AlgElt a = random_elt(c, rng, 2, 2);
      std::vector<AlgElt> alam{a * lam[0], a * lam[1]};
      CHECK(psi(alam) == compose(c, mult(c, c.zero(), a.pow(p), bound), psi(lam)));
      std::vector<AlgElt> sum{lam[0] + mu[0], lam[1] + mu[1]};
      CHECK(psi(sum) == psi(lam) + psi(mu));
    }
  }
}

TEST_CASE("commuting power lemma") {
  FpMatrix alpha(3, 2, 2);
  alpha(0, 1) = 1;
  FpMatrix beta = FpMatrix::identity(3, 2).scaled(2);
  auto rep = commuting_power_lemma(alpha, beta);
  CHECK(rep.hypothesis);
  CHECK(rep.identity);
  FpMatrix a2(3, 2, 2), b2(3, 2, 2);
  a2(0, 1) = 1;
  b2(1, 0) = 1;
  auto bad = commuting_power_lemma(a2, b2);
  CHECK_FALSE(bad.hypothesis);
}

TEST_CASE("Azumaya splitting matrices") {
  for (std::uint32_t p : {2u, 3u}) {
    for (const Chart& c : {line_chart(p), plane_chart(p)}) {
      auto rep = azumaya_beta_check(c);
      CHECK(rep.ok());
      CHECK(rep.window.size() == (c.r() == 1 ? p : p * p));
    }
  }
  Chart c = line_chart(2);
  auto rep = azumaya_beta_check(c);
  // β^1 sends D_1 to D_0 and D_0 to 0.
  CHECK(rep.to_alpha[1][1] == PDOp::basis_element(c, {0}, OpBasis::Eta, 1));
  CHECK(rep.to_alpha[1][0].is_zero());
  Chart c3 = line_chart(3);
  auto r3 = azumaya_beta_check(c3);
  PDOp two = PDOp::zero(c3, 2, OpBasis::Eta);
  two.add({0}, AlgElt::constant(3, 1, 2));
  CHECK(r3.to_alpha[2][2] == two);
}
