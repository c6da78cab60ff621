#include "doctest.h"
#include "fixtures.hpp"
#include "logcartier/cartier.hpp"
#include "logcartier/error.hpp"

using namespace logcartier;
using namespace fixtures;

namespace {

LogForm dlog(const Chart& c, int k, AlgElt f) {
  LogForm w = zero_form(c, 1);
  w.add({k}, f);
  return w;
}

AlgElt one(const Chart& c) { return AlgElt::constant(c.p(), c.ambient_rank(), 1); }

}  // namespace

TEST_CASE("exterior derivative examples") {
  Chart c = plane_chart(3);
  AlgElt f = AlgElt::monomial(3, {1, 2});
  LogForm w = d_form(c, dlog(c, 0, f));
  // D_2(e^u) dlog m_2 ∧ dlog m_1 = −2 e^u dlog m_1 ∧ dlog m_2
  CHECK(w.coeff({0, 1}, 3) == f.scaled(1));
  Chart line = line_chart(3);
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) CHECK(is_closed(line, dlog(line, 0, random_elt(line, rng, 3, 6))));
  for (const Chart& ch : {plane_chart(2), cone_chart(3)})
    for (int t = 0; t < 20; ++t) {
      AlgElt g = random_elt(ch, rng, 4, 4);
      CHECK(d_form(ch, d0(ch, g)).is_zero());
      LogForm w1 = dlog(ch, 0, random_elt(ch, rng, 2, 3));
      w1.add({1}, random_elt(ch, rng, 2, 3));
      CHECK(d_form(ch, d_form(ch, w1)).is_zero());
    }
}

TEST_CASE("Cartier operator examples") {
  Chart c = line_chart(3);
  CHECK(cartier_operator(c, dlog(c, 0, one(c))).terms == dlog(c, 0, one(c)).terms);
  CHECK(cartier_operator(c, dlog(c, 0, AlgElt::monomial(3, {1}))).is_zero());
  AlgElt t3 = AlgElt::monomial(3, {3});
  CHECK(cartier_operator(c, dlog(c, 0, t3)).terms == dlog(c, 0, t3).terms);
  Chart plane = plane_chart(3);
  CHECK_THROWS_AS(cartier_operator(plane, dlog(plane, 0, AlgElt::monomial(3, {0, 1}))), Error);
}

TEST_CASE("Cartier operator kills exact forms") {
  std::mt19937 rng(5);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (const Chart& c : {line_chart(p), cone_chart(p)})
      for (int t = 0; t < 20; ++t) CHECK(cartier_operator(c, d0(c, random_elt(c, rng, 4, 6))).is_zero());
}

TEST_CASE("Cartier operator matches the D^(p) identity") {
  // Recomputed with D_k^{p-1} acting on e^u by c_k(u)^{p-1}.
  std::mt19937 rng(7);
  for (std::uint32_t p : {2u, 3u}) {
    Chart c = cone_chart(p);
    PrimeField f(p);
    for (int t = 0; t < 20; ++t) {
      LogForm w = d0(c, random_elt(c, rng, 3, 4));
      for (int k = 0; k < 2; ++k) w.add({k}, random_h_elt(c, rng, 2, 2 * p) + AlgElt::constant(p, 2, t));
      LogForm cw = cartier_operator(c, w);
      for (int k = 0; k < 2; ++k) {
        AlgElt fk = w.coeff({k}, p), rhs(p, 2);
        for (const auto& [u, a] : fk.terms())
          rhs.add_term(u, f.sub(a, f.mul(a, f.pow(c.coords_modp(u)[k], p - 1))));
        CHECK(cw.coeff({k}, p) == rhs);
      }
    }
  }
}

TEST_CASE("splittings") {
  Chart c = line_chart(3);
  Splitting z0 = canonical_splitting(c);
  CHECK(z0.canonical());
  CHECK(zeta_image(c, z0, 0).terms == dlog(c, 0, one(c)).terms);
  Splitting zt = make_splitting(c, {AlgElt::monomial(3, {1})});
  CHECK(zeta_image(c, zt, 0).terms == dlog(c, 0, one(c) + AlgElt::monomial(3, {1})).terms);
  std::mt19937 rng(9);
  for (std::uint32_t p : {2u, 3u}) {
    Chart cone = cone_chart(p);
    for (int t = 0; t < 10; ++t) {
      Splitting z = make_splitting(cone, {random_elt(cone, rng, 3, 4), random_elt(cone, rng, 3, 4)});
      for (int j = 0; j < 2; ++j) {
        LogForm w = zeta_image(cone, z, j);
        CHECK(is_closed(cone, w));
        CHECK(cartier_operator(cone, w).terms == dlog(cone, j, one(cone)).terms);
      }
    }
  }
}

TEST_CASE("Artin-Schreier consistency") {
  std::mt19937 rng(13);
  for (std::uint32_t p : {2u, 3u}) {
    Chart c = cone_chart(p);
    for (int t = 0; t < 10; ++t) {
      AlgElt g = random_h_elt(c, rng, 3, 2 * p) + AlgElt::constant(p, 2, t);
      AlgElt f = g.pow(p) - g;  // g^p − g = F*f
      for (int k = 0; k < 2; ++k) {
        LogForm cw = cartier_operator(c, dlog(c, k, g));
        CHECK(cw.coeff({k}, p) == pi_star(c, g) - f);
      }
    }
  }
}
