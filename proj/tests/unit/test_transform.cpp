#include "doctest.h"
#include "fixtures.hpp"
#include "logcartier/error.hpp"
#include "logcartier/transform.hpp"

using namespace logcartier;
using namespace fixtures;

namespace {

FpMatrix jordan(std::uint32_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
  return m;
}

HiggsModule higgs_of(std::vector<PolyMatrix> t) {
  HiggsModule h;
  h.rank = t.front().rows();
  h.theta = std::move(t);
  return h;
}

Splitting random_splitting(const Chart& c, std::mt19937& rng) {
  std::vector<AlgElt> b;
  for (int k = 0; k < c.r(); ++k) b.push_back(random_elt(c, rng, 2, 3));
  return make_splitting(c, b);
}

}  // namespace

TEST_CASE("inverse_psi examples") {
  Chart c = line_chart(3);
  Splitting z0 = canonical_splitting(c);
  ConnModule zero = inverse_psi(c, z0, constant_higgs(c, {FpMatrix(3, 2, 2)}));
  CHECK(zero.A[0].is_zero());
  ConnModule e = inverse_psi(c, z0, constant_higgs(c, {jordan(3, 2)}));
  CHECK(e.A[0].to_fp() == jordan(3, 2));
  CHECK(p_curvature(c, e).psi[0].to_fp() == jordan(3, 2).pow(3) - jordan(3, 2));
  CHECK_THROWS_AS(inverse_psi(plane_chart(3), canonical_splitting(plane_chart(3)),
                              HiggsModule{2, {PolyMatrix::constant(jordan(3, 2), 2),
                                              PolyMatrix::constant(jordan(3, 2).transpose(), 2)}}),
                  Error);
}

TEST_CASE("p-curvature formula for inverse_psi") {
  std::mt19937 rng(29);
  for (std::uint32_t p : {2u, 3u})
    for (const Chart& c : {line_chart(p), cone_chart(p)})
      for (std::size_t n = 1; n <= 3; ++n)
        for (int t = 0; t < 4; ++t) {
          HiggsModule h = higgs_of(random_commuting_nilpotent(c, rng, n, t % 2 == 1));
          for (const Splitting& z : {canonical_splitting(c), random_splitting(c, rng)}) {
            ConnModule e = inverse_psi(c, z, h);
            CHECK(check_integrable(c, e));
            CHECK(p_curvature(c, e).psi == predicted_p_curvature(c, z, h));
          }
        }
}

TEST_CASE("transform of the trivial connection") {
  Chart c = cone_chart(2);
  auto res = cartier_transform(c, canonical_splitting(c), constant_connection(c, {FpMatrix(2, 1, 1), FpMatrix(2, 1, 1)}),
                               c.window(4));
  REQUIRE(res.higgs);
  CHECK(res.higgs->rank == 1);
  CHECK(res.higgs->theta[0].is_zero());
  CHECK(res.report.comparison_surjective);
  CHECK(res.report.degrees_ok);
  for (const auto& d : res.report.degrees) CHECK(d.kernel_dim == (c.in_Hgp(d.u) ? 1u : 0u));
}

TEST_CASE("transform of a rank-2 nilpotent connection") {
  Chart c = line_chart(3);
  FpMatrix L = jordan(3, 2);
  auto res = cartier_transform(c, canonical_splitting(c), constant_connection(c, {L}), c.window(9));
  CHECK(res.report.psi.psi[0].to_fp() == L.scaled(2));
  CHECK(res.report.correction[0].is_zero());
  CHECK(res.report.level == 1);
  REQUIRE(res.higgs);
  CHECK(res.higgs->theta[0].to_fp() == L);
  for (const auto& d : res.report.degrees) CHECK(d.kernel_dim == (d.u[0] % 3 == 0 ? 2u : 0u));
}

TEST_CASE("transform of the log-pole connection") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    Chart c = line_chart(p);
    auto res = cartier_transform(c, canonical_splitting(c), constant_connection(c, {FpMatrix::identity(p, 1)}),
                                 c.window(12));
    CHECK_FALSE(res.report.residue_nilpotent);
    CHECK_FALSE(res.report.comparison_surjective);
    CHECK_FALSE(res.report.warnings.empty());
    REQUIRE(res.generator_degrees.size() == 1);
    CHECK(res.generator_degrees[0] == LatticePoint{static_cast<std::int64_t>(p) - 1});
    for (const auto& d : res.report.degrees)
      CHECK(d.kernel_dim == ((d.u[0] + 1) % static_cast<std::int64_t>(p) == 0 ? 1u : 0u));
  }
}

TEST_CASE("transform rejects level ≥ p") {
  Chart c = line_chart(2);
  CHECK_THROWS_AS(cartier_transform(c, canonical_splitting(c), constant_connection(c, {jordan(2, 3)}), c.window(4)),
                  Error);
}

TEST_CASE("transform of indexed pieces matches B") {
  for (std::uint32_t p : {2u, 3u}) {
    Chart c = cone_chart(p);
    for (const auto& s : c.window(3)) {
      auto cs = c.coords_modp(s);
      std::vector<FpMatrix> lam;
      for (int k = 0; k < 2; ++k) {
        FpMatrix m(p, 1, 1);
        m(0, 0) = cs[k];
        lam.push_back(m);
      }
      auto res = cartier_transform(c, canonical_splitting(c), constant_connection(c, lam), c.window(5));
      for (const auto& d : res.report.degrees) {
        bool in_b = b_membership(c, IndexedElt{s, AlgElt::monomial(p, d.u)});
        CHECK(d.kernel_dim == (in_b ? 1u : 0u));
      }
    }
  }
}

TEST_CASE("inverse transform examples") {
  Chart c = line_chart(3);
  Splitting z0 = canonical_splitting(c);
  CHECK(inverse_cartier_transform(c, z0, constant_higgs(c, {FpMatrix(3, 1, 1)})).A[0].is_zero());
  CHECK(inverse_cartier_transform(c, z0, constant_higgs(c, {jordan(3, 3)})).A[0].to_fp() == jordan(3, 3));
  // Level 3 ≥ p: Θ + Θ^p with Θ^2 ≠ 0 and Θ^4 = 0.
  Chart c2 = line_chart(2);
  FpMatrix J = jordan(2, 4);
  auto corr = alpha_correction(c2, canonical_splitting(c2), constant_higgs(c2, {J}));
  CHECK(corr[0].to_fp() == J + J.pow(2));
}

TEST_CASE("transform roundtrips") {
  std::mt19937 rng(31);
  for (std::uint32_t p : {2u, 3u})
    for (const Chart& c : {line_chart(p), cone_chart(p)}) {
      auto win = c.window(6);
      for (std::size_t n = 1; n <= 3; ++n)
        for (int t = 0; t < 3; ++t) {
          HiggsModule h = higgs_of(random_commuting_nilpotent(c, rng, n, false));
          if (*nilpotence_level(h.theta) >= static_cast<int>(p)) continue;
          Splitting z0 = canonical_splitting(c), z1 = random_splitting(c, rng);
          for (const Splitting& z : {z0, z1}) {
            auto rh = roundtrip_higgs(c, z, h, win);
            CHECK_MESSAGE(rh.ok, rh.detail);
            auto rc = roundtrip_connection(c, z, inverse_cartier_transform(c, z, h), win);
            CHECK_MESSAGE(rc.ok, rc.detail);
          }
          std::vector<FpMatrix> lam;
          for (const auto& m : h.theta) lam.push_back(m.to_fp());
          ConnModule e = constant_connection(c, lam);
          if (check_integrable(c, e) && *nilpotence_level(e.A) < static_cast<int>(p)) {
            auto rc = roundtrip_connection(c, z0, e, win);
            CHECK_MESSAGE(rc.ok, rc.detail);
          }
        }
    }
}
