#include "doctest.h"

#include <memory>

#include "oracles.hpp"
#include "tiling_lab/enumerate.hpp"
#include "tiling_lab/error.hpp"
#include "tiling_lab/lattice.hpp"

using namespace tiling_lab;

namespace {

void check_euler_and_neighbourhoods(const Domain& d) {
  long V = static_cast<long>(d.vertex_count());
  long E = static_cast<long>(d.edge_count());
  long F = static_cast<long>(d.faces().size());
  CHECK(V - E + F == 1);
  for (std::size_t i : d.interior_indices()) {
    Vertex v = d.vertex(i);
    for (Face f : {Face{v.x, v.y, FaceKind::Up}, Face{v.x, v.y, FaceKind::Down}, Face{v.x - 1, v.y, FaceKind::Up},
                   Face{v.x - 1, v.y - 1, FaceKind::Up}, Face{v.x - 1, v.y - 1, FaceKind::Down}, Face{v.x, v.y - 1, FaceKind::Down}})
      CHECK(d.contains_face(f));
  }
  for (std::size_t i : d.boundary_indices()) {
    Vertex v = d.vertex(i);
    bool exterior = false;
    for (auto [dx, dy] : kNeighbourSteps) exterior = exterior || !d.contains(v.x + dx, v.y + dy);
    CHECK(exterior);
  }
}

}  // namespace

TEST_CASE("hexagon geometry") {
  auto [d, h] = build_hexagon(1, 1, 1);
  CHECK(d.vertex_count() == 7);
  CHECK(d.boundary_indices().size() == 6);
  CHECK(d.interior_indices().size() == 1);
  CHECK(d.faces().size() == 6);
  CHECK(d.boundary_cycle().size() == 6);
  check_euler_and_neighbourhoods(d);

  for (auto [a, b, c] : std::vector<std::array<int, 3>>{{2, 2, 2}, {1, 2, 3}, {3, 1, 2}, {5, 4, 3}}) {
    auto hex = build_hexagon(a, b, c);
    check_euler_and_neighbourhoods(hex.domain);
    CHECK(hex.domain.faces().size() == static_cast<std::size_t>(2 * (a * b + b * c + c * a)));
    CHECK(hex.domain.interior_indices().size() == static_cast<std::size_t>(a * b + b * c + c * a - a - b - c + 1));
    CHECK(hex.domain.boundary_cycle().size() == static_cast<std::size_t>(2 * (a + b + c)));
    CHECK(hex.boundary.at(hex.domain, 0, 0) == 0);
    CHECK(is_admissible_boundary(hex.domain, hex.boundary));
  }
}

TEST_CASE("hexagon (1,1,2) has maximal boundary height 2") {
  auto [d, h] = build_hexagon(1, 1, 2);
  int mx = 0;
  for (int v : h.values()) mx = std::max(mx, v);
  CHECK(mx == 2);
}

TEST_CASE("hexagon rejects non-positive sides") { CHECK_THROWS_AS(build_hexagon(0, 1, 1), InvalidInput); }

TEST_CASE("boundary perturbation makes the hexagon inadmissible") {
  auto [d, h] = build_hexagon(2, 2, 2);
  auto bad = h;
  bad.set(d, 4, 2, bad.at(d, 4, 2) + 3);
  CHECK_FALSE(is_admissible_boundary(d, bad));
  auto dp = std::make_shared<const Domain>(d);
  CHECK(enumerate_tilings(dp, bad).count() == 0);
}

TEST_CASE("domain without interior is admissible iff the boundary is height-legal") {
  Domain d = Domain::from_rows(0, {0, 0}, {2, 3});
  CHECK(d.interior_indices().empty());
  BoundaryHeight good(d, {0, 1, 2, 0, 1, 1, 2});
  CHECK(is_admissible_boundary(d, good));
  BoundaryHeight bad(d, {0, 1, 2, 0, 2, 2, 2});
  CHECK_FALSE(is_admissible_boundary(d, bad));
}

TEST_CASE("admissibility agrees with enumeration on small random boundaries") {
  // Random small perturbations of strip boundaries.
  StripSpec s;
  s.a0 = 0;
  s.b0 = Rational(3, 1);
  s.t_max = Rational(3, 1);
  s.n = 1;
  s.m = 2;
  auto base = build_strip(s, {std::vector<int>{0, 1}, std::vector<int>{1, 2}});
  auto dp = std::make_shared<const Domain>(base.domain);
  int agreements = 0;
  for (std::size_t k = 0; k < base.boundary.values().size(); ++k)
    for (int delta : {-1, 1}) {
      auto b = base.boundary;
      std::vector<int> vals = b.values();
      vals[k] += delta;
      BoundaryHeight bh(base.domain, vals);
      bool adm = is_admissible_boundary(base.domain, bh);
      bool has = enumerate_tilings(dp, bh).count() > 0;
      CHECK(adm == has);
      CHECK(static_cast<std::size_t>(oracle::brute_force_extensions(base.domain, bh).size() > 0) == static_cast<std::size_t>(adm));
      ++agreements;
    }
  CHECK(agreements > 10);
}

TEST_CASE("strip construction") {
  SUBCASE("frozen brick wall has one extension") {
    StripSpec s;
    s.a0 = 0;
    s.b0 = Rational(5, 1);
    s.t_max = Rational(4, 1);
    s.n = 1;
    s.m = 3;
    auto w = build_strip(s, {std::vector<int>{0, 1, 2}, std::vector<int>{0, 1, 2}});
    auto dp = std::make_shared<const Domain>(w.domain);
    CHECK(enumerate_tilings(dp, w.boundary).count() == 1);
  }
  SUBCASE("packed trapezoid is legal") {
    StripSpec s;
    s.a0 = Rational(-1, 2);
    s.a_slope = 1;
    s.b0 = Rational(1, 1);
    s.t_max = Rational(1, 1);
    s.n = 4;
    s.m = 2;
    CHECK(s.is_packed_trapezoid());
    auto w = build_strip(s);
    CHECK(is_admissible_boundary(w.domain, w.boundary));
    for (int y = 0; y <= s.rows(); ++y) {
      CHECK(w.boundary.at(w.domain, w.domain.left(y), y) == 0);
      CHECK(w.boundary.at(w.domain, w.domain.right(y), y) == s.m);
    }
  }
  SUBCASE("a > b is rejected") {
    StripSpec s;
    s.a0 = Rational(2, 1);
    s.b0 = Rational(1, 1);
    s.n = 1;
    s.m = 1;
    CHECK_THROWS_AS(build_strip(s), InvalidInput);
  }
  SUBCASE("profiles must be legal") {
    StripSpec s;
    s.b0 = Rational(4, 1);
    s.t_max = Rational(2, 1);
    s.n = 1;
    s.m = 2;
    CHECK_THROWS_AS(build_strip(s, {std::vector<int>{1, 1}, std::nullopt}), InvalidInput);
    CHECK_THROWS_AS(build_strip(s, {std::vector<int>{0, 4}, std::nullopt}), InvalidInput);
    CHECK_THROWS_AS(build_strip(s, {std::vector<int>{0}, std::nullopt}), InvalidInput);
  }
  SUBCASE("non-integral scaling is rejected") {
    StripSpec s;
    s.b0 = Rational(1, 3);
    s.n = 2;
    s.m = 1;
    CHECK_THROWS_AS(s.validate(), InvalidInput);
  }
}

TEST_CASE("envelopes bracket every extension") {
  auto [d, h] = build_hexagon(2, 2, 2);
  auto env = height_envelopes(d, h);
  REQUIRE(env.admissible);
  for (const auto& H : oracle::brute_force_extensions(d, h))
    for (std::size_t i = 0; i < H.size(); ++i) {
      CHECK(env.lower[i] <= H[i]);
      CHECK(H[i] <= env.upper[i]);
    }
  CHECK(oracle::legal_heights(d, env.lower));
  CHECK(oracle::legal_heights(d, env.upper));
}
