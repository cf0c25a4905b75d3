#include "doctest.h"

#include "tiling_lab/error.hpp"
#include "tiling_lab/trapezoid_limit.hpp"

using namespace tiling_lab;

namespace {

// Inscribed circle of the regular unit hexagon in lattice coordinates: at height t the
// liquid interval is 1 + Y/2 -+ sqrt(3 - 3 Y^2)/2 with Y = t - 1.
std::pair<double, double> circle_edges(double t) {
  double Y = t - 1.0, r = 0.5 * std::sqrt(3.0 - 3.0 * Y * Y);
  return {1.0 + 0.5 * Y - r, 1.0 + 0.5 * Y + r};
}

}  // namespace

TEST_CASE("trapezoid limit: unit hexagon slices follow the inscribed circle") {
  TrapezoidLimit L = TrapezoidLimit::hexagon(8, 8, 8, 8);
  CHECK(L.t_max() == doctest::Approx(2.0));
  CHECK(L.a(0.0) == doctest::Approx(-1.0));
  CHECK(L.b() == doctest::Approx(2.0));
  for (double t : {0.1, 0.3, 0.7, 1.0, 1.4, 1.9}) {
    auto liq = L.slice(t).liquid();
    REQUIRE(liq.size() == 1);
    auto [lo, hi] = circle_edges(t);
    CHECK(std::fabs(liq[0].first - lo) <= 1e-9);
    CHECK(std::fabs(liq[0].second - hi) <= 1e-9);
  }
}

TEST_CASE("trapezoid limit: frozen pieces of the hexagon") {
  TrapezoidLimit L = TrapezoidLimit::hexagon(8, 8, 8, 8);
  LimitSlice s = L.slice(0.25);
  REQUIRE(s.segments.front().kind == SegmentKind::Empty);
  CHECK(s.segments.front().hi == doctest::Approx(0.0));
  CHECK(s.segments[1].kind == SegmentKind::Packed);
  CHECK(s.segments.back().kind == SegmentKind::Empty);
  CHECK(s.segments.back().lo == doctest::Approx(1.25));
  double mass = 0.0;
  for (const Segment& g : s.segments) {
    if (g.kind == SegmentKind::Packed) mass += g.hi - g.lo;
  }
  auto liq = s.liquid();
  std::vector<double> xs{liq[0].first, liq[0].second};
  auto h = L.heights(0.25, xs);
  mass += h[1] - h[0];
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(L.height(L.b(), 1.3) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("trapezoid limit: tangency times of the hexagon") {
  TrapezoidLimit L = TrapezoidLimit::hexagon(8, 8, 8, 8);
  auto t = L.tangency_times();
  REQUIRE(t.size() == 4);
  double expected[4] = {0.0, 0.5, 1.5, 2.0};
  for (int k = 0; k < 4; ++k) CHECK(std::fabs(t[static_cast<std::size_t>(k)] - expected[k]) <= 1e-5);
}

TEST_CASE("trapezoid limit: slope solves the transport equation and stays in the lower half-plane") {
  TrapezoidLimit L(0.0, 1.0, 0.6, {{0.1, 0.3}, {0.6, 0.8}});
  for (double t : {0.0, 0.1, 0.25, 0.45})
    for (Complex z : {Complex(0.5, 0.05), Complex(0.2, 0.3), Complex(0.9, 0.01), Complex(-0.3, 0.2)}) {
      Complex f = L.slope(z, t);
      CHECK(f.imag() < 0.0);
      Complex u = z - t * f / (f + 1.0);
      CHECK(std::abs(L.initial_slope(u) - f) <= 1e-9 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("trapezoid limit: slope is constant along characteristics") {
  TrapezoidLimit L(0.0, 1.0, 0.6, {{0.1, 0.3}, {0.6, 0.8}});
  for (Complex u : {Complex(0.5, 0.4), Complex(0.2, 0.6), Complex(1.3, 0.3)}) {
    Complex f0 = L.initial_slope(u);
    for (double t : {0.1, 0.2, 0.3}) {
      Complex z = characteristic(u, f0, t);
      if (z.imag() < 0.05) continue;
      CHECK(std::abs(L.slope(z, t) - f0) <= 1e-6);
    }
  }
}

TEST_CASE("trapezoid limit: single block initial slope and validation") {
  TrapezoidLimit one(0.0, 2.0, 1.0, {{0.0, 1.0}});
  Complex z(0.4, 0.3);
  CHECK(std::abs(one.initial_slope(z) - (2.0 - z) / (z - 1.0)) <= 1e-14);
  CHECK_THROWS_AS(TrapezoidLimit(0.0, 1.0, 0.5, {{0.2, 0.3}}), InvalidInput);
  CHECK_THROWS_AS(TrapezoidLimit(0.0, 1.0, 0.5, {{0.4, 0.3}, {0.5, 0.8}}), InvalidInput);
  CHECK_THROWS_AS(one.slope(Complex(0.5, 0.0), 0.2), InvalidInput);
}

TEST_CASE("trapezoid limit: from_config merges adjacent cells") {
  StripSpec s;
  s.a0 = 0;
  s.a_slope = 1;
  s.b0 = Rational(1, 2);
  s.t_max = Rational(1, 4);
  s.n = 8;
  s.m = 2;
  TrapezoidLimit L = TrapezoidLimit::from_config(ParticleConfig{8, {0, 1}}, s);
  REQUIRE(L.blocks().size() == 1);
  CHECK(L.blocks()[0].hi == doctest::Approx(0.25));
  // Packed against the moving wall: fully frozen.
  for (double t : {0.05, 0.1, 0.2}) CHECK(L.slice(t).liquid().empty());
}

TEST_CASE("trapezoid limit: burgers residual of the slope field shrinks under refinement") {
  TrapezoidLimit L(0.0, 1.0, 0.6, {{0.1, 0.3}, {0.6, 0.8}});
  double prev = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const int nx = static_cast<int>(std::lround(0.4 / h)) + 1, nt = static_cast<int>(std::lround(0.2 / h)) + 1;
    ContinuumField f = L.slope_field({0.3, 0.1, h, h, nx, nt}, 0.2);
    ContinuumField r = burgers_residual(f);
    double worst = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nt; ++j)
        if (r.valid(i, j)) worst = std::max(worst, std::abs(r.value(i, j)));
    if (prev > 0) CHECK(prev / worst >= 1.8);
    prev = worst;
  }
}
