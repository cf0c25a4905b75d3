#pragma once

#include <vector>

#include "tiling_lab/continuum.hpp"
#include "tiling_lab/lattice.hpp"

namespace tiling_lab {

// Interval [lo, hi) of density one in scaled units.
struct Block {
  double lo = 0.0;
  double hi = 0.0;
};

enum class SegmentKind { Empty, Packed, Liquid };

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  SegmentKind kind = SegmentKind::Empty;
};

// One time slice of the limit shape: segments in increasing order covering [a(t), b].
struct LimitSlice {
  double t = 0.0;
  std::vector<Segment> segments;
  std::vector<std::pair<double, double>> liquid() const;
};

// Deterministic limit of packed-ending bridges in the trapezoid a0 + t <= x <= b,
// 0 <= t <= t_max, started from the density given by disjoint blocks.  The complex slope
// f_t(z) is the branch of f = f_0(z - t f/(f+1)) continued from f_0 at t = 0, where
// f_0(z) = ((b - z)/(z - a0)) prod_blocks (z - lo)/(z - hi).
class TrapezoidLimit {
 public:
  TrapezoidLimit(double a0, double b, double t_max, std::vector<Block> blocks);
  // Blocks merged from the particle cells [k/n, (k+1)/n) of c; walls from spec.
  static TrapezoidLimit from_config(const ParticleConfig& c, const StripSpec& spec);
  // Hexagon with lattice sides (a vertical, b diagonal, c horizontal) scaled by 1/n, viewed as
  // bridges from [0, c) to [b, b + c) between the walls t - a and b + c.
  static TrapezoidLimit hexagon(int a, int b, int c, int n);

  double a(double t) const { return a0_ + t; }
  double b() const { return b_; }
  double t_max() const { return t_max_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  Complex initial_slope(Complex z) const;
  // Roots of the transport equation at (z, t) other than the trivial f = -1.
  std::vector<Complex> slope_roots(Complex z, double t) const;
  // Physical branch for Im z > 0 by continuation in time.  Throws NotConverged when roots
  // cannot be separated.
  Complex slope(Complex z, double t) const;
  // f_t(x + i eta) on every grid node (x, t); eta > 0.
  ContinuumField slope_field(const GridSpec& g, double eta) const;
  // log(f_t(z) (z - a(t))/(b - z)) on the principal branch.
  Complex m_star(Complex z, double t) const;

  LimitSlice slice(double t) const;
  double density(double x, double t) const;
  // int_{a(t)}^{x} density; xs must be nondecreasing.
  std::vector<double> heights(double t, const std::vector<double>& xs) const;
  double height(double x, double t) const { return heights(t, {x}).front(); }
  // Times where an outer edge of the liquid region is tangent to a vertical or slope-one line,
  // plus 0 and t_max.
  std::vector<double> tangency_times() const;

 private:
  // Liquid density from the root with negative imaginary part; false if all roots are real.
  bool liquid_at(double x, double t, double* rho) const;
  Complex track(Complex z, double t0, Complex f0, double t1) const;
  SegmentKind frozen_kind(double x, double t) const;

  double a0_;
  double b_;
  double t_max_;
  std::vector<Block> blocks_;
};

}  // namespace tiling_lab
