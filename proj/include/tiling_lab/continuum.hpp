#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "tiling_lab/tiling.hpp"

namespace tiling_lab {

using Complex = std::complex<double>;

// L(x) = -int_0^x log|2 sin u| du.  Odd and pi-periodic.
double lobachevsky(double x);

// Gradient (dH/dx, dH/dy) of a continuum height function.  The tile proportions are
// (1 - s, -t, s + t); the closed slope set is where all three are nonnegative.
struct Slope {
  double s = 0.0;
  double t = 0.0;

  std::array<double, 3> proportions() const { return {1.0 - s, -t, s + t}; }
  bool in_closure(double tol = 0.0) const;
  // Smallest proportion below the threshold.
  bool is_frozen(double threshold = 1e-6) const;
};

inline constexpr double kSlopeTolerance = 1e-12;

// sigma(s,t) = (1/pi) sum_k L(pi p_k).  Throws InvalidInput outside the closed slope set.
double surface_tension(const Slope& sl);
// (d sigma/ds, d sigma/dt); requires all proportions strictly positive.
std::array<double, 2> surface_tension_gradient(const Slope& sl);

// arg in [-pi, 0] for the closed lower half-plane (real negatives map to -pi).
double arg_lower(Complex w);

// The unique f with Im f < 0, arg f = -pi s and arg(f+1) = pi t.  Throws InvalidInput on
// the boundary of the slope set.
Complex slope_to_complex(const Slope& sl);
// Inverse of slope_to_complex; real f gives the three frozen slopes.  Throws InvalidInput
// for Im f > 0, f = 0 and f = -1.
Slope complex_to_slope(Complex f);

// z_t = u + t f0/(f0 + 1).
Complex characteristic(Complex u, Complex f0, double t);

// m(z) = sum_i log((z - x_i)/(z - x_i - 1/n)) with x_i the scaled positions.
Complex stieltjes(const ParticleConfig& c, Complex z);

struct TrapezoidSlope {
  Complex f;  // ((b - z)/(z - a)) e^{m(z)}
  Complex B;  // (f + 1)(z - a)
};
TrapezoidSlope trapezoid_slope(const ParticleConfig& c, Complex z, double a, double b);

// Uniform rectangular grid; node (i, j) sits at (x0 + i hx, t0 + j ht).
struct GridSpec {
  double x0 = 0.0;
  double t0 = 0.0;
  double hx = 1.0;
  double ht = 1.0;
  int nx = 0;
  int nt = 0;

  void validate() const;
  double x(int i) const { return x0 + i * hx; }
  double t(int j) const { return t0 + j * ht; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Complex values on a grid; masked nodes carry no value.
class ContinuumField {
 public:
  ContinuumField() = default;
  explicit ContinuumField(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  bool valid(int i, int j) const;
  Complex value(int i, int j) const;
  double real(int i, int j) const { return value(i, j).real(); }
  void set(int i, int j, Complex v);
  void mask(int i, int j);
  std::size_t valid_count() const;

  // Linear interpolation on the lattice triangles of the grid (real part).  Throws
  // InvalidInput if the containing triangle has a masked node.
  double interpolate(double x, double t) const;

  // CSV with columns x,t,re,im,mask and '#' grid header lines.
  std::string to_csv() const;
  static ContinuumField from_csv(std::string_view text);

 private:
  std::size_t at(int i, int j) const;

  GridSpec grid_;
  std::vector<Complex> values_;
  std::vector<std::uint8_t> valid_;
};

// Central-difference residual of d_t f + (f/(f+1)) d_x f.  Nodes without a full stencil
// (grid border) are masked.  With allow_partial = false a valid node whose stencil hits a
// masked node is an error; otherwise it is masked too.
ContinuumField burgers_residual(const ContinuumField& f, bool allow_partial = false);

// Integrates grad H = (-arg f/pi, arg(f+1)/pi) over the valid nodes from the anchor node by
// the trapezoid rule along a spanning tree, then checks every other grid edge closes to
// within curl_tol.  Throws NotConverged naming the worst edge otherwise.
ContinuumField limit_height_from_slope(const ContinuumField& f, int anchor_i, int anchor_j, double anchor_value,
                                       double curl_tol = 1e-8);

}  // namespace tiling_lab
