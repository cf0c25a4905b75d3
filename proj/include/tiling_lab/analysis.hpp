#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tiling_lab/continuum.hpp"
#include "tiling_lab/rng.hpp"
#include "tiling_lab/sampler.hpp"
#include "tiling_lab/trapezoid_limit.hpp"

namespace tiling_lab {

// ---- Concentration ----

struct ConcentrationReport {
  int n = 0;
  std::size_t samples = 0;
  double sup_deviation = 0.0;         // max over samples and vertices of |H(v) - n H*(v/n)|
  double mean_sup_deviation = 0.0;    // average over samples of the per-sample sup
  double mean_field_sup = 0.0;        // max over vertices of |mean H(v) - n H*(v/n)|
  std::vector<double> sample_sups;    // per-sample sup over all vertices
  std::vector<double> deviation;      // per vertex |mean H(v) - n H*(v/n)|, domain vertex order
  std::size_t frozen_mismatches = 0;  // (sample, vertex) pairs in the frozen zone with H != n H*
};

// Hstar holds scaled heights; vertex (x, y) is compared with n * Hstar(x/n, y/n) by
// piecewise-linear interpolation.  The frozen zone is where every lattice edge at v has a
// limit increment within frozen_tol of 0 or 1.
ConcentrationReport height_deviation(const std::vector<HeightFunction>& samples, const ContinuumField& Hstar, int n,
                                     double frozen_tol = 1e-6);

// Analytic limit height of the hexagon with continuum sides (a, b, c), on the same grid as
// maximize_entropy_hexagon(a, b, c, resolution).
ContinuumField hexagon_limit_height(int a, int b, int c, int resolution);

// ---- Frozen map and edges ----

// Per-vertex sum over the rising edges at v of the empirical variance of the increment.
std::vector<double> frozen_map(const std::vector<HeightFunction>& samples);

struct EdgeProfile {
  std::vector<int> rows;
  std::vector<double> left;  // NaN where undefined
  std::vector<double> right;
  std::vector<double> left_std;
  std::vector<double> right_std;
  std::size_t samples = 0;
};

// Per row, leftmost and rightmost crossing of the threshold by the map, refined linearly.
EdgeProfile arctic_boundary(const Domain& d, const std::vector<double>& map, double threshold);

// Per sample and row, the first vertex from each wall where the row increment differs from
// the increment at the wall; rows whose increments are all equal give NaN.
struct SampleEdges {
  std::vector<int> rows;
  std::vector<std::vector<double>> left;  // [sample][row]
  std::vector<std::vector<double>> right;
};
SampleEdges sample_edges(const std::vector<HeightFunction>& samples);
// Mean and standard deviation across samples per row (NaN entries skipped).
EdgeProfile edge_statistics(const SampleEdges& e);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_low = 0.0;  // 95% interval
  double ci_high = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of log y on log x.
ScalingFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct EdgeStdPoint {
  int n = 0;
  double row = 0.0;  // relative height of the row
  int side = 0;      // 0 left, 1 right
  double std = 0.0;  // lattice units
  std::size_t samples = 0;
};

// Common slope of log std against log n with a separate intercept per (row, side).  Needs at
// least three values of n and min_samples per point.
ScalingFit edge_fluctuation_fit(const std::vector<EdgeStdPoint>& points, std::size_t min_samples = 100);
std::string edge_points_csv(const std::vector<EdgeStdPoint>& points);

// ---- Frozen-interval exclusion ----

// max(n^{-2/3 + 6 delta} |t - t_i|^{2/3}, n^{-1 + 10 delta}) in scaled units.
double exclusion_tau(int n, double delta, double t, double t_i);

struct ExclusionCount {
  std::size_t particles_outside = 0;  // particles in empty frozen cells outside the enlarged set
  std::size_t holes_outside = 0;      // holes in packed frozen cells outside the enlarged set
  std::vector<std::pair<double, double>> enlarged;
  std::size_t violations() const { return particles_outside + holes_outside; }
};

// Each liquid interval [E_l, E_r] of the slice is widened by tau at each end, with t_i the
// nearest tangency time; a lattice cell counts as outside when its centre is.
ExclusionCount interval_exclusion(const ParticleConfig& c, const LimitSlice& slice, const std::vector<double>& tangency,
                                  double delta);

// ---- Loop-equation drift ----

struct DriftCheck {
  Complex z;
  Complex mc_mean;
  double mc_variance = 0.0;  // E|X - E X|^2
  Complex exact_mean;        // from the enumerated one-step law
  Complex prediction;        // contour integral
  double stderr_mean = 0.0;
  double zscore = 0.0;       // |mc_mean - prediction| / stderr_mean
  int contour_points = 0;
};

// (1/2 pi i) * contour integral of log B(w)/(w - z)^2 over an ellipse around [a, b] that
// excludes z; B from trapezoid_slope.  Throws InvalidInput when the contour passes within
// 0.02 of z or of [a, b], or log B winds around the contour.
Complex drift_contour_integral(const ParticleConfig& c, Complex z, double a, double b, int* points_used = nullptr);

// X = sum_i 1/(z - x_i') - 1/(z - x_i) over draws of one trapezoid step from c at lattice time t.
DriftCheck drift_check(const StripSpec& spec, const ParticleConfig& c, int t, Complex z, std::size_t draws, Rng& rng);

struct MomentReport {
  Complex z;
  int p = 1;
  double empirical = 0.0;  // Monte Carlo E|Y - E Y|^{2p}
  double exact = 0.0;      // same moment under the enumerated law
  double variance_shape = 0.0;  // (|Im[f/(f+1)]| / (n Im z dist^2))^p
  double higher_shape = 0.0;    // |Im[f/(f+1)]| / (n^{2p-1} Im z dist^{4p-2})
};

// Y = m_{t+1/n}(z) - m_t(z) with m from stieltjes.
MomentReport martingale_moment_check(const StripSpec& spec, const ParticleConfig& c, int t, Complex z, std::size_t draws, Rng& rng,
                                     int p);

struct DeltaSeries {
  std::vector<double> t;
  std::vector<Complex> z;
  std::vector<Complex> delta;
  bool truncated = false;
};

// Delta_t = stieltjes(x_t, z_t) - m*_t(z_t) along z_t = u + t f_0(u)/(f_0(u)+1), with f_0 and
// m* from the limit started at the trajectory's first row.  The series stops (truncated = true)
// once z_t comes within 1/n of [a(t), b].  Delta is reduced modulo 2 pi i to |Im| <= pi.
DeltaSeries delta_along_characteristic(const WalkEnsemble& traj, Complex u, const StripSpec& spec);

}  // namespace tiling_lab
