#pragma once

#include <vector>

#include "tiling_lab/continuum.hpp"
#include "tiling_lab/lattice.hpp"

namespace tiling_lab {

// Integral of sigma(grad H) for the piecewise-linear interpolant of a height field on the
// lattice triangles of its grid (every triangle with three valid nodes).  Slopes outside
// the closed slope set by more than tol raise InvalidInput naming the triangle.
double entropy(const ContinuumField& H, double tol = 1e-9);

struct EntropyOptions {
  int max_sweeps = 200000;
  double tolerance = 1e-11;  // stop when the largest update per sweep is below tolerance * mesh
  double omega = 0.0;        // over-relaxation factor; 0 picks 2/(1 + sin(pi/N))
  bool coarse_to_fine = true;
  int threads = 1;
};

struct EntropyMaximum {
  ContinuumField height;
  double entropy = 0.0;
  double residual = 0.0;  // largest |dE/dH_v| / (mesh) over free, unclamped nodes
  long sweeps = 0;
};

// Domain vertex (x, y) sits at (x * mesh, y * mesh); boundary values are aligned with
// d.boundary_indices().  Maximizes the discrete entropy over fields that match the boundary
// and keep every lattice-edge increment in [0, mesh].
EntropyMaximum maximize_entropy(const Domain& d, const std::vector<double>& boundary_values, double mesh,
                                const EntropyOptions& opts = {});

// Hexagon with continuum sides (a, b, c) at mesh 1/resolution.
EntropyMaximum maximize_entropy_hexagon(int a, int b, int c, int resolution, const EntropyOptions& opts = {});

}  // namespace tiling_lab
