#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tiling_lab/lattice.hpp"
#include "tiling_lab/rng.hpp"
#include "tiling_lab/sweep_kernel.hpp"
#include "tiling_lab/tiling.hpp"

namespace tiling_lab {

// Legal interval [lower, upper] for the height of an interior vertex given its six neighbours.
std::pair<int, int> legal_interval(const HeightFunction& h, int x, int y);

// Probability that one heat-bath update at (x,y) moves h to a height function with value v there.
double heat_bath_probability(const HeightFunction& h, int x, int y, int v);

// One random-order heat-bath sweep over the interior vertices.
HeightFunction glauber_sweep(const HeightFunction& h, Rng& rng);
void glauber_sweep_in_place(HeightFunction& h, Rng& rng);

struct CouplingPair {
  HeightFunction lower;
  HeightFunction upper;
  void validate() const;  // same domain, same boundary, lower <= upper pointwise
};

// Advances both chains with the same vertex order and the same uniforms.
CouplingPair coupled_sweep(const CouplingPair& pair, Rng& rng);

HeightFunction min_extension(std::shared_ptr<const Domain> d, const BoundaryHeight& h);
HeightFunction max_extension(std::shared_ptr<const Domain> d, const BoundaryHeight& h);

struct CftpOptions {
  int initial_log2 = 3;
  int max_log2 = 22;
  KernelKind kernel = default_kernel();
};

struct CftpResult {
  HeightFunction sample;
  int log2_horizon = 0;  // coalescence observed from time -2^log2_horizon
};

// Monotone coupling from the past over colour sweeps.  Draws one key from `rng`.
CftpResult cftp_sample_detailed(std::shared_ptr<const Domain> d, const BoundaryHeight& h, Rng& rng, const CftpOptions& opts = {});
HeightFunction cftp_sample(std::shared_ptr<const Domain> d, const BoundaryHeight& h, Rng& rng, const CftpOptions& opts = {});

// Forward chain of colour sweeps (the CFTP update run forwards), for burn-in style sampling.
class ColourChain {
 public:
  ColourChain(HeightFunction start, Rng rng, KernelKind kernel = default_kernel());
  void advance(std::uint64_t sweeps);
  HeightFunction state() const;
  std::uint64_t sweeps_done() const { return sweep_; }

 private:
  std::shared_ptr<const Domain> domain_;
  ColourSweeper sweeper_;
  SweepGrid grid_;
  std::uint64_t key_;
  std::uint64_t sweep_ = 0;
};

// ---- Trapezoid Bernoulli bridges with packed ending ----

// Exact law of one step e in {0,1}^m (bit i = walk i jumps) from configuration c at time t.
struct StepDistribution {
  std::vector<std::uint32_t> moves;
  std::vector<double> probabilities;
  std::vector<double> cumulative;
  std::uint32_t draw(Rng& rng) const;
};

inline constexpr int kTrapezoidWalkCap = 20;

StepDistribution trapezoid_step_distribution(const ParticleConfig& c, int t, const StripSpec& spec, int cap = kTrapezoidWalkCap);
ParticleConfig apply_step(const ParticleConfig& c, std::uint32_t move);
ParticleConfig trapezoid_step(const ParticleConfig& c, int t, const StripSpec& spec, Rng& rng, int cap = kTrapezoidWalkCap);
WalkEnsemble trapezoid_trajectory(const ParticleConfig& c0, const StripSpec& spec, Rng& rng, int cap = kTrapezoidWalkCap);

// Lag-k autocorrelation of a scalar series (used as a burn-in diagnostic).
double autocorrelation(const std::vector<double>& series, int lag);

}  // namespace tiling_lab
