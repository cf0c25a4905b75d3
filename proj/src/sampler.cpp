#include "tiling_lab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

std::pair<int, int> legal_interval(const HeightFunction& h, int x, int y) {
  int w = h.at(x - 1, y), e = h.at(x + 1, y);
  int n = h.at(x, y + 1), ne = h.at(x + 1, y + 1);
  int s = h.at(x, y - 1), sw = h.at(x - 1, y - 1);
  int lower = std::max({w, n, sw, e - 1, s - 1, ne - 1});
  int upper = std::min({w + 1, n + 1, sw + 1, e, s, ne});
  return {lower, upper};
}

double heat_bath_probability(const HeightFunction& h, int x, int y, int v) {
  auto [lo, hi] = legal_interval(h, x, y);
  if (v < lo || v > hi) return 0.0;
  return 1.0 / (hi - lo + 1);
}

namespace {

std::vector<Vertex> shuffled_interior(const Domain& d, Rng& rng) {
  std::vector<Vertex> order;
  for (std::size_t i : d.interior_indices()) order.push_back(d.vertex(i));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

void heat_bath_update(HeightFunction& h, const Vertex& v, double u) {
  auto [lo, hi] = legal_interval(h, v.x, v.y);
  h.set(v.x, v.y, u < 0.5 ? lo : hi);
}

}  // namespace

void glauber_sweep_in_place(HeightFunction& h, Rng& rng) {
  for (const Vertex& v : shuffled_interior(h.domain(), rng)) heat_bath_update(h, v, rng.uniform());
}

HeightFunction glauber_sweep(const HeightFunction& h, Rng& rng) {
  HeightFunction out = h;
  glauber_sweep_in_place(out, rng);
  return out;
}

void CouplingPair::validate() const {
  if (!(lower.domain() == upper.domain())) throw InvalidInput("coupling pair: chains live on different domains");
  const Domain& d = lower.domain();
  for (std::size_t i : d.boundary_indices())
    if (lower.values()[i] != upper.values()[i]) throw InvalidInput("coupling pair: boundary data differ");
  for (std::size_t i = 0; i < lower.values().size(); ++i)
    if (lower.values()[i] > upper.values()[i]) throw InvalidInput("coupling pair: lower chain exceeds upper chain");
}

CouplingPair coupled_sweep(const CouplingPair& pair, Rng& rng) {
  pair.validate();
  CouplingPair out = pair;
  for (const Vertex& v : shuffled_interior(pair.lower.domain(), rng)) {
    double u = rng.uniform();
    heat_bath_update(out.lower, v, u);
    heat_bath_update(out.upper, v, u);
  }
  return out;
}

HeightFunction min_extension(std::shared_ptr<const Domain> d, const BoundaryHeight& h) {
  HeightEnvelopes env = height_envelopes(*d, h);
  if (!env.admissible) throw InvalidInput("boundary data admit no height function");
  return HeightFunction(std::move(d), std::vector<std::int32_t>(env.lower.begin(), env.lower.end()));
}

HeightFunction max_extension(std::shared_ptr<const Domain> d, const BoundaryHeight& h) {
  HeightEnvelopes env = height_envelopes(*d, h);
  if (!env.admissible) throw InvalidInput("boundary data admit no height function");
  return HeightFunction(std::move(d), std::vector<std::int32_t>(env.upper.begin(), env.upper.end()));
}

CftpResult cftp_sample_detailed(std::shared_ptr<const Domain> d, const BoundaryHeight& h, Rng& rng, const CftpOptions& opts) {
  HeightEnvelopes env = height_envelopes(*d, h);
  if (!env.admissible) throw InvalidInput("cftp: boundary data admit no height function");
  std::uint64_t key = rng.next_u64();
  std::vector<std::int32_t> lo(env.lower.begin(), env.lower.end()), hi(env.upper.begin(), env.upper.end());
  if (lo == hi) return {HeightFunction(d, lo), 0};
  ColourSweeper sweeper(*d, opts.kernel);
  SweepGrid lo_grid = sweeper.make_grid(lo), hi_grid = sweeper.make_grid(hi);
  for (int k = opts.initial_log2; k <= opts.max_log2; ++k) {
    SweepGrid a = lo_grid, b = hi_grid;
    // Sweep s moves the chain from time -s-1 to -s; its coins depend only on s.
    for (std::uint64_t s = std::uint64_t{1} << k; s-- > 0;) sweeper.sweep_pair(a, b, key, s);
    if (a == b) return {HeightFunction(d, sweeper.read(a)), k};
  }
  throw TooLarge("cftp: no coalescence from time -2^" + std::to_string(opts.max_log2));
}

HeightFunction cftp_sample(std::shared_ptr<const Domain> d, const BoundaryHeight& h, Rng& rng, const CftpOptions& opts) {
  return cftp_sample_detailed(std::move(d), h, rng, opts).sample;
}

ColourChain::ColourChain(HeightFunction start, Rng rng, KernelKind kernel)
    : domain_(start.domain_ptr()), sweeper_(start.domain(), kernel), grid_(sweeper_.make_grid(start.values())), key_(rng.next_u64()) {
  start.validate();
}

void ColourChain::advance(std::uint64_t sweeps) {
  for (std::uint64_t s = 0; s < sweeps; ++s) sweeper_.sweep(grid_, key_, sweep_++);
}

HeightFunction ColourChain::state() const { return HeightFunction(domain_, sweeper_.read(grid_)); }

std::uint32_t StepDistribution::draw(Rng& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  std::size_t k = std::min(static_cast<std::size_t>(it - cumulative.begin()), moves.size() - 1);
  return moves[k];
}

StepDistribution trapezoid_step_distribution(const ParticleConfig& c, int t, const StripSpec& spec, int cap) {
  spec.validate();
  c.validate();
  if (!spec.is_packed_trapezoid()) throw InvalidInput("trapezoid step: spec is not a packed trapezoid (a_slope=1, b_slope=0, packed end)");
  if (c.n != spec.n) throw InvalidInput("trapezoid step: configuration scale differs from the strip scale");
  if (c.m() != spec.m) throw InvalidInput("trapezoid step: configuration must hold m particles");
  if (c.m() > cap) throw TooLarge("trapezoid step: m exceeds the enumeration cap");
  if (t < 0 || t >= spec.rows()) throw InvalidInput("trapezoid step: time outside [0, T)");
  const int A = spec.left_wall(t), B = spec.right_wall(t);
  const std::vector<int>& k = c.positions;
  for (int p : k)
    if (p < A || p > B - 1) throw InvalidInput("trapezoid step: particle outside the strip at time " + std::to_string(t));
  const int m = c.m();
  std::vector<std::uint32_t> moves;
  std::vector<double> logw;
  std::vector<int> y(static_cast<std::size_t>(m));
  // Weight (V(k+e)/V(k)) prod (B-1-k_i)^{e_i} (k_i-A)^{1-e_i}; every factor is positive on
  // surviving branches, so only magnitudes are tracked.
  auto rec = [&](auto&& self, int i, double lw, std::uint32_t mask) -> void {
    if (i == m) {
      moves.push_back(mask);
      logw.push_back(lw);
      return;
    }
    for (int e = 0; e <= 1; ++e) {
      int yi = k[static_cast<std::size_t>(i)] + e;
      if (i > 0 && yi <= y[static_cast<std::size_t>(i - 1)]) continue;
      int boundary = e ? B - 1 - k[static_cast<std::size_t>(i)] : k[static_cast<std::size_t>(i)] - A;
      if (boundary <= 0) continue;
      double ratio = boundary;
      for (int j = 0; j < i; ++j)
        ratio *= static_cast<double>(yi - y[static_cast<std::size_t>(j)]) / (k[static_cast<std::size_t>(i)] - k[static_cast<std::size_t>(j)]);
      y[static_cast<std::size_t>(i)] = yi;
      self(self, i + 1, lw + std::log(ratio), mask | (static_cast<std::uint32_t>(e) << i));
    }
  };
  rec(rec, 0, 0.0, 0u);
  if (moves.empty()) throw std::logic_error("trapezoid step: all transition weights vanish");
  double top = *std::max_element(logw.begin(), logw.end());
  StepDistribution out;
  out.moves = std::move(moves);
  out.probabilities.resize(logw.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) total += out.probabilities[i] = std::exp(logw[i] - top);
  out.cumulative.resize(logw.size());
  double run = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    out.probabilities[i] /= total;
    run += out.probabilities[i];
    out.cumulative[i] = run;
  }
  out.cumulative.back() = 1.0;
  return out;
}

ParticleConfig apply_step(const ParticleConfig& c, std::uint32_t move) {
  ParticleConfig out = c;
  for (int i = 0; i < c.m(); ++i) out.positions[static_cast<std::size_t>(i)] += static_cast<int>((move >> i) & 1u);
  return out;
}

ParticleConfig trapezoid_step(const ParticleConfig& c, int t, const StripSpec& spec, Rng& rng, int cap) {
  return apply_step(c, trapezoid_step_distribution(c, t, spec, cap).draw(rng));
}

WalkEnsemble trapezoid_trajectory(const ParticleConfig& c0, const StripSpec& spec, Rng& rng, int cap) {
  Rng base = Rng::from_key(rng.next_u64());
  const int T = spec.rows(), m = c0.m();
  std::vector<int> pos(static_cast<std::size_t>(m) * static_cast<std::size_t>(T + 1));
  ParticleConfig c = c0;
  auto record = [&](int t) {
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(i) * static_cast<std::size_t>(T + 1) + static_cast<std::size_t>(t)] = c.positions[static_cast<std::size_t>(i)];
  };
  record(0);
  for (int t = 0; t < T; ++t) {
    Rng step = base.stream("step", static_cast<std::uint64_t>(t));
    c = trapezoid_step(c, t, spec, step, cap);
    record(t + 1);
  }
  for (int i = 0; i < m; ++i)
    if (c.positions[static_cast<std::size_t>(i)] != spec.left_wall(T) + i) throw std::logic_error("trapezoid trajectory: final configuration is not packed");
  return WalkEnsemble(m, T, std::move(pos));
}

double autocorrelation(const std::vector<double>& series, int lag) {
  std::size_t n = series.size();
  if (lag < 0 || static_cast<std::size_t>(lag) >= n) throw InvalidInput("autocorrelation: lag out of range");
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double var = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (series[i] - mean) * (series[i] - mean);
  for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < n; ++i)
    cov += (series[i] - mean) * (series[i + static_cast<std::size_t>(lag)] - mean);
  return var > 0.0 ? cov / var : 0.0;
}

}  // namespace tiling_lab
