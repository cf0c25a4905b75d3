#include "tiling_lab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tiling_lab/analysis.hpp"
#include "tiling_lab/entropy.hpp"
#include "tiling_lab/error.hpp"
#include "tiling_lab/io.hpp"
#include "tiling_lab/sampler.hpp"

namespace tiling_lab {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// Writes primary outputs, a manifest without timings, and timings separately.
class Output {
 public:
  Output(const RunContext& ctx, const ExperimentConfig& c, std::string command) : ctx_(ctx), start_(Clock::now()) {
    manifest_["command"] = std::move(command);
    manifest_["seed"] = c.seed;
    manifest_["threads_independent"] = true;
    manifest_["config"] = json::parse(serialize_config(c));
    manifest_["files"] = json::array();
    std::filesystem::create_directories(ctx.out);
  }
  void file(const std::string& name, std::string_view content) {
    std::lock_guard lock(mutex_);
    write_file(ctx_.out / name, content);
    manifest_["files"].push_back(name);
  }
  void time(const std::string& what, double s) {
    std::lock_guard lock(mutex_);
    timings_[what] = s;
  }
  std::string finish(const json& summary) {
    std::string text = summary.dump(2) + "\n";
    file("summary.json", text);
    write_file(ctx_.out / "manifest.json", manifest_.dump(2) + "\n");
    timings_["total"] = seconds_since(start_);
    write_file(ctx_.out / "timings.json", timings_.dump(2) + "\n");
    return text;
  }

 private:
  const RunContext& ctx_;
  Clock::time_point start_;
  json manifest_;
  json timings_ = json::object();
  std::mutex mutex_;
};

std::vector<const ExperimentSpec*> experiments_of(const ExperimentConfig& c, const std::string& kind) {
  std::vector<const ExperimentSpec*> out;
  for (const ExperimentSpec& e : c.experiments)
    if (e.kind == kind) out.push_back(&e);
  if (out.empty()) throw ConfigError("config has no '" + kind + "' experiment");
  return out;
}

std::vector<HeightFunction> draw_samples(const ExperimentConfig& c, const DomainWithBoundary& db, const Rng& rng, int threads) {
  auto d = std::make_shared<const Domain>(db.domain);
  const SamplerConfig& s = c.sampler;
  const auto count = static_cast<std::size_t>(s.samples);
  if (s.method == "cftp") return cftp_samples(d, db.boundary, count, rng, threads);
  std::vector<HeightFunction> out(count);
  if (s.method == "bridge") {
    ParticleConfig c0 = config_initial(c);
    parallel_for(count, threads, [&](std::size_t k) {
      Rng r = rng.stream("chain", k);
      out[k] = height_from_walks(trapezoid_trajectory(c0, c.domain.strip, r), d);
    });
    return out;
  }
  const long burn = s.burn_in > 0 ? s.burn_in : 20 * static_cast<long>(d->vertex_count());
  const auto chains = static_cast<std::size_t>(s.chains);
  parallel_for(chains, threads, [&](std::size_t k) {
    ColourChain chain(min_extension(d, db.boundary), rng.stream("chain", k));
    chain.advance(static_cast<std::uint64_t>(burn));
    for (std::size_t i = k; i < count; i += chains) {
      if (i != k) chain.advance(static_cast<std::uint64_t>(s.thinning));
      out[i] = chain.state();
    }
  });
  return out;
}

// Finite-difference slope at a grid node, one-sided next to masked nodes.
Slope node_slope(const ContinuumField& H, int i, int j) {
  const GridSpec& g = H.grid();
  auto diff = [&](int di, int dj, double h) {
    bool fwd = H.valid(i + di, j + dj), back = H.valid(i - di, j - dj);
    if (fwd && back) return (H.real(i + di, j + dj) - H.real(i - di, j - dj)) / (2 * h);
    if (fwd) return (H.real(i + di, j + dj) - H.real(i, j)) / h;
    if (back) return (H.real(i, j) - H.real(i - di, j - dj)) / h;
    throw InvalidInput("limit shape: node (" + std::to_string(i) + "," + std::to_string(j) + ") has no neighbour");
  };
  return {diff(1, 0, g.hx), diff(0, 1, g.ht)};
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t k = next++;
        if (k >= count) return;
        try {
          body(k);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!error) error = std::current_exception();
          next = count;
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<HeightFunction> cftp_samples(std::shared_ptr<const Domain> d, const BoundaryHeight& h, std::size_t count, const Rng& rng,
                                         int threads) {
  std::vector<HeightFunction> out(count);
  parallel_for(count, threads, [&](std::size_t k) {
    Rng r = rng.stream("chain", k);
    out[k] = cftp_sample(d, h, r);
  });
  return out;
}

DomainWithBoundary config_domain(const ExperimentConfig& c) {
  if (c.domain.kind == "hexagon") return build_hexagon(c.domain.a, c.domain.b, c.domain.c);
  StripBoundary ends;
  if (c.domain.initial) ends.south = *c.domain.initial;
  return build_strip(c.domain.strip, ends);
}

ParticleConfig config_initial(const ExperimentConfig& c) {
  if (c.domain.kind != "strip") throw ConfigError("initial configuration: domain is not a strip");
  const StripSpec& s = c.domain.strip;
  ParticleConfig p{s.n, {}};
  if (c.domain.initial) {
    p.positions = *c.domain.initial;
  } else {
    for (int i = 0; i < s.m; ++i) p.positions.push_back(s.left_wall(0) + i);
  }
  p.validate();
  return p;
}

std::string cmd_sample(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "sample");
  DomainWithBoundary db = config_domain(c);
  if (!is_admissible_boundary(db.domain, db.boundary)) throw InvalidInput("sample: boundary data is not admissible");
  out.file("domain.json", domain_to_json(db.domain, db.boundary));
  auto t0 = Clock::now();
  std::vector<HeightFunction> samples = draw_samples(c, db, Rng(c.seed), ctx.threads);
  out.time("sampling", seconds_since(t0));
  json list = json::array();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const std::string stem = "sample_" + std::to_string(k);
    Tiling t = tiling_from_height(samples[k]);
    out.file(stem + ".tiling.json", tiling_to_json(t));
    out.file(stem + ".svg", render_svg(t));
    bool walks = true;
    try {
      out.file(stem + ".walks.csv", walks_to_csv(walks_from_height(samples[k])));
    } catch (const InvalidInput&) {
      walks = false;
    }
    std::size_t chain = c.sampler.method == "glauber" ? k % static_cast<std::size_t>(c.sampler.chains) : k;
    list.push_back({{"index", k}, {"stream", "chain:" + std::to_string(chain)}, {"walks", walks}});
  }
  return out.finish({{"command", "sample"}, {"method", c.sampler.method}, {"samples", list}});
}

std::string cmd_limit_shape(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "limit-shape");
  EntropyOptions opts;
  opts.threads = ctx.threads;
  auto t0 = Clock::now();
  EntropyMaximum max;
  json extra = json::object();
  if (c.domain.kind == "hexagon") {
    max = maximize_entropy_hexagon(c.domain.a, c.domain.b, c.domain.c, c.resolution, opts);
    if (c.resolution % 2 == 0 && c.resolution >= 2) {
      EntropyMaximum coarse = maximize_entropy_hexagon(c.domain.a, c.domain.b, c.domain.c, c.resolution / 2, opts);
      extra["entropy_half_resolution"] = coarse.entropy;
      extra["entropy_change"] = std::fabs(max.entropy - coarse.entropy);
    }
  } else {
    DomainWithBoundary db = config_domain(c);
    const double mesh = 1.0 / c.domain.strip.n;
    std::vector<double> values;
    for (int v : db.boundary.values()) values.push_back(v * mesh);
    max = maximize_entropy(db.domain, values, mesh, opts);
  }
  out.time("maximize_entropy", seconds_since(t0));
  const ContinuumField& H = max.height;
  const GridSpec& g = H.grid();
  ContinuumField f(g);
  int ai = -1, aj = -1;
  std::ostringstream arctic;
  arctic.precision(12);
  arctic << "t,x_left,x_right\n";
  std::size_t liquid = 0;
  for (int j = 0; j < g.nt; ++j) {
    int first = -1, last = -1;
    for (int i = 0; i < g.nx; ++i) {
      if (!H.valid(i, j)) continue;
      if (ai < 0) ai = i, aj = j;
      Slope sl = node_slope(H, i, j);
      auto p = sl.proportions();
      if (std::min({p[0], p[1], p[2]}) >= 1e-6) {
        if (first < 0) first = i;
        last = i;
        ++liquid;
      }
      for (double& q : p) q = std::max(q, 1e-9);
      double sum = p[0] + p[1] + p[2];
      f.set(i, j, slope_to_complex({1.0 - p[0] / sum, -p[1] / sum}));
    }
    if (first >= 0) arctic << g.t(j) << "," << g.x(first) << "," << g.x(last) << "\n";
  }
  if (ai < 0) throw InvalidInput("limit shape: empty domain");
  // Central differences reintegrate to within O(mesh) of the field.
  ContinuumField back = limit_height_from_slope(f, ai, aj, H.real(ai, aj), 10.0 * g.hx);
  double gap = 0.0;
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (H.valid(i, j)) gap = std::max(gap, std::fabs(back.real(i, j) - H.real(i, j)));
  out.file("limit_height.csv", H.to_csv());
  out.file("complex_slope.csv", f.to_csv());
  out.file("arctic_curve.csv", arctic.str());
  json summary = {{"command", "limit-shape"},
                  {"entropy", max.entropy},
                  {"residual", max.residual},
                  {"sweeps", max.sweeps},
                  {"mesh", g.hx},
                  {"liquid_nodes", liquid},
                  {"reintegration_sup_gap", gap}};
  summary.update(extra);
  return out.finish(summary);
}

std::string cmd_concentration(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "concentration");
  json runs = json::array();
  for (const ExperimentSpec* e : experiments_of(c, "concentration")) {
    std::vector<double> ns, sups;
    json rows = json::array();
    for (int n : e->n_ladder) {
      auto t0 = Clock::now();
      auto hex = build_hexagon(c.domain.a * n, c.domain.b * n, c.domain.c * n);
      auto samples = cftp_samples(std::make_shared<const Domain>(hex.domain), hex.boundary, static_cast<std::size_t>(e->samples),
                                  Rng(c.seed).stream("concentration", static_cast<std::uint64_t>(n)), ctx.threads);
      ConcentrationReport r = height_deviation(samples, hexagon_limit_height(c.domain.a, c.domain.b, c.domain.c, n), n);
      out.time("concentration_n" + std::to_string(n), seconds_since(t0));
      ns.push_back(n);
      sups.push_back(r.mean_sup_deviation);
      rows.push_back({{"n", n},
                      {"samples", r.samples},
                      {"sup_deviation", r.sup_deviation},
                      {"mean_sup_deviation", r.mean_sup_deviation},
                      {"mean_field_sup", r.mean_field_sup},
                      {"frozen_mismatches", r.frozen_mismatches}});
    }
    json run = {{"levels", rows}};
    if (ns.size() >= 2) {
      ScalingFit fit = loglog_fit(ns, sups);
      run["exponent"] = fit.slope;
      run["exponent_ci"] = {fit.ci_low, fit.ci_high};
      run["exponent_threshold"] = 0.25;
      run["pass"] = fit.slope <= 0.25;
    }
    runs.push_back(run);
  }
  return out.finish({{"command", "concentration"}, {"runs", runs}});
}

std::string cmd_edge_scaling(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "edge-scaling");
  json runs = json::array();
  std::size_t index = 0;
  for (const ExperimentSpec* e : experiments_of(c, "edge_scaling")) {
    std::vector<double> rel = e->rows.empty() ? std::vector<double>{0.375, 0.4375, 0.5, 0.5625, 0.625} : e->rows;
    std::vector<EdgeStdPoint> points;
    for (int n : e->n_ladder) {
      auto t0 = Clock::now();
      auto hex = build_hexagon(c.domain.a * n, c.domain.b * n, c.domain.c * n);
      auto samples = cftp_samples(std::make_shared<const Domain>(hex.domain), hex.boundary, static_cast<std::size_t>(e->samples),
                                  Rng(c.seed).stream("edges", static_cast<std::uint64_t>(n)), ctx.threads);
      EdgeProfile p = edge_statistics(sample_edges(samples));
      out.time("edges_n" + std::to_string(n), seconds_since(t0));
      const int span = (c.domain.a + c.domain.b) * n;
      for (double r : rel) {
        const auto y = static_cast<std::size_t>(std::lround(r * span));
        for (int side = 0; side < 2; ++side) {
          double sd = side == 0 ? p.left_std[y] : p.right_std[y];
          if (std::isfinite(sd)) points.push_back({n, r, side, sd, samples.size()});
        }
      }
    }
    out.file("edge_points_" + std::to_string(index++) + ".csv", edge_points_csv(points));
    ScalingFit fit = edge_fluctuation_fit(points);
    runs.push_back({{"exponent", fit.slope},
                    {"exponent_ci", {fit.ci_low, fit.ci_high}},
                    {"points", fit.points},
                    {"target", 2.0 / 3.0},
                    {"accept_range", {0.5, 0.8}},
                    {"pass", fit.slope >= 0.5 && fit.slope <= 0.8}});
  }
  return out.finish({{"command", "edge-scaling"}, {"runs", runs}});
}

std::string cmd_drift(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "drift");
  const StripSpec& spec = c.domain.strip;
  json runs = json::array();
  for (const ExperimentSpec* e : experiments_of(c, "drift")) {
    if (e->time < 0 || e->time >= spec.rows()) throw ConfigError("drift: time must lie in [0, rows)");
    ParticleConfig c0 = config_initial(c);
    if (e->time > 0) {
      Rng r = Rng(c.seed).stream("config");
      c0 = ParticleConfig{spec.n, trapezoid_trajectory(c0, spec, r).row(e->time)};
    }
    json points = json::array();
    std::vector<DriftCheck> checks(e->z.size());
    parallel_for(e->z.size(), ctx.threads, [&](std::size_t k) {
      Rng r = Rng(c.seed).stream("drift", k);
      checks[k] = drift_check(spec, c0, e->time, e->z[k], static_cast<std::size_t>(e->draws), r);
    });
    bool all = true;
    for (const DriftCheck& d : checks) {
      double bound = std::max(3.0 * d.stderr_mean, 5.0 / spec.n);
      bool pass = std::abs(d.mc_mean - d.prediction) <= bound;
      all = all && pass;
      points.push_back({{"z", complex_json(d.z)},
                        {"mc_mean", complex_json(d.mc_mean)},
                        {"mc_variance", d.mc_variance},
                        {"exact_mean", complex_json(d.exact_mean)},
                        {"prediction", complex_json(d.prediction)},
                        {"stderr", d.stderr_mean},
                        {"zscore", d.zscore},
                        {"bound", bound},
                        {"pass", pass}});
    }
    runs.push_back({{"configuration", c0.positions}, {"time", e->time}, {"points", points}, {"pass", all}});
  }
  return out.finish({{"command", "drift"}, {"runs", runs}});
}

std::string cmd_exclusion(const ExperimentConfig& c, const RunContext& ctx) {
  Output out(ctx, c, "exclusion");
  const StripSpec& spec = c.domain.strip;
  const ParticleConfig c0 = config_initial(c);
  TrapezoidLimit limit = TrapezoidLimit::from_config(c0, spec);
  std::vector<double> tangency = limit.tangency_times();
  std::vector<LimitSlice> slices;
  for (int k = 0; k <= spec.rows(); ++k) slices.push_back(limit.slice(static_cast<double>(k) / spec.n));
  json runs = json::array();
  for (const ExperimentSpec* e : experiments_of(c, "exclusion")) {
    const auto count = static_cast<std::size_t>(e->samples);
    std::vector<std::size_t> clean(count, 0), total(count, 0), holes(count, 0);
    parallel_for(count, ctx.threads, [&](std::size_t s) {
      Rng r = Rng(c.seed).stream("chain", s);
      WalkEnsemble w = trapezoid_trajectory(c0, spec, r);
      for (int k = 0; k <= spec.rows(); ++k) {
        ExclusionCount x = interval_exclusion(ParticleConfig{spec.n, w.row(k)}, slices[static_cast<std::size_t>(k)], tangency, e->delta);
        ++total[s];
        if (x.particles_outside == 0) ++clean[s];
        holes[s] += x.holes_outside;
      }
    });
    std::size_t ok = 0, all = 0, h = 0;
    for (std::size_t s = 0; s < count; ++s) {
      ok += clean[s];
      all += total[s];
      h += holes[s];
    }
    double fraction = static_cast<double>(ok) / static_cast<double>(all);
    runs.push_back({{"delta", e->delta},
                    {"slices", all},
                    {"clean_slices", ok},
                    {"clean_fraction", fraction},
                    {"holes_outside", h},
                    {"tangency_times", tangency},
                    {"pass", fraction >= 0.99}});
  }
  return out.finish({{"command", "exclusion"}, {"runs", runs}});
}

std::string cmd_render(const std::filesystem::path& domain_json, const std::filesystem::path& tiling_json) {
  DomainWithBoundary db = domain_from_json(read_file(domain_json));
  Tiling t = tiling_from_json(read_file(tiling_json), std::make_shared<const Domain>(db.domain));
  return render_svg(t);
}

}  // namespace tiling_lab
