// Acceptance run: one PASS/FAIL line per criterion.  Usage: acceptance [--only 1,5,10] [--seed S] [--threads T]

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "tiling_lab/analysis.hpp"
#include "tiling_lab/commands.hpp"
#include "tiling_lab/entropy.hpp"
#include "tiling_lab/enumerate.hpp"
#include "tiling_lab/sampler.hpp"
#include "tiling_lab/trapezoid_limit.hpp"

using namespace tiling_lab;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::uint64_t seed = 20240601;
  int threads = 1;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::shared_ptr<const Domain> share(const Domain& d) { return std::make_shared<const Domain>(d); }

double chi_square_p(const std::vector<long>& counts) {
  double total = 0;
  for (long c : counts) total += static_cast<double>(c);
  double expect = total / static_cast<double>(counts.size()), stat = 0;
  for (long c : counts) stat += (static_cast<double>(c) - expect) * (static_cast<double>(c) - expect) / expect;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// ---- 1. Enumeration against the MacMahon product ----
Outcome enumeration(const Context&) {
  Outcome o{true, ""};
  for (int a = 1; a <= 4; ++a) {
    auto hex = build_hexagon(a, a, a);
    BigInt got = enumerate_tilings(share(hex.domain), hex.boundary).count();
    BigInt want = oracle::macmahon(a, a, a);
    o.pass = o.pass && got == want;
    o.detail += fmt("(%d,%d,%d)=%s ", a, a, a, got.str().c_str());
  }
  return o;
}

// ---- 2. Exact and Glauber samplers against the uniform law on 20 tilings ----
Outcome sampler_exactness(const Context& ctx) {
  auto hex = build_hexagon(2, 2, 2);
  auto d = share(hex.domain);
  auto all = enumerate_tilings(d, hex.boundary).all();
  std::map<std::vector<std::int32_t>, std::size_t> id;
  for (std::size_t k = 0; k < all.size(); ++k) id[all[k].values()] = k;
  const int draws = 10000;
  std::vector<long> cftp(all.size(), 0), glauber(all.size(), 0);
  Rng root(ctx.seed);
  for (const HeightFunction& h : cftp_samples(d, hex.boundary, draws, root.stream("cftp"), ctx.threads)) ++cftp[id.at(h.values())];
  ColourChain chain(min_extension(d, hex.boundary), root.stream("glauber"));
  chain.advance(20 * d->vertex_count());
  for (int k = 0; k < draws; ++k) {
    chain.advance(5);
    ++glauber[id.at(chain.state().values())];
  }
  double p1 = chi_square_p(cftp), p2 = chi_square_p(glauber);
  return {p1 > 1e-3 && p2 > 1e-3, fmt("tilings=%zu cftp p=%.4f glauber p=%.4f (need > 1e-3)", all.size(), p1, p2)};
}

// ---- 3. Monotone coupling ----
Outcome monotone_coupling(const Context& ctx) {
  auto hex = build_hexagon(6, 6, 6);
  auto d = share(hex.domain);
  CouplingPair p{min_extension(d, hex.boundary), max_extension(d, hex.boundary)};
  Rng rng = Rng(ctx.seed).stream("coupling");
  long violations = 0;
  for (int s = 0; s < 10000; ++s) {
    p = coupled_sweep(p, rng);
    for (std::size_t i = 0; i < p.lower.values().size(); ++i)
      if (p.lower.values()[i] > p.upper.values()[i]) ++violations;
  }
  return {violations == 0, fmt("sweeps=10000 violations=%ld coalesced=%s", violations, p.lower == p.upper ? "yes" : "no")};
}

// ---- 4. Bijection round trips ----
Outcome round_trips(const Context& ctx) {
  const std::vector<std::array<int, 3>> shapes{{2, 3, 4}, {3, 3, 3}, {4, 2, 5}, {5, 5, 5}, {1, 6, 2}};
  long failures = 0, instances = 0;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    auto hex = build_hexagon(shapes[s][0], shapes[s][1], shapes[s][2]);
    auto d = share(hex.domain);
    for (const HeightFunction& h : cftp_samples(d, hex.boundary, 200, Rng(ctx.seed).stream("bijection", s), ctx.threads)) {
      ++instances;
      Tiling t = tiling_from_height(h);
      WalkEnsemble w = walks_from_height(h);
      bool ok = height_from_tiling(t, h.values()[0]) == h;
      ok = ok && tiling_from_height(height_from_tiling(t, h.values()[0])).lozenges() == t.lozenges();
      ok = ok && height_from_walks(w, d, h.values()[0]) == h;
      ok = ok && walks_from_height(height_from_walks(w, d, h.values()[0])) == w;
      if (!ok) ++failures;
    }
  }
  return {failures == 0 && instances >= 1000, fmt("instances=%ld failures=%ld", instances, failures)};
}

// ---- 5. Analytic layer ----
Outcome analytic_layer(const Context&) {
  double l0 = std::fabs(lobachevsky(0.0)), lpi = std::fabs(lobachevsky(kPi));
  double edge = 0.0;
  for (int k = 0; k <= 100; ++k) {
    double a = k / 100.0;
    for (Slope s : {Slope{a, 0.0}, Slope{1.0, -a}, Slope{a, -a}}) edge = std::max(edge, std::fabs(surface_tension(s)));
  }
  // Interior grid (s, t) = (a, -a b), a, b in (0, 1): proportions (1 - a, a b, a (1 - b)).
  double worst_eig = -1e300, worst_eq = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      double a = (i + 1) / 51.0, b = (j + 1) / 51.0;
      Slope sl{a, -a * b};
      Eigen::Matrix2d H;
      for (int c = 0; c < 2; ++c) {
        Slope plus = sl, minus = sl;
        (c == 0 ? plus.s : plus.t) += h;
        (c == 0 ? minus.s : minus.t) -= h;
        auto gp = surface_tension_gradient(plus), gm = surface_tension_gradient(minus);
        H(0, c) = (gp[0] - gm[0]) / (2 * h);
        H(1, c) = (gp[1] - gm[1]) / (2 * h);
      }
      Eigen::Matrix2d S = 0.5 * (H + H.transpose());
      worst_eig = std::max(worst_eig, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(S).eigenvalues().maxCoeff());
      Complex f = slope_to_complex(sl);
      worst_eq = std::max({worst_eq, std::fabs(std::arg(f) + kPi * sl.s), std::fabs(std::arg(f + 1.0) - kPi * sl.t),
                           f.imag() < 0 ? 0.0 : 1.0});
    }
  bool pass = l0 <= 1e-8 && lpi <= 1e-8 && edge <= 1e-8 && worst_eig <= 1e-6 && worst_eq <= 1e-12;
  return {pass, fmt("|L(0)|=%.1e |L(pi)|=%.1e max|sigma| on boundary=%.1e max Hessian eigenvalue=%.3e max equation error=%.1e", l0, lpi,
                    edge, worst_eig, worst_eq)};
}

// ---- 6. Mean height against the entropy maximizer ----
Outcome variational(const Context& ctx) {
  const int n = 24;
  auto hex = build_hexagon(n, n, n);
  auto d = share(hex.domain);
  EntropyMaximum m = maximize_entropy_hexagon(1, 1, 1, 96);
  auto samples = cftp_samples(d, hex.boundary, 200, Rng(ctx.seed).stream("variational"), ctx.threads);
  ConcentrationReport r = height_deviation(samples, m.height, n);
  return {r.mean_field_sup <= 0.03 * n,
          fmt("n=%d samples=200 sup|mean H - nH*|=%.4f bound=%.2f (maximizer residual %.1e, %ld sweeps)", n, r.mean_field_sup, 0.03 * n,
              m.residual, m.sweeps)};
}

// ---- 7. Burgers consistency of the analytic trapezoid slope ----
Outcome burgers(const Context&) {
  TrapezoidLimit L(0.0, 1.0, 0.6, {{0.1, 0.3}, {0.6, 0.8}});
  std::vector<double> res;
  for (double h : {0.02, 0.01, 0.005, 0.0025}) {
    const int nx = static_cast<int>(std::lround(0.4 / h)) + 1, nt = static_cast<int>(std::lround(0.2 / h)) + 1;
    ContinuumField r = burgers_residual(L.slope_field({0.3, 0.1, h, h, nx, nt}, 0.2));
    double worst = 0.0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < nt; ++j)
        if (r.valid(i, j)) worst = std::max(worst, std::abs(r.value(i, j)));
    res.push_back(worst);
  }
  double min_ratio = 1e300;
  for (std::size_t k = 1; k < res.size(); ++k) min_ratio = std::min(min_ratio, res[k - 1] / res[k]);
  double drift = 0.0;
  for (Complex u : {Complex(0.5, 0.4), Complex(0.2, 0.6), Complex(1.3, 0.3), Complex(0.45, 0.2)}) {
    Complex f0 = L.initial_slope(u);
    for (double t : {0.05, 0.1, 0.2, 0.3}) {
      Complex z = characteristic(u, f0, t);
      if (z.imag() < 0.05) continue;
      drift = std::max(drift, std::abs(L.slope(z, t) - f0));
    }
  }
  return {min_ratio >= 1.8 && drift <= 1e-6, fmt("residuals %.2e %.2e %.2e %.2e min ratio=%.2f max |f - f0| on characteristics=%.1e", res[0],
                                                 res[1], res[2], res[3], min_ratio, drift)};
}

// ---- 8 and 9. Concentration and edge scaling on one sample set ----
struct LadderSamples {
  std::vector<int> ns{16, 32, 64};
  std::map<int, std::vector<HeightFunction>> samples;
};

const LadderSamples& ladder(const Context& ctx) {
  static LadderSamples s;
  if (s.samples.empty())
    for (int n : s.ns) {
      auto hex = build_hexagon(n, n, n);
      s.samples[n] = cftp_samples(share(hex.domain), hex.boundary, 200, Rng(ctx.seed).stream("ladder", static_cast<std::uint64_t>(n)), ctx.threads);
    }
  return s;
}

Outcome concentration(const Context& ctx) {
  const LadderSamples& s = ladder(ctx);
  std::vector<double> x, y;
  std::string detail;
  for (int n : s.ns) {
    ConcentrationReport r = height_deviation(s.samples.at(n), hexagon_limit_height(1, 1, 1, n), n);
    x.push_back(n);
    y.push_back(r.mean_sup_deviation);
    detail += fmt("n=%d mean sup=%.3f ", n, r.mean_sup_deviation);
  }
  ScalingFit f = loglog_fit(x, y);
  return {f.slope <= 0.25, detail + fmt("exponent=%.3f [%.3f, %.3f] (need <= 0.25)", f.slope, f.ci_low, f.ci_high)};
}

Outcome edge_scaling(const Context& ctx) {
  const LadderSamples& s = ladder(ctx);
  const std::vector<double> rows{0.375, 0.4375, 0.5, 0.5625, 0.625};
  std::vector<EdgeStdPoint> points;
  std::string detail;
  for (int n : s.ns) {
    SampleEdges e = sample_edges(s.samples.at(n));
    EdgeProfile p = edge_statistics(e);
    double mean_std = 0.0;
    for (double r : rows) {
      int y = static_cast<int>(std::lround(r * 2 * n));
      std::size_t k = static_cast<std::size_t>(y - p.rows.front());
      points.push_back({n, r, 0, p.left_std[k], p.samples});
      points.push_back({n, r, 1, p.right_std[k], p.samples});
      mean_std += (p.left_std[k] + p.right_std[k]) / (2.0 * rows.size());
    }
    detail += fmt("n=%d mean std=%.3f ", n, mean_std);
  }
  ScalingFit f = edge_fluctuation_fit(points);
  return {f.slope >= 0.5 && f.slope <= 0.8, detail + fmt("exponent=%.3f [%.3f, %.3f] (need in [0.5, 0.8])", f.slope, f.ci_low, f.ci_high)};
}

// ---- 10. Drift identity ----
Outcome drift(const Context& ctx) {
  StripSpec spec;
  spec.a0 = 0;
  spec.a_slope = 1;
  spec.b0 = Rational(1, 2);
  spec.t_max = Rational(1, 4);
  spec.n = 24;
  spec.m = 6;
  ParticleConfig c{24, {0, 2, 4, 6, 8, 10}};
  bool pass = true;
  std::string detail;
  const std::vector<Complex> zs{{0.25, 0.3}, {0.7, 0.2}, {-0.15, -0.25}};
  for (std::size_t k = 0; k < zs.size(); ++k) {
    Rng rng = Rng(ctx.seed).stream("drift", k);
    DriftCheck r = drift_check(spec, c, 0, zs[k], 100000, rng);
    double gap = std::abs(r.mc_mean - r.prediction), bound = std::max(3 * r.stderr_mean, 5.0 / spec.n);
    pass = pass && gap <= bound;
    detail += fmt("z=%g%+gi gap=%.4f bound=%.4f z-score=%.1f; ", zs[k].real(), zs[k].imag(), gap, bound, r.zscore);
  }
  return {pass, detail};
}

// ---- 11. Frozen-interval exclusion ----
Outcome exclusion(const Context& ctx) {
  StripSpec spec;
  spec.a0 = Rational(-16, 64);
  spec.a_slope = 1;
  spec.b0 = Rational(32, 64);
  spec.t_max = Rational(1, 2);
  spec.n = 64;
  spec.m = 16;
  ParticleConfig c0{64, {}};
  for (int k = 0; k < 16; ++k) c0.positions.push_back(k);
  TrapezoidLimit limit = TrapezoidLimit::from_config(c0, spec);
  std::vector<double> tangency = limit.tangency_times();
  std::vector<LimitSlice> slices;
  for (int k = 0; k <= spec.rows(); ++k) slices.push_back(limit.slice(static_cast<double>(k) / spec.n));
  const std::size_t count = 200;
  std::vector<std::array<std::size_t, 2>> clean(count, {0, 0});
  parallel_for(count, ctx.threads, [&](std::size_t s) {
    Rng r = Rng(ctx.seed).stream("exclusion", s);
    WalkEnsemble w = trapezoid_trajectory(c0, spec, r);
    for (int k = 0; k <= spec.rows(); ++k) {
      ParticleConfig x{spec.n, w.row(k)};
      const LimitSlice& sl = slices[static_cast<std::size_t>(k)];
      if (interval_exclusion(x, sl, tangency, 0.1).particles_outside == 0) ++clean[s][0];
      if (interval_exclusion(x, sl, tangency, 0.0).particles_outside == 0) ++clean[s][1];
    }
  });
  double total = static_cast<double>(count) * (spec.rows() + 1), c1 = 0, c0f = 0;
  for (const auto& c : clean) {
    c1 += static_cast<double>(c[0]);
    c0f += static_cast<double>(c[1]);
  }
  return {c1 / total >= 0.99, fmt("slices=%.0f clean fraction delta=0.1: %.4f (need >= 0.99); delta=0: %.4f; tangency times %zu", total,
                                  c1 / total, c0f / total, tangency.size())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  Context ctx;
  std::vector<int> only;
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--seed", ctx.seed, "Base seed");
  app.add_option("--threads", ctx.threads, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Outcome(const Context&)> run;
  };
  const std::vector<Criterion> all{
      {1, "enumeration oracle", 10, enumeration},
      {2, "sampler exactness", 120, sampler_exactness},
      {3, "monotone coupling", 0, monotone_coupling},
      {4, "bijection round trips", 0, round_trips},
      {5, "analytic layer", 0, analytic_layer},
      {6, "variational principle", 900, variational},
      {7, "burgers consistency", 0, burgers},
      {8, "concentration scaling", 2700, concentration},
      {9, "edge fluctuations", 0, edge_scaling},
      {10, "drift identity", 300, drift},
      {11, "frozen-interval exclusion", 0, exclusion},
  };
  std::set<int> want(only.begin(), only.end());
  int failed = 0;
  for (const Criterion& c : all) {
    if (!want.empty() && !want.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.budget_s == 0 || secs < c.budget_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::string budget = c.budget_s > 0 ? fmt(" budget %.0fs", c.budget_s) : "";
    std::printf("criterion %2d %-26s %s  %s [%.1fs%s]\n", c.id, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(), secs, budget.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
