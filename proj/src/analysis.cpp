#include "tiling_lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_same_domain(const std::vector<HeightFunction>& samples) {
  for (const HeightFunction& h : samples)
    if (!(h.domain() == samples.front().domain())) throw InvalidInput("analysis: samples do not share a domain");
}

double distance_to_interval(Complex z, double a, double b) {
  return std::abs(z - Complex(std::clamp(z.real(), a, b), 0.0));
}

double t_quantile(double dof) {
  if (!(dof >= 1)) return std::numeric_limits<double>::infinity();
  return boost::math::quantile(boost::math::students_t(dof), 0.975);
}

}  // namespace

// ---- Concentration ----

ConcentrationReport height_deviation(const std::vector<HeightFunction>& samples, const ContinuumField& Hstar, int n,
                                     double frozen_tol) {
  if (samples.empty()) throw InvalidInput("height_deviation: no samples");
  if (n < 1) throw InvalidInput("height_deviation: n must be positive");
  check_same_domain(samples);
  const Domain& d = samples.front().domain();
  const std::size_t nv = d.vertex_count();
  std::vector<double> limit(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    Vertex v = d.vertex(i);
    try {
      limit[i] = n * Hstar.interpolate(static_cast<double>(v.x) / n, static_cast<double>(v.y) / n);
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string("height_deviation: limit field does not cover the domain: ") + e.what());
    }
  }
  std::vector<std::uint8_t> frozen(nv, 1);
  for (std::size_t i = 0; i < nv; ++i) {
    Vertex v = d.vertex(i);
    for (auto [dx, dy] : kRisingSteps) {
      if (!d.contains(v.x + dx, v.y + dy)) continue;
      double inc = limit[d.index(v.x + dx, v.y + dy)] - limit[i];
      if (std::fabs(inc) > frozen_tol && std::fabs(inc - 1.0) > frozen_tol) frozen[i] = 0;
    }
  }
  ConcentrationReport r;
  r.n = n;
  r.samples = samples.size();
  std::vector<double> mean(nv, 0.0);
  for (const HeightFunction& h : samples) {
    double sup = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      double dev = std::fabs(h.values()[i] - limit[i]);
      sup = std::max(sup, dev);
      mean[i] += h.values()[i];
      if (frozen[i] && dev > 0.5) ++r.frozen_mismatches;
    }
    r.sample_sups.push_back(sup);
    r.sup_deviation = std::max(r.sup_deviation, sup);
  }
  double total = 0.0;
  for (double s : r.sample_sups) total += s;
  r.mean_sup_deviation = total / static_cast<double>(samples.size());
  r.deviation.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    r.deviation[i] = std::fabs(mean[i] / static_cast<double>(samples.size()) - limit[i]);
    r.mean_field_sup = std::max(r.mean_field_sup, r.deviation[i]);
  }
  return r;
}

ContinuumField hexagon_limit_height(int a, int b, int c, int resolution) {
  if (resolution < 1) throw InvalidInput("hexagon_limit_height: resolution must be positive");
  auto hex = build_hexagon(a * resolution, b * resolution, c * resolution);
  const Domain& d = hex.domain;
  TrapezoidLimit limit = TrapezoidLimit::hexagon(a * resolution, b * resolution, c * resolution, resolution);
  BoundingBox bb = d.bounding_box();
  const double mesh = 1.0 / resolution;
  GridSpec g{bb.x_min * mesh, bb.y_min * mesh, mesh, mesh, bb.x_max - bb.x_min + 1, bb.y_max - bb.y_min + 1};
  ContinuumField out(g);
  for (int y = d.y_min(); y <= d.y_max(); ++y) {
    std::vector<double> xs;
    for (int x = d.left(y); x <= d.right(y); ++x) xs.push_back(x * mesh);
    std::vector<double> h = limit.heights(y * mesh, xs);
    for (int x = d.left(y); x <= d.right(y); ++x) out.set(x - bb.x_min, y - bb.y_min, h[static_cast<std::size_t>(x - d.left(y))]);
  }
  return out;
}

// ---- Frozen map and edges ----

std::vector<double> frozen_map(const std::vector<HeightFunction>& samples) {
  if (samples.size() < 2) throw InvalidInput("frozen_map: needs at least two samples");
  check_same_domain(samples);
  const Domain& d = samples.front().domain();
  std::vector<double> score(d.vertex_count(), 0.0);
  const double count = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < d.vertex_count(); ++i) {
    Vertex v = d.vertex(i);
    for (auto [dx, dy] : kRisingSteps) {
      if (!d.contains(v.x + dx, v.y + dy)) continue;
      std::size_t j = d.index(v.x + dx, v.y + dy);
      double s = 0.0, s2 = 0.0;
      for (const HeightFunction& h : samples) {
        double inc = h.values()[j] - h.values()[i];
        s += inc;
        s2 += inc * inc;
      }
      score[i] += std::max(0.0, (s2 - s * s / count) / (count - 1.0));
    }
  }
  return score;
}

EdgeProfile arctic_boundary(const Domain& d, const std::vector<double>& map, double threshold) {
  if (map.size() != d.vertex_count()) throw InvalidInput("arctic_boundary: map does not match the domain");
  EdgeProfile e;
  for (int y = d.y_min(); y <= d.y_max(); ++y) {
    int L = d.left(y), R = d.right(y);
    auto val = [&](int x) { return map[d.index(x, y)]; };
    double left = kNaN, right = kNaN;
    for (int x = L; x <= R; ++x)
      if (val(x) >= threshold) {
        left = x == L ? x : (x - 1) + (threshold - val(x - 1)) / (val(x) - val(x - 1));
        break;
      }
    for (int x = R; x >= L; --x)
      if (val(x) >= threshold) {
        right = x == R ? x : (x + 1) - (threshold - val(x + 1)) / (val(x) - val(x + 1));
        break;
      }
    e.rows.push_back(y);
    e.left.push_back(left);
    e.right.push_back(right);
    e.left_std.push_back(kNaN);
    e.right_std.push_back(kNaN);
  }
  return e;
}

SampleEdges sample_edges(const std::vector<HeightFunction>& samples) {
  if (samples.empty()) throw InvalidInput("sample_edges: no samples");
  check_same_domain(samples);
  const Domain& d = samples.front().domain();
  SampleEdges e;
  for (int y = d.y_min(); y <= d.y_max(); ++y) e.rows.push_back(y);
  for (const HeightFunction& h : samples) {
    std::vector<double> left, right;
    for (int y = d.y_min(); y <= d.y_max(); ++y) {
      int L = d.left(y), R = d.right(y);
      double l = kNaN, r = kNaN;
      if (R > L) {
        auto inc = [&](int x) { return h.at(x + 1, y) - h.at(x, y); };
        for (int x = L + 1; x < R; ++x)
          if (inc(x) != inc(L)) {
            l = x;
            break;
          }
        for (int x = R - 2; x >= L; --x)
          if (inc(x) != inc(R - 1)) {
            r = x + 1;
            break;
          }
      }
      left.push_back(l);
      right.push_back(r);
    }
    e.left.push_back(std::move(left));
    e.right.push_back(std::move(right));
  }
  return e;
}

EdgeProfile edge_statistics(const SampleEdges& e) {
  EdgeProfile p;
  p.rows = e.rows;
  p.samples = e.left.size();
  auto stats = [&](const std::vector<std::vector<double>>& v, std::size_t row, double& mean, double& sd) {
    double s = 0.0, s2 = 0.0;
    std::size_t k = 0;
    for (const auto& sample : v) {
      double x = sample[row];
      if (std::isnan(x)) continue;
      s += x;
      ++k;
    }
    if (k < 2) {
      mean = k == 1 ? s : kNaN;
      sd = kNaN;
      return;
    }
    mean = s / static_cast<double>(k);
    for (const auto& sample : v)
      if (!std::isnan(sample[row])) s2 += (sample[row] - mean) * (sample[row] - mean);
    sd = std::sqrt(s2 / static_cast<double>(k - 1));
  };
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    double m = 0, s = 0;
    stats(e.left, r, m, s);
    p.left.push_back(m);
    p.left_std.push_back(s);
    stats(e.right, r, m, s);
    p.right.push_back(m);
    p.right_std.push_back(s);
  }
  return p;
}

ScalingFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("loglog_fit: needs at least two paired points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidInput("loglog_fit: values must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double N = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / N;
    my += ly[i] / N;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0) throw InvalidInput("loglog_fit: x values must not all be equal");
  ScalingFit f;
  f.points = lx.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    double r = ly[i] - f.intercept - f.slope * lx[i];
    ssr += r * r;
  }
  double dof = N - 2;
  f.stderr_slope = dof > 0 ? std::sqrt(ssr / dof / sxx) : kNaN;
  double q = t_quantile(dof);
  f.ci_low = dof > 0 ? f.slope - q * f.stderr_slope : -std::numeric_limits<double>::infinity();
  f.ci_high = dof > 0 ? f.slope + q * f.stderr_slope : std::numeric_limits<double>::infinity();
  return f;
}

ScalingFit edge_fluctuation_fit(const std::vector<EdgeStdPoint>& points, std::size_t min_samples) {
  std::map<int, int> ns;
  std::map<std::pair<long long, int>, std::vector<const EdgeStdPoint*>> groups;
  for (const EdgeStdPoint& p : points) {
    if (p.samples < min_samples)
      throw InvalidInput("edge_fluctuation_fit: point at n = " + std::to_string(p.n) + " has " + std::to_string(p.samples) +
                         " samples, needs " + std::to_string(min_samples));
    if (!(p.std > 0) || p.n < 1) throw InvalidInput("edge_fluctuation_fit: std and n must be positive");
    ns[p.n] = 1;
    groups[{std::llround(p.row * 1e9), p.side}].push_back(&p);
  }
  if (ns.size() < 3) throw InvalidInput("edge_fluctuation_fit: needs at least three values of n");
  double sxx = 0, sxy = 0, icpt = 0;
  std::size_t used = 0, keys = 0;
  std::vector<std::pair<double, double>> centred;
  for (const auto& [key, g] : groups) {
    if (g.size() < 2) continue;
    double mx = 0, my = 0;
    for (const EdgeStdPoint* p : g) {
      mx += std::log(p->n) / static_cast<double>(g.size());
      my += std::log(p->std) / static_cast<double>(g.size());
    }
    for (const EdgeStdPoint* p : g) {
      double dx = std::log(p->n) - mx, dy = std::log(p->std) - my;
      sxx += dx * dx;
      sxy += dx * dy;
      centred.emplace_back(dx, dy);
    }
    used += g.size();
    ++keys;
    icpt += my - mx;  // slope applied below
  }
  if (keys == 0 || sxx <= 0) throw InvalidInput("edge_fluctuation_fit: no row is observed at two values of n");
  ScalingFit f;
  f.points = used;
  f.slope = sxy / sxx;
  double ssr = 0;
  for (const auto& [dx, dy] : centred) ssr += (dy - f.slope * dx) * (dy - f.slope * dx);
  double dof = static_cast<double>(used) - static_cast<double>(keys) - 1.0;
  f.stderr_slope = dof > 0 ? std::sqrt(ssr / dof / sxx) : kNaN;
  double q = t_quantile(dof);
  f.ci_low = dof > 0 ? f.slope - q * f.stderr_slope : -std::numeric_limits<double>::infinity();
  f.ci_high = dof > 0 ? f.slope + q * f.stderr_slope : std::numeric_limits<double>::infinity();
  // Mean intercept over groups.
  double mean_icpt = 0;
  for (const auto& [key, g] : groups) {
    if (g.size() < 2) continue;
    double mx = 0, my = 0;
    for (const EdgeStdPoint* p : g) {
      mx += std::log(p->n) / static_cast<double>(g.size());
      my += std::log(p->std) / static_cast<double>(g.size());
    }
    mean_icpt += (my - f.slope * mx) / static_cast<double>(keys);
  }
  (void)icpt;
  f.intercept = mean_icpt;
  return f;
}

std::string edge_points_csv(const std::vector<EdgeStdPoint>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "n,row,std,side\n";
  for (const EdgeStdPoint& p : points) out << p.n << "," << p.row << "," << p.std << "," << (p.side == 0 ? "left" : "right") << "\n";
  return out.str();
}

// ---- Frozen-interval exclusion ----

double exclusion_tau(int n, double delta, double t, double t_i) {
  const double nn = n;
  return std::max(std::pow(nn, -2.0 / 3.0 + 6.0 * delta) * std::pow(std::fabs(t - t_i), 2.0 / 3.0), std::pow(nn, -1.0 + 10.0 * delta));
}

ExclusionCount interval_exclusion(const ParticleConfig& c, const LimitSlice& slice, const std::vector<double>& tangency,
                                  double delta) {
  c.validate();
  if (tangency.empty()) throw InvalidInput("interval_exclusion: needs at least one tangency time");
  if (slice.segments.empty()) throw InvalidInput("interval_exclusion: empty slice");
  double nearest = std::numeric_limits<double>::infinity();
  for (double ti : tangency)
    if (std::fabs(ti - slice.t) < std::fabs(nearest - slice.t)) nearest = ti;
  const double tau = exclusion_tau(c.n, delta, slice.t, nearest);
  ExclusionCount out;
  for (const auto& [l, h] : slice.liquid()) {
    double lo = l - tau, hi = h + tau;
    if (!out.enlarged.empty() && lo <= out.enlarged.back().second) out.enlarged.back().second = std::max(out.enlarged.back().second, hi);
    else out.enlarged.emplace_back(lo, hi);
  }
  const double lo = slice.segments.front().lo, hi = slice.segments.back().hi;
  const int k0 = static_cast<int>(std::ceil(lo * c.n - 1e-9)), k1 = static_cast<int>(std::floor(hi * c.n + 1e-9));
  std::size_t s = 0;
  for (int k = k0; k < k1; ++k) {
    double x = (k + 0.5) / c.n;
    bool inside = false;
    for (const auto& [a, b] : out.enlarged)
      if (x >= a && x <= b) inside = true;
    if (inside) continue;
    while (s + 1 < slice.segments.size() && x > slice.segments[s].hi) ++s;
    bool occupied = std::binary_search(c.positions.begin(), c.positions.end(), k);
    SegmentKind kind = slice.segments[s].kind;
    if (kind == SegmentKind::Empty && occupied) ++out.particles_outside;
    if (kind == SegmentKind::Packed && !occupied) ++out.holes_outside;
  }
  return out;
}

// ---- Loop-equation drift ----

Complex drift_contour_integral(const ParticleConfig& c, Complex z, double a, double b, int* points_used) {
  if (!(b > a)) throw InvalidInput("drift: walls out of order");
  const double centre = 0.5 * (a + b), half = 0.5 * (b - a);
  const double r = 0.5 * distance_to_interval(z, a, b);
  const double A = half + r, B = r;
  if (!(r > 0)) throw InvalidInput("drift: z lies on the support interval");
  auto node = [&](double th) { return Complex(centre + A * std::cos(th), B * std::sin(th)); };
  auto integral = [&](int N, double& min_dist_z, double& min_dist_support, double& winding) {
    std::vector<Complex> w(static_cast<std::size_t>(N));
    std::vector<Complex> logs(static_cast<std::size_t>(N));
    min_dist_z = min_dist_support = std::numeric_limits<double>::infinity();
    Complex prev_B;
    double arg = 0.0;
    for (int k = 0; k < N; ++k) {
      double th = 2.0 * kPi * k / N;
      Complex wk = node(th);
      min_dist_z = std::min(min_dist_z, std::abs(wk - z));
      min_dist_support = std::min(min_dist_support, distance_to_interval(wk, a, b));
      Complex Bk = trapezoid_slope(c, wk, a, b).B;
      arg = k == 0 ? std::arg(Bk) : arg + std::arg(Bk / prev_B);
      prev_B = Bk;
      w[static_cast<std::size_t>(k)] = wk;
      logs[static_cast<std::size_t>(k)] = Complex(std::log(std::abs(Bk)), arg);
    }
    winding = (arg + std::arg(trapezoid_slope(c, node(0.0), a, b).B / prev_B) - std::arg(trapezoid_slope(c, node(0.0), a, b).B)) / (2 * kPi);
    Complex sum = 0.0;
    for (int k = 0; k < N; ++k) {
      double th = 2.0 * kPi * k / N;
      Complex dw(-A * std::sin(th), B * std::cos(th));
      Complex wk = w[static_cast<std::size_t>(k)];
      sum += logs[static_cast<std::size_t>(k)] * dw / ((wk - z) * (wk - z));
    }
    return sum * (2.0 * kPi / N) / Complex(0.0, 2.0 * kPi);
  };
  double dz = 0, ds = 0, wind = 0;
  int N = 512;
  Complex prev = integral(N, dz, ds, wind);
  if (dz < 0.02) throw InvalidInput("drift: contour passes within 0.02 of z");
  if (ds < 0.02) throw InvalidInput("drift: contour passes within 0.02 of the support");
  if (std::fabs(wind) > 0.5) throw InvalidInput("drift: log B winds around the contour");
  for (;;) {
    N *= 2;
    Complex next = integral(N, dz, ds, wind);
    if (std::abs(next - prev) < 1e-9) {
      if (points_used) *points_used = N;
      return next;
    }
    if (N > (1 << 20)) throw NotConverged("drift: contour quadrature did not converge", std::abs(next - prev));
    prev = next;
  }
}

namespace {

struct StepLaw {
  StepDistribution dist;
  double a = 0.0;
  double b = 0.0;
};

StepLaw step_law(const StripSpec& spec, const ParticleConfig& c, int t, Complex z) {
  spec.validate();
  c.validate();
  StepLaw law;
  law.dist = trapezoid_step_distribution(c, t, spec);
  law.a = static_cast<double>(spec.left_wall(t)) / spec.n;
  law.b = static_cast<double>(spec.right_wall(t)) / spec.n;
  if (distance_to_interval(z, law.a, law.b) < 0.1) throw InvalidInput("drift: z must be at distance >= 0.1 from [a(t), b(t)]");
  return law;
}

Complex resolvent_increment(const ParticleConfig& c, std::uint32_t move, Complex z) {
  Complex x(0.0);
  const double step = 1.0 / c.n;
  for (int i = 0; i < c.m(); ++i)
    if (move >> i & 1u) x += 1.0 / (z - c.x(i) - step) - 1.0 / (z - c.x(i));
  return x;
}

}  // namespace

DriftCheck drift_check(const StripSpec& spec, const ParticleConfig& c, int t, Complex z, std::size_t draws, Rng& rng) {
  if (draws < 2) throw InvalidInput("drift_check: needs at least two draws");
  StepLaw law = step_law(spec, c, t, z);
  DriftCheck out;
  out.z = z;
  for (std::size_t k = 0; k < law.dist.moves.size(); ++k) out.exact_mean += law.dist.probabilities[k] * resolvent_increment(c, law.dist.moves[k], z);
  Complex mean(0.0);
  double m2 = 0.0;
  for (std::size_t k = 0; k < draws; ++k) {
    Complex x = resolvent_increment(c, law.dist.draw(rng), z);
    Complex delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += std::real(std::conj(delta) * (x - mean));
  }
  out.mc_mean = mean;
  out.mc_variance = m2 / static_cast<double>(draws - 1);
  out.stderr_mean = std::sqrt(out.mc_variance / static_cast<double>(draws));
  out.prediction = drift_contour_integral(c, z, law.a, law.b, &out.contour_points);
  out.zscore = out.stderr_mean > 0 ? std::abs(out.mc_mean - out.prediction) / out.stderr_mean : std::numeric_limits<double>::infinity();
  return out;
}

MomentReport martingale_moment_check(const StripSpec& spec, const ParticleConfig& c, int t, Complex z, std::size_t draws, Rng& rng,
                                     int p) {
  if (p < 1) throw InvalidInput("martingale_moment_check: p must be at least 1");
  if (draws < 2) throw InvalidInput("martingale_moment_check: needs at least two draws");
  StepLaw law = step_law(spec, c, t, z);
  const Complex m0 = stieltjes(c, z);
  auto increment = [&](std::uint32_t move) { return stieltjes(apply_step(c, move), z) - m0; };
  std::vector<Complex> values(law.dist.moves.size());
  Complex exact_mean(0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = increment(law.dist.moves[k]);
    exact_mean += law.dist.probabilities[k] * values[k];
  }
  MomentReport r;
  r.z = z;
  r.p = p;
  for (std::size_t k = 0; k < values.size(); ++k) r.exact += law.dist.probabilities[k] * std::pow(std::abs(values[k] - exact_mean), 2 * p);
  std::vector<Complex> drawn(draws);
  Complex mean(0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    std::uint32_t move = law.dist.draw(rng);
    auto it = std::lower_bound(law.dist.moves.begin(), law.dist.moves.end(), move);
    drawn[k] = it != law.dist.moves.end() && *it == move ? values[static_cast<std::size_t>(it - law.dist.moves.begin())] : increment(move);
    mean += drawn[k];
  }
  mean /= static_cast<double>(draws);
  for (const Complex& y : drawn) r.empirical += std::pow(std::abs(y - mean), 2 * p) / static_cast<double>(draws);
  Complex f = trapezoid_slope(c, z, law.a, law.b).f;
  double im = std::fabs((f / (f + 1.0)).imag());
  double dist = distance_to_interval(z, law.a, law.b);
  double n = spec.n;
  r.variance_shape = std::pow(im / (n * std::fabs(z.imag()) * dist * dist), p);
  r.higher_shape = im / (std::pow(n, 2 * p - 1) * std::fabs(z.imag()) * std::pow(dist, 4 * p - 2));
  return r;
}

DeltaSeries delta_along_characteristic(const WalkEnsemble& traj, Complex u, const StripSpec& spec) {
  if (!(u.imag() > 0)) throw InvalidInput("delta_along_characteristic: needs Im u > 0");
  traj.validate();
  spec.validate();
  if (traj.T() != spec.rows() || traj.m() != spec.m) throw InvalidInput("delta_along_characteristic: trajectory does not match the strip");
  TrapezoidLimit limit = TrapezoidLimit::from_config(ParticleConfig{spec.n, traj.row(0)}, spec);
  const Complex f0 = limit.initial_slope(u);
  DeltaSeries s;
  for (int k = 0; k <= traj.T(); ++k) {
    double t = static_cast<double>(k) / spec.n;
    Complex z = characteristic(u, f0, t);
    if (distance_to_interval(z, limit.a(t), limit.b()) < 1.0 / spec.n) {
      s.truncated = true;
      break;
    }
    Complex m_star = std::log(f0 * (z - limit.a(t)) / (limit.b() - z));
    Complex d = stieltjes(ParticleConfig{spec.n, traj.row(k)}, z) - m_star;
    d -= Complex(0.0, 2.0 * kPi * std::round(d.imag() / (2.0 * kPi)));
    s.t.push_back(t);
    s.z.push_back(z);
    s.delta.push_back(d);
  }
  return s;
}

}  // namespace tiling_lab
