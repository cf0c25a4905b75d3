#include "tiling_lab/trapezoid_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

constexpr double kPi = std::numbers::pi;

using Poly = std::vector<Complex>;  // coefficients, constant term first

// p * (c0 + c1 f)
Poly times_linear(const Poly& p, Complex c0, Complex c1) {
  Poly out(p.size() + 1, Complex(0.0));
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] += p[k] * c0;
    out[k + 1] += p[k] * c1;
  }
  return out;
}

Complex eval(const Poly& p, Complex f, Complex* deriv) {
  Complex v(0.0), d(0.0);
  for (std::size_t k = p.size(); k-- > 0;) {
    d = d * f + v;
    v = v * f + p[k];
  }
  if (deriv) *deriv = d;
  return v;
}

std::vector<Complex> poly_roots(Poly p) {
  double scale = 0.0;
  for (const Complex& c : p) scale = std::max(scale, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-13 * scale) p.pop_back();
  std::size_t d = p.size() - 1;
  std::vector<Complex> roots;
  if (d == 0) return roots;
  if (d == 1) {
    roots.push_back(-p[0] / p[1]);
  } else if (d == 2) {
    Complex disc = std::sqrt(p[1] * p[1] - 4.0 * p[2] * p[0]);
    Complex q = -0.5 * (p[1] + (std::real(std::conj(p[1]) * disc) >= 0 ? disc : -disc));
    roots.push_back(q / p[2]);
    roots.push_back(q == Complex(0.0) ? Complex(0.0) : p[0] / q);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) comp(0, static_cast<Eigen::Index>(d - 1 - k)) = -p[k] / p[d];
    for (std::size_t k = 1; k < d; ++k) comp(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) roots.push_back(es.eigenvalues()[k]);
  }
  for (Complex& r : roots)
    for (int it = 0; it < 3; ++it) {
      Complex dp;
      Complex v = eval(p, r, &dp);
      if (std::abs(dp) == 0.0) break;
      Complex next = r - v / dp;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      r = next;
    }
  return roots;
}

double liquid_tolerance(Complex f) { return 1e-10 * (1.0 + std::abs(f)); }

}  // namespace

std::vector<std::pair<double, double>> LimitSlice::liquid() const {
  std::vector<std::pair<double, double>> out;
  for (const Segment& s : segments)
    if (s.kind == SegmentKind::Liquid) out.emplace_back(s.lo, s.hi);
  return out;
}

TrapezoidLimit::TrapezoidLimit(double a0, double b, double t_max, std::vector<Block> blocks)
    : a0_(a0), b_(b), t_max_(t_max), blocks_(std::move(blocks)) {
  if (!(t_max > 0)) throw InvalidInput("trapezoid limit: t_max must be positive");
  if (!(b > a0)) throw InvalidInput("trapezoid limit: walls are out of order");
  double prev = a0;
  double mass = 0.0;
  for (const Block& bl : blocks_) {
    if (!(bl.hi > bl.lo) || bl.lo < prev - 1e-12 || bl.hi > b + 1e-12)
      throw InvalidInput("trapezoid limit: blocks must be disjoint, increasing and inside the walls");
    prev = bl.hi;
    mass += bl.hi - bl.lo;
  }
  if (std::fabs(b - a(t_max) - mass) > 1e-9)
    throw InvalidInput("trapezoid limit: the walls must close on the packed mass at t_max");
}

TrapezoidLimit TrapezoidLimit::from_config(const ParticleConfig& c, const StripSpec& spec) {
  c.validate();
  spec.validate();
  if (spec.a_slope != 1 || spec.b_slope != 0) throw InvalidInput("trapezoid limit: needs a_slope = 1 and b_slope = 0");
  if (c.n != spec.n || c.m() != spec.m) throw InvalidInput("trapezoid limit: configuration does not match the strip");
  std::vector<Block> blocks;
  const double n = spec.n;
  for (int k : c.positions) {
    if (!blocks.empty() && std::fabs(blocks.back().hi - k / n) < 0.5 / n) blocks.back().hi = (k + 1) / n;
    else blocks.push_back({k / n, (k + 1) / n});
  }
  return TrapezoidLimit(boost::rational_cast<double>(spec.a0), boost::rational_cast<double>(spec.b0),
                        boost::rational_cast<double>(spec.t_max), std::move(blocks));
}

TrapezoidLimit TrapezoidLimit::hexagon(int a, int b, int c, int n) {
  if (a < 1 || b < 1 || c < 1 || n < 1) throw InvalidInput("trapezoid limit: hexagon sides and scale must be positive");
  const double s = 1.0 / n;
  return TrapezoidLimit(-a * s, (b + c) * s, (a + b) * s, {{0.0, c * s}});
}

Complex TrapezoidLimit::initial_slope(Complex z) const {
  Complex f = (b_ - z) / (z - a0_);
  for (const Block& bl : blocks_) f *= (z - bl.lo) / (z - bl.hi);
  return f;
}

std::vector<Complex> TrapezoidLimit::slope_roots(Complex z, double t) const {
  // With w = z - t f/(f+1), each factor w - k equals ((z-k-t) f + (z-k))/(f+1).
  auto q = [&](double k) { return std::pair<Complex, Complex>(z - k, z - k - t); };
  Poly lhs{Complex(0.0), Complex(1.0)};
  auto [a_c0, a_c1] = q(a0_);
  lhs = times_linear(lhs, a_c0, a_c1);
  auto [b_c0, b_c1] = q(b_);
  Poly rhs = times_linear({Complex(1.0)}, b_c0, b_c1);
  for (const Block& bl : blocks_) {
    auto [h0, h1] = q(bl.hi);
    lhs = times_linear(lhs, h0, h1);
    auto [l0, l1] = q(bl.lo);
    rhs = times_linear(rhs, l0, l1);
  }
  Poly p(std::max(lhs.size(), rhs.size()), Complex(0.0));
  for (std::size_t k = 0; k < lhs.size(); ++k) p[k] += lhs[k];
  for (std::size_t k = 0; k < rhs.size(); ++k) p[k] += rhs[k];
  // f = -1 is always a root; divide it out.
  Poly s(p.size() - 1);
  Complex carry(0.0);
  for (std::size_t k = p.size() - 1; k >= 1; --k) {
    carry = p[k] - carry;
    s[k - 1] = carry;
  }
  return poly_roots(std::move(s));
}

Complex TrapezoidLimit::track(Complex z, double t0, Complex f0, double t1) const {
  if (t1 == t0) return f0;
  double t = t0, t_prev = t0;
  Complex f = f0, f_prev = f0;
  double dt = (t1 - t0) / 32.0;
  const double min_dt = 1e-12 * (1.0 + std::fabs(t1));
  while ((t1 > t0 && t < t1) || (t1 < t0 && t > t1)) {
    double tn = t1 > t0 ? std::min(t1, t + dt) : std::max(t1, t + dt);
    Complex guess = t != t_prev ? f + (f - f_prev) * ((tn - t) / (t - t_prev)) : f;
    std::vector<Complex> roots = slope_roots(z, tn);
    if (roots.empty()) throw NotConverged("trapezoid limit: no slope roots", 0.0);
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    Complex best;
    for (const Complex& r : roots) {
      double d = std::abs(r - guess);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = r;
      } else if (d < d2) {
        d2 = d;
      }
    }
    bool jump_ok = d1 <= 0.5 * std::abs(guess - f) + 1e-9 * (1.0 + std::abs(f)) || d1 < 0.05 * (1.0 + std::abs(f));
    if (d1 < 0.25 * d2 && jump_ok) {
      f_prev = f;
      t_prev = t;
      f = best;
      t = tn;
      dt *= 1.5;
    } else {
      dt *= 0.5;
      if (std::fabs(dt) < min_dt) throw NotConverged("trapezoid limit: slope roots collide during continuation", d1);
    }
  }
  return f;
}

Complex TrapezoidLimit::slope(Complex z, double t) const {
  if (!(z.imag() > 0)) throw InvalidInput("trapezoid limit: slope continuation needs Im z > 0");
  if (t < 0 || t > t_max_ + 1e-12) throw InvalidInput("trapezoid limit: time outside [0, t_max]");
  return track(z, 0.0, initial_slope(z), t);
}

ContinuumField TrapezoidLimit::slope_field(const GridSpec& g, double eta) const {
  g.validate();
  if (!(eta > 0)) throw InvalidInput("trapezoid limit: slope field needs eta > 0");
  ContinuumField out(g);
  for (int i = 0; i < g.nx; ++i) {
    Complex z(g.x(i), eta);
    Complex f = slope(z, g.t(0));
    out.set(i, 0, f);
    for (int j = 1; j < g.nt; ++j) {
      f = track(z, g.t(j - 1), f, g.t(j));
      out.set(i, j, f);
    }
  }
  return out;
}

Complex TrapezoidLimit::m_star(Complex z, double t) const {
  return std::log(slope(z, t) * (z - a(t)) / (b_ - z));
}

bool TrapezoidLimit::liquid_at(double x, double t, double* rho) const {
  std::vector<Complex> lower;
  for (const Complex& r : slope_roots(Complex(x, 0.0), t))
    if (r.imag() < -liquid_tolerance(r)) lower.push_back(r);
  if (lower.empty()) return false;
  Complex f = lower.front();
  if (lower.size() > 1) {
    // Continuation close to the axis can fail where roots nearly collide; retry further up.
    for (double eta : {1e-7, 1e-5, 1e-3}) {
      try {
        Complex ref = slope(Complex(x, eta * (b_ - a(t))), t);
        for (const Complex& r : lower)
          if (std::abs(r - ref) < std::abs(f - ref)) f = r;
        break;
      } catch (const NotConverged&) {
        if (eta == 1e-3) throw;
      }
    }
  }
  if (rho) *rho = -std::arg(f) / kPi;
  return true;
}

SegmentKind TrapezoidLimit::frozen_kind(double x, double t) const {
  Complex f;
  for (double eta : {1e-4, 1e-3, 1e-2}) {
    try {
      f = slope(Complex(x, eta * (b_ - a(t))), t);
      break;
    } catch (const NotConverged&) {
      if (eta == 1e-2) throw;
    }
  }
  return -arg_lower(Complex(f.real(), std::min(f.imag(), 0.0))) / kPi > 0.5 ? SegmentKind::Packed : SegmentKind::Empty;
}

LimitSlice TrapezoidLimit::slice(double t) const {
  if (t < -1e-12 || t > t_max_ + 1e-12) throw InvalidInput("trapezoid limit: time outside [0, t_max]");
  LimitSlice out;
  out.t = t;
  const double lo = a(t), hi = b_;
  auto push = [&](double l, double h, SegmentKind k) {
    if (h - l <= 1e-12) return;
    if (!out.segments.empty() && out.segments.back().kind == k && k != SegmentKind::Liquid) out.segments.back().hi = h;
    else out.segments.push_back({l, h, k});
  };
  if (t <= 1e-12 || t >= t_max_ - 1e-12) {
    std::vector<Block> bl = blocks_;
    if (t >= t_max_ - 1e-12) bl = {{lo, hi}};
    double x = lo;
    for (const Block& b : bl) {
      push(x, std::max(x, b.lo), SegmentKind::Empty);
      push(std::max(x, b.lo), b.hi, SegmentKind::Packed);
      x = b.hi;
    }
    push(x, hi, SegmentKind::Empty);
    return out;
  }
  const int N = 1000;
  auto is_liquid = [&](double x) { return liquid_at(x, t, nullptr); };
  // Bisects a bracket whose left end has liquid state left_liquid.
  auto refine = [&](double l, double h, bool left_liquid) {
    for (int it = 0; it < 60 && h - l > 1e-14; ++it) {
      double mid = 0.5 * (l + h);
      (is_liquid(mid) == left_liquid ? l : h) = mid;
    }
    return 0.5 * (l + h);
  };
  std::vector<std::pair<double, double>> liquid;
  double x_prev = lo;
  bool prev = false;
  double start = lo;
  for (int k = 0; k < N; ++k) {
    double x = lo + (hi - lo) * (k + 0.5) / N;
    bool cur = is_liquid(x);
    if (cur != prev) {
      double edge = refine(x_prev, x, prev);
      if (cur) start = edge;
      else liquid.emplace_back(start, edge);
    }
    prev = cur;
    x_prev = x;
  }
  if (prev) liquid.emplace_back(start, refine(x_prev, hi, true));
  // A frozen region changes type only where f_t is 0 or infinite: x = b or a block start
  // (f_0 vanishes there and the characteristic is vertical), or x = a(t) or a block end
  // shifted by t (f_0 has a pole there and the characteristic has slope one).
  std::vector<double> breaks;
  for (const Block& bl : blocks_) {
    breaks.push_back(bl.lo);
    breaks.push_back(bl.hi + t);
  }
  std::sort(breaks.begin(), breaks.end());
  auto push_frozen = [&](double l, double h) {
    double x0 = l;
    for (double br : breaks)
      if (br > x0 + 1e-12 && br < h - 1e-12) {
        push(x0, br, frozen_kind(0.5 * (x0 + br), t));
        x0 = br;
      }
    push(x0, h, frozen_kind(0.5 * (x0 + h), t));
  };
  double x = lo;
  for (const auto& [l, h] : liquid) {
    if (l > x) push_frozen(x, l);
    push(l, h, SegmentKind::Liquid);
    x = h;
  }
  if (hi > x) push_frozen(x, hi);
  return out;
}

double TrapezoidLimit::density(double x, double t) const {
  if (x < a(t) || x > b_) return 0.0;
  double rho = 0.0;
  if (t > 1e-12 && t < t_max_ - 1e-12 && liquid_at(x, t, &rho)) return rho;
  for (const Segment& s : slice(t).segments)
    if (x >= s.lo && x <= s.hi && s.kind != SegmentKind::Liquid) return s.kind == SegmentKind::Packed ? 1.0 : 0.0;
  return frozen_kind(x, t) == SegmentKind::Packed ? 1.0 : 0.0;
}

std::vector<double> TrapezoidLimit::heights(double t, const std::vector<double>& xs) const {
  LimitSlice sl = slice(t);
  const auto& segs = sl.segments;
  auto frozen_value = [](SegmentKind k) { return k == SegmentKind::Packed ? 1.0 : 0.0; };
  auto contribution = [&](std::size_t k, double l, double h) {
    const Segment& s = segs[k];
    if (s.kind != SegmentKind::Liquid) return frozen_value(s.kind) * (h - l);
    double left_fallback = k > 0 ? frozen_value(segs[k - 1].kind) : 0.0;
    double right_fallback = k + 1 < segs.size() ? frozen_value(segs[k + 1].kind) : 0.0;
    auto rho = [&](double x) {
      double r = 0.0;
      if (liquid_at(x, t, &r)) return r;
      return x - s.lo < s.hi - x ? left_fallback : right_fallback;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(rho, l, h, 12, 1e-12);
  };
  std::vector<double> out;
  out.reserve(xs.size());
  double pos = a(t), acc = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    double target = std::clamp(x, a(t), b_);
    if (target < pos - 1e-15) throw InvalidInput("trapezoid limit: heights need nondecreasing x");
    while (k < segs.size() && pos < target) {
      double h = std::min(target, segs[k].hi);
      if (h > pos) acc += contribution(k, pos, h);
      pos = std::max(pos, h);
      if (pos >= segs[k].hi) ++k;
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<double> TrapezoidLimit::tangency_times() const {
  const int N = 400;
  std::vector<double> ts, e1, e2;
  for (int k = 1; k < N; ++k) {
    double t = t_max_ * k / N;
    auto liq = slice(t).liquid();
    if (liq.empty()) continue;
    ts.push_back(t);
    e1.push_back(liq.front().first);
    e2.push_back(liq.back().second);
  }
  std::vector<double> out{0.0, t_max_};
  auto edge = [&](double t, int which) {
    auto liq = slice(t).liquid();
    if (liq.empty()) return std::numeric_limits<double>::quiet_NaN();
    return which == 0 ? liq.front().first : liq.back().second;
  };
  for (int which = 0; which < 2; ++which)
    for (int slope = 0; slope < 2; ++slope) {
      const auto& e = which == 0 ? e1 : e2;
      auto g = [&](std::size_t k) { return e[k] - slope * ts[k]; };
      for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
        double gm = g(k - 1), g0 = g(k), gp = g(k + 1);
        bool is_min = g0 < gm && g0 <= gp, is_max = g0 > gm && g0 >= gp;
        if (!is_min && !is_max) continue;
        double sign = is_min ? 1.0 : -1.0;
        auto obj = [&](double t) { return sign * (edge(t, which) - slope * t); };
        double l = ts[k - 1], h = ts[k + 1];
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = h - phi * (h - l), d = l + phi * (h - l);
        double fc = obj(c), fd = obj(d);
        while (h - l > 1e-7 * t_max_) {
          if (fc < fd) {
            h = d;
            d = c;
            fd = fc;
            c = h - phi * (h - l);
            fc = obj(c);
          } else {
            l = c;
            c = d;
            fc = fd;
            d = l + phi * (h - l);
            fd = obj(d);
          }
        }
        out.push_back(0.5 * (l + h));
      }
    }
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double t : out)
    if (uniq.empty() || t - uniq.back() > 1e-4 * t_max_) uniq.push_back(t);
  return uniq;
}

}  // namespace tiling_lab
