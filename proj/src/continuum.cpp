#include "tiling_lab/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slope_text(const Slope& sl) { return "(" + fmt(sl.s) + ", " + fmt(sl.t) + ")"; }

}  // namespace

bool Slope::in_closure(double tol) const {
  for (double p : proportions())
    if (p < -tol) return false;
  return true;
}

bool Slope::is_frozen(double threshold) const {
  auto p = proportions();
  return *std::min_element(p.begin(), p.end()) < threshold;
}

double surface_tension(const Slope& sl) {
  if (!std::isfinite(sl.s) || !std::isfinite(sl.t) || !sl.in_closure(kSlopeTolerance))
    throw InvalidInput("surface_tension: slope " + slope_text(sl) + " outside the closed slope set");
  double sum = 0.0;
  for (double p : sl.proportions()) sum += lobachevsky(kPi * std::clamp(p, 0.0, 1.0));
  return sum / kPi;
}

std::array<double, 2> surface_tension_gradient(const Slope& sl) {
  auto p = sl.proportions();
  for (double q : p)
    if (!(q > 0.0)) throw InvalidInput("surface_tension_gradient: slope " + slope_text(sl) + " is not interior");
  double l1 = std::log(std::sin(kPi * p[0])), l2 = std::log(std::sin(kPi * p[1])), l3 = std::log(std::sin(kPi * p[2]));
  return {l1 - l3, l2 - l3};
}

double arg_lower(Complex w) {
  double scale = std::abs(w);
  if (scale == 0.0 || !std::isfinite(scale)) throw InvalidInput("arg_lower: argument is zero or not finite");
  if (w.imag() > 1e-12 * scale) throw InvalidInput("arg_lower: argument in the upper half-plane");
  if (w.imag() < -1e-12 * scale) return std::arg(w);
  return w.real() > 0 ? 0.0 : -kPi;
}

Complex slope_to_complex(const Slope& sl) {
  auto p = sl.proportions();
  for (double q : p)
    if (!(q > 0.0)) throw InvalidInput("slope_to_complex: slope " + slope_text(sl) + " lies on the boundary of the slope set");
  // Triangle (0, -1, f) has angles pi p1 at 0, pi p2 at -1 and pi p3 at f.
  Complex f = std::polar(std::sin(kPi * p[1]) / std::sin(kPi * p[2]), -kPi * sl.s);
  double e1 = std::arg(f) + kPi * sl.s;
  double e2 = std::arg(f + 1.0) - kPi * sl.t;
  // Tolerance scaled by the conditioning of arg near f = 0 and f = -1.
  const double tol = 1e-12 * std::max({1.0, 1.0 / std::abs(f), 1.0 / std::abs(f + 1.0)});
  if (std::fabs(e1) > tol || std::fabs(e2) > tol)
    throw std::logic_error("slope_to_complex: argument equations violated for slope " + slope_text(sl));
  return f;
}

Slope complex_to_slope(Complex f) {
  if (f == Complex(0.0) || f == Complex(-1.0)) throw InvalidInput("complex_to_slope: degenerate complex slope");
  return {-arg_lower(f) / kPi, arg_lower(f + 1.0) / kPi};
}

Complex characteristic(Complex u, Complex f0, double t) {
  if (f0 == Complex(-1.0)) throw InvalidInput("characteristic: f0 = -1");
  return u + t * f0 / (f0 + 1.0);
}

Complex stieltjes(const ParticleConfig& c, Complex z) {
  const double step = 1.0 / c.n;
  Complex m = 0.0;
  for (int i = 0; i < c.m(); ++i) {
    double x = c.x(i);
    if (z.imag() == 0.0 && z.real() >= x && z.real() <= x + step)
      throw InvalidInput("stieltjes: z = " + fmt(z.real()) + " lies on the support of particle " + std::to_string(i));
    m += std::log((z - x) / (z - x - step));
  }
  return m;
}

TrapezoidSlope trapezoid_slope(const ParticleConfig& c, Complex z, double a, double b) {
  if (z == Complex(a) || z == Complex(b)) throw InvalidInput("trapezoid_slope: z coincides with a wall");
  Complex e = std::exp(stieltjes(c, z));
  TrapezoidSlope out;
  out.f = (b - z) / (z - a) * e;
  out.B = (b - z) * e + (z - a);
  return out;
}

void GridSpec::validate() const {
  if (!(hx > 0.0) || !(ht > 0.0)) throw InvalidInput("grid: mesh must be positive");
  if (nx < 1 || nt < 1) throw InvalidInput("grid: node counts must be positive");
}

ContinuumField::ContinuumField(GridSpec grid) : grid_(grid) {
  grid_.validate();
  values_.assign(grid_.size(), Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()));
  valid_.assign(grid_.size(), 0);
}

std::size_t ContinuumField::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= grid_.nx || j >= grid_.nt)
    throw InvalidInput("field: node (" + std::to_string(i) + "," + std::to_string(j) + ") outside the grid");
  return static_cast<std::size_t>(j) * static_cast<std::size_t>(grid_.nx) + static_cast<std::size_t>(i);
}

bool ContinuumField::valid(int i, int j) const {
  if (i < 0 || j < 0 || i >= grid_.nx || j >= grid_.nt) return false;
  return valid_[at(i, j)] != 0;
}

Complex ContinuumField::value(int i, int j) const {
  std::size_t k = at(i, j);
  if (!valid_[k]) throw InvalidInput("field: node (" + std::to_string(i) + "," + std::to_string(j) + ") is masked");
  return values_[k];
}

void ContinuumField::set(int i, int j, Complex v) {
  std::size_t k = at(i, j);
  values_[k] = v;
  valid_[k] = 1;
}

void ContinuumField::mask(int i, int j) {
  std::size_t k = at(i, j);
  values_[k] = Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  valid_[k] = 0;
}

std::size_t ContinuumField::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

double ContinuumField::interpolate(double x, double t) const {
  auto locate = [](double u, int count, int& cell, double& frac) {
    double r = std::round(u);
    if (std::fabs(u - r) < 1e-9) u = r;
    if (u < 0.0 || u > count - 1) return false;
    cell = std::min(static_cast<int>(std::floor(u)), std::max(count - 2, 0));
    frac = u - cell;
    return true;
  };
  int i = 0, j = 0;
  double a = 0.0, b = 0.0;
  if (!locate((x - grid_.x0) / grid_.hx, grid_.nx, i, a) || !locate((t - grid_.t0) / grid_.ht, grid_.nt, j, b))
    throw InvalidInput("field: point (" + fmt(x) + ", " + fmt(t) + ") outside the grid");
  struct Term {
    int i, j;
    double w;
  };
  std::array<Term, 3> terms;
  if (a >= b)
    terms = {{{i, j, 1.0 - a}, {i + 1, j, a - b}, {i + 1, j + 1, b}}};
  else
    terms = {{{i, j, 1.0 - b}, {i, j + 1, b - a}, {i + 1, j + 1, a}}};
  double v = 0.0;
  for (const Term& term : terms) {
    if (term.w < 1e-12) continue;
    if (!valid(term.i, term.j))
      throw InvalidInput("field: interpolation at (" + fmt(x) + ", " + fmt(t) + ") touches a masked node");
    v += term.w * values_[at(term.i, term.j)].real();
  }
  return v;
}

std::string ContinuumField::to_csv() const {
  std::ostringstream out;
  out << "# grid x0=" << fmt(grid_.x0) << " t0=" << fmt(grid_.t0) << " hx=" << fmt(grid_.hx) << " ht=" << fmt(grid_.ht)
      << " nx=" << grid_.nx << " nt=" << grid_.nt << "\n";
  out << "x,t,re,im,mask\n";
  for (int j = 0; j < grid_.nt; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      out << fmt(grid_.x(i)) << "," << fmt(grid_.t(j)) << ",";
      if (valid(i, j)) {
        Complex v = values_[at(i, j)];
        out << fmt(v.real()) << "," << fmt(v.imag()) << ",0\n";
      } else {
        out << ",,1\n";
      }
    }
  return out.str();
}

ContinuumField ContinuumField::from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  GridSpec g;
  bool have_grid = false, have_header = false;
  ContinuumField field;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string w;
      words >> w;
      if (w != "grid") continue;
      int seen = 0;
      while (words >> w) {
        auto eq = w.find('=');
        if (eq == std::string::npos) throw InvalidInput("field csv: malformed grid entry '" + w + "'");
        std::string key = w.substr(0, eq), val = w.substr(eq + 1);
        if (key == "x0") g.x0 = std::stod(val);
        else if (key == "t0") g.t0 = std::stod(val);
        else if (key == "hx") g.hx = std::stod(val);
        else if (key == "ht") g.ht = std::stod(val);
        else if (key == "nx") g.nx = std::stoi(val);
        else if (key == "nt") g.nt = std::stoi(val);
        else throw InvalidInput("field csv: unknown grid key '" + key + "'");
        ++seen;
      }
      if (seen != 6) throw InvalidInput("field csv: incomplete grid header");
      field = ContinuumField(g);
      have_grid = true;
      continue;
    }
    if (!have_grid) throw InvalidInput("field csv: data before the grid header");
    if (!have_header) {
      if (line != "x,t,re,im,mask") throw InvalidInput("field csv: expected column header x,t,re,im,mask");
      have_header = true;
      continue;
    }
    if (row >= g.size()) throw InvalidInput("field csv: more rows than grid nodes");
    std::vector<std::string> cols;
    std::string cell;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) cols.push_back(cell);
    if (!line.empty() && line.back() == ',') cols.push_back("");
    if (cols.size() != 5) throw InvalidInput("field csv: row " + std::to_string(row) + " does not have 5 columns");
    int i = static_cast<int>(row % static_cast<std::size_t>(g.nx)), j = static_cast<int>(row / static_cast<std::size_t>(g.nx));
    if (cols[4] == "0")
      field.set(i, j, Complex(std::stod(cols[2]), std::stod(cols[3])));
    else if (cols[4] != "1")
      throw InvalidInput("field csv: mask must be 0 or 1");
    ++row;
  }
  if (!have_grid || row != g.size()) throw InvalidInput("field csv: row count does not match the grid");
  return field;
}

ContinuumField burgers_residual(const ContinuumField& f, bool allow_partial) {
  const GridSpec& g = f.grid();
  ContinuumField out(g);
  for (int j = 1; j + 1 < g.nt; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      if (!f.valid(i, j)) continue;
      bool full = f.valid(i - 1, j) && f.valid(i + 1, j) && f.valid(i, j - 1) && f.valid(i, j + 1);
      if (!full) {
        if (allow_partial) continue;
        throw InvalidInput("burgers_residual: stencil of node (" + std::to_string(i) + "," + std::to_string(j) + ") hits a masked node");
      }
      Complex v = f.value(i, j);
      if (v == Complex(-1.0) || !std::isfinite(std::abs(v)))
        throw InvalidInput("burgers_residual: f = -1 or not finite at node (" + std::to_string(i) + "," + std::to_string(j) + ")");
      Complex dt = (f.value(i, j + 1) - f.value(i, j - 1)) / (2.0 * g.ht);
      Complex dx = (f.value(i + 1, j) - f.value(i - 1, j)) / (2.0 * g.hx);
      out.set(i, j, dt + v / (v + 1.0) * dx);
    }
  return out;
}

ContinuumField limit_height_from_slope(const ContinuumField& f, int anchor_i, int anchor_j, double anchor_value,
                                       double curl_tol) {
  const GridSpec& g = f.grid();
  if (!f.valid(anchor_i, anchor_j)) throw InvalidInput("limit_height_from_slope: anchor node is masked");
  std::vector<double> gx(g.size()), gt(g.size());
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * static_cast<std::size_t>(g.nx) + static_cast<std::size_t>(i); };
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!f.valid(i, j)) continue;
      Complex v = f.value(i, j);
      gx[idx(i, j)] = -arg_lower(v) / std::numbers::pi;
      gt[idx(i, j)] = arg_lower(v + 1.0) / std::numbers::pi;
    }
  auto increment = [&](int i, int j, int di, int dj) {
    std::size_t a = idx(i, j), b = idx(i + di, j + dj);
    return di != 0 ? di * 0.5 * (gx[a] + gx[b]) * g.hx : dj * 0.5 * (gt[a] + gt[b]) * g.ht;
  };
  ContinuumField H(g);
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::deque<std::pair<int, int>> queue{{anchor_i, anchor_j}};
  seen[idx(anchor_i, anchor_j)] = 1;
  H.set(anchor_i, anchor_j, anchor_value);
  constexpr int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    for (auto [di, dj] : steps) {
      int a = i + di, b = j + dj;
      if (!f.valid(a, b) || seen[idx(a, b)]) continue;
      seen[idx(a, b)] = 1;
      H.set(a, b, H.real(i, j) + increment(i, j, di, dj));
      queue.emplace_back(a, b);
    }
  }
  if (H.valid_count() != f.valid_count()) throw InvalidInput("limit_height_from_slope: valid nodes are not connected to the anchor");
  double worst = 0.0;
  int wi = 0, wj = 0, wdi = 0, wdj = 0;
  for (int j = 0; j < g.nt; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!f.valid(i, j)) continue;
      for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        if (!f.valid(i + di, j + dj)) continue;
        double gap = std::fabs(H.real(i + di, j + dj) - H.real(i, j) - increment(i, j, di, dj));
        if (gap > worst) {
          worst = gap;
          wi = i;
          wj = j;
          wdi = di;
          wdj = dj;
        }
      }
    }
  if (worst > curl_tol)
    throw NotConverged("limit_height_from_slope: curl " + fmt(worst) + " on edge (" + std::to_string(wi) + "," + std::to_string(wj) +
                           ")-(" + std::to_string(wi + wdi) + "," + std::to_string(wj + wdj) + ")",
                       worst);
  return H;
}

}  // namespace tiling_lab
