#include "tiling_lab/lattice.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

std::array<Vertex, 3> face_vertices(const Face& f) {
  if (f.kind == FaceKind::Up) return {Vertex{f.x, f.y}, Vertex{f.x + 1, f.y}, Vertex{f.x + 1, f.y + 1}};
  return {Vertex{f.x, f.y}, Vertex{f.x, f.y + 1}, Vertex{f.x + 1, f.y + 1}};
}

Domain Domain::from_rows(int y_min, std::vector<int> left, std::vector<int> right) {
  if (left.empty() || left.size() != right.size()) throw InvalidInput("domain: row bounds must be non-empty and of equal length");
  for (std::size_t k = 0; k < left.size(); ++k) {
    if (left[k] > right[k]) throw InvalidInput("domain: row " + std::to_string(y_min + static_cast<int>(k)) + " has left > right");
    if (k > 0) {
      int dl = left[k] - left[k - 1];
      int dr = right[k] - right[k - 1];
      if (dl < 0 || dl > 1 || dr < 0 || dr > 1)
        throw InvalidInput("domain: row bounds must advance by 0 or 1 at row " + std::to_string(y_min + static_cast<int>(k)));
    }
  }
  Domain d;
  d.y_min_ = y_min;
  d.left_ = std::move(left);
  d.right_ = std::move(right);
  d.row_offset_.assign(d.left_.size() + 1, 0);
  for (std::size_t k = 0; k < d.left_.size(); ++k)
    d.row_offset_[k + 1] = d.row_offset_[k] + static_cast<std::size_t>(d.right_[k] - d.left_[k] + 1);
  for (int y = d.y_min(); y < d.y_max(); ++y) {
    // Adjacent rows must share at least one face to keep the face set connected.
    int lo = std::max(d.left(y), d.left(y + 1) - 1);
    int hi = std::min(d.right(y), d.right(y + 1)) - 1;
    bool up = lo <= hi;
    bool down = std::max(d.left(y), d.left(y + 1)) <= std::min(d.right(y), d.right(y + 1) - 1);
    if (!up && !down) throw InvalidInput("domain: rows " + std::to_string(y) + " and " + std::to_string(y + 1) + " share no face");
  }
  return d;
}

bool Domain::contains(int x, int y) const {
  if (y < y_min_ || y > y_max()) return false;
  return x >= left(y) && x <= right(y);
}

bool Domain::contains_face(const Face& f) const {
  for (const Vertex& v : face_vertices(f))
    if (!contains(v)) return false;
  return true;
}

bool Domain::is_boundary(int x, int y) const {
  return y == y_min_ || y == y_max() || x == left(y) || x == right(y);
}

Vertex Domain::vertex(std::size_t i) const {
  auto it = std::upper_bound(row_offset_.begin(), row_offset_.end(), i);
  std::size_t row = static_cast<std::size_t>(it - row_offset_.begin()) - 1;
  return Vertex{left_[row] + static_cast<int>(i - row_offset_[row]), y_min_ + static_cast<int>(row)};
}

std::vector<Vertex> Domain::vertices() const {
  std::vector<Vertex> out;
  out.reserve(vertex_count());
  for (int y = y_min(); y <= y_max(); ++y)
    for (int x = left(y); x <= right(y); ++x) out.push_back({x, y});
  return out;
}

std::vector<Face> Domain::faces() const {
  std::vector<Face> out;
  for (int y = y_min(); y < y_max(); ++y) {
    for (int x = std::min(left(y), left(y + 1)) - 1; x <= std::max(right(y), right(y + 1)); ++x) {
      Face up{x, y, FaceKind::Up};
      Face down{x, y, FaceKind::Down};
      if (contains_face(up)) out.push_back(up);
      if (contains_face(down)) out.push_back(down);
    }
  }
  return out;
}

std::vector<std::size_t> Domain::boundary_indices() const {
  std::vector<std::size_t> out;
  for (int y = y_min(); y <= y_max(); ++y)
    for (int x = left(y); x <= right(y); ++x)
      if (is_boundary(x, y)) out.push_back(index(x, y));
  return out;
}

std::vector<std::size_t> Domain::interior_indices() const {
  std::vector<std::size_t> out;
  for (int y = y_min(); y <= y_max(); ++y)
    for (int x = left(y); x <= right(y); ++x)
      if (!is_boundary(x, y)) out.push_back(index(x, y));
  return out;
}

std::vector<Vertex> Domain::boundary_cycle() const {
  std::vector<Vertex> out;
  for (int x = left(y_min()); x <= right(y_min()); ++x) out.push_back({x, y_min()});
  if (row_count() == 1) return out;
  for (int y = y_min() + 1; y < y_max(); ++y) out.push_back({right(y), y});
  for (int x = right(y_max()); x >= left(y_max()); --x) out.push_back({x, y_max()});
  for (int y = y_max() - 1; y > y_min(); --y)
    if (left(y) != right(y)) out.push_back({left(y), y});
  return out;
}

std::size_t Domain::edge_count() const {
  std::size_t e = 0;
  for (int y = y_min(); y <= y_max(); ++y)
    for (int x = left(y); x <= right(y); ++x) {
      if (contains(x + 1, y)) ++e;
      if (contains(x, y + 1)) ++e;
      if (contains(x + 1, y + 1)) ++e;
    }
  return e;
}

BoundingBox Domain::bounding_box() const {
  BoundingBox b{*std::min_element(left_.begin(), left_.end()), *std::max_element(right_.begin(), right_.end()), y_min(), y_max()};
  return b;
}

BoundaryHeight::BoundaryHeight(const Domain& d, std::vector<int> values) : indices_(d.boundary_indices()), values_(std::move(values)) {
  if (values_.size() != indices_.size()) throw InvalidInput("boundary height: expected one value per boundary vertex");
}

int BoundaryHeight::at(const Domain& d, int x, int y) const {
  if (!d.contains(x, y) || !d.is_boundary(x, y)) throw InvalidInput("boundary height: not a boundary vertex");
  auto it = std::lower_bound(indices_.begin(), indices_.end(), d.index(x, y));
  return values_[static_cast<std::size_t>(it - indices_.begin())];
}

void BoundaryHeight::set(const Domain& d, int x, int y, int value) {
  if (!d.contains(x, y) || !d.is_boundary(x, y)) throw InvalidInput("boundary height: not a boundary vertex");
  auto it = std::lower_bound(indices_.begin(), indices_.end(), d.index(x, y));
  values_[static_cast<std::size_t>(it - indices_.begin())] = value;
}

void StripSpec::validate() const {
  if (n <= 0) throw InvalidInput("strip: n must be positive");
  if (m <= 0) throw InvalidInput("strip: m must be positive");
  if (a_slope != 0 && a_slope != 1) throw InvalidInput("strip: a_slope must be 0 or 1");
  if (b_slope != 0 && b_slope != 1) throw InvalidInput("strip: b_slope must be 0 or 1");
  if (t_max <= 0) throw InvalidInput("strip: t_max must be positive");
  Rational nn(n);
  for (const Rational* r : {&a0, &b0, &t_max})
    if ((*r * nn).denominator() != 1) throw InvalidInput("strip: n*a0, n*b0 and n*t_max must be integers");
  int rows_ = rows();
  for (int t : {0, rows_}) {
    if (left_wall(t) > right_wall(t)) throw InvalidInput("strip: a(t) > b(t) at t = " + std::to_string(t));
    if (right_wall(t) - left_wall(t) < m)
      throw InvalidInput("strip: row " + std::to_string(t) + " is too narrow for " + std::to_string(m) + " walks");
  }
}

int StripSpec::rows() const { return static_cast<int>(boost::rational_cast<std::int64_t>(t_max * Rational(n))); }

int StripSpec::left_wall(int t) const { return static_cast<int>(boost::rational_cast<std::int64_t>(a0 * Rational(n))) + a_slope * t; }

int StripSpec::right_wall(int t) const { return static_cast<int>(boost::rational_cast<std::int64_t>(b0 * Rational(n))) + b_slope * t; }

bool StripSpec::is_packed_trapezoid() const {
  return a_slope == 1 && b_slope == 0 && right_wall(rows()) - left_wall(rows()) == m;
}

std::vector<int> row_heights_from_particles(int left, int right, const std::vector<int>& particles, int base) {
  std::vector<int> h(static_cast<std::size_t>(right - left + 1), base);
  std::size_t k = 0;
  for (int x = left; x <= right; ++x) {
    while (k < particles.size() && particles[k] < x) ++k;
    h[static_cast<std::size_t>(x - left)] = base + static_cast<int>(k);
  }
  return h;
}

namespace {

void check_row_particles(const std::vector<int>& p, int left, int right, int m, const char* which) {
  std::string name(which);
  if (static_cast<int>(p.size()) != m) throw InvalidInput("strip: " + name + " profile must hold exactly m particles");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < left || p[i] > right - 1) throw InvalidInput("strip: " + name + " particle outside the row");
    if (i > 0 && p[i] <= p[i - 1]) throw InvalidInput("strip: " + name + " particles must be strictly increasing");
  }
}

std::vector<int> packed(int start, int m) {
  std::vector<int> p(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) p[static_cast<std::size_t>(i)] = start + i;
  return p;
}

}  // namespace

DomainWithBoundary build_hexagon(int a, int b, int c) {
  if (a < 1 || b < 1 || c < 1) throw InvalidInput("hexagon: side lengths must be at least 1");
  std::vector<int> left, right;
  for (int y = 0; y <= a + b; ++y) {
    left.push_back(std::max(0, y - a));
    right.push_back(std::min(c + y, c + b));
  }
  Domain d = Domain::from_rows(0, std::move(left), std::move(right));
  std::vector<int> values;
  for (std::size_t idx : d.boundary_indices()) {
    Vertex v = d.vertex(idx);
    int h;
    if (v.y == 0) h = v.x;
    else if (v.y == a + b) h = v.x - b;
    else if (v.x == d.left(v.y)) h = 0;
    else h = c;
    values.push_back(h);
  }
  BoundaryHeight bh(d, std::move(values));
  return {std::move(d), std::move(bh)};
}

DomainWithBoundary build_strip(const StripSpec& spec, const StripBoundary& ends) {
  spec.validate();
  int T = spec.rows();
  std::vector<int> left, right;
  for (int t = 0; t <= T; ++t) {
    left.push_back(spec.left_wall(t));
    right.push_back(spec.right_wall(t));
  }
  Domain d = Domain::from_rows(0, left, right);
  std::vector<int> south = ends.south ? *ends.south : packed(left.front(), spec.m);
  std::vector<int> north = ends.north ? *ends.north : packed(right.back() - spec.m, spec.m);
  check_row_particles(south, left.front(), right.front(), spec.m, "south");
  check_row_particles(north, left.back(), right.back(), spec.m, "north");
  std::vector<int> hs = row_heights_from_particles(left.front(), right.front(), south, 0);
  std::vector<int> hn = row_heights_from_particles(left.back(), right.back(), north, 0);
  std::vector<int> values;
  for (std::size_t idx : d.boundary_indices()) {
    Vertex v = d.vertex(idx);
    int h;
    if (v.y == 0) h = hs[static_cast<std::size_t>(v.x - left.front())];
    else if (v.y == T) h = hn[static_cast<std::size_t>(v.x - left.back())];
    else if (v.x == d.left(v.y)) h = 0;
    else h = spec.m;
    values.push_back(h);
  }
  BoundaryHeight bh(d, std::move(values));
  return {std::move(d), std::move(bh)};
}

HeightEnvelopes height_envelopes(const Domain& d, const BoundaryHeight& h) {
  const int kInf = std::numeric_limits<int>::max() / 4;
  std::size_t nv = d.vertex_count();
  HeightEnvelopes env;
  env.upper.assign(nv, kInf);
  env.lower.assign(nv, -kInf);
  for (std::size_t k = 0; k < h.indices().size(); ++k) {
    env.upper[h.indices()[k]] = h.values()[k];
    env.lower[h.indices()[k]] = h.values()[k];
  }
  std::vector<Vertex> verts = d.vertices();
  // Bellman-Ford style relaxation of H(u+s) - H(u) in [0,1], alternating sweep direction.
  auto relax = [&](std::size_t i) {
    bool changed = false;
    const Vertex& v = verts[i];
    for (int k = 0; k < 6; ++k) {
      auto [dx, dy] = kNeighbourSteps[static_cast<std::size_t>(k)];
      int wx = v.x + dx, wy = v.y + dy;
      if (!d.contains(wx, wy)) continue;
      std::size_t j = d.index(wx, wy);
      // k < 3: w = v + step, so H(v) in [H(w) - 1, H(w)].  k >= 3: v = w + step, H(v) in [H(w), H(w) + 1].
      int up_cost = k < 3 ? 0 : 1;
      int down_cost = k < 3 ? -1 : 0;
      if (env.upper[j] != kInf && env.upper[j] + up_cost < env.upper[i]) {
        env.upper[i] = env.upper[j] + up_cost;
        changed = true;
      }
      if (env.lower[j] != -kInf && env.lower[j] + down_cost > env.lower[i]) {
        env.lower[i] = env.lower[j] + down_cost;
        changed = true;
      }
    }
    return changed;
  };
  for (std::size_t pass = 0; pass <= 2 * nv + 2; ++pass) {
    bool changed = false;
    if (pass % 2 == 0) {
      for (std::size_t i = 0; i < nv; ++i) changed |= relax(i);
    } else {
      for (std::size_t i = nv; i-- > 0;) changed |= relax(i);
    }
    if (!changed) break;
  }
  env.admissible = true;
  for (std::size_t k = 0; k < h.indices().size(); ++k) {
    std::size_t i = h.indices()[k];
    if (env.upper[i] != h.values()[k] || env.lower[i] != h.values()[k]) env.admissible = false;
  }
  for (std::size_t i = 0; i < nv && env.admissible; ++i)
    if (env.lower[i] > env.upper[i]) env.admissible = false;
  return env;
}

bool is_admissible_boundary(const Domain& d, const BoundaryHeight& h) { return height_envelopes(d, h).admissible; }

}  // namespace tiling_lab
