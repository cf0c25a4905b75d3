#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace tiling_lab {

using Rational = boost::rational<std::int64_t>;

struct Vertex {
  int x = 0;
  int y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Lexicographic on (y, x); the canonical ordering for every vertex list.
inline bool row_major_less(const Vertex& a, const Vertex& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

// Up face: (x,y), (x+1,y), (x+1,y+1).  Down face: (x,y), (x,y+1), (x+1,y+1).
enum class FaceKind : std::uint8_t { Up, Down };

struct Face {
  int x = 0;
  int y = 0;
  FaceKind kind = FaceKind::Up;
  friend bool operator==(const Face&, const Face&) = default;
};

std::array<Vertex, 3> face_vertices(const Face& f);

// Height increases by 0 or 1 along each of these steps: H(u + step) - H(u) in {0,1}.
inline constexpr std::array<std::pair<int, int>, 3> kRisingSteps = {{{1, 0}, {0, -1}, {1, 1}}};

// Six lattice neighbours of a vertex; kNeighbourSteps[k] and kNeighbourSteps[k+3] are opposite.
inline constexpr std::array<std::pair<int, int>, 6> kNeighbourSteps = {
    {{1, 0}, {0, -1}, {1, 1}, {-1, 0}, {0, 1}, {-1, -1}}};

struct BoundingBox {
  int x_min = 0;
  int x_max = 0;
  int y_min = 0;
  int y_max = 0;
};

// A row domain: rows y_min..y_max, row y holds vertices x in [left(y), right(y)], with
// left and right each advancing by 0 or 1 from one row to the next.  Faces are the lattice
// triangles whose three vertices all lie in the domain.
class Domain {
 public:
  static Domain from_rows(int y_min, std::vector<int> left, std::vector<int> right);

  int y_min() const { return y_min_; }
  int y_max() const { return y_min_ + static_cast<int>(left_.size()) - 1; }
  int row_count() const { return static_cast<int>(left_.size()); }
  int left(int y) const { return left_[static_cast<std::size_t>(y - y_min_)]; }
  int right(int y) const { return right_[static_cast<std::size_t>(y - y_min_)]; }

  bool contains(int x, int y) const;
  bool contains(const Vertex& v) const { return contains(v.x, v.y); }
  bool contains_face(const Face& f) const;
  bool is_boundary(int x, int y) const;

  std::size_t vertex_count() const { return row_offset_.back(); }
  std::size_t index(int x, int y) const {
    return row_offset_[static_cast<std::size_t>(y - y_min_)] + static_cast<std::size_t>(x - left(y));
  }
  std::size_t index(const Vertex& v) const { return index(v.x, v.y); }
  Vertex vertex(std::size_t i) const;

  std::vector<Vertex> vertices() const;
  std::vector<Face> faces() const;
  std::vector<std::size_t> boundary_indices() const;
  std::vector<std::size_t> interior_indices() const;
  std::vector<Vertex> boundary_cycle() const;
  std::size_t edge_count() const;
  BoundingBox bounding_box() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.y_min_ == b.y_min_ && a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  int y_min_ = 0;
  std::vector<int> left_;
  std::vector<int> right_;
  std::vector<std::size_t> row_offset_;
};

// Heights on the boundary vertices of a domain, aligned with Domain::boundary_indices().
class BoundaryHeight {
 public:
  BoundaryHeight() = default;
  BoundaryHeight(const Domain& d, std::vector<int> values);

  const std::vector<std::size_t>& indices() const { return indices_; }
  const std::vector<int>& values() const { return values_; }
  int at(const Domain& d, int x, int y) const;
  void set(const Domain& d, int x, int y, int value);

  friend bool operator==(const BoundaryHeight&, const BoundaryHeight&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::vector<int> values_;
};

// Strip 0 <= t <= t_max, a(t) <= x <= b(t) with a(t) = a0 + a_slope t, b(t) = b0 + b_slope t,
// carried at lattice scale n with m walks.
struct StripSpec {
  Rational a0{0};
  int a_slope = 0;
  Rational b0{1};
  int b_slope = 0;
  Rational t_max{1};
  int n = 1;
  int m = 1;

  void validate() const;
  int rows() const;                  // n * t_max
  int left_wall(int t) const;        // n * a(t / n)
  int right_wall(int t) const;       // n * b(t / n)
  bool is_packed_trapezoid() const;  // a_slope = 1, b_slope = 0, m = right - left at t = rows()
};

// Particle positions (lattice units) on the south and north rows; defaults are packed
// against the west wall (south) and the east wall (north).
struct StripBoundary {
  std::optional<std::vector<int>> south;
  std::optional<std::vector<int>> north;
};

struct DomainWithBoundary {
  Domain domain;
  BoundaryHeight boundary;
};

DomainWithBoundary build_hexagon(int a, int b, int c);
DomainWithBoundary build_strip(const StripSpec& spec, const StripBoundary& ends = {});

// Pointwise minimal and maximal legal extensions of boundary data (dense, per vertex).
struct HeightEnvelopes {
  bool admissible = false;
  std::vector<int> lower;
  std::vector<int> upper;
};

HeightEnvelopes height_envelopes(const Domain& d, const BoundaryHeight& h);
bool is_admissible_boundary(const Domain& d, const BoundaryHeight& h);

// Row profile of a particle configuration: heights base + #{particles < x} for x in [left, right].
std::vector<int> row_heights_from_particles(int left, int right, const std::vector<int>& particles,
                                            int base);

}  // namespace tiling_lab
