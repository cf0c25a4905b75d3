#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tiling_lab/lattice.hpp"

namespace tiling_lab {

// Lozenge conventions, in one place.
//
// A unit triangle has a horizontal edge, a vertical edge and a diagonal edge.  Write dh for
// the height increment along its horizontal edge (left to right) and dv for the drop along its
// vertical edge (top to bottom).  The pair (dh, dv) fixes which neighbour the triangle is
// glued to:
//   (0,0) type 1: glued across the horizontal edge
//   (1,1) type 2: glued across the vertical edge
//   (1,0) type 3: glued across the diagonal edge
//   (0,1) impossible
// The glued edge is the lozenge's inner diagonal.  Anchored lozenges:
//   type 1 at (x,y): Down(x,y) + Up(x,y+1)
//   type 2 at (x,y): Up(x,y)   + Down(x+1,y)
//   type 3 at (x,y): Up(x,y)   + Down(x,y)
struct LozengeRule {
  int dh;
  int dv;
  int diagonal;  // increment along the (1,1) edge
  std::array<Face, 2> faces;  // relative to the anchor
};

inline constexpr std::array<LozengeRule, 3> kLozengeRules = {{
    {0, 0, 0, {Face{0, 0, FaceKind::Down}, Face{0, 1, FaceKind::Up}}},
    {1, 1, 0, {Face{0, 0, FaceKind::Up}, Face{1, 0, FaceKind::Down}}},
    {1, 0, 1, {Face{0, 0, FaceKind::Up}, Face{0, 0, FaceKind::Down}}},
}};

// Type in {1,2,3} from the triangle's (dh, dv); 0 if the pair is illegal.
int lozenge_type(int dh, int dv);

struct Lozenge {
  int x = 0;
  int y = 0;
  int type = 1;
  friend bool operator==(const Lozenge&, const Lozenge&) = default;
};

std::array<Face, 2> lozenge_faces(const Lozenge& z);
Lozenge lozenge_of_face(const Face& f, int type);

struct EdgeViolation {
  Vertex from;
  Vertex to;
  int increment = 0;
  std::string describe() const;
};

class HeightFunction {
 public:
  HeightFunction() = default;
  HeightFunction(std::shared_ptr<const Domain> d, std::vector<std::int32_t> values);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  int at(int x, int y) const { return values_[domain_->index(x, y)]; }
  void set(int x, int y, int h) { values_[domain_->index(x, y)] = h; }
  const std::vector<std::int32_t>& values() const { return values_; }
  std::vector<std::int32_t>& mutable_values() { return values_; }

  std::optional<EdgeViolation> find_violation() const;
  void validate() const;  // throws InvalidInput naming the first violating edge
  BoundaryHeight boundary() const;

  friend bool operator==(const HeightFunction& a, const HeightFunction& b) {
    return *a.domain_ == *b.domain_ && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const Domain> domain_;
  std::vector<std::int32_t> values_;
};

// A set of lozenges on a domain.  Lozenges are kept sorted by (y, x, type).
class Tiling {
 public:
  Tiling() = default;
  Tiling(std::shared_ptr<const Domain> d, std::vector<Lozenge> lozenges);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Domain>& domain_ptr() const { return domain_; }
  const std::vector<Lozenge>& lozenges() const { return lozenges_; }
  void validate() const;

  friend bool operator==(const Tiling& a, const Tiling& b) { return *a.domain_ == *b.domain_ && a.lozenges_ == b.lozenges_; }

 private:
  std::shared_ptr<const Domain> domain_;
  std::vector<Lozenge> lozenges_;
};

// m walks over rows t = 0..T; position(i, t) is the lattice x of walk i in row y_min + t.
class WalkEnsemble {
 public:
  WalkEnsemble() = default;
  WalkEnsemble(int m, int T, std::vector<int> positions);

  int m() const { return m_; }
  int T() const { return T_; }
  int position(int i, int t) const { return positions_[static_cast<std::size_t>(i) * static_cast<std::size_t>(T_ + 1) + static_cast<std::size_t>(t)]; }
  std::vector<int> row(int t) const;
  const std::vector<int>& positions() const { return positions_; }
  void validate() const;

  friend bool operator==(const WalkEnsemble&, const WalkEnsemble&) = default;

 private:
  int m_ = 0;
  int T_ = 0;
  std::vector<int> positions_;
};

// Strictly increasing lattice positions k_i; x_i = k_i / n.
struct ParticleConfig {
  int n = 1;
  std::vector<int> positions;

  int m() const { return static_cast<int>(positions.size()); }
  double x(int i) const { return static_cast<double>(positions[static_cast<std::size_t>(i)]) / n; }
  void validate() const;
  friend bool operator==(const ParticleConfig&, const ParticleConfig&) = default;
};

HeightFunction height_from_tiling(const Tiling& t, int h0);
Tiling tiling_from_height(const HeightFunction& h);
WalkEnsemble walks_from_height(const HeightFunction& h);
HeightFunction height_from_walks(const WalkEnsemble& w, std::shared_ptr<const Domain> d, int west_height = 0);

}  // namespace tiling_lab
