#include "tiling_lab/tiling.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "tiling_lab/error.hpp"

namespace tiling_lab {

int lozenge_type(int dh, int dv) {
  for (int k = 0; k < 3; ++k)
    if (kLozengeRules[static_cast<std::size_t>(k)].dh == dh && kLozengeRules[static_cast<std::size_t>(k)].dv == dv) return k + 1;
  return 0;
}

std::array<Face, 2> lozenge_faces(const Lozenge& z) {
  const LozengeRule& r = kLozengeRules[static_cast<std::size_t>(z.type - 1)];
  return {Face{z.x + r.faces[0].x, z.y + r.faces[0].y, r.faces[0].kind}, Face{z.x + r.faces[1].x, z.y + r.faces[1].y, r.faces[1].kind}};
}

Lozenge lozenge_of_face(const Face& f, int type) {
  const LozengeRule& r = kLozengeRules[static_cast<std::size_t>(type - 1)];
  const Face& off = r.faces[0].kind == f.kind ? r.faces[0] : r.faces[1];
  return Lozenge{f.x - off.x, f.y - off.y, type};
}

namespace {

// (dh, dv) of a face under a height function.
std::pair<int, int> face_increments(const HeightFunction& h, const Face& f) {
  if (f.kind == FaceKind::Up)
    return {h.at(f.x + 1, f.y) - h.at(f.x, f.y), h.at(f.x + 1, f.y) - h.at(f.x + 1, f.y + 1)};
  return {h.at(f.x + 1, f.y + 1) - h.at(f.x, f.y + 1), h.at(f.x, f.y) - h.at(f.x, f.y + 1)};
}

bool lozenge_less(const Lozenge& a, const Lozenge& b) { return std::tie(a.y, a.x, a.type) < std::tie(b.y, b.x, b.type); }

using FaceKey = std::tuple<int, int, int>;
FaceKey key_of(const Face& f) { return {f.y, f.x, f.kind == FaceKind::Up ? 0 : 1}; }

}  // namespace

std::string EdgeViolation::describe() const {
  return "edge (" + std::to_string(from.x) + "," + std::to_string(from.y) + ")->(" + std::to_string(to.x) + "," + std::to_string(to.y) +
         ") has increment " + std::to_string(increment) + ", expected 0 or 1";
}

HeightFunction::HeightFunction(std::shared_ptr<const Domain> d, std::vector<std::int32_t> values) : domain_(std::move(d)), values_(std::move(values)) {
  if (!domain_) throw InvalidInput("height function: null domain");
  if (values_.size() != domain_->vertex_count()) throw InvalidInput("height function: value count does not match the domain");
}

std::optional<EdgeViolation> HeightFunction::find_violation() const {
  const Domain& d = *domain_;
  for (int y = d.y_min(); y <= d.y_max(); ++y)
    for (int x = d.left(y); x <= d.right(y); ++x)
      for (auto [dx, dy] : kRisingSteps) {
        if (!d.contains(x + dx, y + dy)) continue;
        int inc = at(x + dx, y + dy) - at(x, y);
        if (inc != 0 && inc != 1) return EdgeViolation{{x, y}, {x + dx, y + dy}, inc};
      }
  return std::nullopt;
}

void HeightFunction::validate() const {
  if (auto v = find_violation()) throw InvalidInput("invalid height function: " + v->describe());
}

BoundaryHeight HeightFunction::boundary() const {
  std::vector<int> vals;
  for (std::size_t i : domain_->boundary_indices()) vals.push_back(values_[i]);
  return BoundaryHeight(*domain_, std::move(vals));
}

Tiling::Tiling(std::shared_ptr<const Domain> d, std::vector<Lozenge> lozenges) : domain_(std::move(d)), lozenges_(std::move(lozenges)) {
  if (!domain_) throw InvalidInput("tiling: null domain");
  std::sort(lozenges_.begin(), lozenges_.end(), lozenge_less);
}

void Tiling::validate() const {
  std::map<FaceKey, int> cover;
  for (const Lozenge& z : lozenges_) {
    if (z.type < 1 || z.type > 3) throw InvalidInput("tiling: lozenge type must be 1, 2 or 3");
    auto faces = lozenge_faces(z);
    int inside = 0;
    for (const Face& f : faces)
      if (domain_->contains_face(f)) {
        ++inside;
        if (++cover[key_of(f)] > 1) throw InvalidInput("tiling: a face is covered twice");
      }
    if (inside == 0) throw InvalidInput("tiling: lozenge lies outside the domain");
  }
  if (cover.size() != domain_->faces().size()) throw InvalidInput("tiling: some faces are not covered");
}

HeightFunction height_from_tiling(const Tiling& t, int h0) {
  t.validate();
  const Domain& d = t.domain();
  std::map<FaceKey, int> type_of;
  for (const Lozenge& z : t.lozenges())
    for (const Face& f : lozenge_faces(z))
      if (d.contains_face(f)) type_of[key_of(f)] = z.type;
  std::vector<Face> faces = d.faces();
  const std::int32_t kUnset = INT32_MIN;
  std::vector<std::int32_t> H(d.vertex_count(), kUnset);
  H[d.index(d.left(d.y_min()), d.y_min())] = h0;
  // Each face fixes the increments along its three edges; propagate until every vertex is set.
  auto apply = [&](const Face& f, bool check) {
    const LozengeRule& r = kLozengeRules[static_cast<std::size_t>(type_of[key_of(f)] - 1)];
    auto vs = face_vertices(f);
    // Heights relative to the face's first vertex.
    std::array<int, 3> rel = f.kind == FaceKind::Up ? std::array<int, 3>{0, r.dh, r.dh - r.dv} : std::array<int, 3>{0, -r.dv, r.dh - r.dv};
    int known = -1;
    for (int k = 0; k < 3; ++k)
      if (H[d.index(vs[static_cast<std::size_t>(k)])] != kUnset) {
        known = k;
        break;
      }
    if (known < 0) return false;
    int base = H[d.index(vs[static_cast<std::size_t>(known)])] - rel[static_cast<std::size_t>(known)];
    bool progress = false;
    for (int k = 0; k < 3; ++k) {
      std::int32_t& slot = H[d.index(vs[static_cast<std::size_t>(k)])];
      int want = base + rel[static_cast<std::size_t>(k)];
      if (slot == kUnset) {
        slot = want;
        progress = true;
      } else if (check && slot != want) {
        throw InvalidInput("tiling: inconsistent lozenge increments");
      }
    }
    return progress;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (const Face& f : faces) progress |= apply(f, false);
  }
  for (const Face& f : faces) apply(f, true);
  for (std::int32_t v : H)
    if (v == kUnset) throw InvalidInput("tiling: vertex not reached by any face");
  return HeightFunction(t.domain_ptr(), std::move(H));
}

Tiling tiling_from_height(const HeightFunction& h) {
  h.validate();
  std::vector<Lozenge> out;
  for (const Face& f : h.domain().faces()) {
    auto [dh, dv] = face_increments(h, f);
    int type = lozenge_type(dh, dv);
    if (type == 0) throw InvalidInput("height function: illegal triangle increments");
    out.push_back(lozenge_of_face(f, type));
  }
  std::sort(out.begin(), out.end(), lozenge_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Tiling(h.domain_ptr(), std::move(out));
}

WalkEnsemble::WalkEnsemble(int m, int T, std::vector<int> positions) : m_(m), T_(T), positions_(std::move(positions)) { validate(); }

std::vector<int> WalkEnsemble::row(int t) const {
  std::vector<int> r(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) r[static_cast<std::size_t>(i)] = position(i, t);
  return r;
}

void WalkEnsemble::validate() const {
  if (m_ < 0 || T_ < 0) throw InvalidInput("walks: negative size");
  if (positions_.size() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(T_ + 1)) throw InvalidInput("walks: position matrix has the wrong size");
  for (int i = 0; i < m_; ++i)
    for (int t = 0; t <= T_; ++t) {
      if (t < T_) {
        int step = position(i, t + 1) - position(i, t);
        if (step != 0 && step != 1) throw InvalidInput("walks: step outside {0,1}");
      }
      if (i > 0 && position(i, t) <= position(i - 1, t)) throw InvalidInput("walks: walks intersect");
    }
}

void ParticleConfig::validate() const {
  if (n <= 0) throw InvalidInput("particle config: n must be positive");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (positions[i] <= positions[i - 1]) throw InvalidInput("particle config: positions must be strictly increasing");
}

WalkEnsemble walks_from_height(const HeightFunction& h) {
  h.validate();
  const Domain& d = h.domain();
  int T = d.row_count() - 1;
  std::vector<std::vector<int>> rows;
  int west = h.at(d.left(d.y_min()), d.y_min());
  for (int y = d.y_min(); y <= d.y_max(); ++y) {
    if (h.at(d.left(y), y) != west) throw InvalidInput("walks: west heights are not constant, domain is not strip-like");
    std::vector<int> r;
    for (int x = d.left(y); x < d.right(y); ++x)
      if (h.at(x + 1, y) - h.at(x, y) == 1) r.push_back(x);
    if (!rows.empty() && r.size() != rows.front().size())
      throw InvalidInput("walks: row " + std::to_string(y) + " has a different particle count");
    rows.push_back(std::move(r));
  }
  int m = static_cast<int>(rows.front().size());
  std::vector<int> pos(static_cast<std::size_t>(m) * static_cast<std::size_t>(T + 1));
  for (int i = 0; i < m; ++i)
    for (int t = 0; t <= T; ++t)
      pos[static_cast<std::size_t>(i) * static_cast<std::size_t>(T + 1) + static_cast<std::size_t>(t)] = rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
  return WalkEnsemble(m, T, std::move(pos));
}

HeightFunction height_from_walks(const WalkEnsemble& w, std::shared_ptr<const Domain> d, int west_height) {
  if (!d) throw InvalidInput("walks: null domain");
  if (w.T() != d->row_count() - 1) throw InvalidInput("walks: time span does not match the domain's row count");
  std::vector<std::int32_t> H(d->vertex_count());
  for (int t = 0; t <= w.T(); ++t) {
    int y = d->y_min() + t;
    std::vector<int> r = w.row(t);
    for (int x : r)
      if (x < d->left(y) || x > d->right(y) - 1) throw InvalidInput("walks: particle count does not fit row " + std::to_string(y));
    std::vector<int> prof = row_heights_from_particles(d->left(y), d->right(y), r, west_height);
    std::copy(prof.begin(), prof.end(), H.begin() + static_cast<std::ptrdiff_t>(d->index(d->left(y), y)));
  }
  HeightFunction out(std::move(d), std::move(H));
  out.validate();
  return out;
}

}  // namespace tiling_lab
