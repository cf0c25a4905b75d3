#include "tiling_lab/io.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tiling_lab/error.hpp"

namespace tiling_lab {

using nlohmann::json;

namespace {

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(what) + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string domain_to_json(const Domain& d, const BoundaryHeight& h) {
  json out;
  json& vs = out["vertices"] = json::array();
  for (const Vertex& v : d.vertices()) vs.push_back({v.x, v.y});
  json& fs = out["faces"] = json::array();
  for (const Face& f : d.faces()) fs.push_back({{"x", f.x}, {"y", f.y}, {"kind", f.kind == FaceKind::Up ? "up" : "down"}});
  json& bs = out["boundary"] = json::array();
  for (std::size_t k = 0; k < h.indices().size(); ++k) {
    Vertex v = d.vertex(h.indices()[k]);
    bs.push_back({{"v", {v.x, v.y}}, {"h", h.values()[k]}});
  }
  return out.dump() + "\n";
}

DomainWithBoundary domain_from_json(std::string_view text) {
  json j = parse(text, "domain json");
  try {
    std::map<int, std::vector<int>> rows;
    for (const json& v : j.at("vertices")) rows[v.at(1).get<int>()].push_back(v.at(0).get<int>());
    if (rows.empty()) throw InvalidInput("domain json: no vertices");
    std::vector<int> left, right;
    int y0 = rows.begin()->first;
    for (const auto& [y, xs] : rows) {
      if (y != y0 + static_cast<int>(left.size())) throw InvalidInput("domain json: rows are not contiguous");
      auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
      if (static_cast<int>(xs.size()) != *hi - *lo + 1) throw InvalidInput("domain json: row " + std::to_string(y) + " is not an interval");
      left.push_back(*lo);
      right.push_back(*hi);
    }
    Domain d = Domain::from_rows(y0, left, right);
    std::vector<int> values(d.boundary_indices().size(), 0);
    std::vector<bool> seen(values.size(), false);
    const auto idx = d.boundary_indices();
    for (const json& b : j.at("boundary")) {
      int x = b.at("v").at(0).get<int>(), y = b.at("v").at(1).get<int>();
      if (!d.contains(x, y) || !d.is_boundary(x, y)) throw InvalidInput("domain json: (" + std::to_string(x) + "," + std::to_string(y) + ") is not a boundary vertex");
      auto k = static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), d.index(x, y)) - idx.begin());
      values[k] = b.at("h").get<int>();
      seen[k] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw InvalidInput("domain json: boundary heights incomplete");
    BoundaryHeight h(d, values);
    return {std::move(d), std::move(h)};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("domain json: ") + e.what());
  }
}

std::string tiling_to_json(const Tiling& t) {
  json out;
  json& ls = out["lozenges"] = json::array();
  for (const Lozenge& z : t.lozenges()) ls.push_back({{"x", z.x}, {"y", z.y}, {"type", z.type}});
  return out.dump() + "\n";
}

Tiling tiling_from_json(std::string_view text, std::shared_ptr<const Domain> d) {
  json j = parse(text, "tiling json");
  std::vector<Lozenge> ls;
  try {
    for (const json& z : j.at("lozenges")) ls.push_back({z.at("x").get<int>(), z.at("y").get<int>(), z.at("type").get<int>()});
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("tiling json: ") + e.what());
  }
  Tiling t(std::move(d), std::move(ls));
  t.validate();
  return t;
}

std::string walks_to_csv(const WalkEnsemble& w) {
  std::ostringstream out;
  out << "i,t,x\n";
  for (int i = 0; i < w.m(); ++i)
    for (int t = 0; t <= w.T(); ++t) out << i << "," << t << "," << w.position(i, t) << "\n";
  return out.str();
}

WalkEnsemble walks_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "i,t,x") throw InvalidInput("walk csv: expected header i,t,x");
  std::vector<std::array<int, 3>> rows;
  int m = 0, T = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<int, 3> r{};
    char c1 = 0, c2 = 0;
    std::istringstream ls(line);
    if (!(ls >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ',' || c2 != ',') throw InvalidInput("walk csv: malformed line '" + line + "'");
    if (r[0] < 0 || r[1] < 0) throw InvalidInput("walk csv: negative index");
    m = std::max(m, r[0] + 1);
    T = std::max(T, r[1]);
    rows.push_back(r);
  }
  if (rows.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(T + 1)) throw InvalidInput("walk csv: incomplete table");
  std::vector<int> pos(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (const auto& r : rows) {
    std::size_t k = static_cast<std::size_t>(r[0]) * static_cast<std::size_t>(T + 1) + static_cast<std::size_t>(r[1]);
    if (seen[k]) throw InvalidInput("walk csv: duplicate entry");
    seen[k] = true;
    pos[k] = r[2];
  }
  return WalkEnsemble(m, T, std::move(pos));
}

std::string render_svg(const Tiling& t, const SvgStyle& style) {
  const double r3 = std::sqrt(3.0) / 2.0;
  auto px = [&](const Vertex& v) { return v.x - 0.5 * v.y; };
  auto py = [&](const Vertex& v) { return r3 * v.y; };
  std::vector<std::array<Vertex, 4>> polys;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const Lozenge& z : t.lozenges()) {
    auto faces = lozenge_faces(z);
    auto a = face_vertices(faces[0]), b = face_vertices(faces[1]);
    std::vector<Vertex> shared, only_a, only_b;
    for (const Vertex& v : a) (std::find(b.begin(), b.end(), v) != b.end() ? shared : only_a).push_back(v);
    for (const Vertex& v : b)
      if (std::find(a.begin(), a.end(), v) == a.end()) only_b.push_back(v);
    std::array<Vertex, 4> p{only_a[0], shared[0], only_b[0], shared[1]};
    for (const Vertex& v : p) {
      if (first) {
        xmin = xmax = px(v);
        ymin = ymax = py(v);
        first = false;
      }
      xmin = std::min(xmin, px(v));
      xmax = std::max(xmax, px(v));
      ymin = std::min(ymin, py(v));
      ymax = std::max(ymax, py(v));
    }
    polys.push_back(p);
  }
  const double u = style.unit, m = style.margin;
  const double w = (xmax - xmin) * u + 2 * m, h = (ymax - ymin) * u + 2 * m;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " "
      << fmt(h) << "\">\n";
  out << "<g stroke=\"" << style.stroke << "\" stroke-width=\"" << fmt(style.stroke_width) << "\">\n";
  for (std::size_t k = 0; k < polys.size(); ++k) {
    out << "<polygon fill=\"" << style.fill[t.lozenges()[k].type - 1] << "\" points=\"";
    for (std::size_t i = 0; i < 4; ++i) {
      const Vertex& v = polys[k][i];
      out << (i ? " " : "") << fmt(m + (px(v) - xmin) * u) << "," << fmt(m + (ymax - py(v)) * u);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& p, std::string_view content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace tiling_lab
