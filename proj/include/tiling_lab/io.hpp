#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "tiling_lab/lattice.hpp"
#include "tiling_lab/tiling.hpp"

namespace tiling_lab {

// {"vertices":[[x,y],...],"faces":[{"x":..,"y":..,"kind":"up"|"down"}],"boundary":[{"v":[x,y],"h":..}]}
// with vertices in (y, x) order.
std::string domain_to_json(const Domain& d, const BoundaryHeight& h);
DomainWithBoundary domain_from_json(std::string_view text);

// {"lozenges":[{"x":..,"y":..,"type":..}]}
std::string tiling_to_json(const Tiling& t);
Tiling tiling_from_json(std::string_view text, std::shared_ptr<const Domain> d);

// Header i,t,x.
std::string walks_to_csv(const WalkEnsemble& w);
WalkEnsemble walks_from_csv(std::string_view text);

struct SvgStyle {
  double unit = 20.0;  // edge length in pixels
  double margin = 10.0;
  std::string fill[3] = {"#d9534f", "#f0ad4e", "#5bc0de"};
  std::string stroke = "#333333";
  double stroke_width = 0.5;
};

// One polygon per lozenge, filled by type.  Lattice (x, y) is drawn at (x - y/2, y sqrt(3)/2)
// with y pointing up.
std::string render_svg(const Tiling& t, const SvgStyle& style = {});

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

}  // namespace tiling_lab
