#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiling_lab/lattice.hpp"

namespace tiling_lab {

// Thrown for any config problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainConfig {
  std::string kind = "hexagon";  // hexagon | strip
  int a = 1, b = 1, c = 1;       // hexagon sides
  StripSpec strip;               // strip; rationals written as "p/q" strings
  std::optional<std::vector<int>> initial;  // strip: particle positions at t = 0 (default packed left)
};

struct SamplerConfig {
  std::string method = "cftp";  // glauber | cftp | bridge
  long burn_in = 0;             // glauber sweeps; 0 picks 20 |V|
  long thinning = 1;            // glauber sweeps between samples
  int chains = 1;
  int samples = 1;
};

// One experiment.  Unused fields keep their defaults and are not written back.
struct ExperimentSpec {
  std::string kind;                  // concentration | edge_scaling | drift | exclusion
  std::vector<int> n_ladder;         // strictly increasing
  int samples = 0;
  std::vector<double> rows;          // edge_scaling: relative row heights
  std::vector<std::complex<double>> z;  // drift
  long draws = 0;                    // drift
  int time = 0;                      // drift: lattice time of the configuration
  double delta = 0.1;                // exclusion
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  DomainConfig domain;
  SamplerConfig sampler;
  int resolution = 16;  // limit-shape mesh 1/resolution (hexagon sides scale by it)
  std::vector<ExperimentSpec> experiments;

  void validate() const;  // throws ConfigError
};

// Strict JSON: unknown keys, wrong types and missing seed are errors.
ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& c);

}  // namespace tiling_lab
