#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tiling_lab/config.hpp"
#include "tiling_lab/rng.hpp"
#include "tiling_lab/tiling.hpp"

namespace tiling_lab {

struct RunContext {
  std::filesystem::path out;
  int threads = 1;
};

// Calls body(k) for k in [0, count) on up to `threads` workers.  Rethrows the first exception.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// count exact samples, sample k drawn from rng.stream("chain", k).
std::vector<HeightFunction> cftp_samples(std::shared_ptr<const Domain> d, const BoundaryHeight& h, std::size_t count, const Rng& rng,
                                         int threads);

// Domain and boundary described by the config (hexagon sides as given, strip at its own n).
DomainWithBoundary config_domain(const ExperimentConfig& c);
// Particle configuration at t = 0 of a strip config.
ParticleConfig config_initial(const ExperimentConfig& c);

// Each command writes into ctx.out and returns the summary JSON it wrote.
std::string cmd_sample(const ExperimentConfig& c, const RunContext& ctx);
std::string cmd_limit_shape(const ExperimentConfig& c, const RunContext& ctx);
std::string cmd_concentration(const ExperimentConfig& c, const RunContext& ctx);
std::string cmd_edge_scaling(const ExperimentConfig& c, const RunContext& ctx);
std::string cmd_drift(const ExperimentConfig& c, const RunContext& ctx);
std::string cmd_exclusion(const ExperimentConfig& c, const RunContext& ctx);
// Renders a tiling JSON on the domain of a domain JSON.
std::string cmd_render(const std::filesystem::path& domain_json, const std::filesystem::path& tiling_json);

}  // namespace tiling_lab
