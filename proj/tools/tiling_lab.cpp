#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tiling_lab/commands.hpp"
#include "tiling_lab/config.hpp"
#include "tiling_lab/io.hpp"

using namespace tiling_lab;

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int resolve_threads(std::optional<int> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TILING_LAB_THREADS")) {
    try {
      std::size_t used = 0;
      int n = std::stoi(env, &used);
      if (used == std::string(env).size() && n >= 1) return n;
    } catch (const std::logic_error&) {
    }
    throw ConfigError(std::string("TILING_LAB_THREADS: expected a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random lozenge tiling laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string domain_json, tiling_json, svg_out;

  const char* names[] = {"sample", "limit-shape", "concentration", "edge-scaling", "drift", "exclusion"};
  for (const char* name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--threads", threads, "Worker threads (fallback TILING_LAB_THREADS)")->check(CLI::PositiveNumber);
  }
  CLI::App* render = app.add_subcommand("render", "Render a tiling JSON to SVG");
  render->add_option("--domain", domain_json, "Domain JSON")->required();
  render->add_option("--tiling", tiling_json, "Tiling JSON")->required();
  render->add_option("--out", svg_out, "SVG path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (render->parsed()) {
      std::string svg = cmd_render(domain_json, tiling_json);
      if (svg_out.empty()) std::cout << svg;
      else write_file(svg_out, svg);
      return 0;
    }
    CLI::App* sub = app.get_subcommands().front();
    ExperimentConfig config;
    std::string text;
    try {
      text = read_file(config_path);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    config = parse_config(text);
    if (seed) config.seed = *seed;
    RunContext ctx{out_dir.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(out_dir), resolve_threads(threads)};
    const std::string name = sub->get_name();
    std::string summary;
    if (name == "sample") summary = cmd_sample(config, ctx);
    else if (name == "limit-shape") summary = cmd_limit_shape(config, ctx);
    else if (name == "concentration") summary = cmd_concentration(config, ctx);
    else if (name == "edge-scaling") summary = cmd_edge_scaling(config, ctx);
    else if (name == "drift") summary = cmd_drift(config, ctx);
    else summary = cmd_exclusion(config, ctx);
    std::cout << summary;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
