#include "tiling_lab/config.hpp"

#include <set>

#include "json.hpp"
#include "tiling_lab/error.hpp"

namespace tiling_lab {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": missing or wrong type");
  }
}

template <class T>
void maybe(const json& j, const std::string& key, const std::string& where, T& out) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

Rational rational_of(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (!v.is_string()) throw ConfigError(where + ": expected an integer or a \"p/q\" string");
  std::string s = v.get<std::string>();
  try {
    std::size_t slash = s.find('/');
    std::size_t used = 0;
    std::int64_t p = std::stoll(s.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
    std::int64_t q = 1;
    if (slash != std::string::npos) {
      std::string den = s.substr(slash + 1);
      q = std::stoll(den, &used);
      if (used != den.size() || q <= 0) throw std::invalid_argument(s);
    }
    return Rational(p, q);
  } catch (const std::logic_error&) {
    throw ConfigError(where + ": cannot parse rational '" + s + "'");
  }
}

std::string rational_text(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator()) : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (resolution < 1) throw ConfigError("resolution: must be positive");
  if (domain.kind == "hexagon") {
    if (domain.a < 1 || domain.b < 1 || domain.c < 1) throw ConfigError("domain: hexagon sides must be positive");
    if (domain.initial) throw ConfigError("domain: 'initial' applies only to strips");
  } else if (domain.kind == "strip") {
    try {
      domain.strip.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  } else {
    throw ConfigError("domain.kind: expected hexagon or strip, got '" + domain.kind + "'");
  }
  if (sampler.method != "glauber" && sampler.method != "cftp" && sampler.method != "bridge")
    throw ConfigError("sampler.method: expected glauber, cftp or bridge, got '" + sampler.method + "'");
  if (sampler.method == "bridge" && !(domain.kind == "strip" && domain.strip.is_packed_trapezoid()))
    throw ConfigError("sampler.method: bridge needs a strip that is a packed trapezoid");
  if (sampler.burn_in < 0 || sampler.thinning < 1 || sampler.chains < 1 || sampler.samples < 1)
    throw ConfigError("sampler: burn_in >= 0, thinning >= 1, chains >= 1, samples >= 1 required");
  for (std::size_t k = 0; k < experiments.size(); ++k) {
    const ExperimentSpec& e = experiments[k];
    const std::string where = "experiments[" + std::to_string(k) + "]";
    if (e.kind != "concentration" && e.kind != "edge_scaling" && e.kind != "drift" && e.kind != "exclusion")
      throw ConfigError(where + ".kind: unknown experiment '" + e.kind + "'");
    for (std::size_t i = 0; i < e.n_ladder.size(); ++i)
      if (e.n_ladder[i] < 1 || (i > 0 && e.n_ladder[i] <= e.n_ladder[i - 1]))
        throw ConfigError(where + ".n_ladder: must be positive and strictly increasing");
    if ((e.kind == "concentration" || e.kind == "edge_scaling") && (e.n_ladder.empty() || e.samples < 1))
      throw ConfigError(where + ": needs n_ladder and samples");
    if ((e.kind == "concentration" || e.kind == "edge_scaling") && domain.kind != "hexagon")
      throw ConfigError(where + ": " + e.kind + " runs on hexagons");
    if ((e.kind == "drift" || e.kind == "exclusion") && !(domain.kind == "strip" && domain.strip.is_packed_trapezoid()))
      throw ConfigError(where + ": " + e.kind + " needs a packed trapezoid strip");
    if (e.kind == "drift" && (e.z.empty() || e.draws < 2)) throw ConfigError(where + ": drift needs z points and draws >= 2");
    if (e.kind == "exclusion" && e.samples < 1) throw ConfigError(where + ": exclusion needs samples");
    if (e.kind == "edge_scaling")
      for (double r : e.rows)
        if (!(r > 0 && r < 1)) throw ConfigError(where + ".rows: relative heights must lie in (0, 1)");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j, "config", {"seed", "output_dir", "domain", "sampler", "resolution", "experiments"});
  ExperimentConfig c;
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) throw ConfigError("config.seed: missing or not a nonnegative integer");
  c.seed = j.at("seed").get<std::uint64_t>();
  maybe(j, "output_dir", "config", c.output_dir);
  maybe(j, "resolution", "config", c.resolution);
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    check_keys(d, "domain", {"kind", "a", "b", "c", "a0", "a_slope", "b0", "b_slope", "t_max", "n", "m", "initial"});
    maybe(d, "kind", "domain", c.domain.kind);
    maybe(d, "a", "domain", c.domain.a);
    maybe(d, "b", "domain", c.domain.b);
    maybe(d, "c", "domain", c.domain.c);
    StripSpec& s = c.domain.strip;
    if (d.contains("a0")) s.a0 = rational_of(d.at("a0"), "domain.a0");
    if (d.contains("b0")) s.b0 = rational_of(d.at("b0"), "domain.b0");
    if (d.contains("t_max")) s.t_max = rational_of(d.at("t_max"), "domain.t_max");
    maybe(d, "a_slope", "domain", s.a_slope);
    maybe(d, "b_slope", "domain", s.b_slope);
    maybe(d, "n", "domain", s.n);
    maybe(d, "m", "domain", s.m);
    if (d.contains("initial")) c.domain.initial = get<std::vector<int>>(d, "initial", "domain");
  }
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    check_keys(s, "sampler", {"method", "burn_in", "thinning", "chains", "samples"});
    maybe(s, "method", "sampler", c.sampler.method);
    maybe(s, "burn_in", "sampler", c.sampler.burn_in);
    maybe(s, "thinning", "sampler", c.sampler.thinning);
    maybe(s, "chains", "sampler", c.sampler.chains);
    maybe(s, "samples", "sampler", c.sampler.samples);
  }
  if (j.contains("experiments")) {
    if (!j.at("experiments").is_array()) throw ConfigError("config.experiments: expected an array");
    for (std::size_t k = 0; k < j.at("experiments").size(); ++k) {
      const json& e = j.at("experiments")[k];
      const std::string where = "experiments[" + std::to_string(k) + "]";
      check_keys(e, where, {"kind", "n_ladder", "samples", "rows", "z", "draws", "time", "delta"});
      ExperimentSpec x;
      x.kind = get<std::string>(e, "kind", where);
      maybe(e, "n_ladder", where, x.n_ladder);
      maybe(e, "samples", where, x.samples);
      maybe(e, "rows", where, x.rows);
      maybe(e, "draws", where, x.draws);
      maybe(e, "time", where, x.time);
      maybe(e, "delta", where, x.delta);
      if (e.contains("z")) {
        for (const auto& p : get<std::vector<std::vector<double>>>(e, "z", where)) {
          if (p.size() != 2) throw ConfigError(where + ".z: each point is [re, im]");
          x.z.emplace_back(p[0], p[1]);
        }
      }
      c.experiments.push_back(std::move(x));
    }
  }
  c.validate();
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["resolution"] = c.resolution;
  json d;
  d["kind"] = c.domain.kind;
  if (c.domain.kind == "hexagon") {
    d["a"] = c.domain.a;
    d["b"] = c.domain.b;
    d["c"] = c.domain.c;
  } else {
    const StripSpec& s = c.domain.strip;
    d["a0"] = rational_text(s.a0);
    d["a_slope"] = s.a_slope;
    d["b0"] = rational_text(s.b0);
    d["b_slope"] = s.b_slope;
    d["t_max"] = rational_text(s.t_max);
    d["n"] = s.n;
    d["m"] = s.m;
    if (c.domain.initial) d["initial"] = *c.domain.initial;
  }
  j["domain"] = d;
  j["sampler"] = {{"method", c.sampler.method},
                  {"burn_in", c.sampler.burn_in},
                  {"thinning", c.sampler.thinning},
                  {"chains", c.sampler.chains},
                  {"samples", c.sampler.samples}};
  json ex = json::array();
  for (const ExperimentSpec& e : c.experiments) {
    json x;
    x["kind"] = e.kind;
    x["n_ladder"] = e.n_ladder;
    x["samples"] = e.samples;
    x["rows"] = e.rows;
    json z = json::array();
    for (const auto& p : e.z) z.push_back({p.real(), p.imag()});
    x["z"] = z;
    x["draws"] = e.draws;
    x["time"] = e.time;
    x["delta"] = e.delta;
    ex.push_back(x);
  }
  j["experiments"] = ex;
  return j.dump(2) + "\n";
}

}  // namespace tiling_lab
