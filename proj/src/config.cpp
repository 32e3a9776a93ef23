#include "nfsar/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "nfsar/io.hpp"

namespace nfsar {

using nlohmann::json;

ImagingGeometry GeometryBlock::to_geometry() const {
  ImagingGeometry g = ImagingGeometry::centered(standoff_m, n_azimuth, n_range, spacing_azimuth_m, spacing_range_m);
  g.center_frequency_hz = f0_hz;
  g.transmit_bandwidth_hz = bandwidth_hz;
  g.rail_length_m = rail_length_m;
  g.validate();
  return g;
}

void GeometryBlock::resize_grid(std::size_t n) {
  if (n < 1) throw std::invalid_argument("grid size must be >= 1");
  spacing_azimuth_m = spacing_azimuth_m * static_cast<double>(n_azimuth) / static_cast<double>(n);
  spacing_range_m = spacing_range_m * static_cast<double>(n_range) / static_cast<double>(n);
  n_azimuth = n_range = n;
}

SolverConfig SolverBlock::to_config(double lambda) const {
  SolverConfig c;
  c.lambda_reg = lambda;
  if (step_mode == "exact") {
    c.step_mode = StepMode::exact;
  } else if (step_mode == "global") {
    c.step_mode = StepMode::global;
  } else {
    throw std::invalid_argument("solver.step_mode must be 'exact' or 'global'");
  }
  c.global_step = global_step;
  c.max_sweeps = max_sweeps;
  c.objective_tolerance = objective_tolerance;
  c.active_set_threshold = active_set_threshold;
  c.refresh_interval = refresh_interval;
  c.validate();
  return c;
}

IstaConfig IstaBlock::to_config(double lambda) const {
  IstaConfig c;
  c.lambda_reg = lambda;
  c.step = step;
  c.max_iterations = max_iterations;
  c.tolerance = tolerance;
  return c;
}

CleanConfig CleanBlock::to_config(std::size_t scene_size) const {
  CleanConfig c;
  c.loop_gain = loop_gain;
  c.stop_threshold_db = stop_threshold_db;
  c.max_components = max_components != 0 ? max_components : (scene_size != 0 ? 10 * scene_size : 1000);
  c.validate();
  return c;
}

std::optional<NoiseSpec> NoiseBlock::to_spec(const SceneSpec& scene, std::uint64_t seed) const {
  if (!enabled) return std::nullopt;
  NoiseSpec spec;
  spec.rng_seed = seed;
  if (clutter_power_db) {
    spec.clutter_power_db = *clutter_power_db;
  } else if (!scene.scatterers.empty()) {
    double weakest = scene.scatterers.front().amplitude_dbsm;
    for (const auto& s : scene.scatterers) weakest = std::min(weakest, s.amplitude_dbsm);
    spec.clutter_power_db = weakest - 15.0;
  }
  return spec;
}

void RunConfig::validate() const {
  geometry.to_geometry();
  (void)psf.truncation();
  if (!(psf.range_step_m > 0.0) || !(psf.angle_step_deg > 0.0)) throw std::invalid_argument("psf steps must be > 0");
  solver.to_config(solver.lambda_reg.value_or(0.0));
  clean.to_config(1);
  if (!(heatmap_range_db > 0.0)) throw std::invalid_argument("heatmap_range_db must be > 0");
  if (bench.lambda_fractions.empty()) throw std::invalid_argument("bench.lambda_fractions must not be empty");
  for (double f : bench.lambda_fractions) {
    if (!(f >= 0.0)) throw std::invalid_argument("bench.lambda_fractions must be >= 0");
  }
  if (metrics.gate_radius_m && !(*metrics.gate_radius_m > 0.0)) throw std::invalid_argument("gate radius must be > 0");
}

namespace {

/// Reads known keys from one JSON object and rejects anything else.
class Block {
 public:
  Block(const json& parent, const char* name) : name_(name) {
    if (!parent.contains(name)) return;
    obj_ = &parent.at(name);
    if (!obj_->is_object()) throw std::invalid_argument(std::string("config: '") + name + "' must be an object");
  }
  explicit Block(const json& root) : name_("<root>"), obj_(&root) {}

  template <class T>
  void get(const char* key, T& field) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    try {
      field = obj_->at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(std::string("config: bad value for ") + name_ + "." + key);
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& field) {
    seen_.insert(key);
    if (!obj_ || !obj_->contains(key)) return;
    const json& v = obj_->at(key);
    if (v.is_null()) {
      field.reset();
      return;
    }
    T value{};
    get(key, value);
    field = value;
  }

  void skip(const char* key) { seen_.insert(key); }

  void finish() const {
    if (!obj_) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!seen_.count(k)) throw std::invalid_argument("config: unknown key " + name_ + "." + k);
    }
  }

 private:
  std::string name_;
  const json* obj_ = nullptr;
  std::set<std::string> seen_;
};

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw io::FormatError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw io::FormatError("config: top level must be an object");

  RunConfig c;
  {
    Block b(root, "geometry");
    b.get("f0_hz", c.geometry.f0_hz);
    b.get("bandwidth_hz", c.geometry.bandwidth_hz);
    b.get("rail_length_m", c.geometry.rail_length_m);
    b.get("standoff_m", c.geometry.standoff_m);
    b.get("n_azimuth", c.geometry.n_azimuth);
    b.get("n_range", c.geometry.n_range);
    b.get("spacing_azimuth_m", c.geometry.spacing_azimuth_m);
    b.get("spacing_range_m", c.geometry.spacing_range_m);
    b.finish();
  }
  {
    Block b(root, "psf");
    b.get("min_level_db", c.psf.min_level_db);
    b.get("fixed_patch_cells", c.psf.fixed_patch_cells);
    b.get("range_step_m", c.psf.range_step_m);
    b.get("angle_step_deg", c.psf.angle_step_deg);
    b.finish();
  }
  {
    Block b(root, "solver");
    b.get("lambda_reg", c.solver.lambda_reg);
    b.get("lambda_fraction", c.solver.lambda_fraction);
    b.get("step_mode", c.solver.step_mode);
    b.get("global_step", c.solver.global_step);
    b.get("max_sweeps", c.solver.max_sweeps);
    b.get("objective_tolerance", c.solver.objective_tolerance);
    b.get("active_set_threshold", c.solver.active_set_threshold);
    b.get("refresh_interval", c.solver.refresh_interval);
    b.finish();
  }
  {
    Block b(root, "ista");
    b.get("lambda_reg", c.ista.lambda_reg);
    b.get("lambda_fraction", c.ista.lambda_fraction);
    b.get("step", c.ista.step);
    b.get("max_iterations", c.ista.max_iterations);
    b.get("tolerance", c.ista.tolerance);
    b.finish();
  }
  {
    Block b(root, "clean");
    b.get("loop_gain", c.clean.loop_gain);
    b.get("stop_threshold_db", c.clean.stop_threshold_db);
    b.get("max_components", c.clean.max_components);
    b.finish();
  }
  {
    Block b(root, "noise");
    b.get("enabled", c.noise.enabled);
    b.get("clutter_power_db", c.noise.clutter_power_db);
    b.finish();
  }
  {
    Block b(root, "metrics");
    b.get("extract_min_level_db", c.metrics.extract_min_level_db);
    b.get("gate_radius_m", c.metrics.gate_radius_m);
    b.finish();
  }
  {
    Block b(root, "bench");
    b.get("lambda_fractions", c.bench.lambda_fractions);
    b.finish();
  }
  Block top(root);
  for (const char* k : {"geometry", "psf", "solver", "ista", "clean", "noise", "metrics", "bench"}) top.skip(k);
  top.get("heatmap_range_db", c.heatmap_range_db);
  top.get("seed", c.seed);
  top.get("output_dir", c.output_dir);
  top.finish();

  c.validate();
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["geometry"] = {{"f0_hz", c.geometry.f0_hz},
                   {"bandwidth_hz", c.geometry.bandwidth_hz},
                   {"rail_length_m", c.geometry.rail_length_m},
                   {"standoff_m", c.geometry.standoff_m},
                   {"n_azimuth", c.geometry.n_azimuth},
                   {"n_range", c.geometry.n_range},
                   {"spacing_azimuth_m", c.geometry.spacing_azimuth_m},
                   {"spacing_range_m", c.geometry.spacing_range_m}};
  j["psf"] = {{"min_level_db", c.psf.min_level_db},
              {"fixed_patch_cells", c.psf.fixed_patch_cells},
              {"range_step_m", c.psf.range_step_m},
              {"angle_step_deg", c.psf.angle_step_deg}};
  j["solver"] = {{"lambda_reg", opt(c.solver.lambda_reg)},
                 {"lambda_fraction", c.solver.lambda_fraction},
                 {"step_mode", c.solver.step_mode},
                 {"global_step", c.solver.global_step},
                 {"max_sweeps", c.solver.max_sweeps},
                 {"objective_tolerance", c.solver.objective_tolerance},
                 {"active_set_threshold", opt(c.solver.active_set_threshold)},
                 {"refresh_interval", c.solver.refresh_interval}};
  j["ista"] = {{"lambda_reg", opt(c.ista.lambda_reg)},
               {"lambda_fraction", c.ista.lambda_fraction},
               {"step", c.ista.step},
               {"max_iterations", c.ista.max_iterations},
               {"tolerance", c.ista.tolerance}};
  j["clean"] = {{"loop_gain", c.clean.loop_gain},
                {"stop_threshold_db", c.clean.stop_threshold_db},
                {"max_components", c.clean.max_components}};
  j["noise"] = {{"enabled", c.noise.enabled}, {"clutter_power_db", opt(c.noise.clutter_power_db)}};
  j["metrics"] = {{"extract_min_level_db", c.metrics.extract_min_level_db},
                  {"gate_radius_m", opt(c.metrics.gate_radius_m)}};
  j["bench"] = {{"lambda_fractions", c.bench.lambda_fractions}};
  j["heatmap_range_db"] = c.heatmap_range_db;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(io::read_file(path)); }

}  // namespace nfsar
