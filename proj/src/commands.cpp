#include "nfsar/commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "nfsar/baselines.hpp"
#include "nfsar/dictionary.hpp"
#include "nfsar/io.hpp"

namespace nfsar::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return exit_failure;
}

fs::path output_dir(const RunConfig& config) {
  fs::path dir(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

double to_deg(double rad) { return rad * 180.0 / pi; }

json scatterers_json(const std::vector<ExtractedScatterer>& list) {
  json arr = json::array();
  for (const auto& s : list) {
    arr.push_back({{"azimuth_m", s.azimuth_m},
                   {"range_m", s.range_m},
                   {"amplitude_db", 20.0 * std::log10(std::abs(s.amplitude))},
                   {"phase_deg", to_deg(std::arg(s.amplitude))}});
  }
  return arr;
}

std::string trace_csv(const RestorationResult& r) {
  std::string s = "iteration,objective\n";
  for (std::size_t i = 0; i < r.objective_trace.size(); ++i) {
    s += std::to_string(i) + "," + io::csv_number(r.objective_trace[i]) + "\n";
  }
  return s;
}

std::string lowercase(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

MatchReport evaluate_result(const RestorationResult& r, const SceneSpec& scene, const RunConfig& config,
                            double gate, std::vector<ExtractedScatterer>& extracted) {
  extracted = extract_scatterers(r.coefficients, config.metrics.extract_min_level_db);
  return match_scatterers(extracted, scene, gate);
}

std::string pairs_csv(const MatchReport& report, const std::vector<ExtractedScatterer>& est, const SceneSpec& scene) {
  std::string s =
      "truth_index,truth_azimuth_m,truth_range_m,estimate_azimuth_m,estimate_range_m,amplitude_error_db,"
      "position_error_m\n";
  for (const auto& p : report.pairs) {
    const auto& t = scene.scatterers[p.truth];
    const auto& e = est[p.estimate];
    s += std::to_string(p.truth) + "," + io::csv_number(t.azimuth_m) + "," + io::csv_number(t.range_m) + "," +
         io::csv_number(e.azimuth_m) + "," + io::csv_number(e.range_m) + "," +
         io::csv_number(p.amplitude_error_db) + "," + io::csv_number(p.position_error_m) + "\n";
  }
  return s;
}

}  // namespace

SceneSpec resolve_scene(const std::string& name) {
  if (name == "paper1") return paper_scene_1();
  if (name == "paper2") return paper_scene_2();
  return io::read_scene(name);
}

RunConfig effective_config(const Options& options) {
  RunConfig c = options.config ? load_config(*options.config) : RunConfig{};
  if (!options.config && options.scene == "paper2") c.geometry.standoff_m = 21.0;
  if (options.grid) c.geometry.resize_grid(*options.grid);
  if (options.seed) c.seed = *options.seed;
  if (options.out) c.output_dir = options.out->string();
  c.validate();
  return c;
}

int cmd_simulate(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = effective_config(options);
    const SceneSpec scene = resolve_scene(options.scene);
    const ImagingGeometry geometry = config.geometry.to_geometry();
    const PsfBank bank = build_psf_bank(geometry, config.psf.quantization(), config.psf.truncation());
    const auto noise = config.noise.to_spec(scene, config.seed);
    const ComplexImage ideal = render_ideal(scene, geometry);
    const ComplexImage degraded = degrade(scene, geometry, bank, noise);

    const fs::path dir = output_dir(config);
    io::write_image(dir / "ideal.nfsar", ideal);
    io::write_image(dir / "degraded.nfsar", degraded);
    io::write_file_atomic(dir / "scene.txt", io::format_scene(scene));

    out << "scene " << (scene.label.empty() ? "(unnamed)" : scene.label) << ": " << scene.scatterers.size()
        << " scatterers\n";
    if (!scene.scatterers.empty()) {
      double a0 = std::numeric_limits<double>::infinity(), a1 = -a0, r0 = a0, r1 = -a0;
      for (const auto& s : scene.scatterers) {
        a0 = std::min(a0, s.azimuth_m);
        a1 = std::max(a1, s.azimuth_m);
        r0 = std::min(r0, s.range_m);
        r1 = std::max(r1, s.range_m);
      }
      out << "extent: azimuth [" << a0 << ", " << a1 << "] m, range [" << r0 << ", " << r1 << "] m\n";
    }
    out << "grid: " << geometry.grid.n_azimuth << " x " << geometry.grid.n_range << " cells, spacing "
        << geometry.grid.spacing_azimuth_m << " m; PSF bank: " << bank.size() << " patches\n";
    if (noise) out << "clutter: " << noise->clutter_power_db << " dB, seed " << noise->rng_seed << "\n";
    out << "wrote " << (dir / "degraded.nfsar").string() << " and " << (dir / "ideal.nfsar").string() << "\n";
    return exit_ok;
  });
}

int cmd_psf(const Options& options, double azimuth_m, double range_m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = effective_config(options);
    const ImagingGeometry geometry = config.geometry.to_geometry();
    GridSpec::Cell cell;
    if (!geometry.grid.nearest_cell(azimuth_m, range_m, cell)) {
      err << "error: position (" << azimuth_m << ", " << range_m << ") is outside the imaging grid\n";
      return exit_failure;
    }
    const PsfPatch patch = synthesize_psf(geometry, azimuth_m, range_m, config.psf.truncation());
    const Resolutions res = resolutions(geometry, patch.center_slant_range_m);
    const PsfWidths widths = measure_psf_widths(res, patch.observation_angle_rad);

    const fs::path dir = output_dir(config);
    std::string csv = "row,col,azimuth_offset_m,range_offset_m,value\n";
    std::vector<double> mag(patch.samples.size());
    for (std::size_t row = 0; row < patch.rows(); ++row) {
      for (std::size_t col = 0; col < patch.cols(); ++col) {
        const double da = (static_cast<double>(row) - static_cast<double>(patch.half_azimuth)) *
                          geometry.grid.spacing_azimuth_m;
        const double dr = (static_cast<double>(col) - static_cast<double>(patch.half_range)) *
                          geometry.grid.spacing_range_m;
        csv += std::to_string(row) + "," + std::to_string(col) + "," + io::csv_number(da) + "," +
               io::csv_number(dr) + "," + io::csv_number(patch.at(row, col)) + "\n";
        mag[row * patch.cols() + col] = std::abs(patch.at(row, col));
      }
    }
    io::write_file_atomic(dir / "psf.csv", csv);
    io::write_file_atomic(dir / "psf.pgm", io::encode_pgm_db(mag, patch.cols(), patch.rows(), config.heatmap_range_db));

    out << "position_m: azimuth " << azimuth_m << ", range " << range_m << "\n";
    out << "slant_range_m: " << io::csv_number(patch.center_slant_range_m) << "\n";
    out << "observation_angle_rad: " << io::csv_number(patch.observation_angle_rad) << " ("
        << io::csv_number(to_deg(patch.observation_angle_rad)) << " deg)\n";
    out << "rho_range_m: " << io::csv_number(res.range_m) << "\n";
    out << "rho_azimuth_m: " << io::csv_number(res.azimuth_m) << "\n";
    out << "width_3db_range_m: " << io::csv_number(widths.along_los_m) << "\n";
    out << "width_3db_azimuth_m: " << io::csv_number(widths.across_los_m) << "\n";
    out << "patch_cells: " << patch.rows() << " x " << patch.cols() << (patch.clamped ? " (clamped to grid)" : "")
        << "\n";
    return exit_ok;
  });
}

int cmd_restore(const Options& options, const fs::path& image_file, const std::string& method, std::ostream& out,
                std::ostream& err) {
  if (method != "proposed" && method != "ista" && method != "clean") {
    err << "usage error: --method must be one of proposed|ista|clean (got '" << method << "')\n";
    return exit_usage;
  }
  return guarded(err, [&]() -> int {
    const RunConfig config = effective_config(options);
    const ImagingGeometry geometry = config.geometry.to_geometry();
    const ComplexImage y = io::read_image(image_file);
    if (!(y.grid() == geometry.grid)) {
      err << "error: image grid does not match the configured geometry\n";
      return exit_failure;
    }
    const PsfBank bank = build_psf_bank(geometry, config.psf.quantization(), config.psf.truncation());

    RestorationResult result;
    double lambda = 0.0;
    if (method == "proposed") {
      const VariantDictionary dict(bank);
      lambda = config.solver.lambda_reg.value_or(config.solver.lambda_fraction * dict.adjoint(y).max_abs());
      result = restore(y, dict, config.solver.to_config(lambda));
    } else if (method == "ista") {
      const PsfPatch& center = center_psf(bank);
      if (config.ista.lambda_reg) {
        lambda = *config.ista.lambda_reg;
      } else {
        const InvariantOperator op(center, geometry.grid);
        lambda = config.ista.lambda_fraction * op.adjoint(y).max_abs();
      }
      result = ista_restore(y, center, config.ista.to_config(lambda));
    } else {
      result = clean_restore(y, bank, config.clean.to_config(0));
    }
    result.scatterers = extract_scatterers(result.coefficients, config.metrics.extract_min_level_db);

    const fs::path dir = output_dir(config);
    io::write_image(dir / "coefficients.nfsar", result.coefficients);
    io::write_image(dir / "residual.nfsar", result.residual);
    io::write_file_atomic(dir / "objective_trace.csv", trace_csv(result));
    json manifest = {{"method", result.method},
                     {"lambda_reg", lambda},
                     {"converged", result.converged},
                     {"iterations", result.sweeps},
                     {"scatterer_count", result.scatterers.size()},
                     {"scatterers", scatterers_json(result.scatterers)},
                     {"config", json::parse(serialize_config(config))}};
    io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

    out << result.method << ": " << result.sweeps << " iterations, "
        << (result.converged ? "converged" : "NOT converged (see manifest)") << ", " << result.scatterers.size()
        << " scatterers extracted\n";
    return exit_ok;
  });
}

int cmd_evaluate(const Options& options, const fs::path& coefficients_file, const std::string& method,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const RunConfig config = effective_config(options);
    const ImagingGeometry geometry = config.geometry.to_geometry();
    const SceneSpec scene = resolve_scene(options.scene);
    const ComplexImage coefficients = io::read_image(coefficients_file);
    if (!(coefficients.grid() == geometry.grid)) {
      err << "error: coefficient grid does not match the configured geometry\n";
      return exit_failure;
    }
    const double gate = config.metrics.gate_radius_m.value_or(default_gate_radius(geometry));
    const auto estimates = extract_scatterers(coefficients, config.metrics.extract_min_level_db);
    const MatchReport report = match_scatterers(estimates, scene, gate);
    const ComparisonTable table = comparison_report({{method, report}}, geometry.lambda_rf());

    const fs::path dir = output_dir(config);
    std::string summary =
        "method,mean_amplitude_error_db,max_position_error_m,mean_position_error_m,detections,misses,false_alarms,"
        "gate_radius_m,lambda_rf_m,half_lambda_m,stated_bound_m\n";
    auto num = [](const std::optional<double>& v) { return v ? io::csv_number(*v) : std::string(); };
    summary += method + "," + num(report.mean_amplitude_error_db) + "," + num(report.max_position_error_m) + "," +
               num(report.mean_position_error_m) + "," + std::to_string(report.detections()) + "," +
               std::to_string(report.misses.size()) + "," + std::to_string(report.false_alarms.size()) + "," +
               io::csv_number(gate) + "," + io::csv_number(geometry.lambda_rf()) + "," +
               io::csv_number(geometry.lambda_rf() / 2.0) + "," + io::csv_number(table.stated_position_bound_m) + "\n";
    io::write_file_atomic(dir / "metrics.csv", summary);
    io::write_file_atomic(dir / "pairs.csv", pairs_csv(report, estimates, scene));
    io::write_file_atomic(dir / "table.csv", format_table_csv(table));
    io::write_file_atomic(dir / "table.txt", format_table_text(table));
    out << format_table_text(table);
    return exit_ok;
  });
}

const MethodOutcome* BenchOutcome::find(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

BenchOutcome run_benchmark(const RunConfig& config, const SceneSpec& scene, std::ostream& log) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };

  BenchOutcome o;
  o.config = config;
  o.scene = scene;
  o.geometry = config.geometry.to_geometry();
  auto t0 = clock::now();
  const PsfBank bank = build_psf_bank(o.geometry, config.psf.quantization(), config.psf.truncation());
  o.noise = config.noise.to_spec(scene, config.seed);
  o.ideal = render_ideal(scene, o.geometry);
  o.degraded = degrade(scene, o.geometry, bank, o.noise);
  o.gate_radius_m = config.metrics.gate_radius_m.value_or(default_gate_radius(o.geometry));
  log << "simulated " << scene.scatterers.size() << " scatterers on " << o.geometry.grid.n_azimuth << "x"
      << o.geometry.grid.n_range << " (" << bank.size() << " PSFs) in " << seconds(t0) << " s\n";

  const VariantDictionary dict(bank);

  // Fewest misses first, then lowest mean amplitude error.
  auto better = [](const MatchReport& a, const MatchReport& b) {
    const double ea = a.mean_amplitude_error_db.value_or(std::numeric_limits<double>::infinity());
    const double eb = b.mean_amplitude_error_db.value_or(std::numeric_limits<double>::infinity());
    return std::tie(a.misses, ea) < std::tie(b.misses, eb);
  };
  auto lambda_sweep = [&](const std::string& name, const std::optional<double>& fixed_lambda, double max_corr,
                          const std::function<RestorationResult(double)>& run) {
    MethodOutcome best;
    best.method = name;
    bool have = false;
    std::vector<double> fractions = config.bench.lambda_fractions;
    if (fixed_lambda) fractions = {max_corr > 0.0 ? *fixed_lambda / max_corr : 0.0};
    for (double f : fractions) {
      const double lambda = fixed_lambda ? *fixed_lambda : f * max_corr;
      const auto t = clock::now();
      MethodOutcome trial;
      trial.method = name;
      trial.lambda = lambda;
      trial.fraction = f;
      trial.result = run(lambda);
      trial.report = evaluate_result(trial.result, scene, config, o.gate_radius_m, trial.result.scatterers);
      o.trials.push_back({name, f, lambda, trial.report.mean_amplitude_error_db, trial.report.detections(),
                          trial.report.misses.size(), trial.result.sweeps, trial.result.converged});
      log << "  " << name << " lambda=" << lambda << " (" << f << " x max corr): "
          << trial.report.detections() << " detected, mean amp err "
          << (trial.report.mean_amplitude_error_db ? io::csv_number(*trial.report.mean_amplitude_error_db) : "n/a")
          << " dB, " << trial.result.sweeps << " iterations, " << seconds(t) << " s\n";
      if (!have || better(trial.report, best.report)) {
        best = std::move(trial);
        have = true;
      }
    }
    return best;
  };

  auto guarded_method = [&](const std::string& name, const std::function<MethodOutcome()>& body) {
    try {
      o.methods.push_back(body());
    } catch (const std::exception& e) {
      MethodOutcome failed;
      failed.method = name;
      failed.error = e.what();
      log << "  " << name << " failed: " << e.what() << "\n";
      o.methods.push_back(std::move(failed));
    }
  };

  guarded_method("proposed", [&] {
    const double max_corr = dict.adjoint(o.degraded).max_abs();
    return lambda_sweep("proposed", config.solver.lambda_reg, max_corr, [&](double lambda) {
      return restore(o.degraded, dict, config.solver.to_config(lambda));
    });
  });
  guarded_method("ISTA", [&] {
    const PsfPatch& center = center_psf(bank);
    const InvariantOperator op(center, o.geometry.grid);
    const double max_corr = op.adjoint(o.degraded).max_abs();
    return lambda_sweep("ISTA", config.ista.lambda_reg, max_corr, [&](double lambda) {
      return ista_restore(o.degraded, center, config.ista.to_config(lambda));
    });
  });
  guarded_method("CLEAN", [&] {
    const auto t = clock::now();
    MethodOutcome m;
    m.method = "CLEAN";
    m.result = clean_restore(o.degraded, bank, config.clean.to_config(scene.scatterers.size()));
    m.report = evaluate_result(m.result, scene, config, o.gate_radius_m, m.result.scatterers);
    log << "  CLEAN: " << m.result.sweeps << " components, " << m.report.detections() << " detected, mean amp err "
        << (m.report.mean_amplitude_error_db ? io::csv_number(*m.report.mean_amplitude_error_db) : "n/a") << " dB, "
        << seconds(t) << " s\n";
    return m;
  });

  std::vector<MethodReport> reports;
  for (const auto& m : o.methods) {
    if (!m.error) reports.push_back({m.method, m.report});
  }
  if (reports.empty()) reports.push_back({"none", MatchReport{}});
  o.table = comparison_report(reports, o.geometry.lambda_rf());
  return o;
}

void write_bench_artifacts(const BenchOutcome& o, const fs::path& dir) {
  fs::create_directories(dir);
  const double range_db = o.config.heatmap_range_db;
  io::write_file_atomic(dir / "config.json", serialize_config(o.config));
  io::write_file_atomic(dir / "scene.txt", io::format_scene(o.scene));
  io::write_image(dir / "ideal.nfsar", o.ideal);
  io::write_image(dir / "degraded.nfsar", o.degraded);
  io::write_file_atomic(dir / "degraded.pgm", io::encode_pgm_db(o.degraded, range_db));

  json methods = json::array();
  for (const auto& m : o.methods) {
    const std::string stem = lowercase(m.method);
    json entry = {{"method", m.method}};
    if (m.error) {
      entry["error"] = *m.error;
      methods.push_back(entry);
      continue;
    }
    io::write_image(dir / (stem + "_coefficients.nfsar"), m.result.coefficients);
    io::write_file_atomic(dir / (stem + ".pgm"), io::encode_pgm_db(m.result.coefficients, range_db));
    io::write_file_atomic(dir / (stem + "_trace.csv"), trace_csv(m.result));
    io::write_file_atomic(dir / (stem + "_pairs.csv"), pairs_csv(m.report, m.result.scatterers, o.scene));
    entry["lambda_reg"] = m.lambda;
    entry["lambda_fraction"] = m.fraction;
    entry["iterations"] = m.result.sweeps;
    entry["converged"] = m.result.converged;
    entry["extracted"] = m.result.scatterers.size();
    entry["detections"] = m.report.detections();
    entry["misses"] = m.report.misses.size();
    entry["false_alarms"] = m.report.false_alarms.size();
    entry["mean_amplitude_error_db"] =
        m.report.mean_amplitude_error_db ? json(*m.report.mean_amplitude_error_db) : json(nullptr);
    entry["max_position_error_m"] = m.report.max_position_error_m ? json(*m.report.max_position_error_m) : json(nullptr);
    methods.push_back(entry);
  }

  std::string sweep = "method,lambda_fraction,lambda_reg,mean_amplitude_error_db,detections,misses,iterations,converged\n";
  for (const auto& t : o.trials) {
    sweep += t.method + "," + io::csv_number(t.fraction) + "," + io::csv_number(t.lambda) + "," +
             (t.mean_amplitude_error_db ? io::csv_number(*t.mean_amplitude_error_db) : std::string()) + "," +
             std::to_string(t.detections) + "," + std::to_string(t.misses) + "," + std::to_string(t.iterations) + "," +
             (t.converged ? "true" : "false") + "\n";
  }
  io::write_file_atomic(dir / "lambda_sweep.csv", sweep);
  io::write_file_atomic(dir / "table.csv", format_table_csv(o.table));
  io::write_file_atomic(dir / "table.txt", format_table_text(o.table));

  json manifest = {{"scene", o.scene.label},
                   {"scatterers", o.scene.scatterers.size()},
                   {"seed", o.config.seed},
                   {"noise", o.noise ? json{{"clutter_power_db", o.noise->clutter_power_db},
                                           {"rng_seed", o.noise->rng_seed}}
                                     : json(nullptr)},
                   {"gate_radius_m", o.gate_radius_m},
                   {"lambda_rf_m", o.geometry.lambda_rf()},
                   {"methods", methods},
                   {"config", json::parse(serialize_config(o.config))}};
  io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

int cmd_bench(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = effective_config(options);
    const SceneSpec scene = resolve_scene(options.scene);
    const auto t0 = std::chrono::steady_clock::now();
    const BenchOutcome outcome = run_benchmark(config, scene, out);
    const fs::path dir = output_dir(config);
    write_bench_artifacts(outcome, dir);
    out << format_table_text(outcome.table);
    out << "total " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s; artifacts in "
        << dir.string() << "\n";
    return exit_ok;
  });
}

}  // namespace nfsar::cli
