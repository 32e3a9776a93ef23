// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "nfsar/baselines.hpp"
#include "nfsar/commands.hpp"
#include "nfsar/dictionary.hpp"
#include "nfsar/io.hpp"
#include "nfsar/metrics.hpp"
#include "nfsar/simulate.hpp"
#include "nfsar/solver.hpp"
#include "oracles.hpp"

using namespace nfsar;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string num(double v) { return io::csv_number(v); }

ComplexImage noise_image(const GridSpec& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexImage img(grid);
  for (auto& v : img.data()) v = {n(rng), n(rng)};
  return img;
}

double amp_err(const cli::MethodOutcome* m) {
  return m && m->report.mean_amplitude_error_db ? *m->report.mean_amplitude_error_db
                                                : std::numeric_limits<double>::infinity();
}

// Shared by the first two criteria.
struct SceneOneRun {
  cli::BenchOutcome outcome;
  double seconds = 0.0;
};

SceneOneRun run_paper1(bool clutter, const std::vector<double>& fractions) {
  RunConfig config;
  config.noise.enabled = clutter;
  config.bench.lambda_fractions = fractions;
  std::ostringstream log;
  const auto t0 = std::chrono::steady_clock::now();
  SceneOneRun run{cli::run_benchmark(config, paper_scene_1(), log), 0.0};
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << log.str();
  return run;
}

const SceneOneRun& cluttered_run() {
  static const SceneOneRun run = run_paper1(true, RunConfig{}.bench.lambda_fractions);
  return run;
}

Verdict table_analog() {
  const SceneOneRun& run = cluttered_run();
  const auto* p = run.outcome.find("proposed");
  const auto* i = run.outcome.find("ISTA");
  const auto* c = run.outcome.find("CLEAN");
  const double ep = amp_err(p), ei = amp_err(i), ec = amp_err(c);
  const std::size_t det = p ? p->report.detections() : 0;
  bool weak_found = false;
  if (p) {
    for (const auto& pair : p->report.pairs) weak_found |= run.outcome.scene.scatterers[pair.truth].amplitude_dbsm == -20.0;
  }
  const bool ok = ep <= 1.5 && det == 13 && weak_found && ep < ei && ei < ec && run.seconds <= 300.0;
  return {ok, "amp err proposed " + num(ep) + " / ISTA " + num(ei) + " / CLEAN " + num(ec) + " dB, detected " +
                  std::to_string(det) + "/13, weak target " + (weak_found ? "found" : "missed") + ", runtime " +
                  num(run.seconds) + " s"};
}

Verdict position_accuracy() {
  const SceneOneRun clean_run = run_paper1(false, {0.01});
  const auto* quiet = clean_run.outcome.find("proposed");
  const auto* noisy = cluttered_run().outcome.find("proposed");
  const double half_lambda = clean_run.outcome.geometry.lambda_rf() / 2.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double pq = quiet && quiet->report.max_position_error_m ? *quiet->report.max_position_error_m : inf;
  const double pn = noisy && noisy->report.max_position_error_m ? *noisy->report.max_position_error_m : inf;
  const std::size_t dq = quiet ? quiet->report.detections() : 0;
  const std::size_t dn = noisy ? noisy->report.detections() : 0;
  const bool ok = pq <= half_lambda && pn <= 0.0375 && dq == 13 && dn == 13;
  return {ok, "max position error noiseless " + num(pq) + " m (bound " + num(half_lambda) + ", " + std::to_string(dq) +
                  " matched), with clutter " + num(pn) + " m (bound 0.0375, " + std::to_string(dn) + " matched)"};
}

Verdict azimuth_broadening() {
  // Degraded image of each paper2 target on a fine local grid around it.
  const double spacing = 0.005;
  const std::size_t n = 129;
  std::map<double, std::pair<double, double>> widths;  // range -> (azimuth, range) widths
  for (const Scatterer& s : paper_scene_2().scatterers) {
    ImagingGeometry g = ImagingGeometry::centered(s.range_m, n, n, spacing, spacing);
    g.grid.origin_azimuth_m += s.azimuth_m;
    const PsfBank bank = build_psf_bank(g);
    const ComplexImage y = degrade({"", {s}}, g, bank);
    GridSpec::Cell cell;
    g.grid.nearest_cell(s.azimuth_m, s.range_m, cell);
    std::vector<double> az(n), rg(n);
    for (std::size_t k = 0; k < n; ++k) {
      az[k] = std::abs(y(k, cell.range));
      rg[k] = std::abs(y(cell.azimuth, k));
    }
    widths[s.range_m] = {mainlobe_width_3db(az, cell.azimuth, spacing), mainlobe_width_3db(rg, cell.range, spacing)};
  }
  const auto [a14, r14] = widths.at(14.0);
  const auto [a28, r28] = widths.at(28.0);
  const double ratio = a28 / a14;
  const double range_dev = std::abs(r28 - r14) / r14;
  const bool ok = ratio >= 1.8 && ratio <= 2.2 && range_dev <= 0.05;
  return {ok, "azimuth -3 dB width 28 m / 14 m = " + num(a28) + " / " + num(a14) + " = " + num(ratio) +
                  ", range widths " + num(r14) + " vs " + num(r28) + " m (" + num(100.0 * range_dev) + " %)"};
}

Verdict adjoint_identity() {
  const ImagingGeometry g = default_geometry(64);
  const PsfBank bank = build_psf_bank(g);
  const VariantDictionary dict(bank);
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const ComplexImage x = noise_image(g.grid, rng), y = noise_image(g.grid, rng);
    const cplx lhs = inner(dict.apply(x), y), rhs = inner(x, dict.adjoint(y));
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  return {worst < 1e-10, "100 random pairs on 64x64, max relative error " + num(worst)};
}

Verdict psf_oracle() {
  const ImagingGeometry g = default_geometry(256);
  double worst = 0.0;
  std::size_t samples = 0;
  for (double deg : {0.0, 15.0, 30.0, 45.0}) {
    for (double r : {14.0, 21.0, 25.0, 28.0}) {
      const PsfPatch p = synthesize_psf_at(g, r, deg * pi / 180.0);
      for (std::size_t row = 0; row < p.rows(); ++row)
        for (std::size_t col = 0; col < p.cols(); ++col) {
          const double da = (double(row) - double(p.half_azimuth)) * g.grid.spacing_azimuth_m;
          const double dr = (double(col) - double(p.half_range)) * g.grid.spacing_range_m;
          const double ref = oracle::rect_spectrum_ift(dr, da, deg * pi / 180.0, p.resolution_range_m,
                                                       p.resolution_azimuth_m);
          worst = std::max(worst, std::abs(ref - p.at(row, col)));
          ++samples;
        }
    }
  }
  return {worst < 1e-6, "16 (R, theta) cases, " + std::to_string(samples) + " samples, max abs deviation " + num(worst)};
}

Verdict solver_optimality() {
  double worst_off = 0.0, worst_on = 0.0, worst_rise = 0.0;
  int failures = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ImagingGeometry g = ImagingGeometry::centered(3.0, 16, 16, 0.05, 0.05);
    const PsfBank bank = build_psf_bank(g, {0.2, 0.05}, {-40.0, 9});
    const VariantDictionary dict(bank);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> cell(0, g.grid.cells() - 1);
    std::normal_distribution<double> normal;
    ComplexImage x(g.grid);
    for (int k = 0; k < 3; ++k) x[cell(rng)] = {1.0 + std::abs(normal(rng)), normal(rng)};
    ComplexImage y = dict.apply(x);
    for (auto& v : y.data()) v += 0.01 * cplx{normal(rng), normal(rng)};

    SolverConfig c;
    c.lambda_reg = 0.05 * dict.adjoint(y).max_abs();
    c.objective_tolerance = 1e-15;
    c.max_sweeps = 5000;
    const RestorationResult r = restore(y, dict, c);
    if (!r.converged) ++failures;
    const ComplexImage corr = dict.adjoint(y - dict.apply(r.coefficients));
    for (std::size_t j = 0; j < corr.size(); ++j) {
      const cplx xj = r.coefficients[j];
      if (xj == cplx{}) {
        worst_off = std::max(worst_off, std::abs(corr[j]) - c.lambda_reg);
      } else {
        worst_on = std::max(worst_on, std::abs(corr[j] - c.lambda_reg * xj / std::abs(xj)));
      }
    }
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      worst_rise = std::max(worst_rise, (r.objective_trace[k] - r.objective_trace[k - 1]) / r.objective_trace[k - 1]);
  }
  const bool ok = failures == 0 && worst_off <= 1e-6 && worst_on < 1e-6 && worst_rise <= 1e-12;
  return {ok, "20 instances: off-support excess " + num(worst_off) + ", on-support residual " + num(worst_on) +
                  ", max relative objective rise " + num(worst_rise) + ", unconverged " + std::to_string(failures)};
}

Verdict cross_module() {
  const ImagingGeometry g = default_geometry(64);
  const PsfBank bank = build_psf_bank(g);
  const VariantDictionary dict(bank);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> ia(0, 63), ir(0, 63);
  std::uniform_real_distribution<double> db(-30.0, 0.0), ph(0.0, 2.0 * pi);
  SceneSpec a, b;
  std::vector<bool> used(g.grid.cells(), false);
  for (int k = 0; k < 20; ++k) {
    std::size_t ca, cr;
    do {
      ca = ia(rng);
      cr = ir(rng);
    } while (used[g.grid.index(ca, cr)]);
    used[g.grid.index(ca, cr)] = true;
    (k % 2 ? a : b).scatterers.push_back({g.rel_azimuth(ca), g.rel_range(cr), db(rng), ph(rng)});
  }
  SceneSpec both = a;
  both.scatterers.insert(both.scatterers.end(), b.scatterers.begin(), b.scatterers.end());

  const ComplexImage via_dict = dict.apply(render_ideal(both, g));
  const ComplexImage via_sim = degrade(both, g, bank);
  const ComplexImage sum = degrade(a, g, bank) + degrade(b, g, bank);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < via_sim.size(); ++k) {
    d1 = std::max(d1, std::abs(via_dict[k] - via_sim[k]));
    d2 = std::max(d2, std::abs(sum[k] - via_sim[k]));
  }
  return {d1 <= 1e-12 && d2 <= 1e-12, "apply vs degrade max diff " + num(d1) + ", linearity max diff " + num(d2)};
}

Verdict clean_exactness_and_bias() {
  // Isolated scatterer, unit loop gain.
  const ImagingGeometry g = default_geometry(128);
  const PsfBank bank = build_psf_bank(g);
  const Scatterer lone{g.rel_azimuth(40), g.rel_range(90), -10.0, 1.1};
  CleanConfig cc;
  cc.loop_gain = 1.0;
  const RestorationResult one = clean_restore(degrade({"", {lone}}, g, bank), bank, cc);
  const auto found = extract_scatterers(one.coefficients, -30.0);
  const bool exact_cell = found.size() == 1 && found[0].cell == g.grid.index(40, 90);
  const double err = exact_cell ? std::abs(found[0].amplitude - lone.complex_amplitude()) : 1.0;

  // Two scatterers 1.5 resolution cells apart in azimuth, 10 dB apart.
  const double rho = 0.0749481145;
  ImagingGeometry fine = ImagingGeometry::centered(25.0, 96, 96, rho / 2.0, rho / 2.0);
  const PsfBank fine_bank = build_psf_bank(fine);
  const std::size_t c0 = 48;
  const SceneSpec pair{"", {{fine.rel_azimuth(c0), fine.rel_range(c0), 0.0, 0.0},
                            {fine.rel_azimuth(c0 + 3), fine.rel_range(c0), -10.0, 0.9}}};
  const ComplexImage y = degrade(pair, fine, fine_bank);
  const double gate = rho;
  const VariantDictionary dict(fine_bank);
  SolverConfig sc;
  sc.lambda_reg = 0.01 * dict.adjoint(y).max_abs();
  const auto prop = match_scatterers(extract_scatterers(restore(y, dict, sc).coefficients, -30.0), pair, gate);
  const auto clean = match_scatterers(extract_scatterers(clean_restore(y, fine_bank, {}).coefficients, -30.0), pair, gate);
  const double inf = std::numeric_limits<double>::infinity();
  const double ep = prop.detections() == 2 ? *prop.mean_amplitude_error_db : inf;
  const double ec = clean.detections() == 2 ? *clean.mean_amplitude_error_db : inf;
  const bool ok = exact_cell && err < 1e-9 && ep < ec;
  return {ok, "isolated: cell " + std::string(exact_cell ? "exact" : "wrong") + ", amplitude error " + num(err) +
                  "; pair: proposed " + num(ep) + " dB vs CLEAN " + num(ec) + " dB (" +
                  std::to_string(prop.detections()) + " / " + std::to_string(clean.detections()) + " matched)"};
}

Verdict determinism_and_format() {
  cli::Options o;
  o.grid = 64;
  o.seed = 5;
  o.out = fs::temp_directory_path() / "nfsar_acceptance_bench";
  fs::remove_all(*o.out);
  std::ostringstream log;
  bool ok = cli::cmd_bench(o, log, log) == cli::exit_ok;
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(*o.out)) first[e.path().filename().string()] = io::read_file(e.path());
  ok = ok && cli::cmd_bench(o, log, log) == cli::exit_ok;
  std::size_t differing = 0;
  for (const auto& [name, bytes] : first) differing += !fs::exists(*o.out / name) || io::read_file(*o.out / name) != bytes;

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::size_t round_trip_failures = 0;
  const fs::path file = *o.out / "roundtrip.nfsar";
  for (int k = 0; k < 50; ++k) {
    GridSpec grid{dim(rng), dim(rng), 0.001 * double(dim(rng)), 0.002 * double(dim(rng)), -3.0, 11.0};
    ComplexImage img(grid);
    for (auto& v : img.data()) {
      double re, im;
      do {
        const std::uint64_t b = bits(rng);
        std::memcpy(&re, &b, 8);
      } while (!std::isfinite(re));
      do {
        const std::uint64_t b = bits(rng);
        std::memcpy(&im, &b, 8);
      } while (!std::isfinite(im));
      v = {re, im};
    }
    io::write_image(file, img);
    const ComplexImage back = io::read_image(file);
    round_trip_failures += !(back.grid() == grid) ||
                           std::memcmp(back.data().data(), img.data().data(), img.size() * sizeof(cplx)) != 0;
  }
  ok = ok && differing == 0 && first.size() >= 15 && round_trip_failures == 0;
  return {ok, std::to_string(first.size()) + " bench artifacts, " + std::to_string(differing) +
                  " differ between runs; NFSAR1 round-trip failures " + std::to_string(round_trip_failures) + "/50"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"table analog on paper1 with clutter", table_analog},
      {"position accuracy", position_accuracy},
      {"azimuth broadening 28 m vs 14 m", azimuth_broadening},
      {"adjoint identity", adjoint_identity},
      {"PSF closed form vs spectral quadrature", psf_oracle},
      {"solver optimality", solver_optimality},
      {"cross-module consistency", cross_module},
      {"CLEAN exactness and bias", clean_exactness_and_bias},
      {"determinism and NFSAR1 format", determinism_and_format},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << index << " (" << name << "): " << v.detail << std::endl;
  }
  std::cout << (9 - failed) << "/9 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
