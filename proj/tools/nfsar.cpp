#include <CLI11.hpp>

#include <iostream>

#include "nfsar/commands.hpp"

int main(int argc, char** argv) {
  using namespace nfsar::cli;

  CLI::App app{"Near-field SAR restoration with spatially variant PSFs"};
  app.require_subcommand(1);

  Options opts;
  std::string config, out;
  std::uint64_t seed = 0;
  std::size_t grid = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration");
    sub->add_option("--scene", opts.scene, "scene file, paper1 or paper2")->capture_default_str();
    sub->add_option("--seed", seed, "clutter RNG seed");
    sub->add_option("--grid", grid, "grid cells per side (extent preserved)")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
  };

  auto* simulate = app.add_subcommand("simulate", "render a scene and its degraded image");
  add_common(simulate);

  double azimuth = 0.0, range = 25.0;
  auto* psf = app.add_subcommand("psf", "synthesize the PSF at one position");
  add_common(psf);
  psf->add_option("--azimuth", azimuth, "azimuth position (m)")->required();
  psf->add_option("--range", range, "range position (m)")->required();

  std::string method = "proposed";
  std::string image_file;
  auto* restore = app.add_subcommand("restore", "restore a degraded image");
  add_common(restore);
  restore->add_option("--method", method, "proposed|ista|clean")->capture_default_str();
  restore->add_option("image", image_file, "degraded image (.nfsar)")->required();

  std::string coeff_file;
  std::string label = "proposed";
  auto* evaluate = app.add_subcommand("evaluate", "score restored coefficients against a scene");
  add_common(evaluate);
  evaluate->add_option("--method", label, "label for the table row")->capture_default_str();
  evaluate->add_option("coefficients", coeff_file, "coefficient image (.nfsar)")->required();

  auto* bench = app.add_subcommand("bench", "simulate, restore with every method and compare");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (!config.empty()) opts.config = config;
  if (!out.empty()) opts.out = out;
  for (auto* sub : {simulate, psf, restore, evaluate, bench}) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--grid")) opts.grid = grid;
  }

  if (simulate->parsed()) return cmd_simulate(opts, std::cout, std::cerr);
  if (psf->parsed()) return cmd_psf(opts, azimuth, range, std::cout, std::cerr);
  if (restore->parsed()) return cmd_restore(opts, image_file, method, std::cout, std::cerr);
  if (evaluate->parsed()) return cmd_evaluate(opts, coeff_file, label, std::cout, std::cerr);
  if (bench->parsed()) return cmd_bench(opts, std::cout, std::cerr);
  return exit_usage;
}
