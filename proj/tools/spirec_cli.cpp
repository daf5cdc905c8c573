#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spirec/config.hpp"
#include "spirec/experiment.hpp"
#include "spirec/image_io.hpp"
#include "spirec/metrics.hpp"
#include "spirec/phantom.hpp"
#include "spirec/sensor_io.hpp"

namespace {

int cmd_run(const std::string& config_path, int threads) {
  spirec::ExperimentConfig cfg = spirec::load_config(config_path);
  if (const char* env = std::getenv("SPIREC_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
  const spirec::RunRecord record = spirec::run_experiment(cfg, threads);
  std::cout << "config_hash=" << std::hex << record.config_hash << std::dec << " cells="
            << record.cells.size() << " wall_s=" << record.wall_seconds << "\n"
            << "results: " << record.results_csv << "\n"
            << "summary: " << record.summary_csv << "\n";
  return 0;
}

int cmd_phantom(const std::string& kind, long size, long seed, const std::string& out_path) {
  const spirec::Matrix grid =
      spirec::generate_phantom(spirec::phantom_kind_from_name(kind), size,
                               static_cast<std::uint64_t>(seed));
  spirec::export_image(grid, out_path);
  std::cout << "wrote " << out_path << " (" << size << "x" << size << ")\n";
  return 0;
}

int cmd_metrics(const std::string& reference_path, const std::string& test_path) {
  const spirec::Matrix reference = spirec::import_image(reference_path);
  const spirec::Matrix test = spirec::import_image(test_path);
  std::cout << "psnr_db=" << spirec::psnr(reference, test)
            << " ssim=" << spirec::ssim(reference, test) << "\n";
  return 0;
}

int cmd_sensor(const std::string& kind, long sqrt_m, long sqrt_n, long seed,
               const std::string& out_path, bool with_matrices) {
  const spirec::SeparableSensor sensor = spirec::build_separable_sensor(
      sqrt_m, sqrt_n, spirec::sensor_kind_from_name(kind), static_cast<std::uint64_t>(seed));
  spirec::save_sensor(sensor, out_path, with_matrices);
  std::cout << "wrote " << out_path << " (" << sqrt_m << "x" << sqrt_n << " per side, cr="
            << sensor.compression_ratio() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-pixel imaging reconstruction toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 1;
  auto* run = app.add_subcommand("run", "Run an experiment sweep from a config file");
  run->add_option("config", config_path, "Path to key = value config file")->required();
  run->add_option("--threads", threads, "Worker threads (default 1)");

  std::string phantom_kind = "smooth-bumps", phantom_out;
  long phantom_size = 64, phantom_seed = 7;
  auto* phantom = app.add_subcommand("phantom", "Generate a phantom image as PGM");
  phantom->add_option("--kind", phantom_kind, "smooth-bumps | piecewise-constant | checker");
  phantom->add_option("--size", phantom_size, "Side length (>= 16)");
  phantom->add_option("--seed", phantom_seed, "Generator seed");
  phantom->add_option("output", phantom_out, "Output PGM path")->required();

  std::string metrics_reference, metrics_test;
  auto* metrics = app.add_subcommand("metrics", "Score a test image against a reference");
  metrics->add_option("reference", metrics_reference, "Reference PGM")->required();
  metrics->add_option("test", metrics_test, "Test PGM")->required();

  std::string sensor_kind = "orthonormal-random", sensor_out;
  long sensor_sqrt_m = 16, sensor_sqrt_n = 64, sensor_seed = 42;
  bool sensor_matrices = false;
  auto* sensor = app.add_subcommand("sensor", "Build and serialize a separable sensor");
  sensor->add_option("--kind", sensor_kind, "orthonormal-random | scrambled-hadamard");
  sensor->add_option("--sqrt-m", sensor_sqrt_m, "Per-side measurement count");
  sensor->add_option("--sqrt-n", sensor_sqrt_n, "Per-side signal size");
  sensor->add_option("--seed", sensor_seed, "Generator seed");
  sensor->add_flag("--with-matrices", sensor_matrices, "Embed explicit U, V payloads");
  sensor->add_option("output", sensor_out, "Output sensor path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, threads);
    if (phantom->parsed()) return cmd_phantom(phantom_kind, phantom_size, phantom_seed, phantom_out);
    if (metrics->parsed()) return cmd_metrics(metrics_reference, metrics_test);
    if (sensor->parsed())
      return cmd_sensor(sensor_kind, sensor_sqrt_m, sensor_sqrt_n, sensor_seed, sensor_out,
                        sensor_matrices);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
