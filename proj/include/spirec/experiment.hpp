#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spirec/config.hpp"

namespace spirec {

struct RunCell {
  std::string image_id;
  double cr = 0.0;       // configured compression ratio
  Index sqrt_m = 0;      // realized per-side measurement count
  Method method = Method::Pinv;
  std::uint64_t seed = 0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  std::string recon_path;
  std::string trace_path;  // empty for methods without a trace
};

struct SummaryCell {
  double cr = 0.0;
  Method method = Method::Pinv;
  double mean_psnr_db = 0.0;  // unquantized; the CSV holds the 6-decimal form
  double mean_ssim = 0.0;
  long runs = 0;
};

struct RunRecord {
  std::uint64_t config_hash = 0;
  std::vector<RunCell> cells;  // deterministic (image, cr, method, seed) order
  std::vector<SummaryCell> summary;
  std::string results_csv;
  std::string summary_csv;
  double wall_seconds = 0.0;  // never written into CSV artifacts
};

/// Runs the full sweep: for every (image, cr, method, seed) cell, build the
/// sensor at that cr, measure, reconstruct, score, and write artifacts under
/// cfg.output_dir (results.csv, summary.csv, truth/, recon/, trace/,
/// config.txt). Cells may execute on `threads` workers; results land in
/// pre-assigned slots, so all outputs are byte-identical regardless of
/// thread count.
RunRecord run_experiment(const ExperimentConfig& cfg, int threads = 1);

}  // namespace spirec
