#include "spirec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spirec/image_io.hpp"
#include "spirec/metrics.hpp"
#include "spirec/phantom.hpp"
#include "spirec/pnp.hpp"
#include "spirec/sampler.hpp"

namespace spirec {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string cell_stem(const RunCell& cell) {
  return cell.image_id + "_cr" + fixed6(cell.cr) + "_" + method_name(cell.method) + "_seed" +
         std::to_string(cell.seed);
}

// The smoothing prior's plug-in denoiser: Gaussian smoothing at the (capped)
// noise level, faded toward mid-intensity with a Wiener-style gain
// tau^2 / (tau^2 + sigma^2). With tau = 3 the fade only bites once sigma is
// several times the [0,1] image range; at ordinary denoising levels the
// smoothed estimate passes through almost unshrunk. Without the fade the
// early reverse steps, whose rescaled latents carry noise levels in the
// hundreds, feed back estimates far outside the image range and the
// null-space components of the trajectory blow up; a much stronger fade
// instead mutes the mid-trajectory contrast that seeds null-space recovery.
constexpr double kMidIntensity = 0.5;
constexpr double kFadeVariance = 9.0;

DenoiserFn smoothing_prior_denoiser(Index side, double sigma_cap) {
  return [side, sigma_cap](const Vector& noisy, double sigma) {
    const Matrix smoothed = smoothing_denoiser(unvec(noisy, side, side), std::min(sigma, sigma_cap));
    const double gain = kFadeVariance / (kFadeVariance + sigma * sigma);
    return vec(((smoothed.array() - kMidIntensity) * gain + kMidIntensity).matrix());
  };
}

struct CellResult {
  Matrix recon;
  std::vector<TraceRow> trace;
};

CellResult run_cell(const ExperimentConfig& cfg, const Matrix& truth,
                    const SeparableSensor& sensor, Method method, std::uint64_t seed) {
  const Index side = truth.rows();
  const Index n = side * side;
  const Matrix Y = sensor.apply(truth);

  CellResult out;
  switch (method) {
    case Method::Pinv: {
      out.recon = sensor.pinv_apply(Y);
      return out;
    }
    case Method::DdimGap:
    case Method::DdimHqs:
    case Method::DdimFused: {
      DiffusionSchedule schedule =
          build_schedule(cfg.T, 1e-3, 0.2, cfg.zeta, /*stochastic=*/cfg.zeta > 0.0);
      if (cfg.delta_schedule == DeltaSchedule::Constant)
        for (int t = 1; t <= schedule.T; ++t) schedule.delta[t] = cfg.delta_constant;

      ConsistencyConfig ccfg;
      ccfg.lambda = cfg.lambda;
      ccfg.delta = cfg.delta_constant;
      ccfg.mode = (method == Method::DdimGap)   ? ConsistencyMode::Gap
                  : (method == Method::DdimHqs) ? ConsistencyMode::Hqs
                                                : ConsistencyMode::Fused;

      std::unique_ptr<ScorePrior> prior;
      if (cfg.prior == PriorKind::Gaussian)
        prior = std::make_unique<GaussianPrior>(Vector::Constant(n, cfg.gaussian_mean),
                                                Vector::Constant(n, cfg.gaussian_variance));
      else
        prior = std::make_unique<DenoiserAdapter>(smoothing_prior_denoiser(side, cfg.smoothing_sigma_cap));

      SamplerState state =
          reconstruct(Y, sensor, *prior, schedule, ccfg, seed, /*keep_trace=*/true);
      out.recon = unvec(state.x, side, side);
      out.trace = std::move(state.trace);
      return out;
    }
    case Method::PnpHqs:
    case Method::PnpGap: {
      DenoiserAdapter denoiser(smoothing_prior_denoiser(side, cfg.smoothing_sigma_cap));
      PnpConfig pcfg;
      pcfg.iterations = cfg.pnp_iterations;
      pcfg.gamma = cfg.pnp_gamma;
      pcfg.sigma_schedule =
          geometric_sigma_schedule(cfg.pnp_iterations, cfg.pnp_sigma_max, cfg.pnp_sigma_min);
      pcfg.variant = (method == Method::PnpHqs) ? PnpVariant::Hqs : PnpVariant::Gap;
      out.recon = pnp_solve(Y, sensor, denoiser, pcfg);
      return out;
    }
  }
  throw std::logic_error("run_cell: unknown method");
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  namespace fs = std::filesystem;

  std::vector<std::pair<std::string, Matrix>> images;
  if (!cfg.image_file.empty()) {
    Matrix img = import_image(cfg.image_file);
    if (img.rows() != img.cols())
      throw std::invalid_argument("separable sensing requires a square image");
    if (img.rows() < 16) throw std::invalid_argument("image side must be >= 16");
    images.emplace_back(fs::path(cfg.image_file).stem().string(), std::move(img));
  } else {
    for (int i = 0; i < cfg.phantom_count; ++i)
      images.emplace_back("phantom-" + std::to_string(i),
                          generate_phantom(cfg.phantom_kind, cfg.phantom_size,
                                           cfg.phantom_seed + static_cast<std::uint64_t>(i)));
  }
  const Index side = images.front().second.rows();

  std::vector<SeparableSensor> sensors;
  sensors.reserve(cfg.cr_list.size());
  for (std::size_t j = 0; j < cfg.cr_list.size(); ++j) {
    const double want = static_cast<double>(side) * std::sqrt(cfg.cr_list[j]);
    const Index sqrt_m = std::clamp<Index>(static_cast<Index>(std::lround(want)), 1, side);
    sensors.push_back(build_separable_sensor(sqrt_m, side, cfg.sensor_kind,
                                             cfg.sensor_seed + static_cast<std::uint64_t>(j)));
  }

  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir / "truth");
  fs::create_directories(out_dir / "recon");
  fs::create_directories(out_dir / "trace");

  {
    std::ofstream cfg_out(out_dir / "config.txt", std::ios::binary);
    if (!cfg_out) throw std::runtime_error("cannot write " + (out_dir / "config.txt").string());
    cfg_out << canonical_config_text(cfg);
  }
  for (const auto& [id, img] : images) export_image(img, (out_dir / "truth" / (id + ".pgm")).string());

  RunRecord record;
  record.config_hash = config_hash(cfg);
  for (const auto& [id, img] : images) {
    (void)img;
    for (std::size_t j = 0; j < cfg.cr_list.size(); ++j)
      for (Method method : cfg.methods)
        for (std::uint64_t seed : cfg.seeds) {
          RunCell cell;
          cell.image_id = id;
          cell.cr = cfg.cr_list[j];
          cell.sqrt_m = sensors[j].sqrt_m();
          cell.method = method;
          cell.seed = seed;
          record.cells.push_back(std::move(cell));
        }
  }

  const std::size_t per_image = cfg.cr_list.size() * cfg.methods.size() * cfg.seeds.size();
  const std::size_t per_cr = cfg.methods.size() * cfg.seeds.size();

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= record.cells.size()) return;
      RunCell& cell = record.cells[k];
      try {
        const Matrix& truth = images[k / per_image].second;
        const SeparableSensor& sensor = sensors[(k % per_image) / per_cr];
        CellResult result = run_cell(cfg, truth, sensor, cell.method, cell.seed);
        cell.psnr_db = psnr(truth, result.recon);
        cell.ssim = spirec::ssim(truth, result.recon);

        const std::string stem = cell_stem(cell);
        cell.recon_path = (out_dir / "recon" / (stem + ".pgm")).string();
        export_image(result.recon, cell.recon_path);

        if (!result.trace.empty()) {
          cell.trace_path = (out_dir / "trace" / (stem + ".csv")).string();
          std::ofstream trace_out(cell.trace_path, std::ios::binary);
          if (!trace_out) throw std::runtime_error("cannot write " + cell.trace_path);
          trace_out << "t,residual,psnr_db,ssim\n";
          for (const TraceRow& row : result.trace) {
            const Matrix step = unvec(row.x0_corrected, side, side);
            trace_out << row.t << "," << fixed6(row.residual) << ","
                      << fixed6(psnr(truth, step)) << "," << fixed6(spirec::ssim(truth, step))
                      << "\n";
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(record.cells.size());
        return;
      }
    }
  };

  const int worker_count = std::max(1, threads);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(worker_count));
  for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  record.results_csv = (out_dir / "results.csv").string();
  {
    std::ofstream out(record.results_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + record.results_csv);
    out << "image,cr,sqrt_m,method,seed,psnr_db,ssim\n";
    for (const RunCell& cell : record.cells)
      out << cell.image_id << "," << fixed6(cell.cr) << "," << cell.sqrt_m << ","
          << method_name(cell.method) << "," << cell.seed << "," << fixed6(cell.psnr_db) << ","
          << fixed6(cell.ssim) << "\n";
  }

  record.summary_csv = (out_dir / "summary.csv").string();
  {
    // (cr index, method index) -> sums, accumulated in results order
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::pair<double, double>, long>> cells;
    auto method_index = [&](Method m) {
      return static_cast<std::size_t>(
          std::find(cfg.methods.begin(), cfg.methods.end(), m) - cfg.methods.begin());
    };
    auto cr_index = [&](double cr) {
      return static_cast<std::size_t>(
          std::find(cfg.cr_list.begin(), cfg.cr_list.end(), cr) - cfg.cr_list.begin());
    };
    for (const RunCell& cell : record.cells) {
      auto& slot = cells[{cr_index(cell.cr), method_index(cell.method)}];
      slot.first.first += cell.psnr_db;
      slot.first.second += cell.ssim;
      slot.second += 1;
    }
    std::ofstream out(record.summary_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + record.summary_csv);
    out << "cr,method,mean_psnr_db,mean_ssim,runs\n";
    for (std::size_t j = 0; j < cfg.cr_list.size(); ++j)
      for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
        const auto& slot = cells.at({j, k});
        const double count = static_cast<double>(slot.second);
        SummaryCell cell;
        cell.cr = cfg.cr_list[j];
        cell.method = cfg.methods[k];
        cell.mean_psnr_db = slot.first.first / count;
        cell.mean_ssim = slot.first.second / count;
        cell.runs = slot.second;
        record.summary.push_back(cell);
        out << fixed6(cell.cr) << "," << method_name(cell.method) << ","
            << fixed6(cell.mean_psnr_db) << "," << fixed6(cell.mean_ssim) << "," << cell.runs
            << "\n";
      }
  }

  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

}  // namespace spirec
