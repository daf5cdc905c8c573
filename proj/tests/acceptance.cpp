// Acceptance suite: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Each check pins its tolerance and (where specified) its runtime
// budget; oracles are recomputed here independently of the library paths.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spirec/consistency.hpp"
#include "spirec/experiment.hpp"
#include "spirec/metrics.hpp"
#include "spirec/phantom.hpp"
#include "spirec/rng.hpp"
#include "spirec/sampler.hpp"
#include "spirec/sensing.hpp"

using namespace spirec;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = rng.normal();
  return A;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path + ">";
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Separable fused collapse vs densified blend, 50 sensors x {lambda,delta}
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index sqrt_m = 1 + static_cast<Index>(rng.uniform_index(8));   // 1..8
    const Index sqrt_n =
        sqrt_m + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(17 - sqrt_m)));
    const SeparableSensor sensor =
        build_separable_sensor(sqrt_m, sqrt_n, SensorKind::OrthonormalRandom, 2000 + i);
    const DenseSensor dense = densify(sensor);
    const Matrix X0 = random_matrix(sqrt_n, sqrt_n, rng);
    const Matrix Y = random_matrix(sqrt_m, sqrt_m, rng);
    for (double lambda : {0.1, 1.0, 10.0})
      for (double delta : {0.0, 0.3, 0.7, 1.0}) {
        ConsistencyConfig cfg;
        cfg.lambda = lambda;
        cfg.delta = delta;
        const Vector got = vec(fused_update_separable(sensor, X0, Y, cfg));
        const Vector want = fused_update(dense, vec(X0), vec(Y), cfg);
        worst = std::max(worst, (got - want).norm() / std::max(1.0, want.norm()));
      }
  }
  const double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof detail, "max rel err %.3e (tol 1e-9), %.2f s (budget 5 s)", worst,
                elapsed);
  report(1, "separable fused update equals the densified blend", worst <= 1e-9 && elapsed <= 5.0,
         detail);
}

// ---------------------------------------------------------------------------
// 2. GAP exact projection + idempotence, 100 instances
void criterion_2() {
  Rng rng(1002);
  double worst_proj = 0.0, worst_idem = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index m = 2 + static_cast<Index>(rng.uniform_index(10));
    const Index n = m + 1 + static_cast<Index>(rng.uniform_index(20));
    const DenseSensor sensor(random_matrix(m, n, rng));
    const Vector x0 = rng.normal_vector(n);
    const Vector y = rng.normal_vector(m);
    const Vector x1 = gap_update(sensor, x0, y);
    worst_proj = std::max(worst_proj, (sensor.apply(x1) - y).norm() / (1.0 + y.norm()));
    const Vector x2 = gap_update(sensor, x1, y);
    worst_idem = std::max(worst_idem, (x2 - x1).norm() / (1.0 + x1.norm()));
  }
  char detail[160];
  std::snprintf(detail, sizeof detail, "projection %.3e (tol 1e-8), idempotence %.3e (tol 1e-10)",
                worst_proj, worst_idem);
  report(2, "gap back-projection lands exactly on the constraint",
         worst_proj <= 1e-8 && worst_idem <= 1e-10, detail);
}

// ---------------------------------------------------------------------------
// 3. HQS stationarity: normal-equation residual + 5-direction finite diffs
void criterion_3() {
  Rng rng(1003);
  double worst_res = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index m = 2 + static_cast<Index>(rng.uniform_index(10));
    const Index n = 2 + static_cast<Index>(rng.uniform_index(20));
    const Matrix H = random_matrix(m, n, rng);
    const Vector x0 = rng.normal_vector(n);
    const Vector y = rng.normal_vector(m);
    const double lambda = std::pow(10.0, rng.uniform() * 2.0 - 1.0);  // 0.1 .. 10
    const Vector xs = hqs_update(DenseSensor(H), x0, y, lambda);

    const Vector rhs = H.transpose() * y + lambda * x0;
    const Vector residual = H.transpose() * (H * xs) + lambda * xs - rhs;
    worst_res = std::max(worst_res, residual.norm() / (1.0 + rhs.norm()));

    auto f = [&](const Vector& x) {
      return (H * x - y).squaredNorm() + lambda * (x - x0).squaredNorm();
    };
    const double scale = std::max(1.0, f(xs));
    const double h = 1e-4;
    for (int d = 0; d < 5; ++d) {
      Vector dir = rng.normal_vector(n);
      dir.normalize();
      const double fd = (f(xs + h * dir) - f(xs - h * dir)) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(fd) / scale);
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof detail, "normal-eq %.3e (tol 1e-8), directional %.3e (tol 1e-5)",
                worst_res, worst_fd);
  report(3, "hqs solve is stationary for its objective", worst_res <= 1e-8 && worst_fd <= 1e-5,
         detail);
}

// ---------------------------------------------------------------------------
// 4. Staged DDIM step == one-line update over a full T = 100 trajectory
void criterion_4() {
  Rng rng(1004);
  const Index n = 8;
  const DiffusionSchedule s = build_schedule(100);  // sigma = 0 throughout
  const GaussianPrior prior(rng.normal_vector(n),
                            (rng.normal_vector(n).array().abs() + 0.3).matrix());
  Rng noise(44);
  SamplerState state;
  state.t = s.T;
  state.x = Rng(45).normal_vector(n);
  double worst = 0.0;
  for (int t = s.T; t >= 1; --t) {
    const Vector x0 = tweedie_denoise(prior, state.x, t, s);
    const double a = s.alpha_bar[static_cast<std::size_t>(t)];
    const double a_prev = s.alpha_bar[static_cast<std::size_t>(t) - 1];
    const Vector eps_hat = (state.x - std::sqrt(a) * x0) / std::sqrt(1.0 - a);
    const Vector one_line = std::sqrt(a_prev) * x0 + std::sqrt(1.0 - a_prev) * eps_hat;
    state = ddim_step(std::move(state), x0, s, noise);
    worst = std::max(worst, (state.x - one_line).cwiseAbs().maxCoeff());
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max per-step err %.3e (tol 1e-10)", worst);
  report(4, "staged sampler equals the one-line ddim update", worst <= 1e-10, detail);
}

// ---------------------------------------------------------------------------
// 5. Tweedie denoising matches the closed-form conditional mean
void criterion_5() {
  Rng rng(1005);
  const Index n = 12;
  const Vector mean = rng.normal_vector(n);
  const Vector variance = (rng.normal_vector(n).array().abs() + 0.2).matrix();
  const GaussianPrior prior(mean, variance);
  const DiffusionSchedule s = build_schedule(100);
  double worst = 0.0;
  for (int t : {1, 25, 50, 75, 100}) {
    const double a = s.alpha_bar[static_cast<std::size_t>(t)];
    const Vector x_t = rng.normal_vector(n);
    const Vector got = tweedie_denoise(prior, x_t, t, s);
    Vector want(n);
    for (Index i = 0; i < n; ++i) {
      const double gain = std::sqrt(a) * variance[i] / (a * variance[i] + 1.0 - a);
      want[i] = mean[i] + gain * (x_t[i] - std::sqrt(a) * mean[i]);
    }
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max abs err %.3e (tol 1e-10)", worst);
  report(5, "tweedie denoising recovers the gaussian conditional mean", worst <= 1e-10, detail);
}

// ---------------------------------------------------------------------------
// 6. Forward-noising marginal moments at t = T/2
void criterion_6() {
  const auto start = std::chrono::steady_clock::now();
  const Index n = 64;
  const int samples = 10000;
  const DiffusionSchedule s = build_schedule(100);
  const int t = 50;
  const double a = s.alpha_bar[t];
  Rng rng(1006);
  const Vector x0 = rng.normal_vector(n);

  Vector sum = Vector::Zero(n);
  double pooled_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vector x = forward_noise(x0, t, s, 5000 + static_cast<std::uint64_t>(k));
    sum += x;
    pooled_sq += (x - std::sqrt(a) * x0).squaredNorm();
  }
  const Vector mean = sum / samples;
  const double se = std::sqrt((1.0 - a) / samples);
  const double worst_mean =
      (mean - std::sqrt(a) * x0).cwiseAbs().maxCoeff() / se;  // in standard errors
  const double pooled_var = pooled_sq / (static_cast<double>(samples) * n);
  const double var_err = std::abs(pooled_var - (1.0 - a)) / (1.0 - a);
  const double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "worst mean dev %.2f SE (tol 4), var err %.2f%% (tol 5%%), %.2f s (budget 2 s)",
                worst_mean, 100.0 * var_err, elapsed);
  report(6, "forward noising matches its marginal moments",
         worst_mean <= 4.0 && var_err <= 0.05 && elapsed <= 2.0, detail);
}

// ---------------------------------------------------------------------------
// 7. Linear-Gaussian end-to-end posterior recovery, 64 stochastic chains
void criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  const Index n = 16, m = 8;
  Rng rng(1007);
  const DenseSensor sensor(random_matrix(m, n, rng));
  const Vector mu0 = 4.0 * rng.normal_vector(n);  // prior mean scale >> unit prior variance
  const GaussianPrior prior(mu0, Vector::Ones(n));
  const Vector x_true = mu0 + rng.normal_vector(n);
  const Vector y = sensor.apply(x_true);

  // conditioning N(mu0, I) on the exact observation y = H x:
  //   mu_post = mu0 + H^T (H H^T)^{-1} (y - H mu0)
  const Matrix HHt = sensor.matrix() * sensor.matrix().transpose();
  const Vector mu_post =
      mu0 + sensor.matrix().transpose() * Eigen::LLT<Matrix>(HHt).solve(y - sensor.apply(mu0));

  const DiffusionSchedule s = build_schedule(100, 1e-3, 0.2, 0.5, /*stochastic=*/true);
  ConsistencyConfig cfg;
  cfg.lambda = 1.0;
  cfg.mode = ConsistencyMode::Fused;
  Vector mean_final = Vector::Zero(n);
  for (int seed = 0; seed < 64; ++seed)
    mean_final += reconstruct(y, sensor, prior, s, cfg, 9000 + static_cast<std::uint64_t>(seed)).x;
  mean_final /= 64.0;

  const double rmse = std::sqrt((mean_final - mu_post).squaredNorm() / n);
  const double budget = 0.05 * mu_post.norm();
  const double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof detail, "rmse %.4f (tol %.4f = 5%% of ||mu_post||), %.1f s (budget 60 s)",
                rmse, budget, elapsed);
  report(7, "stochastic chains average to the linear-gaussian posterior mean",
         rmse <= budget && elapsed <= 60.0, detail);
}

// ---------------------------------------------------------------------------
// 8 & 9. Compression-ratio trend and method ordering on shared phantoms
struct SweepOutcome {
  std::map<std::string, double> fused_by_cr;  // criterion 8
  std::map<std::string, double> method_at_5pct;
  double trend_seconds = 0.0;
};

SweepOutcome run_sweeps(const fs::path& root) {
  SweepOutcome out;

  ExperimentConfig trend;
  trend.phantom_kind = PhantomKind::SmoothBumps;
  trend.phantom_size = 64;
  trend.phantom_count = 4;
  trend.cr_list = {0.01, 0.05, 0.10, 0.20};
  trend.methods = {Method::DdimFused};
  trend.seeds = {1};
  trend.output_dir = (root / "trend").string();
  const auto start = std::chrono::steady_clock::now();
  const RunRecord trend_record = run_experiment(trend, 2);
  out.trend_seconds = seconds_since(start);
  for (const SummaryCell& cell : trend_record.summary) {
    char key[32];
    std::snprintf(key, sizeof key, "%.2f", cell.cr);
    out.fused_by_cr[key] = cell.mean_psnr_db;
  }

  ExperimentConfig ordering;
  ordering.phantom_kind = PhantomKind::SmoothBumps;
  ordering.phantom_size = 64;
  ordering.phantom_count = 4;
  ordering.cr_list = {0.05};
  ordering.methods = {Method::Pinv,   Method::DdimGap, Method::DdimHqs,
                      Method::DdimFused, Method::PnpHqs,  Method::PnpGap};
  ordering.seeds = {1};
  ordering.output_dir = (root / "ordering").string();
  const RunRecord ordering_record = run_experiment(ordering, 2);
  for (const SummaryCell& cell : ordering_record.summary)
    out.method_at_5pct[method_name(cell.method)] = cell.mean_psnr_db;
  return out;
}

void criterion_8(const SweepOutcome& sweep) {
  const double p01 = sweep.fused_by_cr.at("0.01");
  const double p05 = sweep.fused_by_cr.at("0.05");
  const double p10 = sweep.fused_by_cr.at("0.10");
  const double p20 = sweep.fused_by_cr.at("0.20");
  const bool monotone = p01 <= p05 && p05 <= p10 && p10 <= p20;
  const bool spread = (p20 - p01) >= 3.0;
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "psnr %.2f / %.2f / %.2f / %.2f dB at cr 1/5/10/20%%, spread %.2f dB (>= 3), %.0f s (budget 300 s)",
                p01, p05, p10, p20, p20 - p01, sweep.trend_seconds);
  report(8, "fused reconstruction improves monotonically with cr",
         monotone && spread && sweep.trend_seconds <= 300.0, detail);
}

void criterion_9(const SweepOutcome& sweep) {
  const auto& at = sweep.method_at_5pct;
  const double pinv = at.at("pinv");
  const double gap = at.at("ddim-gap");
  const double hqs = at.at("ddim-hqs");
  const double fused = at.at("ddim-fused");
  const double pnp_hqs = at.at("pnp-hqs");
  const double pnp_gap = at.at("pnp-gap");
  const bool all_beat_pinv =
      gap > pinv && hqs > pinv && fused > pinv && pnp_hqs > pinv && pnp_gap > pinv;
  const bool fused_competitive = fused >= std::max(gap, hqs) - 0.2;
  char detail[220];
  std::snprintf(detail, sizeof detail,
                "pinv %.2f | ddim gap/hqs/fused %.2f/%.2f/%.2f | pnp hqs/gap %.2f/%.2f dB",
                pinv, gap, hqs, fused, pnp_hqs, pnp_gap);
  report(9, "every guided method beats the pseudoinverse at cr 5%",
         all_beat_pinv && fused_competitive, detail);
}

// ---------------------------------------------------------------------------
// 10. Byte-identical CSVs across repeat runs and thread counts
std::map<std::string, std::string> csv_bytes(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files[fs::relative(entry.path(), dir).string()] = slurp(entry.path().string());
  return files;
}

void criterion_10(const fs::path& root) {
  ExperimentConfig cfg;
  cfg.phantom_kind = PhantomKind::SmoothBumps;
  cfg.phantom_size = 32;
  cfg.phantom_count = 2;
  cfg.cr_list = {0.05, 0.20};
  cfg.methods = {Method::Pinv, Method::DdimFused, Method::PnpGap};
  cfg.seeds = {1, 2};
  cfg.T = 20;
  cfg.pnp_iterations = 10;

  cfg.output_dir = (root / "det_a").string();
  run_experiment(cfg, 1);
  cfg.output_dir = (root / "det_b").string();
  run_experiment(cfg, 1);
  cfg.output_dir = (root / "det_c").string();
  run_experiment(cfg, 4);

  const auto a = csv_bytes(root / "det_a");
  const auto b = csv_bytes(root / "det_b");
  const auto c = csv_bytes(root / "det_c");
  const bool rerun_same = a == b;
  const bool threads_same = a == c;
  char detail[160];
  std::snprintf(detail, sizeof detail, "%zu csv files, rerun identical: %s, 4-thread identical: %s",
                a.size(), rerun_same ? "yes" : "no", threads_same ? "yes" : "no");
  report(10, "csv outputs are byte-identical across runs and thread counts",
         !a.empty() && rerun_same && threads_same, detail);
}

// ---------------------------------------------------------------------------
// 11. Metric correctness
void criterion_11() {
  const Matrix a = Matrix::Constant(32, 32, 0.35);
  const Matrix b = Matrix::Constant(32, 32, 0.45);
  const double p = psnr(a, b);
  const bool psnr_exact = std::abs(p - 20.0) <= 1e-9;

  Rng rng(1011);
  const Matrix r1 = random_matrix(16, 16, rng);
  const Matrix r2 = random_matrix(16, 16, rng);
  const bool self_one = ssim(r1, r1) == 1.0;
  const bool symmetric = std::abs(ssim(r1, r2) - ssim(r2, r1)) <= 1e-12 &&
                         std::abs(psnr(r1, r2) - psnr(r2, r1)) <= 1e-12;
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "uniform-0.1 psnr %.12f dB, ssim(a,a)=%s, symmetry %s", p,
                self_one ? "1" : "off", symmetric ? "exact" : "broken");
  report(11, "psnr and ssim behave exactly on their fixtures",
         psnr_exact && self_one && symmetric, detail);
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "spirec_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  const SweepOutcome sweep = run_sweeps(root);
  criterion_7();
  criterion_8(sweep);
  criterion_9(sweep);
  criterion_10(root);
  criterion_11();

  fs::remove_all(root);
  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              failures);
  return failures == 0 ? 0 : 1;
}
