// Acceptance suite: runs every published criterion at its stated tolerance
// and prints one pass/fail line per criterion.  Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/linalg.hpp"
#include "bcwave/parallel.hpp"
#include "bcwave/probing.hpp"
#include "bcwave/solver.hpp"

using namespace bcwave;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

MeasurementConfig reference_cfg(int n_space) {
  MeasurementConfig cfg;
  cfg.nx = 20;
  cfg.nt = 800;
  cfg.T = 1.0;
  cfg.n_space = n_space;
  return cfg;
}

const Obstacle kDisk = Obstacle::disk({0.5, 0.5}, 0.3);
const Obstacle kSquare = Obstacle::rotated_square({0.5, 0.5}, 0.424, std::numbers::pi / 4);

std::vector<SlotValue> random_source(std::mt19937_64& eng, const MeasurementConfig& cfg, int nnz,
                                     bool positive = false) {
  std::uniform_int_distribution<int> slot(0, cfg.half_slots() - 1);
  std::uniform_int_distribution<int> cell(0, cfg.nx - 1);
  std::normal_distribution<double> g;
  std::vector<SlotValue> f;
  for (int t = 0; t < nnz; ++t) {
    double v = g(eng);
    if (positive) v = std::abs(v) + 0.1;
    f.push_back({slot(eng), cell(eng), v});
  }
  return f;
}

double blago_worst(const MeasurementSet& data, const SimGrid& grid, int pairs,
                   std::uint64_t seed) {
  const MeasurementConfig& cfg = data.config;
  std::mt19937_64 eng(seed);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    auto f = random_source(eng, cfg, 8);
    auto h = random_source(eng, cfg, 8);
    BoundaryTrace kh = apply_K(h, data);
    BoundaryTrace fd(cfg.half_slots(), cfg.nx, cfg.dt_samp());
    for (const auto& sv : f) fd.at(sv.slot, sv.cell) += sv.value;
    double lhs = boundary_inner_product(fd, kh, cfg.half_slots());
    WaveField uf =
        interior_snapshot(NeumannSource::from_coefficients(f, cfg), data.obstacle, cfg.T, grid);
    WaveField uh =
        interior_snapshot(NeumannSource::from_coefficients(h, cfg), data.obstacle, cfg.T, grid);
    double rhs = uf.inner(uh);
    double scale = std::sqrt(uf.norm2() * uh.norm2());
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ProbeParameters reconstruction_params(unsigned workers) {
  ProbeParameters p;
  p.epsilon = 5e-4;
  p.n_radii = 100;
  p.r_min = 0.1;
  p.r_max = 0.5;
  p.alpha = 0.0;
  p.n_cg = 10;
  p.workers = workers;
  p.probe_centers = ProbeParameters::receiver_centers(20);
  return p;
}

}  // namespace

int main() {
  const unsigned hw = default_workers();
  const auto t_all = Clock::now();

  // Shared measurement sets (reference sampling, n_space = 400).
  auto t0 = Clock::now();
  MeasurementSet empty400 = simulate_basis(Obstacle::none(), reference_cfg(400), hw);
  MeasurementSet disk400 = simulate_basis(kDisk, reference_cfg(400), hw);
  MeasurementSet square400 = simulate_basis(kSquare, reference_cfg(400), hw);
  const double t_sets = seconds_since(t0);

  // ---- 1. Blagovescenskii identity at n = 400 (2%) and n = 100 (5%) ----
  {
    t0 = Clock::now();
    SimGrid g400 = SimGrid::for_config(reference_cfg(400));
    double worst400 = std::max(blago_worst(empty400, g400, 5, 101),
                               blago_worst(disk400, g400, 5, 102));
    double sec400 = seconds_since(t0) + t_sets;  // include the basis experiments

    t0 = Clock::now();
    MeasurementSet empty100 = simulate_basis(Obstacle::none(), reference_cfg(100), hw);
    MeasurementSet disk100 = simulate_basis(kDisk, reference_cfg(100), hw);
    SimGrid g100 = SimGrid::for_config(reference_cfg(100));
    double worst100 = std::max(blago_worst(empty100, g100, 5, 103),
                               blago_worst(disk100, g100, 5, 104));
    double sec100 = seconds_since(t0);

    bool pass = worst400 <= 0.02 && worst100 <= 0.05 && sec400 <= 300.0 && sec100 <= 30.0;
    report(1, pass,
           fmt("Blagovescenskii pairing: n=400 worst %.4f%% (tol 2%%, %.0fs/300s), "
               "n=100 worst %.4f%% (tol 5%%, %.0fs/30s)",
               100 * worst400, sec400, 100 * worst100, sec100));
  }

  // ---- 2. W*1 = b ----
  {
    MeasurementConfig cfg = reference_cfg(400);
    SimGrid grid = SimGrid::for_config(cfg);
    std::mt19937_64 eng(202);
    double worst = 0.0;
    for (const Obstacle& ob : {kDisk, kSquare}) {
      for (int t = 0; t < 5; ++t) {
        auto f = random_source(eng, cfg, 8, /*positive=*/true);
        WaveField uf = interior_snapshot(NeumannSource::from_coefficients(f, cfg), ob, cfg.T, grid);
        double lhs = uf.integral();
        double rhs = 0.0;
        for (const auto& sv : f)
          rhs += sv.value * (cfg.T - (sv.slot + 0.5) * cfg.dt_samp()) * cfg.slot_measure();
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      }
    }
    report(2, worst <= 0.02, fmt("interior mean vs (f,b): worst %.4f%% (tol 2%%)", 100 * worst));
  }

  // ---- 3. Empty-space calibration with half-spaces ----
  {
    ProbeParameters p;
    p.epsilon = 5e-4;
    p.n_radii = 5;
    p.r_min = 0.1;
    p.r_max = 0.5;
    p.alpha = 0.0;
    p.n_cg = 10;
    p.workers = hw;
    VolumeCurve c = volume_curve(ProfileFamily::half_spaces(), empty400, p);
    double worst = 0.0;
    bool monotone = true;
    for (std::size_t l = 0; l < c.radii.size(); ++l) {
      worst = std::max(worst, std::abs(c.estimates[l] - c.radii[l]) / c.radii[l]);
      if (l && c.estimates[l] < c.estimates[l - 1]) monotone = false;
    }
    report(3, worst <= 0.15 && monotone,
           fmt("V(M(tau_r)) vs r on {0.1..0.5}: worst %.3f%% (tol 15%%), monotone=%s", 100 * worst,
               monotone ? "yes" : "no"));
  }

  // ---- 4. CG essentially converges by 10 iterations ----
  {
    double worst = 0.0;
    for (double r : {0.1, 0.5}) {
      STauIndex idx = build_stau_index(BoundaryProfile::half_space(r, 1.0), reference_cfg(400));
      ControlSolution sol = solve_control(idx, empty400, 0.0, 30);
      double v10 = sol.volume_history[9];
      double v30 = sol.volume_history.back();
      worst = std::max(worst, std::abs(v30 - v10) / std::abs(v30));
    }
    report(4, worst <= 0.02, fmt("volume change between iterations 10 and 30: %.3f%% (tol 2%%)",
                                 100 * worst));
  }

  // ---- 5. Detection onset at the disk clearance ----
  VolumeCurve onset_empty_curve;  // reused by the 14 dB onset check below
  VolumeCurve onset_diff_noiseless;
  {
    ProbeParameters p = reconstruction_params(hw);
    std::vector<double> radii = p.radius_grid();
    const double step = radii[1] - radii[0];

    VolumeCurve cd = volume_curve(ProfileFamily::disk_probes(0.5), disk400, p);
    onset_empty_curve = volume_curve(ProfileFamily::disk_probes(0.5), empty400, p);
    const VolumeCurve& ce = onset_empty_curve;
    VolumeCurve diff = difference_curve(cd, ce);
    onset_diff_noiseless = diff;
    double r_pipe = estimate_clearance(diff, p).r;

    ProbeParameters oracle_p = p;
    oracle_p.epsilon = 1e-9;
    VolumeCurve odiff;
    odiff.radii = radii;
    odiff.estimates =
        oracle_volume_difference(ProfileFamily::disk_probes(0.5), kDisk, radii, 800);
    double r_oracle = estimate_clearance(odiff, oracle_p).r;
    double floored = radii[0];
    for (double r : radii)
      if (r <= 0.2 + 1e-12) floored = r;

    bool pass = r_pipe >= 0.18 && r_pipe <= 0.25 && std::abs(r_oracle - floored) <= step + 1e-12;
    report(5, pass,
           fmt("clearance at y=0.5: pipeline %.4f (window [0.18, 0.25]), oracle %.4f vs %.4f "
               "(one grid step %.4f)",
               r_pipe, r_oracle, floored, step));
  }

  // ---- 6. Shape reconstruction, both obstacles, shared parameters ----
  double disk_serial_seconds = 0.0;
  {
    const RasterGrid grid(200);
    ProbeParameters serial = reconstruction_params(1);

    t0 = Clock::now();
    HRegionResult rec_disk = reconstruct_h_region(disk400, empty400, serial, grid);
    disk_serial_seconds = seconds_since(t0);
    HRegionResult rec_square = reconstruct_h_region(square400, empty400, serial, grid);
    double serial_seconds = seconds_since(t0);

    ErrorMap err_disk = error_map(rec_disk.mask, h_region_exact(kDisk, serial.r_max, grid));
    ErrorMap err_square = error_map(rec_square.mask, h_region_exact(kSquare, serial.r_max, grid));

    bool pass = err_disk.error_area() < 0.05 && err_square.error_area() < 0.05 &&
                serial_seconds <= 600.0;
    report(6, pass,
           fmt("error area: disk %.2f%%, square %.2f%% (tol 5%%); single-core %.0fs (tol 600s)",
               100 * err_disk.error_area(), 100 * err_square.error_area(), serial_seconds));

    // parallel scaling on the same probe matrix
    unsigned W = std::min(8u, hw);
    if (W >= 2) {
      ProbeParameters par = reconstruction_params(W);
      t0 = Clock::now();
      HRegionResult rec_par = reconstruct_h_region(disk400, empty400, par, grid);
      double par_seconds = seconds_since(t0);
      double speedup = disk_serial_seconds / par_seconds;
      bool same = rec_par.mask.cells == rec_disk.mask.cells;
      bool scale_ok = speedup >= 0.55 * W && same;
      report(6, scale_ok,
             fmt("parallel scaling: %u workers speedup %.2fx (tol %.2fx), identical mask=%s",
                 W, speedup, 0.55 * W, same ? "yes" : "no"));
    } else {
      report(6, true, "parallel scaling: single hardware thread, scaling check skipped");
    }
  }

  // ---- 7. Noise robustness ----
  {
    const RasterGrid grid(200);
    ProbeParameters p14 = reconstruction_params(hw);
    p14.epsilon = 4e-3;
    Mask exact = h_region_exact(kDisk, p14.r_max, grid);

    std::vector<Mask> masks;
    double worst_err = 0.0;
    for (std::uint64_t seed : {1, 2}) {
      MeasurementSet noisy = add_awgn(disk400, 14.0, seed);
      HRegionResult rec = reconstruct_h_region(noisy, empty400, p14, grid);
      worst_err = std::max(worst_err, error_map(rec.mask, exact).error_area());
      masks.push_back(rec.mask);
    }
    std::size_t symdiff = 0;
    for (std::size_t i = 0; i < masks[0].cells.size(); ++i)
      symdiff += masks[0].cells[i] != masks[1].cells[i];
    double symdiff_area = double(symdiff) * grid.cell_area();
    bool pass14 = worst_err < 0.10 && symdiff_area < 0.10;
    report(7, pass14,
           fmt("14 dB, eps=4e-3: worst error area %.2f%% (tol 10%%), seed-to-seed difference "
               "%.2f%% (tol 10%%)",
               100 * worst_err, 100 * symdiff_area));

    // onset stability under 14 dB noise, anchored to the noiseless detection
    // at the same threshold (the threshold's own lag is bounded by criterion 5)
    double r_clean = estimate_clearance(onset_diff_noiseless, p14).r;
    double worst_shift = 0.0, worst_geo = 0.0;
    for (std::uint64_t seed : {1, 2}) {
      MeasurementSet noisy = add_awgn(disk400, 14.0, seed);
      VolumeCurve cn = volume_curve(ProfileFamily::disk_probes(0.5), noisy, p14);
      double r = estimate_clearance(difference_curve(cn, onset_empty_curve), p14).r;
      worst_shift = std::max(worst_shift, std::abs(r - r_clean));
      worst_geo = std::max(worst_geo, std::abs(r - 0.2));
    }
    report(7, worst_shift <= 0.05,
           fmt("14 dB onset at y=0.5: worst shift %.4f vs noiseless %.4f (tol 0.05); vs geometric "
               "0.2: %.4f",
               worst_shift, r_clean, worst_geo));

    // 7 dB, alpha = 0: may be disrupted; reported, not asserted
    ProbeParameters p7;
    p7.epsilon = 4e-3;
    p7.n_radii = 21;
    p7.r_min = 0.1;
    p7.r_max = 0.5;
    p7.alpha = 0.0;
    p7.n_cg = 10;
    p7.workers = hw;
    MeasurementSet noisy7 = add_awgn(empty400, 7.0, 3);
    VolumeCurve raw7 = volume_curve(ProfileFamily::half_spaces(), noisy7, p7);
    double dev7 = 0.0;
    for (std::size_t l = 0; l < raw7.radii.size(); ++l)
      dev7 = std::max(dev7, std::abs(raw7.estimates[l] - raw7.radii[l]));
    std::printf("       criterion 7 note: 7 dB alpha=0 empty-space curve deviates up to %.3f "
                "from truth (reported only)\n", dev7);

    // 7 dB, alpha = 1e-3: empty-space differences stay within 2*eps
    p7.alpha = 1e-3;
    VolumeCurve noisy_curve = volume_curve(ProfileFamily::half_spaces(), noisy7, p7);
    VolumeCurve calib_curve = volume_curve(ProfileFamily::half_spaces(), empty400, p7);
    double worst_diff = 0.0;
    for (std::size_t l = 0; l < noisy_curve.radii.size(); ++l)
      worst_diff = std::max(worst_diff, std::abs(noisy_curve.estimates[l] - calib_curve.estimates[l]));
    bool pass7 = worst_diff <= 2.0 * 4e-3;
    report(7, pass7,
           fmt("7 dB, alpha=1e-3: empty-space difference curve within %.4f of zero (tol 2*eps = "
               "%.4f)",
               worst_diff, 8e-3));
  }

  // ---- 8. Tikhonov regularization limit ----
  {
    std::mt19937_64 eng(808);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> dim(2, 10);
    double worst_limit = 0.0;
    bool monotone = true;
    for (int t = 0; t < 20; ++t) {
      int m = dim(eng), n = dim(eng);
      int r = std::max(1, std::min(m, n) - 1 - (t % 2));
      DenseMatrix L(m, r), R(r, n), A(m, n);
      for (auto& v : L.a) v = g(eng);
      for (auto& v : R.a) v = g(eng);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < r; ++k) s += L.at(i, k) * R.at(k, j);
          A.at(i, j) = s;
        }
      std::vector<double> y(m);
      for (auto& v : y) v = g(eng);
      std::vector<double> alphas;
      for (int d = 1; d <= 12; ++d) alphas.push_back(std::pow(10.0, -d));
      TikhonovReport rep = tikhonov_limit_check(A, y, alphas);
      worst_limit = std::max(worst_limit, rep.errors.back());
      for (std::size_t i = 1; i < rep.errors.size(); ++i)
        if (rep.errors[i] > rep.errors[i - 1] + 1e-12) monotone = false;
    }
    report(8, worst_limit <= 1e-6 && monotone,
           fmt("||A x_a - Py|| at a=1e-12: worst %.2e (tol 1e-6); nonincreasing=%s", worst_limit,
               monotone ? "yes" : "no"));
  }

  // ---- 9. Operator algebra ----
  {
    MeasurementConfig cfg = reference_cfg(400);
    const double h = cfg.dt_samp();
    std::mt19937_64 eng(909);
    std::normal_distribution<double> g;
    BoundaryTrace f(cfg.half_slots(), cfg.nx, h);
    for (auto& v : f.samples) v = g(eng);
    bool involution = apply_time_reversal(apply_time_reversal(f)).samples == f.samples;

    BoundaryTrace ones(cfg.nt, cfg.nx, h);
    for (auto& v : ones.samples) v = 1.0;
    BoundaryTrace j1 = apply_J(ones);
    double jerr = 0.0;
    for (int j = 0; j < j1.n_slots; ++j)
      for (int k = 0; k < cfg.nx; ++k)
        jerr = std::max(jerr, std::abs(j1.at(j, k) - (cfg.T - (j + 0.5) * h)));

    STauIndex idx = build_stau_index(BoundaryProfile::disk_probe({0.5, 0.0}, 0.11, 1.0), cfg);
    DenseMatrix K = assemble_ktau(idx, empty400);
    const int n = (int)idx.slots.size();
    double maxdiag = 0.0, asym = 0.0;
    for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, K.at(i, i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(K.at(i, j) - K.at(j, i)));
    auto ev = jacobi_eigenvalues(K);

    bool pass = involution && jerr <= 1e-6 && n <= 100 && asym <= 1e-3 * maxdiag &&
                ev.front() >= -1e-3 * ev.back();
    report(9, pass,
           fmt("R involution=%s; |J1-(T-t)|=%.1e (tol 1e-6); K_tau (%d slots) asym %.2e of diag, "
               "eig range [%.2e, %.2e]",
               involution ? "exact" : "BROKEN", jerr, n, asym / maxdiag, ev.front(), ev.back()));
  }

  // ---- 10. Noise calibration ----
  {
    double worst = 0.0;
    for (auto [snr, target] : {std::pair{14.0, 0.0398107}, {7.0, 0.1995262}}) {
      MeasurementSet noisy = add_awgn(empty400, snr, 55);
      double ratio = 0.0;
      for (int k = 0; k < empty400.config.nx; ++k) {
        double p = 0.0, n2 = 0.0;
        for (std::size_t i = 0; i < empty400.traces[k].samples.size(); ++i) {
          double c = empty400.traces[k].samples[i];
          double d = noisy.traces[k].samples[i] - c;
          p += c * c;
          n2 += d * d;
        }
        ratio += n2 / p;
      }
      ratio /= empty400.config.nx;
      worst = std::max(worst, std::abs(ratio - target) / target);
    }
    report(10, worst <= 0.01,
           fmt("measured sigma^2/P vs 10^(-snr/10): worst deviation %.3f%% (tol 1%%)", 100 * worst));
  }

  std::printf("acceptance total: %.0fs, %d failure(s)\n", seconds_since(t_all), g_failures);
  return g_failures == 0 ? 0 : 1;
}
