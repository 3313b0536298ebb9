#include "bcwave/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include <json.hpp>

#include "bcwave/io.hpp"
#include "bcwave/kernels.hpp"
#include "bcwave/parallel.hpp"
#include "bcwave/solver.hpp"

namespace bcwave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return buf;
}

std::filesystem::path make_run_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir = std::filesystem::path(cfg.out_dir) / cfg.run_name();
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

SimulateOutcome cmd_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  MeasurementSet set = simulate_basis(cfg.make_obstacle(), cfg.measurement, cfg.effective_workers());
  if (cfg.noisy) set = add_awgn(set, cfg.snr_db, cfg.seed);

  std::filesystem::path dir = make_run_dir(cfg);
  SimulateOutcome out;
  out.archive = dir / "measurements.ndm";
  write_measurement_archive(out.archive, set);
  out.checksum = fnv1a64_file(out.archive);

  std::ofstream cfgfile(dir / "config.txt");
  cfgfile << cfg.canonical_text();
  return out;
}

ProbeOutcome cmd_probe(const ExperimentConfig& cfg, const std::filesystem::path& data_archive,
                       const std::filesystem::path& calib_archive) {
  cfg.validate();
  const auto t0 = Clock::now();

  MeasurementSet data = read_measurement_archive(data_archive);
  MeasurementSet calib = read_measurement_archive(calib_archive);
  if (!data.config.compatible_with(calib.config))
    throw std::invalid_argument(
        "probe: data and calibration archives are incompatible (nx/nt/T/n_space differ)");
  if (!data.config.compatible_with(cfg.measurement))
    throw std::invalid_argument("probe: config sampling does not match the archives");

  ProbeParameters params = cfg.make_probe_params();
  params.probe_centers = ProbeParameters::receiver_centers(cfg.probe_centers);
  const RasterGrid grid(cfg.raster_n);

  std::filesystem::path dir = make_run_dir(cfg);
  std::vector<std::pair<std::string, std::filesystem::path>> outputs;

  // Half-space volume curves on both archives (calibration view), on a
  // decimated radius grid; the probing matrix below uses the full grid.
  {
    ProbeParameters curve_params = params;
    curve_params.n_radii = std::min(params.n_radii, 21);
    VolumeCurve empty_curve = volume_curve(ProfileFamily::half_spaces(), calib, curve_params);
    VolumeCurve data_curve = volume_curve(ProfileFamily::half_spaces(), data, curve_params);
    write_volume_curve_csv(dir / "halfspace_calibration.csv", empty_curve);
    write_volume_curve_csv(dir / "halfspace_data.csv", data_curve);
    outputs.emplace_back("halfspace_calibration.csv", dir / "halfspace_calibration.csv");
    outputs.emplace_back("halfspace_data.csv", dir / "halfspace_data.csv");
  }

  HRegionResult rec = reconstruct_h_region(data, calib, params, grid);

  for (std::size_t iy = 0; iy < rec.difference_curves.size(); ++iy) {
    char name[64];
    std::snprintf(name, sizeof name, "difference_y%02zu.csv", iy);
    write_volume_curve_csv(dir / name, rec.difference_curves[iy]);
    outputs.emplace_back(name, dir / name);
  }
  {
    std::ofstream os(dir / "clearances.csv");
    os << "y,clearance,immediate_detection\n";
    for (std::size_t iy = 0; iy < rec.clearances.size(); ++iy) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", params.probe_centers[iy],
                    rec.clearances[iy], (int)rec.immediate[iy]);
      os << buf;
    }
    outputs.emplace_back("clearances.csv", dir / "clearances.csv");
  }

  const double clip = std::min(params.r_max, data.config.T);
  Mask exact = h_region_exact(data.obstacle, clip, grid);
  ErrorMap err = error_map(rec.mask, exact);

  write_pgm_mask(dir / "reconstruction.pgm", rec.mask);
  write_pgm_mask(dir / "exact_region.pgm", exact);
  write_pgm(dir / "error_map.pgm", grid, err.image);
  outputs.emplace_back("reconstruction.pgm", dir / "reconstruction.pgm");
  outputs.emplace_back("exact_region.pgm", dir / "exact_region.pgm");
  outputs.emplace_back("error_map.pgm", dir / "error_map.pgm");

  ProbeOutcome out;
  out.run_dir = dir;
  out.false_positives = err.false_positives;
  out.false_negatives = err.false_negatives;
  out.error_area_fraction = err.error_area();
  out.wall_seconds = seconds_since(t0);

  {
    std::ofstream os(dir / "error_summary.csv");
    char buf[160];
    std::snprintf(buf, sizeof buf, "false_positives,false_negatives,fp_area,fn_area,error_area\n%zu,%zu,%.17g,%.17g,%.17g\n",
                  err.false_positives, err.false_negatives,
                  double(err.false_positives) * grid.cell_area(),
                  double(err.false_negatives) * grid.cell_area(), err.error_area());
    os << buf;
    outputs.emplace_back("error_summary.csv", dir / "error_summary.csv");
  }

  nlohmann::json manifest;
  manifest["config"] = cfg.canonical_text();
  manifest["config_hash"] = cfg.run_name();
  manifest["workers"] = params.workers;
  manifest["wall_seconds"] = out.wall_seconds;
  manifest["simd_backend"] = kernels::active_backend().name;
  manifest["archives"] = {{"data", hex64(fnv1a64_file(data_archive))},
                          {"calibration", hex64(fnv1a64_file(calib_archive))}};
  nlohmann::json files = nlohmann::json::object();
  for (auto& [name, path] : outputs) files[name] = hex64(fnv1a64_file(path));
  manifest["outputs"] = files;
  std::ofstream os(dir / "manifest.json");
  os << manifest.dump(2) << "\n";

  return out;
}

VolumeCurve cmd_curve(const ExperimentConfig& cfg, const std::filesystem::path& archive,
                      const std::string& family, double y,
                      const std::filesystem::path& out_csv) {
  cfg.validate();
  MeasurementSet data = read_measurement_archive(archive);
  if (!data.config.compatible_with(cfg.measurement))
    throw std::invalid_argument("curve: config sampling does not match the archive");
  ProfileFamily fam;
  if (family == "half_space")
    fam = ProfileFamily::half_spaces();
  else if (family == "disk_probe")
    fam = ProfileFamily::disk_probes(y);
  else
    throw std::invalid_argument("curve: family must be half_space or disk_probe");
  ProbeParameters params = cfg.make_probe_params();
  VolumeCurve curve = volume_curve(fam, data, params);
  write_volume_curve_csv(out_csv, curve);
  return curve;
}

namespace {

SelfTestCheck run_check(const std::string& name, const std::function<std::string()>& body) {
  SelfTestCheck c{name, false, ""};
  try {
    c.detail = body();
    c.pass = true;
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  return c;
}

void expect(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace

std::vector<SelfTestCheck> cmd_selftest(unsigned workers) {
  std::vector<SelfTestCheck> checks;
  if (workers == 0) workers = default_workers();

  checks.push_back(run_check("kernels_equivalence", [] {
    std::mt19937_64 eng(7);
    std::normal_distribution<double> g;
    const std::size_t n = 1003;
    std::vector<double> x(n), y0(n), y1(n), north(n + 2), south(n + 2);
    for (auto& v : x) v = g(eng);
    for (auto& v : north) v = g(eng);
    for (auto& v : south) v = g(eng);
    for (std::size_t i = 0; i < n; ++i) y0[i] = y1[i] = g(eng);
    const auto& sc = kernels::scalar_backend();
    const auto& ac = kernels::active_backend();
    sc.axpy(0.37, x.data(), y0.data(), n);
    ac.axpy(0.37, x.data(), y1.data(), n);
    double d0 = sc.dot(y0.data(), x.data(), n), d1 = ac.dot(y1.data(), x.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      expect(std::abs(y0[i] - y1[i]) <= 1e-12 * (1.0 + std::abs(y0[i])), "axpy variants differ");
    expect(std::abs(d0 - d1) <= 1e-10 * (1.0 + std::abs(d0)), "dot variants differ");
    return std::string("backend: ") + ac.name;
  }));

  checks.push_back(run_check("time_operators", [] {
    MeasurementConfig cfg;
    cfg.nx = 4;
    cfg.nt = 160;
    cfg.T = 1.0;
    cfg.n_space = 8;
    const double h = cfg.dt_samp();
    BoundaryTrace f(cfg.nt, cfg.nx, h);
    std::mt19937_64 eng(3);
    std::normal_distribution<double> g;
    for (auto& v : f.samples) v = g(eng);
    BoundaryTrace half(cfg.half_slots(), cfg.nx, h);
    for (int j = 0; j < half.n_slots; ++j)
      for (int k = 0; k < cfg.nx; ++k) half.at(j, k) = f.at(j, k);
    BoundaryTrace rr = apply_time_reversal(apply_time_reversal(half));
    for (std::size_t i = 0; i < rr.samples.size(); ++i)
      expect(rr.samples[i] == half.samples[i], "R is not an involution");
    BoundaryTrace ones(cfg.nt, cfg.nx, h);
    for (auto& v : ones.samples) v = 1.0;
    BoundaryTrace j1 = apply_J(ones);
    for (int j = 0; j < j1.n_slots; ++j)
      for (int k = 0; k < cfg.nx; ++k)
        expect(std::abs(j1.at(j, k) - (cfg.T - (j + 0.5) * h)) < 1e-12, "J(1) != T - t");
    return std::string("ok");
  }));

  checks.push_back(run_check("tikhonov_lemma", [] {
    DenseMatrix A(2, 2);
    A.at(0, 0) = 1.0;
    std::vector<double> y{1.0, 1.0};
    auto rep = tikhonov_limit_check(A, y, {1e-2, 1e-6, 1e-12});
    for (std::size_t i = 0; i < rep.alphas.size(); ++i) {
      double expected = rep.alphas[i] / (1.0 + rep.alphas[i]);
      expect(std::abs(rep.errors[i] - expected) < 1e-9, "diag case off the analytic error");
    }
    std::mt19937_64 eng(11);
    std::normal_distribution<double> g;
    DenseMatrix B(5, 5);
    DenseMatrix L(5, 3), R(3, 5);
    for (auto& v : L.a) v = g(eng);
    for (auto& v : R.a) v = g(eng);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += L.at(r, k) * R.at(k, c);
        B.at(r, c) = s;
      }
    std::vector<double> y2(5);
    for (auto& v : y2) v = g(eng);
    auto rep2 = tikhonov_limit_check(B, y2, {1e-12});
    expect(rep2.errors[0] < 1e-6, "rank-3 limit error too large");
    return std::string("ok");
  }));

  checks.push_back(run_check("geometry_oracles", [] {
    Obstacle disk = Obstacle::disk({0.5, 0.5}, 0.3);
    Obstacle square = Obstacle::rotated_square({0.5, 0.5}, 0.424, 0.7853981633974483);
    expect(std::abs(distance_to_obstacle({0.5, 0.0}, disk) - 0.2) < 1e-12, "disk clearance");
    expect(std::abs(distance_to_obstacle({0.5, 0.0}, square) - (0.5 - 0.424 / std::sqrt(2.0))) <
               1e-12,
           "square clearance");
    RasterGrid grid(400);
    for (double r : {0.2, 0.35}) {
      BoundaryProfile p = BoundaryProfile::disk_probe({0.3, 0.0}, r, 1.0);
      double frac = influence_mask(p, grid).area();
      expect(std::abs(frac - exact_volume_M(p)) < 2.0 / grid.n, "raster vs analytic volume");
    }
    BoundaryProfile hs = BoundaryProfile::half_space(0.25, 1.0);
    Mask with = influence_mask_with_obstacle(hs, disk, grid);
    Mask without = influence_mask(hs, grid);
    for (std::size_t i = 0; i < with.cells.size(); ++i)
      expect(with.cells[i] <= without.cells[i], "M_Sigma not inside M");
    return std::string("ok");
  }));

  checks.push_back(run_check("archive_format", [&] {
    MeasurementConfig cfg;
    cfg.nx = 3;
    cfg.nt = 8;
    cfg.T = 1.0;
    cfg.n_space = 6;
    MeasurementSet set;
    set.config = cfg;
    set.traces.assign(3, BoundaryTrace(8, 3, cfg.dt_samp()));
    std::mt19937_64 eng(5);
    std::normal_distribution<double> g;
    for (auto& tr : set.traces)
      for (auto& v : tr.samples) v = g(eng);
    auto dir = std::filesystem::temp_directory_path() / "bcwave_selftest";
    std::filesystem::create_directories(dir);
    auto path = dir / "roundtrip.ndm";
    write_measurement_archive(path, set);
    MeasurementSet back = read_measurement_archive(path);
    expect(back.traces.size() == set.traces.size(), "trace count changed");
    for (int k = 0; k < 3; ++k)
      expect(back.traces[k].samples == set.traces[k].samples, "samples changed in roundtrip");
    // corrupt the magic
    std::fstream fs(path, std::ios::in | std::ios::out | std::ios::binary);
    fs.seekp(0);
    fs.put('X');
    fs.close();
    bool threw = false;
    try {
      read_measurement_archive(path);
    } catch (const ArchiveFormatError&) {
      threw = true;
    }
    expect(threw, "corrupted header was not rejected");
    return std::string("ok");
  }));

  checks.push_back(run_check("blago_identity_coarse", [&] {
    MeasurementConfig cfg;
    cfg.nx = 20;
    cfg.nt = 800;
    cfg.T = 1.0;
    cfg.n_space = 100;
    MeasurementSet set = simulate_basis(Obstacle::none(), cfg, workers);
    SimGrid grid = SimGrid::for_config(cfg);
    std::mt19937_64 eng(17);
    std::uniform_int_distribution<int> slot(0, cfg.half_slots() - 1);
    std::uniform_int_distribution<int> cell(0, cfg.nx - 1);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int pair = 0; pair < 2; ++pair) {
      std::vector<SlotValue> f, hsrc;
      for (int t = 0; t < 6; ++t) f.push_back({slot(eng), cell(eng), g(eng)});
      for (int t = 0; t < 6; ++t) hsrc.push_back({slot(eng), cell(eng), g(eng)});
      BoundaryTrace kh = apply_K(hsrc, set);
      BoundaryTrace fd(cfg.half_slots(), cfg.nx, cfg.dt_samp());
      for (const auto& sv : f) fd.at(sv.slot, sv.cell) += sv.value;
      double lhs = boundary_inner_product(fd, kh, cfg.half_slots());
      WaveField uf = interior_snapshot(NeumannSource::from_coefficients(f, cfg), Obstacle::none(),
                                       cfg.T, grid);
      WaveField uh = interior_snapshot(NeumannSource::from_coefficients(hsrc, cfg),
                                       Obstacle::none(), cfg.T, grid);
      double rhs = uf.inner(uh);
      double scale = std::sqrt(uf.norm2() * uh.norm2());
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    expect(worst < 0.05, "coarse boundary-interior identity above 5% (" + std::to_string(worst) + ")");
    char buf[64];
    std::snprintf(buf, sizeof buf, "max relative error %.3g", worst);
    return std::string(buf);
  }));

  return checks;
}

}  // namespace bcwave
