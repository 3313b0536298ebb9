#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bcwave/config.hpp"
#include "bcwave/harness.hpp"
#include "bcwave/io.hpp"
#include "bcwave/solver.hpp"

using namespace bcwave;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "bcwave_harness_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// A deliberately tiny experiment so command-level tests stay fast.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.apply_preset("noiseless");
  cfg.measurement.nx = 8;
  cfg.measurement.nt = 160;
  cfg.measurement.T = 1.0;
  cfg.measurement.n_space = 32;
  cfg.n_radii = 5;
  cfg.probe_centers = 3;
  cfg.raster_n = 40;
  cfg.workers = 2;
  cfg.out_dir = (temp_dir() / "runs").string();
  cfg.validate();
  return cfg;
}

}  // namespace

TEST_CASE("config parsing, presets and overrides") {
  ExperimentConfig cfg = ExperimentConfig::from_text(
      "schema_version = 1\n"
      "preset = snr7\n"
      "scale = full\n"
      "obstacle = disk\n"
      "obstacle_radius = 0.25\n"
      "seed = 9\n"
      "# comment\n"
      "epsilon = 2e-3\n");
  CHECK(cfg.noisy);
  CHECK(cfg.snr_db == 7.0);
  CHECK(cfg.alpha == doctest::Approx(1e-3));
  CHECK(cfg.epsilon == doctest::Approx(2e-3));  // explicit key overrides the preset
  CHECK(cfg.measurement.n_space == 400);
  CHECK(cfg.n_radii == 201);
  CHECK(cfg.probe_centers == 20);
  CHECK(cfg.obstacle_radius == 0.25);
  CHECK(cfg.seed == 9);

  ExperimentConfig base;
  base.apply_preset("noiseless");
  CHECK(base.epsilon == doctest::Approx(5e-4));
  CHECK(base.alpha == 0.0);
  CHECK(base.n_cg == 10);
  base.apply_preset("snr14");
  CHECK(base.epsilon == doctest::Approx(4e-3));
  CHECK(base.snr_db == 14.0);
  CHECK(base.alpha == 0.0);

  CHECK_THROWS_AS(ExperimentConfig::from_text("schema_version = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_text("no_such_key = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_text("preset = fancy\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_text("nx = twenty\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_text("nx\n"), std::invalid_argument);
}

TEST_CASE("config hashing is canonical") {
  ExperimentConfig a = tiny_config();
  ExperimentConfig b = tiny_config();
  b.out_dir = "elsewhere";  // output location does not change the run identity
  b.workers = 1;
  CHECK(a.hash() == b.hash());
  b.seed = 123;
  CHECK(a.hash() != b.hash());
  CHECK(a.run_name().size() == 16);
}

TEST_CASE("archive roundtrip and corruption detection") {
  MeasurementConfig mc;
  mc.nx = 3;
  mc.nt = 10;
  mc.T = 0.0125;
  mc.n_space = 8;
  MeasurementSet set;
  set.config = mc;
  set.obstacle = Obstacle::disk({0.4, 0.6}, 0.2);
  set.traces.assign(3, BoundaryTrace(10, 3, mc.dt_samp()));
  double v = 0.0;
  for (auto& tr : set.traces)
    for (auto& s : tr.samples) s = (v += 0.125);
  set.noise = NoiseSpec{14.0, 77, -31.5};

  auto path = temp_dir() / "roundtrip.ndm";
  write_measurement_archive(path, set);
  MeasurementSet back = read_measurement_archive(path);
  CHECK(back.config.nx == 3);
  CHECK(back.config.nt == 10);
  CHECK(back.config.T == mc.T);
  CHECK(back.obstacle.kind() == Obstacle::Kind::Disk);
  CHECK(back.obstacle.radius() == 0.2);
  REQUIRE(back.noise.has_value());
  CHECK(back.noise->snr_db == 14.0);
  CHECK(back.noise->seed == 77);
  CHECK(back.noise->measured_power_db == -31.5);
  for (int k = 0; k < 3; ++k) CHECK(back.traces[k].samples == set.traces[k].samples);

  SUBCASE("bad magic") {
    auto bad = temp_dir() / "bad_magic.ndm";
    std::filesystem::copy_file(path, bad, std::filesystem::copy_options::overwrite_existing);
    std::fstream fs(bad, std::ios::in | std::ios::out | std::ios::binary);
    fs.put('Z');
    fs.close();
    CHECK_THROWS_AS(read_measurement_archive(bad), ArchiveFormatError);
  }

  SUBCASE("truncation") {
    auto cut = temp_dir() / "cut.ndm";
    std::string bytes = slurp(path);
    std::ofstream os(cut, std::ios::binary);
    os.write(bytes.data(), (std::streamsize)bytes.size() - 16);
    os.close();
    CHECK_THROWS_AS(read_measurement_archive(cut), ArchiveFormatError);
  }

  SUBCASE("trailing garbage") {
    auto fat = temp_dir() / "fat.ndm";
    std::string bytes = slurp(path) + "extra";
    std::ofstream os(fat, std::ios::binary);
    os.write(bytes.data(), (std::streamsize)bytes.size());
    os.close();
    CHECK_THROWS_AS(read_measurement_archive(fat), ArchiveFormatError);
  }
}

TEST_CASE("pgm masks: golden bytes and roundtrip") {
  RasterGrid grid(3);
  Mask m(grid);
  m.at(0, 2) = 1;  // top-left corner of the domain -> first payload byte
  m.at(2, 0) = 1;  // bottom-right corner -> last payload byte
  auto path = temp_dir() / "mask.pgm";
  write_pgm_mask(path, m);
  std::string bytes = slurp(path);
  std::string expect = std::string("P5\n3 3\n255\n") +
                       std::string("\xff\x00\x00\x00\x00\x00\x00\x00\xff", 9);
  CHECK(bytes == expect);

  Mask back = read_pgm_mask(path);
  CHECK(back.cells == m.cells);
}

TEST_CASE("csv writers") {
  VolumeCurve c;
  c.family = "half_space";
  c.radii = {0.25, 0.5};  // dyadic values print exactly under %.17g
  c.estimates = {0.125, 0.5};
  c.reference = {0.25, 0.5};
  auto path = temp_dir() / "curve.csv";
  write_volume_curve_csv(path, c);
  CHECK(slurp(path) == "r,estimate,reference\n0.25,0.125,0.25\n0.5,0.5,0.5\n");
}

TEST_CASE("fnv1a64 reference value") {
  CHECK(fnv1a64("abc", 3) == 0xe71fa2190541574bULL);
}

TEST_CASE("cmd_simulate is reproducible and self-describing") {
  ExperimentConfig cfg = tiny_config();
  auto out1 = cmd_simulate(cfg);
  auto out2 = cmd_simulate(cfg);
  CHECK(out1.checksum == out2.checksum);
  CHECK(std::filesystem::exists(out1.archive));

  ExperimentConfig noisy = cfg;
  noisy.apply_preset("snr7");
  noisy.validate();
  auto out3 = cmd_simulate(noisy);
  MeasurementSet set = read_measurement_archive(out3.archive);
  REQUIRE(set.noise.has_value());
  CHECK(set.noise->snr_db == 7.0);
  CHECK(out3.checksum != out1.checksum);
}

TEST_CASE("cmd_probe end to end on tiny archives") {
  ExperimentConfig empty_cfg = tiny_config();
  auto calib = cmd_simulate(empty_cfg);

  ExperimentConfig disk_cfg = tiny_config();
  disk_cfg.obstacle_kind = "disk";
  disk_cfg.obstacle_center = {0.5, 0.5};
  disk_cfg.obstacle_radius = 0.3;
  auto data = cmd_simulate(disk_cfg);

  ExperimentConfig probe_cfg = disk_cfg;
  probe_cfg.out_dir = (temp_dir() / "probe_run").string();
  ProbeOutcome out = cmd_probe(probe_cfg, data.archive, calib.archive);

  for (const char* name :
       {"reconstruction.pgm", "exact_region.pgm", "error_map.pgm", "error_summary.csv",
        "clearances.csv", "manifest.json", "halfspace_calibration.csv", "difference_y00.csv"})
    CHECK(std::filesystem::exists(out.run_dir / name));

  nlohmann::json manifest = nlohmann::json::parse(slurp(out.run_dir / "manifest.json"));
  CHECK(manifest.contains("config"));
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.contains("outputs"));
  CHECK(manifest.contains("wall_seconds"));
  CHECK(manifest["outputs"].contains("reconstruction.pgm"));

  SUBCASE("worker count does not change the numbers") {
    ExperimentConfig serial_cfg = probe_cfg;
    serial_cfg.workers = 1;
    serial_cfg.out_dir = (temp_dir() / "probe_serial").string();
    ProbeOutcome serial = cmd_probe(serial_cfg, data.archive, calib.archive);
    for (const char* name : {"difference_y00.csv", "difference_y01.csv", "halfspace_data.csv",
                             "reconstruction.pgm"})
      CHECK(slurp(serial.run_dir / name) == slurp(out.run_dir / name));
  }

  SUBCASE("incompatible archives are refused") {
    ExperimentConfig other = tiny_config();
    other.measurement.nx = 4;
    other.measurement.n_space = 16;
    other.validate();
    auto small = cmd_simulate(other);
    CHECK_THROWS_WITH_AS(cmd_probe(probe_cfg, data.archive, small.archive),
                         doctest::Contains("incompatible"), std::invalid_argument);
  }
}

TEST_CASE("desk preset simulates the twenty basis records") {
  ExperimentConfig cfg;  // defaults: noiseless preset, desk scale, no obstacle
  cfg.out_dir = (temp_dir() / "desk").string();
  cfg.workers = 2;
  cfg.validate();
  auto out = cmd_simulate(cfg);
  MeasurementSet set = read_measurement_archive(out.archive);
  CHECK(set.traces.size() == 20);
  CHECK(set.obstacle.kind() == Obstacle::Kind::None);
  CHECK_FALSE(set.noise.has_value());
}

TEST_CASE("cmd_curve writes the requested family") {
  ExperimentConfig cfg = tiny_config();
  auto sim = cmd_simulate(cfg);
  auto csv = temp_dir() / "halfspace.csv";
  VolumeCurve c = cmd_curve(cfg, sim.archive, "half_space", 0.0, csv);
  CHECK(c.radii.size() == std::size_t(cfg.n_radii));
  CHECK(std::filesystem::exists(csv));
  CHECK_THROWS_AS(cmd_curve(cfg, sim.archive, "triangles", 0.0, csv), std::invalid_argument);
}

TEST_CASE("selftest passes on a fresh build") {
  auto checks = cmd_selftest(2);
  for (const auto& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
}
