// Command-line front end: simulate / probe / curve / selftest / compare.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "bcwave/harness.hpp"
#include "bcwave/io.hpp"
#include "bcwave/solver.hpp"

namespace {

using bcwave::ExperimentConfig;

// Exit codes by error category: 2 config, 3 format, 4 io, 5 solver.
int fail(const char* category, const std::string& what) {
  std::cerr << "error[" << category << "]: " << what << "\n";
  if (std::string(category) == "config") return 2;
  if (std::string(category) == "format") return 3;
  if (std::string(category) == "io") return 4;
  return 5;
}

struct ConfigCli {
  std::string config_file;
  std::string preset;
  std::string scale;
  std::vector<std::string> sets;  // key=value overrides

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_file, "config file (key = value lines)");
    app->add_option("--preset", preset, "noise preset: noiseless | snr14 | snr7");
    app->add_option("--scale", scale, "scale preset: desk | full");
    app->add_option("--set", sets, "override a config key, e.g. --set obstacle=disk")
        ->take_all();
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config_file.empty() ? ExperimentConfig{}
                                               : ExperimentConfig::from_file(config_file);
    if (!preset.empty()) cfg.apply_preset(preset);
    if (!scale.empty()) cfg.apply_scale(scale);
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      cfg.set_key(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain boundary-control obstacle probing on the unit square"};
  app.require_subcommand(1);

  ConfigCli sim_cfg, probe_cfg, curve_cfg;
  std::string data_archive, calib_archive, family = "half_space", curve_out = "curve.csv";
  std::string cmp_a, cmp_b, cmp_out = "error_map.pgm";
  double curve_y = 0.5;
  unsigned selftest_workers = 0;

  auto* sim = app.add_subcommand("simulate", "simulate the basis measurements into an archive");
  sim_cfg.attach(sim);

  auto* probe = app.add_subcommand("probe", "reconstruct the visibility region from archives");
  probe_cfg.attach(probe);
  probe->add_option("--data", data_archive, "measurement archive to probe")->required();
  probe->add_option("--calib", calib_archive, "empty-space calibration archive")->required();

  auto* curve = app.add_subcommand("curve", "volume curve for one profile family");
  curve_cfg.attach(curve);
  curve->add_option("--data", data_archive, "measurement archive")->required();
  curve->add_option("--family", family, "half_space | disk_probe");
  curve->add_option("--y", curve_y, "disk probe center abscissa");
  curve->add_option("--out", curve_out, "output CSV path");

  auto* selftest = app.add_subcommand("selftest", "run the fast invariant suite");
  selftest->add_option("--workers", selftest_workers, "worker threads (0 = hardware)");

  auto* compare = app.add_subcommand("compare", "error map between two PGM masks");
  compare->add_option("--a", cmp_a, "reconstructed mask (PGM)")->required();
  compare->add_option("--b", cmp_b, "reference mask (PGM)")->required();
  compare->add_option("--out", cmp_out, "output error-map PGM");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      auto cfg = sim_cfg.resolve();
      auto out = bcwave::cmd_simulate(cfg);
      std::printf("archive: %s\nchecksum: %016llx\n", out.archive.string().c_str(),
                  (unsigned long long)out.checksum);
    } else if (probe->parsed()) {
      auto cfg = probe_cfg.resolve();
      auto out = bcwave::cmd_probe(cfg, data_archive, calib_archive);
      std::printf("run_dir: %s\nfalse_positives: %zu\nfalse_negatives: %zu\n"
                  "error_area_fraction: %.6g\nwall_seconds: %.2f\n",
                  out.run_dir.string().c_str(), out.false_positives, out.false_negatives,
                  out.error_area_fraction, out.wall_seconds);
    } else if (curve->parsed()) {
      auto cfg = curve_cfg.resolve();
      auto c = bcwave::cmd_curve(cfg, data_archive, family, curve_y, curve_out);
      std::printf("curve: %s (%zu radii) -> %s\n", c.family.c_str(), c.radii.size(),
                  curve_out.c_str());
    } else if (selftest->parsed()) {
      auto checks = bcwave::cmd_selftest(selftest_workers);
      bool all = true;
      for (const auto& c : checks) {
        std::printf("[%s] %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.empty() ? "" : ": ", c.detail.c_str());
        all = all && c.pass;
      }
      if (!all) return fail("selftest", "one or more invariant checks failed");
    } else if (compare->parsed()) {
      bcwave::Mask a = bcwave::read_pgm_mask(cmp_a);
      bcwave::Mask b = bcwave::read_pgm_mask(cmp_b);
      bcwave::ErrorMap em = bcwave::error_map(a, b);
      bcwave::write_pgm(cmp_out, em.grid, em.image);
      std::printf("false_positives,false_negatives,fp_area,fn_area\n%zu,%zu,%.6g,%.6g\n",
                  em.false_positives, em.false_negatives,
                  double(em.false_positives) * em.grid.cell_area(),
                  double(em.false_negatives) * em.grid.cell_area());
    }
  } catch (const bcwave::ArchiveFormatError& e) {
    return fail("format", e.what());
  } catch (const bcwave::SolverDivergence& e) {
    return fail("solver", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what());
  } catch (const std::ios_base::failure& e) {
    return fail("io", e.what());
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    bool io_like = msg.find("cannot open") != std::string::npos ||
                   msg.find("write failed") != std::string::npos;
    return fail(io_like ? "io" : "internal", msg);
  }
  return 0;
}
