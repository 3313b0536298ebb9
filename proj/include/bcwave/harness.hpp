#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bcwave/config.hpp"
#include "bcwave/probing.hpp"

namespace bcwave {

struct SimulateOutcome {
  std::filesystem::path archive;
  std::uint64_t checksum = 0;
};

// Runs the basis experiments (plus optional noising) and writes the NDMAP01
// archive under <out_dir>/<config hash>/.
SimulateOutcome cmd_simulate(const ExperimentConfig& cfg);

struct ProbeOutcome {
  std::filesystem::path run_dir;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double error_area_fraction = 0.0;
  double wall_seconds = 0.0;
};

// Full probing run: volume curves, per-center difference curves, the
// reconstructed region, the geometric optimum, the error map and a manifest.
ProbeOutcome cmd_probe(const ExperimentConfig& cfg, const std::filesystem::path& data_archive,
                       const std::filesystem::path& calib_archive);

// One volume curve from an archive ("half_space", or "disk_probe" at y).
VolumeCurve cmd_curve(const ExperimentConfig& cfg, const std::filesystem::path& archive,
                      const std::string& family, double y,
                      const std::filesystem::path& out_csv);

struct SelfTestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast invariant suite (time-operator identities, regularization lemma,
// geometry oracles, archive format, coarse boundary-interior identity).
std::vector<SelfTestCheck> cmd_selftest(unsigned workers);

}  // namespace bcwave
