#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bcwave/geometry.hpp"
#include "bcwave/measurement.hpp"
#include "bcwave/probing.hpp"

namespace bcwave {

// Experiment description: plain key=value text, schema_version 1.  Presets
// pin the published parameter sets; explicit keys override them.
//
//   noise presets  noiseless : epsilon 5e-4, alpha 0
//                  snr14     : 14 dB, epsilon 4e-3, alpha 0
//                  snr7      : 7 dB, epsilon 4e-3, alpha 1e-3
//   scale presets  desk      : n_space 200, 100 radii, 10 centers
//                  full      : n_space 400, 201 radii, 20 centers
//
// All presets keep nx=20, nt=800, T=1, n_cg=10, radii in [0.1, 0.5].
struct ExperimentConfig {
  int schema_version = 1;
  std::string preset = "noiseless";
  std::string scale = "desk";

  std::string obstacle_kind = "none";  // none | disk | square
  Point obstacle_center{0.5, 0.5};
  double obstacle_radius = 0.3;
  double obstacle_side = 0.424;
  double obstacle_angle = 0.7853981633974483;  // pi/4

  MeasurementConfig measurement;

  bool noisy = false;
  double snr_db = 14.0;
  std::uint64_t seed = 1;

  double epsilon = 5e-4;
  double alpha = 0.0;
  int n_cg = 10;
  int n_radii = 100;
  double r_min = 0.1;
  double r_max = 0.5;
  int probe_centers = 10;
  int raster_n = 200;

  unsigned workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "runs";

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_text(const std::string& text, const std::string& origin = "<text>");

  void apply_preset(const std::string& name);
  void apply_scale(const std::string& name);
  void set_key(const std::string& key, const std::string& value);
  void validate() const;

  Obstacle make_obstacle() const;
  ProbeParameters make_probe_params() const;
  unsigned effective_workers() const;

  // Canonical serialization (fixed key order); its FNV-1a hash names runs.
  std::string canonical_text() const;
  std::uint64_t hash() const;
  std::string run_name() const;  // 16 hex digits
};

}  // namespace bcwave
