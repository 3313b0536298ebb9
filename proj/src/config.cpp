#include "bcwave/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bcwave/io.hpp"
#include "bcwave/parallel.hpp"

namespace bcwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (...) {
    throw std::invalid_argument("config: bad integer for " + key + ": '" + v + "'");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_text(ss.str(), path.string());
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, const std::string& origin) {
  // Two passes: presets first so explicit keys override them.
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: " + origin + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    pairs.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  ExperimentConfig cfg;
  for (auto& [k, v] : pairs) {
    if (k == "schema_version") {
      if (parse_int(k, v) != 1) throw std::invalid_argument("config: unsupported schema_version");
    } else if (k == "preset") {
      cfg.apply_preset(v);
    } else if (k == "scale") {
      cfg.apply_scale(v);
    }
  }
  for (auto& [k, v] : pairs)
    if (k != "schema_version" && k != "preset" && k != "scale") cfg.set_key(k, v);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::apply_preset(const std::string& name) {
  preset = name;
  if (name == "noiseless") {
    noisy = false;
    epsilon = 5e-4;
    alpha = 0.0;
  } else if (name == "snr14") {
    noisy = true;
    snr_db = 14.0;
    epsilon = 4e-3;
    alpha = 0.0;
  } else if (name == "snr7") {
    noisy = true;
    snr_db = 7.0;
    epsilon = 4e-3;
    alpha = 1e-3;
  } else {
    throw std::invalid_argument("config: unknown preset '" + name + "'");
  }
  n_cg = 10;
}

void ExperimentConfig::apply_scale(const std::string& name) {
  scale = name;
  measurement.nx = 20;
  measurement.nt = 800;
  measurement.T = 1.0;
  r_min = 0.1;
  r_max = 0.5;
  if (name == "desk") {
    measurement.n_space = 200;
    n_radii = 100;
    probe_centers = 10;
    raster_n = 200;
  } else if (name == "full") {
    measurement.n_space = 400;
    n_radii = 201;
    probe_centers = 20;
    raster_n = 200;
  } else {
    throw std::invalid_argument("config: unknown scale '" + name + "'");
  }
}

void ExperimentConfig::set_key(const std::string& key, const std::string& value) {
  if (key == "obstacle") {
    if (value != "none" && value != "disk" && value != "square")
      throw std::invalid_argument("config: obstacle must be none|disk|square");
    obstacle_kind = value;
  } else if (key == "obstacle_center_x") {
    obstacle_center.x = parse_double(key, value);
  } else if (key == "obstacle_center_y") {
    obstacle_center.y = parse_double(key, value);
  } else if (key == "obstacle_radius") {
    obstacle_radius = parse_double(key, value);
  } else if (key == "obstacle_side") {
    obstacle_side = parse_double(key, value);
  } else if (key == "obstacle_angle") {
    obstacle_angle = parse_double(key, value);
  } else if (key == "nx") {
    measurement.nx = (int)parse_int(key, value);
  } else if (key == "nt") {
    measurement.nt = (int)parse_int(key, value);
  } else if (key == "horizon") {
    measurement.T = parse_double(key, value);
  } else if (key == "n_space") {
    measurement.n_space = (int)parse_int(key, value);
  } else if (key == "noise") {
    if (value == "on")
      noisy = true;
    else if (value == "off")
      noisy = false;
    else
      throw std::invalid_argument("config: noise must be on|off");
  } else if (key == "snr_db") {
    snr_db = parse_double(key, value);
    noisy = true;
  } else if (key == "seed") {
    seed = (std::uint64_t)parse_int(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_double(key, value);
  } else if (key == "alpha") {
    alpha = parse_double(key, value);
  } else if (key == "n_cg") {
    n_cg = (int)parse_int(key, value);
  } else if (key == "n_radii") {
    n_radii = (int)parse_int(key, value);
  } else if (key == "r_min") {
    r_min = parse_double(key, value);
  } else if (key == "r_max") {
    r_max = parse_double(key, value);
  } else if (key == "probe_centers") {
    probe_centers = (int)parse_int(key, value);
  } else if (key == "raster_n") {
    raster_n = (int)parse_int(key, value);
  } else if (key == "workers") {
    workers = (unsigned)parse_int(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  measurement.validate();
  make_obstacle();
  make_probe_params().validate();
  if (probe_centers < 1) throw std::invalid_argument("config: need at least one probe center");
  if (raster_n < 2) throw std::invalid_argument("config: raster_n too small");
}

Obstacle ExperimentConfig::make_obstacle() const {
  if (obstacle_kind == "none") return Obstacle::none();
  if (obstacle_kind == "disk") return Obstacle::disk(obstacle_center, obstacle_radius);
  return Obstacle::rotated_square(obstacle_center, obstacle_side, obstacle_angle);
}

ProbeParameters ExperimentConfig::make_probe_params() const {
  ProbeParameters p;
  p.epsilon = epsilon;
  p.n_radii = n_radii;
  p.r_min = r_min;
  p.r_max = r_max;
  p.alpha = alpha;
  p.n_cg = n_cg;
  p.workers = effective_workers();
  p.probe_centers.resize(probe_centers);
  for (int i = 0; i < probe_centers; ++i) p.probe_centers[i] = (i + 0.5) / probe_centers;
  return p;
}

unsigned ExperimentConfig::effective_workers() const {
  return workers ? workers : default_workers();
}

std::string ExperimentConfig::canonical_text() const {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "schema_version = 1\n"
                "preset = %s\n"
                "scale = %s\n"
                "obstacle = %s\n"
                "obstacle_center_x = %.17g\n"
                "obstacle_center_y = %.17g\n"
                "obstacle_radius = %.17g\n"
                "obstacle_side = %.17g\n"
                "obstacle_angle = %.17g\n"
                "nx = %d\nnt = %d\nhorizon = %.17g\nn_space = %d\n"
                "noise = %s\nsnr_db = %.17g\nseed = %llu\n"
                "epsilon = %.17g\nalpha = %.17g\nn_cg = %d\n"
                "n_radii = %d\nr_min = %.17g\nr_max = %.17g\n"
                "probe_centers = %d\nraster_n = %d\n",
                preset.c_str(), scale.c_str(), obstacle_kind.c_str(), obstacle_center.x,
                obstacle_center.y, obstacle_radius, obstacle_side, obstacle_angle, measurement.nx,
                measurement.nt, measurement.T, measurement.n_space, noisy ? "on" : "off", snr_db,
                (unsigned long long)seed, epsilon, alpha, n_cg, n_radii, r_min, r_max,
                probe_centers, raster_n);
  return buf;
}

std::uint64_t ExperimentConfig::hash() const {
  std::string t = canonical_text();
  return fnv1a64(t.data(), t.size());
}

std::string ExperimentConfig::run_name() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)hash());
  return buf;
}

}  // namespace bcwave
