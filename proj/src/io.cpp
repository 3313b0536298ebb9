#include "bcwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace bcwave {

namespace {

constexpr char kMagic[7] = {'N', 'D', 'M', 'A', 'P', '0', '1'};

void put_bytes(std::ostream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), std::streamsize(n));
}

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
  put_bytes(os, buf, sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw ArchiveFormatError("archive: truncated file");
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_measurement_archive(const std::filesystem::path& path, const MeasurementSet& set) {
  set.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("archive: cannot open " + path.string() + " for writing");
  put_bytes(os, kMagic, sizeof kMagic);
  put_le<std::uint32_t>(os, std::uint32_t(set.config.nx));
  put_le<std::uint32_t>(os, std::uint32_t(set.config.nt));
  put_le<std::uint32_t>(os, std::uint32_t(set.config.n_space));
  put_le<double>(os, set.config.T);
  put_le<double>(os, set.config.dt_samp());

  const Obstacle& ob = set.obstacle;
  std::uint8_t kind = 0;
  double cx = 0, cy = 0, size = 0, angle = 0;
  switch (ob.kind()) {
    case Obstacle::Kind::None:
      break;
    case Obstacle::Kind::Disk:
      kind = 1;
      cx = ob.center().x;
      cy = ob.center().y;
      size = ob.radius();
      break;
    case Obstacle::Kind::RotatedSquare:
      kind = 2;
      cx = ob.center().x;
      cy = ob.center().y;
      size = ob.side();
      angle = ob.angle();
      break;
  }
  put_le<std::uint8_t>(os, kind);
  put_le<double>(os, cx);
  put_le<double>(os, cy);
  put_le<double>(os, size);
  put_le<double>(os, angle);

  put_le<std::uint8_t>(os, set.noise ? 1 : 0);
  put_le<double>(os, set.noise ? set.noise->snr_db : 0.0);
  put_le<std::uint64_t>(os, set.noise ? set.noise->seed : 0);
  put_le<double>(os, set.noise ? set.noise->measured_power_db : 0.0);

  for (const auto& tr : set.traces)
    for (double v : tr.samples) put_le<double>(os, v);
  if (!os) throw std::runtime_error("archive: write failed for " + path.string());
}

MeasurementSet read_measurement_archive(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("archive: cannot open " + path.string());
  char magic[7];
  if (!is.read(magic, 7) || std::memcmp(magic, kMagic, 7) != 0)
    throw ArchiveFormatError("archive: bad magic (not an NDMAP01 file)");

  MeasurementSet set;
  set.config.nx = (int)get_le<std::uint32_t>(is);
  set.config.nt = (int)get_le<std::uint32_t>(is);
  set.config.n_space = (int)get_le<std::uint32_t>(is);
  set.config.T = get_le<double>(is);
  double dt_samp = get_le<double>(is);
  if (set.config.nx < 1 || set.config.nx > 100000 || set.config.nt < 2 ||
      set.config.nt > 10000000 || set.config.n_space < 2)
    throw ArchiveFormatError("archive: implausible header fields");
  if (std::abs(dt_samp - set.config.dt_samp()) > 1e-12)
    throw ArchiveFormatError("archive: inconsistent sampling interval");

  std::uint8_t kind = get_le<std::uint8_t>(is);
  double cx = get_le<double>(is), cy = get_le<double>(is);
  double size = get_le<double>(is), angle = get_le<double>(is);
  try {
    switch (kind) {
      case 0:
        set.obstacle = Obstacle::none();
        break;
      case 1:
        set.obstacle = Obstacle::disk({cx, cy}, size);
        break;
      case 2:
        set.obstacle = Obstacle::rotated_square({cx, cy}, size, angle);
        break;
      default:
        throw ArchiveFormatError("archive: unknown obstacle kind");
    }
  } catch (const std::invalid_argument& e) {
    throw ArchiveFormatError(std::string("archive: invalid obstacle descriptor: ") + e.what());
  }

  std::uint8_t has_noise = get_le<std::uint8_t>(is);
  NoiseSpec ns;
  ns.snr_db = get_le<double>(is);
  ns.seed = get_le<std::uint64_t>(is);
  ns.measured_power_db = get_le<double>(is);
  if (has_noise > 1) throw ArchiveFormatError("archive: bad noise flag");
  if (has_noise) set.noise = ns;

  set.traces.assign(set.config.nx, BoundaryTrace(set.config.nt, set.config.nx, set.config.dt_samp()));
  for (auto& tr : set.traces)
    for (double& v : tr.samples) v = get_le<double>(is);
  char extra;
  if (is.read(&extra, 1)) throw ArchiveFormatError("archive: trailing bytes");
  return set;
}

void write_pgm(const std::filesystem::path& path, const RasterGrid& grid,
               const std::vector<std::uint8_t>& values) {
  if (values.size() != std::size_t(grid.n) * grid.n)
    throw std::invalid_argument("pgm: payload size mismatch");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("pgm: cannot open " + path.string() + " for writing");
  os << "P5\n" << grid.n << " " << grid.n << "\n255\n";
  // image row 0 is the top of the domain (j = n-1)
  for (int row = 0; row < grid.n; ++row) {
    int j = grid.n - 1 - row;
    put_bytes(os, values.data() + std::size_t(j) * grid.n, std::size_t(grid.n));
  }
  if (!os) throw std::runtime_error("pgm: write failed for " + path.string());
}

void write_pgm_mask(const std::filesystem::path& path, const Mask& mask) {
  std::vector<std::uint8_t> values(mask.cells.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = mask.cells[i] ? 255 : 0;
  write_pgm(path, mask.grid, values);
}

Mask read_pgm_mask(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("pgm: cannot open " + path.string());
  std::string tag;
  int w = 0, h = 0, maxv = 0;
  is >> tag >> w >> h >> maxv;
  if (tag != "P5" || maxv != 255 || w < 2 || w != h)
    throw ArchiveFormatError("pgm: expected a square binary P5 mask");
  is.get();  // single whitespace after header
  Mask mask((RasterGrid(w)));
  std::vector<char> row(w);
  for (int r = 0; r < h; ++r) {
    if (!is.read(row.data(), w)) throw ArchiveFormatError("pgm: truncated payload");
    int j = h - 1 - r;
    for (int i = 0; i < w; ++i)
      mask.at(i, j) = (static_cast<unsigned char>(row[i]) >= 128) ? 1 : 0;
  }
  return mask;
}

void write_volume_curve_csv(const std::filesystem::path& path, const VolumeCurve& curve) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
  os << "r,estimate,reference\n";
  char buf[128];
  for (std::size_t l = 0; l < curve.radii.size(); ++l) {
    double ref = l < curve.reference.size() ? curve.reference[l] : 0.0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", curve.radii[l], curve.estimates[l], ref);
    os << buf;
  }
}

void write_solution_csv(const std::filesystem::path& path, const ControlSolution& sol,
                        std::size_t slot_count) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
  os << "alpha,n_cg,slot_count,volume_estimate,residuals\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%d,%zu,%.17g", sol.alpha, sol.cg_iterations, slot_count,
                sol.volume_estimate);
  os << buf;
  for (double r : sol.residual_history) {
    std::snprintf(buf, sizeof buf, ",%.17g", r);
    os << buf;
  }
  os << "\n";
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checksum: cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ULL;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!is) break;
  }
  return h;
}

}  // namespace bcwave
