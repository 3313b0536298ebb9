#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/geometry.hpp"
#include "bcwave/measurement.hpp"
#include "bcwave/probing.hpp"

namespace bcwave {

struct ArchiveFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary measurement container, little-endian throughout:
//   "NDMAP01"  (7 magic bytes)
//   u32 N_x, u32 N_t, u32 n_space
//   f64 T, f64 dt_samp
//   obstacle: u8 kind (0 none, 1 disk, 2 square), f64 cx, cy, size, angle
//   noise:    u8 flag, f64 snr_db, u64 seed, f64 measured_power_db
//   samples:  N_x * N_t * N_x f64 in (source, time, receiver) order
void write_measurement_archive(const std::filesystem::path& path, const MeasurementSet& set);
MeasurementSet read_measurement_archive(const std::filesystem::path& path);

// Masks as binary PGM (P5), one byte per cell, row-major from the top-left of
// the unit square (image row 0 holds the cells with the largest x2).
void write_pgm(const std::filesystem::path& path, const RasterGrid& grid,
               const std::vector<std::uint8_t>& values);
void write_pgm_mask(const std::filesystem::path& path, const Mask& mask);
Mask read_pgm_mask(const std::filesystem::path& path);  // >= 128 marks a cell

void write_volume_curve_csv(const std::filesystem::path& path, const VolumeCurve& curve);
void write_solution_csv(const std::filesystem::path& path, const ControlSolution& sol,
                        std::size_t slot_count);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

}  // namespace bcwave
