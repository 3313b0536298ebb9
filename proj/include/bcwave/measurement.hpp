#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcwave/geometry.hpp"

namespace bcwave {

// Sampling layout of the boundary data: nx receivers at x_k = (k+1/2)/nx on
// the bottom edge, nt time samples over [0, 2T].  Time slot j covers
// [j*h, (j+1)*h) with h = 2T/nt; stored values represent the slot (the field
// at the slot midpoint), which keeps time reversal and the J-quadrature exact
// for piecewise-constant data.
struct MeasurementConfig {
  int nx = 20;
  int nt = 800;
  double T = 1.0;
  int n_space = 400;

  double dt_samp() const { return 2.0 * T / nt; }
  int half_slots() const { return nt / 2; }  // slots covering [0, T)
  double receiver_x(int k) const { return (k + 0.5) / nx; }
  double cell_width() const { return 1.0 / nx; }
  double slot_measure() const { return dt_samp() * cell_width(); }

  void validate() const;
  bool compatible_with(const MeasurementConfig& other) const;
};

struct VoronoiCell {
  Point center;
  double lo = 0.0, hi = 0.0;
};

// Receiver intervals on Gamma; cell k is [(k)/nx, (k+1)/nx] around x_k.
std::vector<VoronoiCell> voronoi_cells(int nx);

// One pulse-basis coefficient: `value` times the unit pulse translated to
// time slot `slot` on receiver cell `cell`.
struct SlotValue {
  int slot = 0;
  int cell = 0;
  double value = 0.0;
};

struct BoundaryTrace {
  int n_slots = 0;
  int n_receivers = 0;
  double dt_samp = 0.0;
  std::vector<double> samples;  // [slot * n_receivers + k]

  BoundaryTrace() = default;
  BoundaryTrace(int slots, int receivers, double dt)
      : n_slots(slots), n_receivers(receivers), dt_samp(dt),
        samples(std::size_t(slots) * receivers, 0.0) {}

  double& at(int j, int k) { return samples[std::size_t(j) * n_receivers + k]; }
  double at(int j, int k) const { return samples[std::size_t(j) * n_receivers + k]; }
  double* row(int j) { return samples.data() + std::size_t(j) * n_receivers; }
  const double* row(int j) const { return samples.data() + std::size_t(j) * n_receivers; }
};

struct NoiseSpec {
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  double measured_power_db = 0.0;  // pooled mean-square signal power, dB
};

// The discretized Neumann-to-Dirichlet data: one [0,2T] response per pulse
// basis source.
struct MeasurementSet {
  MeasurementConfig config;
  Obstacle obstacle = Obstacle::none();
  std::vector<BoundaryTrace> traces;  // length nx
  std::optional<NoiseSpec> noise;

  void validate() const;
};

// Response to an arbitrary source in C, by linearity and time translation of
// the stored basis responses.  Every slot must lie inside (0,T) x Gamma.
BoundaryTrace synthesize_response(const std::vector<SlotValue>& coeffs,
                                  const MeasurementSet& data);

// Additive white Gaussian noise, awgn 'measured' semantics: per basis trace,
// P = mean squared sample, sigma^2 = P / 10^(snr_db/10).  Deterministic in
// (seed, trace index).
MeasurementSet add_awgn(const MeasurementSet& data, double snr_db, std::uint64_t seed);

// L2((0,T') x Gamma) pairing by the rectangle rule over the first
// `window_slots` slots: sum a*b * dt_samp * |Gamma_k|.
double boundary_inner_product(const BoundaryTrace& a, const BoundaryTrace& b, int window_slots);

}  // namespace bcwave
