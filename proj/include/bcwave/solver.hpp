#pragma once

#include <stdexcept>
#include <vector>

#include "bcwave/geometry.hpp"
#include "bcwave/measurement.hpp"

namespace bcwave {

struct SolverDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Explicit leapfrog grid: nodes at (i*dx, j*dx), i,j = 0..n_space.  The time
// step divides the output slot; slot midpoints land on steps when
// steps_per_slot is even and are averaged from the two bracketing steps when
// it is odd.
struct SimGrid {
  int n_space = 0;
  double dx = 0.0;
  double dt = 0.0;
  double slot_width = 0.0;  // output sampling interval h
  int steps_per_slot = 0;

  double courant() const;

  // dt = h / s with s the smallest integer keeping dt <= dx/2.
  static SimGrid for_config(const MeasurementConfig& cfg);

  // Explicit parameters; throws on instability (courant >= 1).
  static SimGrid make(int n_space, double slot_width, int steps_per_slot);
};

// Piecewise-constant Neumann flux on Gamma: a combination of unit pulses
// 1_[jh,(j+1)h)(t) * 1_{Gamma_k}(x), scaled by `amplitude`.
struct NeumannSource {
  double amplitude = 1.0;
  double pulse_width = 0.0;
  int n_cells = 0;
  std::vector<SlotValue> slots;

  static NeumannSource zero(const MeasurementConfig& cfg);
  static NeumannSource basis_pulse(int cell, const MeasurementConfig& cfg);
  static NeumannSource from_coefficients(std::vector<SlotValue> coeffs,
                                         const MeasurementConfig& cfg);
};

// Interior state on the solver nodes with the trapezoid quadrature of
// L2(M \ Sigma); obstacle nodes carry zero weight and zero value.
struct WaveField {
  int nodes = 0;  // per side
  double dx = 0.0;
  std::vector<double> u;
  std::vector<double> quad_w;

  double inner(const WaveField& o) const;
  double integral() const;
  double norm2() const { return inner(*this); }
};

// One leapfrog simulation.  Owns its arrays; distinct instances never share
// mutable state, so independent runs parallelize freely.
class WaveSim {
 public:
  WaveSim(const NeumannSource& source, const Obstacle& obstacle, const SimGrid& grid);

  void step();
  long step_index() const { return step_; }
  double time() const { return step_ * grid_.dt; }
  const SimGrid& grid() const { return grid_; }

  // Cell-averaged boundary values per receiver, the discrete dual of the
  // pulse sources (makes the response matrix exactly reciprocal).
  void read_receivers(double* out, int nx) const;

  // Conserved discrete energy of the leapfrog scheme (valid once the source
  // is off).
  double energy() const;

  WaveField snapshot() const;

 private:
  void apply_L(const double* u, double* out) const;

  SimGrid grid_;
  int W_ = 0;
  NeumannSource src_;
  long step_ = 0;
  int current_slot_ = -1;
  bool source_done_ = false;
  std::vector<double> active_;  // per-cell coefficient of the current slot
  std::vector<double> up_, uc_, un_;
  std::vector<std::uint8_t> free_;
  std::vector<double> mass_;

  struct Span {
    std::size_t offset;
    std::size_t len;
  };
  std::vector<Span> spans_;

  struct SpecialNode {
    int idx;
    int n_nb;
    int nb[4];
    double coeff[4];
    double self_coeff;
  };
  std::vector<SpecialNode> specials_;

  struct SourceNode {
    int idx;
    int k0, k1;
    double w0, w1;
  };
  std::vector<SourceNode> source_nodes_;

  struct Receiver {
    int first_node;
    std::vector<double> w;
  };
  std::vector<Receiver> receivers_;
};

struct SimResult {
  BoundaryTrace trace;
  WaveField field;
};

// Runs the leapfrog over [0, duration], recording slot-midpoint receiver
// readings; returns the trace and the final interior field.
SimResult step_simulation(const NeumannSource& source, const Obstacle& obstacle,
                          double duration, const SimGrid& grid);

// The nx basis-pulse experiments over [0, 2T].  Traces are stored normalized
// to unit pulse amplitude, so control coefficients always represent the
// source function itself regardless of the experiment's drive level.
MeasurementSet simulate_basis(const Obstacle& obstacle, const MeasurementConfig& cfg,
                              unsigned workers = 1, double pulse_amplitude = 1.0);

// u^f(at, .) — test oracle; the inverse pipeline never touches it.
WaveField interior_snapshot(const NeumannSource& source, const Obstacle& obstacle,
                            double at, const SimGrid& grid);

}  // namespace bcwave
