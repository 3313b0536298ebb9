#pragma once

#include <vector>

#include "bcwave/linalg.hpp"
#include "bcwave/measurement.hpp"

namespace bcwave {

struct Slot {
  int slot = 0;
  int cell = 0;
};

// Pulse slots supported in S_tau = {(t,x) : t in [T - tau(x), T]}; slot j on
// receiver k belongs when its left edge t_j = j*h is >= T - tau(x_k).
struct STauIndex {
  BoundaryProfile profile;
  MeasurementConfig config;
  std::vector<Slot> slots;

  double slot_measure() const { return config.slot_measure(); }
  bool empty() const { return slots.empty(); }
};

STauIndex build_stau_index(const BoundaryProfile& profile, const MeasurementConfig& cfg);

// Rf(t) = f(T - t) on slot values: j -> n-1-j per receiver (exact for the
// midpoint slot convention).
BoundaryTrace apply_time_reversal(const BoundaryTrace& f);

// Jf(t) = 1/2 int_t^{2T-t} f(s) ds, (0,2T) -> (0,T).  Half-weight endpoint
// rule; exact on piecewise-constant inputs evaluated at slot midpoints.
BoundaryTrace apply_J(const BoundaryTrace& f);

// K = J L_{2T} Theta - R L_T R J Theta applied to a source in C given by
// slot coefficients; returns a trace on (0,T) x Gamma.  Matrix-free route:
// two response syntheses plus time integrals.
BoundaryTrace apply_K(const std::vector<SlotValue>& coeffs, const MeasurementSet& data);

// Galerkin right-hand side: slot mean of b(t,x) = T - t, i.e. T - t_j - h/2.
std::vector<double> assemble_rhs_b(const STauIndex& index);

// Dense Galerkin matrix of K restricted to S_tau.  Algebraically identical to
// the matrix-free route (prefix sums of the basis responses make each entry
// O(1)); equivalence-tested against apply_K.
DenseMatrix assemble_ktau(const STauIndex& index, const MeasurementSet& data);

struct ControlSolution {
  std::vector<double> coefficients;
  double volume_estimate = 0.0;
  int cg_iterations = 0;
  double alpha = 0.0;
  bool curvature_breakdown = false;
  std::vector<double> residual_history;  // relative residual per iteration
  std::vector<double> volume_history;    // (f, b) per iteration
};

// CG on (K_tau + alpha) f = b from f = 0, stopped after n_cg iterations or at
// relative residual 1e-12.  volume_estimate = (f, b) in L2(S_tau).
// Indefinite directions (noise) flag curvature_breakdown and return the last
// iterate.  Systems up to `dense_threshold` slots use the assembled matrix.
ControlSolution solve_control(const STauIndex& index, const MeasurementSet& data, double alpha,
                              int n_cg, int dense_threshold = 4096);

struct TikhonovReport {
  std::vector<double> alphas;
  std::vector<double> errors;  // ||A x_alpha - P y||
};

// Regularization-limit harness: x_alpha = (A^T A + alpha)^-1 A^T y computed
// directly, P the orthogonal projector onto range(A) via an orthonormal
// basis (Jacobi SVD).
TikhonovReport tikhonov_limit_check(const DenseMatrix& A, const std::vector<double>& y,
                                    std::vector<double> alphas);

}  // namespace bcwave
