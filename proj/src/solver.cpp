#include "bcwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bcwave/kernels.hpp"
#include "bcwave/parallel.hpp"

namespace bcwave {

namespace {
constexpr double kTiny = 1e-9;
}

double SimGrid::courant() const { return dt * std::numbers::sqrt2 / dx; }

SimGrid SimGrid::for_config(const MeasurementConfig& cfg) {
  cfg.validate();
  const double h = cfg.dt_samp();
  const double dx = 1.0 / cfg.n_space;
  // smallest step count keeping dt <= dx/2, i.e. courant <= 1/sqrt(2)
  int s = (int)std::ceil(2.0 * h / dx - kTiny);
  if (s < 1) s = 1;
  return make(cfg.n_space, h, s);
}

SimGrid SimGrid::make(int n_space, double slot_width, int steps_per_slot) {
  if (n_space < 2) throw std::invalid_argument("sim grid: n_space too small");
  if (steps_per_slot < 1) throw std::invalid_argument("sim grid: need at least one step per slot");
  if (!(slot_width > 0.0)) throw std::invalid_argument("sim grid: slot width must be positive");
  SimGrid g;
  g.n_space = n_space;
  g.dx = 1.0 / n_space;
  g.slot_width = slot_width;
  g.steps_per_slot = steps_per_slot;
  g.dt = slot_width / steps_per_slot;
  if (g.courant() >= 1.0)
    throw std::invalid_argument("sim grid: unstable (courant >= 1)");
  return g;
}

NeumannSource NeumannSource::zero(const MeasurementConfig& cfg) {
  NeumannSource s;
  s.pulse_width = cfg.dt_samp();
  s.n_cells = cfg.nx;
  return s;
}

NeumannSource NeumannSource::basis_pulse(int cell, const MeasurementConfig& cfg) {
  if (cell < 0 || cell >= cfg.nx) throw std::invalid_argument("basis_pulse: cell out of range");
  NeumannSource s = zero(cfg);
  s.slots.push_back({0, cell, 1.0});
  return s;
}

NeumannSource NeumannSource::from_coefficients(std::vector<SlotValue> coeffs,
                                               const MeasurementConfig& cfg) {
  NeumannSource s = zero(cfg);
  for (const auto& sv : coeffs)
    if (sv.slot < 0 || sv.slot >= cfg.half_slots() || sv.cell < 0 || sv.cell >= cfg.nx)
      throw std::invalid_argument("source: slot outside (0,T) x Gamma");
  s.slots = std::move(coeffs);
  return s;
}

double WaveField::inner(const WaveField& o) const {
  if (o.u.size() != u.size()) throw std::invalid_argument("wave field: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += quad_w[i] * u[i] * o.u[i];
  return s;
}

double WaveField::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += quad_w[i] * u[i];
  return s;
}

WaveSim::WaveSim(const NeumannSource& source, const Obstacle& obstacle, const SimGrid& grid)
    : grid_(grid), W_(grid.n_space + 1), src_(source) {
  if (std::abs(src_.pulse_width - grid_.slot_width) > 1e-12)
    throw std::invalid_argument("solver: source pulse width must equal the sampling interval");
  if (src_.n_cells < 1) throw std::invalid_argument("solver: source needs a cell layout");
  for (const auto& sv : src_.slots)
    if (sv.slot < 0 || sv.cell < 0 || sv.cell >= src_.n_cells || !std::isfinite(sv.value))
      throw std::invalid_argument("solver: bad source slot");

  const int n = grid_.n_space;
  const double dx = grid_.dx;
  const std::size_t N = std::size_t(W_) * W_;
  up_.assign(N, 0.0);
  uc_.assign(N, 0.0);
  un_.assign(N, 0.0);
  free_.assign(N, 1);
  mass_.assign(N, 0.0);
  active_.assign(src_.n_cells, 0.0);

  if (obstacle.kind() != Obstacle::Kind::None) {
    for (int iy = 0; iy <= n; ++iy)
      for (int ix = 0; ix <= n; ++ix)
        if (obstacle.contains({ix * dx, iy * dx})) free_[std::size_t(iy) * W_ + ix] = 0;
    for (int ix = 0; ix <= n; ++ix)
      if (!free_[ix] || !free_[std::size_t(n) * W_ + ix] || !free_[std::size_t(ix) * W_] ||
          !free_[std::size_t(ix) * W_ + n])
        throw std::invalid_argument("solver: obstacle touches the outer boundary");
  }

  for (int iy = 0; iy <= n; ++iy) {
    double wy = (iy == 0 || iy == n) ? 0.5 : 1.0;
    for (int ix = 0; ix <= n; ++ix) {
      double wx = (ix == 0 || ix == n) ? 0.5 : 1.0;
      std::size_t idx = std::size_t(iy) * W_ + ix;
      if (free_[idx]) mass_[idx] = dx * dx * wx * wy;
    }
  }

  // Plain nodes (4 free neighbors, off the outer boundary) become SIMD spans;
  // everything else free gets an explicit neighbor list.  Missing neighbors
  // mirror: doubled across the outer boundary (second order), dropped across
  // the obstacle staircase (first order); both keep the operator symmetric in
  // the trapezoid inner product.
  auto at = [&](int ix, int iy) { return std::size_t(iy) * W_ + ix; };
  for (int iy = 0; iy <= n; ++iy) {
    int run = -1;
    for (int ix = 0; ix <= n; ++ix) {
      std::size_t idx = at(ix, iy);
      bool plain = false;
      if (free_[idx] && ix > 0 && ix < n && iy > 0 && iy < n)
        plain = free_[at(ix - 1, iy)] && free_[at(ix + 1, iy)] && free_[at(ix, iy - 1)] &&
                free_[at(ix, iy + 1)];
      if (plain) {
        if (run < 0) run = ix;
        continue;
      }
      if (run >= 0) {
        spans_.push_back({at(run, iy), std::size_t(ix - run)});
        run = -1;
      }
      if (!free_[idx]) continue;
      SpecialNode sp{};
      sp.idx = (int)idx;
      double total = 0.0;
      auto add = [&](int nidx, double c) {
        sp.nb[sp.n_nb] = nidx;
        sp.coeff[sp.n_nb] = c;
        ++sp.n_nb;
        total += c;
      };
      for (int axis = 0; axis < 2; ++axis) {
        int px = ix + (axis == 0 ? 1 : 0), py = iy + (axis == 1 ? 1 : 0);
        int mx = ix - (axis == 0 ? 1 : 0), my = iy - (axis == 1 ? 1 : 0);
        bool p_in = px <= n && py <= n;
        bool m_in = mx >= 0 && my >= 0;
        bool p_ok = p_in && free_[at(px, py)];
        bool m_ok = m_in && free_[at(mx, my)];
        if (p_ok && m_ok) {
          add((int)at(px, py), 1.0);
          add((int)at(mx, my), 1.0);
        } else if (p_ok) {
          add((int)at(px, py), m_in ? 1.0 : 2.0);
        } else if (m_ok) {
          add((int)at(mx, my), p_in ? 1.0 : 2.0);
        }
      }
      sp.self_coeff = -total;
      specials_.push_back(sp);
    }
    if (run >= 0) spans_.push_back({at(run, iy), std::size_t(n + 1 - run)});
  }

  // Bottom-row source weights: each node represents the slice of Gamma
  // covered by its trapezoid cell; the pulse indicator is averaged over it.
  const double cw = 1.0 / src_.n_cells;
  for (int ix = 0; ix <= n; ++ix) {
    double lo = std::max(0.0, (ix - 0.5) * dx), hi = std::min(1.0, (ix + 0.5) * dx);
    double len = hi - lo;
    SourceNode sn{};
    sn.idx = ix;
    int k0 = std::clamp((int)std::floor(lo / cw), 0, src_.n_cells - 1);
    int k1 = std::clamp((int)std::floor((hi - 1e-12) / cw), 0, src_.n_cells - 1);
    sn.k0 = k0;
    sn.k1 = k1;
    auto overlap = [&](int k) {
      return std::max(0.0, std::min(hi, (k + 1) * cw) - std::max(lo, k * cw));
    };
    sn.w0 = overlap(k0) / len;
    sn.w1 = (k1 != k0) ? overlap(k1) / len : 0.0;
    source_nodes_.push_back(sn);
  }

  receivers_.resize(src_.n_cells);
  for (int k = 0; k < src_.n_cells; ++k) {
    double lo = k * cw, hi = (k + 1) * cw;
    int lo_ix = std::max(0, (int)std::floor(lo / dx) - 1);
    int hi_ix = std::min(n, (int)std::ceil(hi / dx) + 1);
    auto& rc = receivers_[k];
    rc.first_node = -1;
    for (int ix = lo_ix; ix <= hi_ix; ++ix) {
      double clo = std::max(0.0, (ix - 0.5) * dx), chi = std::min(1.0, (ix + 0.5) * dx);
      double ov = std::min(hi, chi) - std::max(lo, clo);
      if (ov > 1e-15) {
        if (rc.first_node < 0) rc.first_node = ix;
        rc.w.push_back(ov / cw);
      } else if (rc.first_node >= 0) {
        break;
      }
    }
  }
}

void WaveSim::step() {
  const int s = grid_.steps_per_slot;
  int slot = (int)(step_ / s);
  if (!source_done_ && (int)(step_ % s) == 0) {
    std::fill(active_.begin(), active_.end(), 0.0);
    bool any = false;
    int max_slot = -1;
    for (const auto& sv : src_.slots) {
      max_slot = std::max(max_slot, sv.slot);
      if (sv.slot == slot) {
        active_[sv.cell] += src_.amplitude * sv.value;
        any = true;
      }
    }
    if (slot > max_slot) source_done_ = true;
    current_slot_ = any ? slot : -1;
  }

  const double lam = grid_.dt * grid_.dt / (grid_.dx * grid_.dx);
  const double* uc = uc_.data();
  const double* up = up_.data();
  double* un = un_.data();

  for (const auto& sp : spans_)
    kernels::wave_row(un + sp.offset, uc + sp.offset, up + sp.offset, uc + sp.offset - W_,
                      uc + sp.offset + W_, lam, sp.len);

  for (const auto& sp : specials_) {
    double nb = sp.self_coeff * uc[sp.idx];
    for (int t = 0; t < sp.n_nb; ++t) nb += sp.coeff[t] * uc[sp.nb[t]];
    un[sp.idx] = 2.0 * uc[sp.idx] - up[sp.idx] + lam * nb;
  }

  if (current_slot_ == slot && !source_done_) {
    const double c = grid_.dt * grid_.dt * 2.0 / grid_.dx;
    for (const auto& sn : source_nodes_) {
      double f = active_[sn.k0] * sn.w0 + active_[sn.k1] * sn.w1;
      if (f != 0.0) un[sn.idx] += c * f;
    }
  }

  up_.swap(uc_);
  uc_.swap(un_);
  ++step_;
}

void WaveSim::read_receivers(double* out, int nx) const {
  if (nx != (int)receivers_.size()) throw std::invalid_argument("read_receivers: layout mismatch");
  for (int k = 0; k < nx; ++k) {
    const auto& rc = receivers_[k];
    double s = 0.0;
    for (std::size_t t = 0; t < rc.w.size(); ++t) s += rc.w[t] * uc_[rc.first_node + t];
    out[k] = s;
  }
}

void WaveSim::apply_L(const double* u, double* out) const {
  const double inv2 = 1.0 / (grid_.dx * grid_.dx);
  std::fill(out, out + uc_.size(), 0.0);
  for (const auto& sp : spans_) {
    const double* uu = u + sp.offset;
    double* oo = out + sp.offset;
    for (std::size_t i = 0; i < sp.len; ++i)
      oo[i] = (uu[i - 1] + uu[i + 1] + uu[i - W_] + uu[i + W_] - 4.0 * uu[i]) * inv2;
  }
  for (const auto& sp : specials_) {
    double nb = sp.self_coeff * u[sp.idx];
    for (int t = 0; t < sp.n_nb; ++t) nb += sp.coeff[t] * u[sp.nb[t]];
    out[sp.idx] = nb * inv2;
  }
}

double WaveSim::energy() const {
  // E^{m+1/2} = 1/2 |(u^{m+1}-u^m)/dt|_M^2 - 1/2 (L u^{m+1}, u^m)_M,
  // exactly conserved by the leapfrog once the source is off.
  std::vector<double> lu(uc_.size());
  apply_L(uc_.data(), lu.data());
  double kin = 0.0, pot = 0.0;
  const double idt = 1.0 / grid_.dt;
  for (std::size_t i = 0; i < uc_.size(); ++i) {
    double v = (uc_[i] - up_[i]) * idt;
    kin += mass_[i] * v * v;
    pot -= mass_[i] * lu[i] * up_[i];
  }
  return 0.5 * kin + 0.5 * pot;
}

WaveField WaveSim::snapshot() const {
  WaveField f;
  f.nodes = W_;
  f.dx = grid_.dx;
  f.u = uc_;
  f.quad_w = mass_;
  return f;
}

SimResult step_simulation(const NeumannSource& source, const Obstacle& obstacle, double duration,
                          const SimGrid& grid) {
  if (!(duration > 0.0)) throw std::invalid_argument("step_simulation: duration must be positive");
  WaveSim sim(source, obstacle, grid);
  const long steps = std::lround(duration / grid.dt);
  if (std::abs(steps * grid.dt - duration) > 1e-9)
    throw std::invalid_argument("step_simulation: duration must align with the step grid");
  const int s = grid.steps_per_slot;
  const int n_slots = (int)(steps / s);
  BoundaryTrace trace(n_slots, source.n_cells, grid.slot_width);

  // Slot j is sampled at its midpoint (j + 1/2)h: the exact step when s is
  // even, the mean of the two bracketing steps when s is odd.
  std::vector<double> row(source.n_cells);
  auto record = [&](long j, double weight, bool final_part) {
    sim.read_receivers(row.data(), source.n_cells);
    for (int k = 0; k < source.n_cells; ++k) trace.at((int)j, k) += weight * row[k];
    if (final_part)
      for (int k = 0; k < source.n_cells; ++k)
        if (!std::isfinite(trace.at((int)j, k)))
          throw SolverDivergence("step_simulation: non-finite sample at t=" +
                                 std::to_string(sim.time()));
  };
  for (long m = 0; m <= steps; ++m) {
    if (s % 2 == 0) {
      if (m % s == s / 2 && m / s < n_slots) record(m / s, 1.0, true);
    } else {
      long lo = m - (s - 1) / 2;
      long hi = m - (s + 1) / 2;
      if (lo >= 0 && lo % s == 0 && lo / s < n_slots) record(lo / s, 0.5, false);
      if (hi >= 0 && hi % s == 0 && hi / s < n_slots) record(hi / s, 0.5, true);
    }
    if (m < steps) sim.step();
  }
  SimResult res{std::move(trace), sim.snapshot()};
  if (!std::isfinite(res.field.norm2()))
    throw SolverDivergence("step_simulation: non-finite final field");
  return res;
}

MeasurementSet simulate_basis(const Obstacle& obstacle, const MeasurementConfig& cfg,
                              unsigned workers, double pulse_amplitude) {
  cfg.validate();
  if (!(pulse_amplitude != 0.0) || !std::isfinite(pulse_amplitude))
    throw std::invalid_argument("simulate_basis: bad pulse amplitude");
  const SimGrid grid = SimGrid::for_config(cfg);
  MeasurementSet set;
  set.config = cfg;
  set.obstacle = obstacle;
  set.traces.resize(cfg.nx);
  parallel_for(cfg.nx, workers, [&](std::size_t k) {
    NeumannSource src = NeumannSource::basis_pulse((int)k, cfg);
    src.amplitude = pulse_amplitude;
    auto res = step_simulation(src, obstacle, 2.0 * cfg.T, grid);
    if (pulse_amplitude != 1.0)
      for (double& v : res.trace.samples) v /= pulse_amplitude;
    set.traces[k] = std::move(res.trace);
  });
  return set;
}

WaveField interior_snapshot(const NeumannSource& source, const Obstacle& obstacle, double at,
                            const SimGrid& grid) {
  if (at < 0.0) throw std::invalid_argument("interior_snapshot: negative time");
  WaveSim sim(source, obstacle, grid);
  const long steps = std::lround(at / grid.dt);
  if (std::abs(steps * grid.dt - at) > 1e-9)
    throw std::invalid_argument("interior_snapshot: time must align with the step grid");
  for (long m = 0; m < steps; ++m) sim.step();
  WaveField f = sim.snapshot();
  if (!std::isfinite(f.norm2())) throw SolverDivergence("interior_snapshot: non-finite field");
  return f;
}

}  // namespace bcwave
