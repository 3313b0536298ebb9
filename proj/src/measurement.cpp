#include "bcwave/measurement.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bcwave/kernels.hpp"

namespace bcwave {

void MeasurementConfig::validate() const {
  if (nx < 1) throw std::invalid_argument("measurement: need at least one receiver");
  if (nt < 2 || nt % 2 != 0) throw std::invalid_argument("measurement: nt must be even and >= 2");
  if (!(T > 0.0)) throw std::invalid_argument("measurement: horizon must be positive");
  if (n_space < 2 * nx)
    throw std::invalid_argument("measurement: solver grid must resolve the receiver cells (n_space >= 2*nx)");
}

bool MeasurementConfig::compatible_with(const MeasurementConfig& other) const {
  return nx == other.nx && nt == other.nt && T == other.T && n_space == other.n_space;
}

std::vector<VoronoiCell> voronoi_cells(int nx) {
  if (nx < 1) throw std::invalid_argument("voronoi_cells: need at least one receiver");
  std::vector<VoronoiCell> cells(nx);
  for (int k = 0; k < nx; ++k) {
    cells[k].lo = double(k) / nx;
    cells[k].hi = double(k + 1) / nx;
    cells[k].center = {(k + 0.5) / nx, 0.0};
  }
  return cells;
}

void MeasurementSet::validate() const {
  config.validate();
  if ((int)traces.size() != config.nx)
    throw std::invalid_argument("measurement set: expected one basis trace per receiver");
  for (const auto& tr : traces)
    if (tr.n_slots != config.nt || tr.n_receivers != config.nx)
      throw std::invalid_argument("measurement set: trace sampling mismatch");
}

BoundaryTrace synthesize_response(const std::vector<SlotValue>& coeffs,
                                  const MeasurementSet& data) {
  const auto& cfg = data.config;
  BoundaryTrace out(cfg.nt, cfg.nx, cfg.dt_samp());
  const int half = cfg.half_slots();
  for (const auto& sv : coeffs) {
    if (sv.slot < 0 || sv.slot >= half || sv.cell < 0 || sv.cell >= cfg.nx)
      throw std::invalid_argument("synthesize_response: slot outside (0,T) x Gamma");
    if (sv.value == 0.0) continue;
    const BoundaryTrace& basis = data.traces[sv.cell];
    // shift by sv.slot samples: out[m] += value * basis[m - slot]
    std::size_t len = std::size_t(cfg.nt - sv.slot) * cfg.nx;
    kernels::axpy(sv.value, basis.samples.data(), out.samples.data() + std::size_t(sv.slot) * cfg.nx,
                  len);
  }
  return out;
}

MeasurementSet add_awgn(const MeasurementSet& data, double snr_db, std::uint64_t seed) {
  if (data.noise)
    throw std::invalid_argument("add_awgn: data already carries noise");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("add_awgn: snr must be finite");
  MeasurementSet out = data;
  const double factor = std::pow(10.0, -snr_db / 10.0);
  double pooled_power = 0.0;
  for (std::size_t k = 0; k < out.traces.size(); ++k) {
    auto& tr = out.traces[k];
    double p = 0.0;
    for (double v : tr.samples) p += v * v;
    p /= double(tr.samples.size());
    pooled_power += p;
    const double sigma = std::sqrt(p * factor);
    std::mt19937_64 eng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (k + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : tr.samples) v += sigma * gauss(eng);
  }
  pooled_power /= double(out.traces.size());
  out.noise = NoiseSpec{snr_db, seed, 10.0 * std::log10(std::max(pooled_power, 1e-300))};
  return out;
}

double boundary_inner_product(const BoundaryTrace& a, const BoundaryTrace& b, int window_slots) {
  if (a.n_receivers != b.n_receivers || a.dt_samp != b.dt_samp)
    throw std::invalid_argument("boundary_inner_product: mismatched sampling");
  if (window_slots > a.n_slots || window_slots > b.n_slots)
    throw std::invalid_argument("boundary_inner_product: window exceeds trace length");
  std::size_t len = std::size_t(window_slots) * a.n_receivers;
  double s = kernels::dot(a.samples.data(), b.samples.data(), len);
  return s * a.dt_samp / a.n_receivers;
}

}  // namespace bcwave
