#include "bcwave/probing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bcwave/parallel.hpp"

namespace bcwave {

BoundaryProfile ProfileFamily::at(double r, double T) const {
  switch (family) {
    case BoundaryProfile::Family::HalfSpace:
      return BoundaryProfile::half_space(r, T);
    case BoundaryProfile::Family::DiskProbe:
      return BoundaryProfile::disk_probe({y, 0.0}, r, T);
  }
  throw std::logic_error("profile family");
}

std::string ProfileFamily::describe() const {
  if (family == BoundaryProfile::Family::HalfSpace) return "half_space";
  char buf[64];
  std::snprintf(buf, sizeof buf, "disk_probe y=%g", y);
  return buf;
}

void ProbeParameters::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("probe: epsilon must be positive");
  if (n_radii < 2) throw std::invalid_argument("probe: need at least two radii");
  if (!(r_min > 0.0 && r_max > r_min)) throw std::invalid_argument("probe: bad radius range");
  if (alpha < 0.0) throw std::invalid_argument("probe: alpha must be nonnegative");
  if (n_cg < 1) throw std::invalid_argument("probe: need at least one CG step");
}

std::vector<double> ProbeParameters::radius_grid() const {
  std::vector<double> r(n_radii);
  for (int l = 0; l < n_radii; ++l)
    r[l] = r_min + (r_max - r_min) * double(l) / double(n_radii - 1);
  return r;
}

std::vector<double> ProbeParameters::receiver_centers(int nx) {
  std::vector<double> y(nx);
  for (int k = 0; k < nx; ++k) y[k] = (k + 0.5) / nx;
  return y;
}

VolumeCurve volume_curve(const ProfileFamily& fam, const MeasurementSet& data,
                         const ProbeParameters& params) {
  params.validate();
  data.validate();
  VolumeCurve curve;
  curve.family = fam.describe();
  curve.radii = params.radius_grid();
  curve.estimates.assign(curve.radii.size(), 0.0);
  curve.reference.assign(curve.radii.size(), 0.0);
  const double T = data.config.T;
  parallel_for(curve.radii.size(), params.workers, [&](std::size_t l) {
    BoundaryProfile prof = fam.at(curve.radii[l], T);
    curve.reference[l] = exact_volume_M(prof);
    STauIndex index = build_stau_index(prof, data.config);
    if (index.empty()) return;  // estimate stays 0
    ControlSolution sol = solve_control(index, data, params.alpha, params.n_cg);
    curve.estimates[l] = sol.volume_estimate;
  });
  return curve;
}

VolumeCurve difference_curve(const VolumeCurve& obstacle_curve, const VolumeCurve& empty_curve,
                             const std::vector<double>& oracle_reference) {
  if (obstacle_curve.radii != empty_curve.radii)
    throw std::invalid_argument("difference_curve: radius grids differ");
  if (!oracle_reference.empty() && oracle_reference.size() != obstacle_curve.radii.size())
    throw std::invalid_argument("difference_curve: reference length mismatch");
  VolumeCurve diff;
  diff.family = obstacle_curve.family;
  diff.radii = obstacle_curve.radii;
  diff.estimates.resize(diff.radii.size());
  for (std::size_t l = 0; l < diff.radii.size(); ++l)
    diff.estimates[l] = obstacle_curve.estimates[l] - empty_curve.estimates[l];
  diff.reference = oracle_reference;
  return diff;
}

std::vector<double> oracle_volume_difference(const ProfileFamily& fam, const Obstacle& obstacle,
                                             const std::vector<double>& radii, int raster_n) {
  RasterGrid grid(raster_n);
  std::vector<double> out(radii.size(), 0.0);
  if (radii.empty()) return out;
  if (obstacle.kind() == Obstacle::Kind::None) return out;

  // One arrival field per family instance; every radius is a threshold of it.
  const double cap = *std::max_element(radii.begin(), radii.end()) + 2.0 * grid.cell_size();
  std::vector<double> with =
      arrival_field(fam.family, {fam.y, 0.0}, obstacle, grid, cap);
  std::vector<double> without(with.size());
  const bool disk = fam.family == BoundaryProfile::Family::DiskProbe;
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) {
      Point x = grid.center(i, j);
      without[std::size_t(j) * grid.n + i] = disk ? dist(x, {fam.y, 0.0}) : x.y;
    }
  std::sort(with.begin(), with.end());
  std::sort(without.begin(), without.end());
  for (std::size_t l = 0; l < radii.size(); ++l) {
    double thr = radii[l] + 1e-12;
    auto cw = std::upper_bound(with.begin(), with.end(), thr) - with.begin();
    auto cwo = std::upper_bound(without.begin(), without.end(), thr) - without.begin();
    out[l] = double(cw - cwo) * grid.cell_area();
  }
  return out;
}

ClearanceEstimate estimate_clearance(const VolumeCurve& diff, const ProbeParameters& params) {
  if (diff.radii.empty()) throw std::invalid_argument("estimate_clearance: empty curve");
  if (diff.estimates.size() != diff.radii.size())
    throw std::invalid_argument("estimate_clearance: estimates and radii differ in length");
  for (std::size_t l = diff.radii.size(); l-- > 0;)
    if (diff.estimates[l] >= -params.epsilon) return {diff.radii[l], false};
  return {diff.radii.front(), true};
}

HRegionResult reconstruct_h_region(const MeasurementSet& data, const MeasurementSet& empty_data,
                                   const ProbeParameters& params, const RasterGrid& grid) {
  params.validate();
  data.validate();
  empty_data.validate();
  if (!data.config.compatible_with(empty_data.config))
    throw std::invalid_argument("reconstruct_h_region: archives have different sampling");
  if (params.probe_centers.empty())
    throw std::invalid_argument("reconstruct_h_region: no probe centers");

  const std::vector<double> radii = params.radius_grid();
  const std::size_t ny = params.probe_centers.size();
  const std::size_t nr = radii.size();
  const double T = data.config.T;

  // (center, radius, which-data) solves are independent; flatten and map.
  std::vector<double> vol_obst(ny * nr, 0.0), vol_empty(ny * nr, 0.0);
  parallel_for(ny * nr * 2, params.workers, [&](std::size_t job) {
    const bool empty_side = job >= ny * nr;
    const std::size_t cell = empty_side ? job - ny * nr : job;
    const std::size_t iy = cell / nr, ir = cell % nr;
    BoundaryProfile prof =
        BoundaryProfile::disk_probe({params.probe_centers[iy], 0.0}, radii[ir], T);
    STauIndex index = build_stau_index(prof, data.config);
    if (index.empty()) return;
    const MeasurementSet& src = empty_side ? empty_data : data;
    ControlSolution sol = solve_control(index, src, params.alpha, params.n_cg);
    (empty_side ? vol_empty : vol_obst)[cell] = sol.volume_estimate;
  });

  HRegionResult res{Mask(grid), {}, {}, {}};
  res.clearances.resize(ny);
  res.immediate.resize(ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    VolumeCurve diff;
    diff.family = ProfileFamily::disk_probes(params.probe_centers[iy]).describe();
    diff.radii = radii;
    diff.estimates.resize(nr);
    for (std::size_t ir = 0; ir < nr; ++ir)
      diff.estimates[ir] = vol_obst[iy * nr + ir] - vol_empty[iy * nr + ir];
    ClearanceEstimate ce = estimate_clearance(diff, params);
    res.clearances[iy] = ce.r;
    res.immediate[iy] = ce.immediate_detection ? 1 : 0;
    res.difference_curves.push_back(std::move(diff));
  }

  // Union of disks B(y, r_T(y)) ^ M; centers flagged as immediate detections
  // contribute nothing (their clearance is only known to be below r_min).
  const int n = grid.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Point x = grid.center(i, j);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        if (res.immediate[iy]) continue;
        if (dist(x, {params.probe_centers[iy], 0.0}) <= res.clearances[iy]) {
          res.mask.at(i, j) = 1;
          break;
        }
      }
    }
  return res;
}

ErrorMap error_map(const Mask& reconstructed, const Mask& exact) {
  if (reconstructed.grid.n != exact.grid.n)
    throw std::invalid_argument("error_map: grids differ");
  ErrorMap em(reconstructed.grid);
  for (std::size_t idx = 0; idx < reconstructed.cells.size(); ++idx) {
    bool rec = reconstructed.cells[idx] != 0;
    bool ex = exact.cells[idx] != 0;
    if (rec && !ex) {
      em.image[idx] = 255;
      ++em.false_positives;
    } else if (!rec && ex) {
      em.image[idx] = 0;
      ++em.false_negatives;
    }
  }
  return em;
}

}  // namespace bcwave
