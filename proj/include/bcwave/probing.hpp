#pragma once

#include <string>
#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/geometry.hpp"
#include "bcwave/measurement.hpp"

namespace bcwave {

// A one-parameter profile family swept over the radius grid.
struct ProfileFamily {
  BoundaryProfile::Family family = BoundaryProfile::Family::HalfSpace;
  double y = 0.5;  // DiskProbe center abscissa

  BoundaryProfile at(double r, double T) const;
  std::string describe() const;

  static ProfileFamily half_spaces() { return {BoundaryProfile::Family::HalfSpace, 0.0}; }
  static ProfileFamily disk_probes(double y) { return {BoundaryProfile::Family::DiskProbe, y}; }
};

struct VolumeCurve {
  std::string family;
  std::vector<double> radii;
  std::vector<double> estimates;
  std::vector<double> reference;  // may be empty
};

struct ProbeParameters {
  double epsilon = 5e-4;
  int n_radii = 100;
  double r_min = 0.1;
  double r_max = 0.5;
  double alpha = 0.0;
  int n_cg = 10;
  std::vector<double> probe_centers;  // abscissas on Gamma
  unsigned workers = 1;

  void validate() const;
  std::vector<double> radius_grid() const;

  static std::vector<double> receiver_centers(int nx);
};

// Sweeps the radius grid, one regularized control solve per radius; radii
// with an empty S_tau record estimate 0.  reference = analytic V(M(tau)).
VolumeCurve volume_curve(const ProfileFamily& fam, const MeasurementSet& data,
                         const ProbeParameters& params);

// estimates(obstacle) - estimates(empty), pointwise on a shared radius grid.
// reference is filled when `oracle` is supplied (rasterized exact volumes).
VolumeCurve difference_curve(const VolumeCurve& obstacle_curve, const VolumeCurve& empty_curve,
                             const std::vector<double>& oracle_reference = {});

// Matched-raster oracle for the volume difference V(M_Sigma) - V(M).
std::vector<double> oracle_volume_difference(const ProfileFamily& fam, const Obstacle& obstacle,
                                             const std::vector<double>& radii, int raster_n);

struct ClearanceEstimate {
  double r = 0.0;
  bool immediate_detection = false;  // no radius passed the threshold
};

// r_T(y): the largest grid radius whose volume difference stays >= -epsilon.
ClearanceEstimate estimate_clearance(const VolumeCurve& diff, const ProbeParameters& params);

struct HRegionResult {
  Mask mask;
  std::vector<double> clearances;
  std::vector<std::uint8_t> immediate;
  std::vector<VolumeCurve> difference_curves;  // audit, one per probe center
};

// Full probing pipeline: per center, obstacle and calibration curves, their
// difference, a clearance, then the union of disks B(y, r_T(y)) ^ M.
HRegionResult reconstruct_h_region(const MeasurementSet& data, const MeasurementSet& empty_data,
                                   const ProbeParameters& params, const RasterGrid& grid);

struct ErrorMap {
  RasterGrid grid;
  std::vector<std::uint8_t> image;  // 255 false positive, 0 false negative, 128 correct
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  explicit ErrorMap(RasterGrid g) : grid(g), image(std::size_t(g.n) * g.n, 128) {}
  double error_area() const { return double(false_positives + false_negatives) * grid.cell_area(); }
};

ErrorMap error_map(const Mask& reconstructed, const Mask& exact);

}  // namespace bcwave
