#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace bcwave {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point a, Point b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Sound-hard inclusion in the unit square.  The closure must be strictly
// inside (0,1)^2; construction validates this.
class Obstacle {
 public:
  enum class Kind { None, Disk, RotatedSquare };

  static Obstacle none() { return Obstacle{}; }
  static Obstacle disk(Point center, double radius);
  static Obstacle rotated_square(Point center, double side, double angle);

  Kind kind() const { return kind_; }
  Point center() const { return center_; }
  double radius() const { return radius_; }
  double side() const { return side_; }
  double angle() const { return angle_; }

  // Closed-set membership.
  bool contains(Point p) const;

  // Euclidean distance to the obstacle, 0 inside.  Throws for Kind::None.
  double distance_from(Point p) const;

  // Does the open segment (a,b) meet the obstacle interior?
  bool segment_hits_interior(Point a, Point b) const;

  // Lowest y coordinate of the obstacle (support in -e2).
  double min_y() const;

  std::string describe() const;

 private:
  Obstacle() = default;
  Kind kind_ = Kind::None;
  Point center_{};
  double radius_ = 0.0;  // Disk
  double side_ = 0.0;    // RotatedSquare
  double angle_ = 0.0;   // RotatedSquare, radians
};

// Travel-time profile tau on the accessible edge Gamma = (0,1) x {0}.
// Values are clamped to [0, T] so every profile is admissible.
struct BoundaryProfile {
  enum class Family { HalfSpace, DiskProbe };

  Family family = Family::HalfSpace;
  double r = 0.0;   // both families
  Point y{};        // DiskProbe center, on Gamma
  double T = 1.0;   // horizon

  static BoundaryProfile half_space(double r, double T);
  static BoundaryProfile disk_probe(Point y, double r, double T);
};

// tau evaluated at a point of Gamma; rejects points off the bottom edge.
double profile_value(const BoundaryProfile& profile, Point x);

// Uniform n x n raster of the unit square; cell (i,j) has center
// ((i+1/2)/n, (j+1/2)/n).
struct RasterGrid {
  int n = 0;
  explicit RasterGrid(int n_cells);
  double cell_size() const { return 1.0 / n; }
  double cell_area() const { return 1.0 / (double(n) * n); }
  Point center(int i, int j) const { return {(i + 0.5) / n, (j + 0.5) / n}; }
};

struct Mask {
  RasterGrid grid;
  std::vector<std::uint8_t> cells;  // row-major, index j*n + i

  explicit Mask(RasterGrid g) : grid(g), cells(std::size_t(g.n) * g.n, 0) {}
  std::uint8_t& at(int i, int j) { return cells[std::size_t(j) * grid.n + i]; }
  std::uint8_t at(int i, int j) const { return cells[std::size_t(j) * grid.n + i]; }
  std::size_t count() const;
  double area() const { return double(count()) * grid.cell_area(); }
};

// Domain of influence M(tau) in empty space.
Mask influence_mask(const BoundaryProfile& profile, const RasterGrid& grid);

// Analytic area of M(tau): strip area for half-spaces, clipped half-disk for
// disk probes.
double exact_volume_M(const BoundaryProfile& profile);

// Cells whose center lies in the obstacle closure.
Mask obstacle_mask(const Obstacle& obstacle, const RasterGrid& grid);

// Smallest radius at which a cell joins M_Sigma(tau_r) of the family:
// min over y in Gamma of (d_Sigma(x,y) + |y - y0|) for disk probes at y0,
// min over y of d_Sigma(x,y) for half-spaces; +inf on obstacle cells.
// Cells with an unobstructed straight segment to their certifying boundary
// point use the exact Euclidean distance; shadowed cells fall back to a
// multi-source shortest path on the 8-neighbor cell graph, which
// overestimates distances by at most ~8.24% (conservative near shadow
// boundaries).  Values above `cap` are left at +inf.
std::vector<double> arrival_field(BoundaryProfile::Family family, Point y0,
                                  const Obstacle& obstacle, const RasterGrid& grid, double cap);

// Domain of influence M_Sigma(tau): the arrival field thresholded at r.
Mask influence_mask_with_obstacle(const BoundaryProfile& profile,
                                  const Obstacle& obstacle,
                                  const RasterGrid& grid);

// min(T, ...) is the caller's business: plain Euclidean clearance of y.
double distance_to_obstacle(Point y, const Obstacle& obstacle);

// Largest region certifiable as obstacle-free by disk probing from Gamma:
// union over y in Gamma of B(y, min(T, distance_to_obstacle(y))).
Mask h_region_exact(const Obstacle& obstacle, double T, const RasterGrid& grid);

}  // namespace bcwave
