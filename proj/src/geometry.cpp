#include "bcwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>

namespace bcwave {

namespace {

constexpr double kEps = 1e-12;

struct Frame {
  // Rotate p into the square's axis frame, centered on it.
  double c, s;
  Point origin;
  Point to_local(Point p) const {
    double dx = p.x - origin.x, dy = p.y - origin.y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }
};

Frame square_frame(const Obstacle& o) {
  return Frame{std::cos(o.angle()), std::sin(o.angle()), o.center()};
}

// Does segment a-b meet the open axis-aligned box |x|,|y| < half?
// Liang-Barsky clip of the parameter interval.
bool segment_hits_box(Point a, Point b, double half) {
  double t0 = 0.0, t1 = 1.0;
  double d[2] = {b.x - a.x, b.y - a.y};
  double p[2] = {a.x, a.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < kEps) {
      if (std::abs(p[axis]) >= half - kEps) return false;
      continue;
    }
    double ta = (-half - p[axis]) / d[axis];
    double tb = (half - p[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 >= t1 - kEps) return false;
  }
  return true;
}

double point_segment_distance(Point p, Point a, Point b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, {a.x + t * vx, a.y + t * vy});
}

}  // namespace

Obstacle Obstacle::disk(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("obstacle: radius must be positive");
  if (!(center.x - radius > 0.0 && center.x + radius < 1.0 &&
        center.y - radius > 0.0 && center.y + radius < 1.0))
    throw std::invalid_argument("obstacle: disk closure must lie inside the open unit square");
  Obstacle o;
  o.kind_ = Kind::Disk;
  o.center_ = center;
  o.radius_ = radius;
  return o;
}

Obstacle Obstacle::rotated_square(Point center, double side, double angle) {
  if (!(side > 0.0)) throw std::invalid_argument("obstacle: side must be positive");
  double c = std::cos(angle), s = std::sin(angle);
  double half = side / 2.0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) {
      Point corner{center.x + half * (sx * c - sy * s), center.y + half * (sx * s + sy * c)};
      if (!(corner.x > 0.0 && corner.x < 1.0 && corner.y > 0.0 && corner.y < 1.0))
        throw std::invalid_argument("obstacle: square corners must lie inside the open unit square");
    }
  Obstacle o;
  o.kind_ = Kind::RotatedSquare;
  o.center_ = center;
  o.side_ = side;
  o.angle_ = angle;
  return o;
}

bool Obstacle::contains(Point p) const {
  switch (kind_) {
    case Kind::None:
      return false;
    case Kind::Disk:
      return dist(p, center_) <= radius_ + kEps;
    case Kind::RotatedSquare: {
      Point q = square_frame(*this).to_local(p);
      double half = side_ / 2.0;
      return std::abs(q.x) <= half + kEps && std::abs(q.y) <= half + kEps;
    }
  }
  return false;
}

double Obstacle::distance_from(Point p) const {
  switch (kind_) {
    case Kind::None:
      throw std::invalid_argument("distance_from: no obstacle present");
    case Kind::Disk:
      return std::max(0.0, dist(p, center_) - radius_);
    case Kind::RotatedSquare: {
      Point q = square_frame(*this).to_local(p);
      double half = side_ / 2.0;
      double ox = std::max(std::abs(q.x) - half, 0.0);
      double oy = std::max(std::abs(q.y) - half, 0.0);
      return std::sqrt(ox * ox + oy * oy);
    }
  }
  return 0.0;
}

bool Obstacle::segment_hits_interior(Point a, Point b) const {
  switch (kind_) {
    case Kind::None:
      return false;
    case Kind::Disk:
      return point_segment_distance(center_, a, b) < radius_ - kEps;
    case Kind::RotatedSquare: {
      Frame f = square_frame(*this);
      return segment_hits_box(f.to_local(a), f.to_local(b), side_ / 2.0);
    }
  }
  return false;
}

double Obstacle::min_y() const {
  switch (kind_) {
    case Kind::None:
      throw std::invalid_argument("min_y: no obstacle present");
    case Kind::Disk:
      return center_.y - radius_;
    case Kind::RotatedSquare:
      return center_.y - (side_ / 2.0) * (std::abs(std::sin(angle_)) + std::abs(std::cos(angle_)));
  }
  return 0.0;
}

std::string Obstacle::describe() const {
  char buf[128];
  switch (kind_) {
    case Kind::None:
      return "none";
    case Kind::Disk:
      std::snprintf(buf, sizeof buf, "disk c=(%g,%g) r=%g", center_.x, center_.y, radius_);
      return buf;
    case Kind::RotatedSquare:
      std::snprintf(buf, sizeof buf, "square c=(%g,%g) side=%g angle=%g", center_.x, center_.y,
                    side_, angle_);
      return buf;
  }
  return "?";
}

BoundaryProfile BoundaryProfile::half_space(double r, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("profile: horizon must be positive");
  if (!(r >= 0.0 && r <= T)) throw std::invalid_argument("profile: need 0 <= r <= T");
  BoundaryProfile p;
  p.family = Family::HalfSpace;
  p.r = r;
  p.T = T;
  return p;
}

BoundaryProfile BoundaryProfile::disk_probe(Point y, double r, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("profile: horizon must be positive");
  if (!(r >= 0.0 && r <= T)) throw std::invalid_argument("profile: need 0 <= r <= T");
  if (std::abs(y.y) > kEps || y.x < -kEps || y.x > 1.0 + kEps)
    throw std::invalid_argument("profile: probe center must lie on the bottom edge");
  BoundaryProfile p;
  p.family = Family::DiskProbe;
  p.r = r;
  p.y = {y.x, 0.0};
  p.T = T;
  return p;
}

double profile_value(const BoundaryProfile& profile, Point x) {
  if (std::abs(x.y) > kEps || x.x < -kEps || x.x > 1.0 + kEps)
    throw std::invalid_argument("profile_value: point is not on the bottom edge");
  double raw = 0.0;
  switch (profile.family) {
    case BoundaryProfile::Family::HalfSpace:
      raw = profile.r;
      break;
    case BoundaryProfile::Family::DiskProbe:
      raw = profile.r - std::abs(x.x - profile.y.x);
      break;
  }
  return std::clamp(raw, 0.0, profile.T);
}

RasterGrid::RasterGrid(int n_cells) : n(n_cells) {
  if (n < 2) throw std::invalid_argument("raster: need at least 2 cells per side");
}

std::size_t Mask::count() const {
  std::size_t c = 0;
  for (auto v : cells) c += (v != 0);
  return c;
}

Mask influence_mask(const BoundaryProfile& profile, const RasterGrid& grid) {
  Mask m(grid);
  const int n = grid.n;
  switch (profile.family) {
    case BoundaryProfile::Family::HalfSpace: {
      for (int j = 0; j < n; ++j) {
        if ((j + 0.5) / n > profile.r + kEps) break;
        for (int i = 0; i < n; ++i) m.at(i, j) = 1;
      }
      break;
    }
    case BoundaryProfile::Family::DiskProbe: {
      // M(tau_r^y) = closed B(y,r) intersected with the square.
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          if (dist(grid.center(i, j), profile.y) <= profile.r + kEps) m.at(i, j) = 1;
      break;
    }
  }
  return m;
}

double exact_volume_M(const BoundaryProfile& profile) {
  if (profile.r > profile.T + kEps) throw std::invalid_argument("exact_volume_M: r exceeds horizon");
  switch (profile.family) {
    case BoundaryProfile::Family::HalfSpace:
      return profile.r;
    case BoundaryProfile::Family::DiskProbe: {
      double r = profile.r;
      if (r > 1.0 + kEps)
        throw std::invalid_argument("exact_volume_M: disk probe radius beyond unit height");
      // Half disk over the bottom edge minus the parts cut by the side walls.
      // seg(d) is the full-disk segment beyond a chord at distance d; the
      // half above the edge is seg(d)/2.
      auto seg = [r](double d) {
        if (d >= r) return 0.0;
        return r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
      };
      double area = std::numbers::pi * r * r / 2.0;
      area -= 0.5 * seg(profile.y.x);
      area -= 0.5 * seg(1.0 - profile.y.x);
      return area;
    }
  }
  return 0.0;
}

Mask obstacle_mask(const Obstacle& obstacle, const RasterGrid& grid) {
  Mask m(grid);
  if (obstacle.kind() == Obstacle::Kind::None) return m;
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i)
      if (obstacle.contains(grid.center(i, j))) m.at(i, j) = 1;
  return m;
}

std::vector<double> arrival_field(BoundaryProfile::Family family, Point y0,
                                  const Obstacle& obstacle, const RasterGrid& grid, double cap) {
  const int n = grid.n;
  const double h = grid.cell_size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> field(std::size_t(n) * n, inf);
  Mask obst = obstacle_mask(obstacle, grid);
  const bool disk_probe = family == BoundaryProfile::Family::DiskProbe;

  // Straight-line certificates: where the segment to the certifying boundary
  // point is unobstructed, d_Sigma equals the Euclidean distance.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::size_t idx = std::size_t(j) * n + i;
      if (obst.cells[idx]) continue;
      Point x = grid.center(i, j);
      double v;
      Point anchor;
      if (disk_probe) {
        v = dist(x, y0);
        anchor = y0;
      } else {
        v = x.y;
        anchor = {x.x, 0.0};
      }
      if (v <= cap && !obstacle.segment_hits_interior(x, anchor)) field[idx] = v;
    }

  // Shadowed cells: multi-source shortest path on the 8-neighbor cell graph,
  // seeded on the bottom row with offset |y - y0| (disk probes) or 0
  // (half-spaces) plus the half-cell hop from Gamma.
  if (obstacle.kind() != Obstacle::Kind::None) {
    std::vector<double> d(std::size_t(n) * n, inf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int i = 0; i < n; ++i) {
      if (obst.cells[i]) continue;
      double v = disk_probe ? std::abs((i + 0.5) * h - y0.x) : 0.0;
      if (v < d[i]) {
        d[i] = v;
        pq.push({v, i});
      }
    }
    const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double diag = h * std::numbers::sqrt2;
    while (!pq.empty()) {
      auto [v, idx] = pq.top();
      pq.pop();
      if (v > d[idx] + kEps) continue;
      if (v + h / 2.0 > cap) break;
      int i = idx % n, j = idx / n;
      for (int e = 0; e < 8; ++e) {
        int ii = i + di[e], jj = j + dj[e];
        if (ii < 0 || ii >= n || jj < 0 || jj >= n) continue;
        int nidx = jj * n + ii;
        if (obst.cells[nidx]) continue;
        double w = (e < 4) ? h : diag;
        if (v + w < d[nidx] - kEps) {
          d[nidx] = v + w;
          pq.push({v + w, nidx});
        }
      }
    }
    for (std::size_t idx = 0; idx < field.size(); ++idx)
      if (!obst.cells[idx]) field[idx] = std::min(field[idx], d[idx] + h / 2.0);
  }
  return field;
}

Mask influence_mask_with_obstacle(const BoundaryProfile& profile, const Obstacle& obstacle,
                                  const RasterGrid& grid) {
  if (obstacle.kind() == Obstacle::Kind::None) return influence_mask(profile, grid);
  std::vector<double> field =
      arrival_field(profile.family, profile.y, obstacle, grid, profile.r + 2.0 * grid.cell_size());
  Mask m(grid);
  for (std::size_t idx = 0; idx < field.size(); ++idx)
    if (field[idx] <= profile.r + kEps) m.cells[idx] = 1;
  return m;
}

double distance_to_obstacle(Point y, const Obstacle& obstacle) {
  return obstacle.distance_from(y);
}

Mask h_region_exact(const Obstacle& obstacle, double T, const RasterGrid& grid) {
  const int n = grid.n;
  const double h = grid.cell_size();
  Mask m(grid);

  // Gamma samples at spacing h/2 (half the cell size), endpoints included.
  const int ns = 2 * n + 1;
  std::vector<double> radius(ns);
  for (int s = 0; s < ns; ++s) {
    Point y{s * 0.5 * h, 0.0};
    double R = (obstacle.kind() == Obstacle::Kind::None) ? T : std::min(T, obstacle.distance_from(y));
    radius[s] = R;
  }

  // Row-wise union of intervals |x - y_s| <= w_s.
  std::vector<std::pair<double, double>> iv;
  for (int j = 0; j < n; ++j) {
    double cy = (j + 0.5) * h;
    iv.clear();
    for (int s = 0; s < ns; ++s) {
      double R = radius[s];
      if (R < cy) continue;
      double w = std::sqrt(R * R - cy * cy);
      double x0 = s * 0.5 * h - w, x1 = s * 0.5 * h + w;
      if (!iv.empty() && x0 <= iv.back().second + kEps)
        iv.back().second = std::max(iv.back().second, x1);
      else
        iv.emplace_back(x0, x1);
    }
    for (auto& [x0, x1] : iv) {
      int i0 = std::max(0, (int)std::ceil(x0 / h - 0.5 - kEps));
      int i1 = std::min(n - 1, (int)std::floor(x1 / h - 0.5 + kEps));
      for (int i = i0; i <= i1; ++i) m.at(i, j) = 1;
    }
  }
  return m;
}

}  // namespace bcwave
