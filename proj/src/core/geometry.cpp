#include "core/geometry.hpp"

#include <cmath>

namespace wnil {

double distance(const Point& a, const Point& b, int dim) {
  double dx = a[0] - b[0];
  if (dim == 1) return std::abs(dx);
  double dy = a[1] - b[1];
  return std::hypot(dx, dy);
}

double Box::diameter() const {
  if (dim == 1) return width(0);
  return std::hypot(width(0), width(1));
}

BallFamily ball_family(const Box& box, double h, const BallFamilyPolicy& policy) {
  require(box.dim == 1 || box.dim == 2, ErrorCode::BadPolicy, "ball_family: dim must be 1 or 2");
  require(h > 0.0, ErrorCode::BadPolicy, "ball_family: h must be positive");
  require(policy.center_stride >= 1, ErrorCode::BadPolicy, "ball_family: center_stride must be >= 1");
  require(policy.center_offset >= 0, ErrorCode::BadPolicy, "ball_family: center_offset must be >= 0");
  require(policy.radii_per_octave >= 1, ErrorCode::BadPolicy,
          "ball_family: radii_per_octave must be >= 1");
  require(policy.max_radius_factor > 0.0, ErrorCode::BadPolicy,
          "ball_family: max_radius_factor must be positive");

  BallFamily fam;
  fam.domain = box;
  fam.h = h;
  fam.policy = policy;

  const double cap = policy.max_radius_factor * box.diameter();
  require(cap >= h, ErrorCode::BadPolicy, "ball_family: radius cap below the smallest radius h");
  const int m = policy.radii_per_octave;
  for (int k = 0;; ++k) {
    // Radii h * 2^(k/m); for m = 1 this is exact dyadic doubling in floating point.
    double r = h * std::exp2(static_cast<double>(k) / m);
    if (r > cap * (1.0 + 1e-12)) break;
    fam.radius_tiers.push_back(r);
  }
  require(!fam.radius_tiers.empty(), ErrorCode::BadPolicy, "ball_family: empty radius set");

  std::array<std::vector<double>, 2> axis_centers;
  for (int axis = 0; axis < box.dim; ++axis) {
    const long half_steps = 2 * std::lround(box.width(axis) / h);
    for (long j = policy.center_offset; j <= half_steps; j += policy.center_stride)
      axis_centers[axis].push_back(box.lo[axis] + static_cast<double>(j) * (h / 2.0));
    require(!axis_centers[axis].empty(), ErrorCode::BadPolicy, "ball_family: no centers on axis");
  }
  if (box.dim == 1) axis_centers[1].push_back(0.0);

  for (double r : fam.radius_tiers)
    for (double cx : axis_centers[0])
      for (double cy : axis_centers[1]) fam.balls.push_back(Ball{Point{cx, cy}, r});
  return fam;
}

}  // namespace wnil
