#include "halfdisk/se2.hpp"

#include <cmath>
#include <stdexcept>

namespace halfdisk {

double normalize_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::domain_error("normalize_angle: non-finite angle");
  }
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) {
    r = kPi;
  }
  return r;
}

Pose::Pose(double x_, double y_, double theta_)
    : x(x_), y(y_), theta(normalize_angle(theta_)) {}

Pose compose(const Pose& a, const Pose& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return Pose(a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
              a.theta + b.theta);
}

Pose inverse(const Pose& a) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return Pose(-c * a.x - s * a.y, s * a.x - c * a.y, -a.theta);
}

Pose relative_target(const Pose& q0, const Pose& q1) {
  return compose(inverse(q0), q1);
}

double pose_distance(const Pose& a, const Pose& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::hypot(dx, dy) + std::fabs(normalize_angle(a.theta - b.theta));
}

}  // namespace halfdisk
