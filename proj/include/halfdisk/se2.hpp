#pragma once

#include <numbers>

namespace halfdisk {

inline constexpr double kPi = std::numbers::pi;

/// Wraps an angle onto (-pi, pi]. The value -pi maps to +pi.
/// Throws std::domain_error on non-finite input.
double normalize_angle(double a);

/// Planar pose (element of SE(2)): position plus heading.
/// The heading is always stored wrapped onto (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_);
};

/// Group product a*b: apply the motion b expressed in the frame of a.
Pose compose(const Pose& a, const Pose& b);

/// Group inverse: compose(a, inverse(a)) is the identity.
Pose inverse(const Pose& a);

/// Boundary-value reduction: the target q1 expressed in the frame of q0,
/// so that compose(q0, relative_target(q0, q1)) == q1.
Pose relative_target(const Pose& q0, const Pose& q1);

/// Planar distance plus wrapped heading distance, weighted 1:1.
double pose_distance(const Pose& a, const Pose& b);

}  // namespace halfdisk
