#pragma once

#include <variant>
#include <vector>

#include "halfdisk/se2.hpp"
#include "halfdisk/vertical.hpp"

namespace halfdisk {

/// Frozen description of a separatrix arc (E = 1) with h1 in the interior:
/// the hyperbolic limit of the elliptic forms.
struct TractrixParams {
  int s2 = 1;          // sign of h2 (constant on the arc)
  int s3 = 1;          // sign of h3 (constant on the arc)
  int dir = 1;         // +1 escaping toward the straight line, -1 approaching
                       //    the switch in finite time
  double v0 = 0.0;     // atanh(h1) at the arc start
  double beta0 = 0.0;  // heading of the arc frame
  double t_start = 0.0;
  Pose frame;          // pose at the arc start
  // Cached values at v0.
  double gd0 = 0.0;
  double sech0 = 1.0;
  double tanh0 = 0.0;
};

/// One maximal interval of a fixed branch along an extremal.
struct ExtremalSegment {
  Branch kind = Branch::StableEquilibrium;
  Pose start_pose;
  Covector start_covector;
  double t_start = 0.0;
  double duration = 0.0;
  std::variant<std::monostate, EllipticArcParams, TractrixParams> params;
};

/// Covector at absolute time t within the segment span.
Covector segment_covector(const ExtremalSegment& seg, double t);

/// Pose at absolute time t within the segment span.
Pose segment_pose(const ExtremalSegment& seg, double t);

/// Arclength accumulated on the segment between t_start and t.
double segment_arclength(const ExtremalSegment& seg, double t);

/// Concatenation of extremal segments with continuous pose and covector
/// (up to the switch-instant snap of h1 to 0 and h2 to +-1).
struct Trajectory {
  std::vector<ExtremalSegment> segments;
  double total_time = 0.0;
  Pose start_pose;
  Covector start_covector;

  const ExtremalSegment& segment_at(double t) const;
  Pose pose_at(double t) const;
  Covector covector_at(double t) const;
  Control control_at(double t) const;
  Pose end_pose() const;
  Covector end_covector() const;
};

/// Integrates the extremal with initial covector h0 for time T from pose q0,
/// stitching branch intervals at the switch instants. Requires |H(h0)-1| <=
/// kUnitLevelTol and finite T >= 0.
Trajectory exp_map(const Covector& h0, double T, const Pose& q0 = Pose{});

/// State snapshot used for serialization and comparison.
struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  Covector covector;
  Control control;
};

/// n >= 2 samples at uniform times over [0, total_time]. Samples landing on
/// a switch instant carry the post-switch covector.
std::vector<TrajectorySample> sample_trajectory(const Trajectory& traj, int n);

/// Arclength of the planar projection over [0, t]: zero on turn-in-place
/// intervals, closed form on arcs.
double arclength(const Trajectory& traj, double t);

}  // namespace halfdisk
