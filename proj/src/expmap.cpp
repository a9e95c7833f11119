#include "halfdisk/expmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfdisk/elliptic.hpp"

namespace halfdisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_or(double v, int fallback) {
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return fallback;
}

double gudermann(double v) { return std::atan(std::sinh(v)); }

/// Maps arc-local coordinates through the arc frame: rotate by beta0 about
/// the frame origin and translate.
Pose apply_frame(const Pose& frame, double beta0, double xt, double yt,
                 double theta_t) {
  const double c = std::cos(beta0);
  const double s = std::sin(beta0);
  return Pose(frame.x + c * xt - s * yt, frame.y + s * xt + c * yt,
              beta0 + theta_t);
}

TractrixParams tractrix_params(const Covector& h0, double t_start,
                               const Pose& frame) {
  TractrixParams p;
  p.s2 = sign_or(h0.h2, 1);
  p.s3 = sign_or(h0.h3, p.s2);
  p.dir = -p.s2 * p.s3;
  p.v0 = std::atanh(std::clamp(h0.h1, 0.0, 1.0));
  p.t_start = t_start;
  p.frame = frame;
  p.gd0 = gudermann(p.v0);
  p.sech0 = 1.0 / std::cosh(p.v0);
  p.tanh0 = std::tanh(p.v0);
  p.beta0 = frame.theta - p.s2 * p.dir * p.gd0;
  return p;
}

Covector tractrix_covector(const TractrixParams& p, double t) {
  const double v = p.v0 + p.dir * (t - p.t_start);
  const double sech = 1.0 / std::cosh(v);
  return Covector{std::tanh(v), p.s2 * sech, p.s3 * sech};
}

Pose tractrix_pose(const TractrixParams& p, double t) {
  const double v = p.v0 + p.dir * (t - p.t_start);
  const double sech = 1.0 / std::cosh(v);
  const double th = std::tanh(v);
  const double xt = -p.dir * (sech - p.sech0);
  const double yt = p.s2 * ((v - th) - (p.v0 - p.tanh0));
  const double theta_t = p.s2 * p.dir * gudermann(v);
  return apply_frame(p.frame, p.beta0, xt, yt, theta_t);
}

Pose elliptic_pose(const EllipticArcParams& p, double t) {
  const double xi = p.xi0 + (t - p.t_start) * p.phase_rate;
  const JacobiValues j = jacobi(xi, p.k);
  const double eps = jacobi_epsilon(xi, p.k);
  double xt, yt, theta_t;
  if (p.rotating) {
    xt = -p.k * (j.cn - p.cn0);
    yt = -p.s * ((xi - p.xi0) - (eps - p.eps0));
    theta_t = -p.s * std::acos(std::clamp(j.dn, -1.0, 1.0));
  } else {
    xt = -(j.dn - p.dn0) / p.k;
    yt = -p.s / p.k * ((xi - p.xi0) - (eps - p.eps0));
    theta_t = -p.s * std::acos(std::clamp(j.cn, -1.0, 1.0));
  }
  return apply_frame(p.frame, p.beta0, xt, yt, theta_t);
}

double elliptic_arclength(const EllipticArcParams& p, double t) {
  const double xi = p.xi0 + (t - p.t_start) * p.phase_rate;
  const JacobiValues j = jacobi(xi, p.k);
  // d/dxi ln(dn - k cn) = k sn, and u1 dt = sn * k dxi in both regimes.
  return std::log(j.dn - p.k * j.cn) - std::log(p.dn0 - p.k * p.cn0);
}

double segment_local_time(const ExtremalSegment& seg, double t) {
  return std::clamp(t - seg.t_start, 0.0, seg.duration);
}

}  // namespace

Covector segment_covector(const ExtremalSegment& seg, double t) {
  const double dt = segment_local_time(seg, t);
  switch (seg.kind) {
    case Branch::Rotation:
      return rotation_vertical_flow(seg.start_covector, dt);
    case Branch::StableEquilibrium:
    case Branch::Line:
      return seg.start_covector;
    case Branch::Elliptic:
      return elliptic_vertical_flow(std::get<EllipticArcParams>(seg.params),
                                    seg.t_start + dt);
    case Branch::Tractrix:
      return tractrix_covector(std::get<TractrixParams>(seg.params),
                               seg.t_start + dt);
  }
  throw std::logic_error("segment_covector: unknown branch");
}

Pose segment_pose(const ExtremalSegment& seg, double t) {
  const double dt = segment_local_time(seg, t);
  const Pose& q = seg.start_pose;
  switch (seg.kind) {
    case Branch::Rotation:
    case Branch::StableEquilibrium: {
      const int s2 = sign_or(seg.start_covector.h2, 1);
      return Pose(q.x, q.y, q.theta + s2 * dt);
    }
    case Branch::Line:
      return Pose(q.x + dt * std::cos(q.theta), q.y + dt * std::sin(q.theta),
                  q.theta);
    case Branch::Elliptic:
      return elliptic_pose(std::get<EllipticArcParams>(seg.params),
                           seg.t_start + dt);
    case Branch::Tractrix:
      return tractrix_pose(std::get<TractrixParams>(seg.params),
                           seg.t_start + dt);
  }
  throw std::logic_error("segment_pose: unknown branch");
}

double segment_arclength(const ExtremalSegment& seg, double t) {
  const double dt = segment_local_time(seg, t);
  switch (seg.kind) {
    case Branch::Rotation:
    case Branch::StableEquilibrium:
      return 0.0;
    case Branch::Line:
      return dt;
    case Branch::Elliptic:
      return elliptic_arclength(std::get<EllipticArcParams>(seg.params),
                                seg.t_start + dt);
    case Branch::Tractrix: {
      const TractrixParams& p = std::get<TractrixParams>(seg.params);
      const double v = p.v0 + p.dir * dt;
      return p.dir * (std::log(std::cosh(v)) - std::log(std::cosh(p.v0)));
    }
  }
  throw std::logic_error("segment_arclength: unknown branch");
}

const ExtremalSegment& Trajectory::segment_at(double t) const {
  if (segments.empty()) {
    throw std::domain_error("segment_at: empty trajectory");
  }
  // Last segment whose start is <= t; exact switch instants resolve to the
  // later (post-switch) segment.
  std::size_t i = segments.size() - 1;
  while (i > 0 && segments[i].t_start > t) {
    --i;
  }
  return segments[i];
}

Pose Trajectory::pose_at(double t) const {
  if (t < -1e-12 || t > total_time + 1e-12) {
    throw std::domain_error("pose_at: time outside [0, total_time]");
  }
  if (segments.empty()) {
    return start_pose;
  }
  return segment_pose(segment_at(t), t);
}

Covector Trajectory::covector_at(double t) const {
  if (t < -1e-12 || t > total_time + 1e-12) {
    throw std::domain_error("covector_at: time outside [0, total_time]");
  }
  if (segments.empty()) {
    return start_covector;
  }
  return segment_covector(segment_at(t), t);
}

Control Trajectory::control_at(double t) const {
  return extremal_control(covector_at(t));
}

Pose Trajectory::end_pose() const { return pose_at(total_time); }

Covector Trajectory::end_covector() const { return covector_at(total_time); }

Trajectory exp_map(const Covector& h0, double T, const Pose& q0) {
  require_unit_level(h0);
  if (!std::isfinite(T) || T < 0.0) {
    throw std::domain_error("exp_map: T must be finite and >= 0");
  }

  Trajectory traj;
  traj.start_pose = q0;
  traj.start_covector = h0;
  traj.total_time = T;
  if (T == 0.0) {
    return traj;
  }

  const std::size_t max_segments =
      10 + static_cast<std::size_t>(std::ceil(T / kPi));
  double t = 0.0;
  Pose pose = q0;
  Covector h = h0;
  while (t < T) {
    ExtremalSegment seg;
    seg.kind = branch_of(h);
    seg.start_pose = pose;
    seg.start_covector = h;
    seg.t_start = t;

    double until_switch = kInf;
    switch (seg.kind) {
      case Branch::StableEquilibrium:
      case Branch::Line:
        break;
      case Branch::Rotation:
        until_switch = rotation_switch_time(h);
        break;
      case Branch::Elliptic: {
        const EllipticArcParams p = elliptic_arc_params(h, t, pose);
        until_switch = elliptic_switch_time(p);
        seg.params = p;
        break;
      }
      case Branch::Tractrix: {
        const TractrixParams p = tractrix_params(h, t, pose);
        until_switch = p.dir < 0 ? p.v0 : kInf;
        seg.params = p;
        break;
      }
    }

    const double remaining = T - t;
    if (until_switch < remaining) {
      if (!(until_switch > 0.0)) {
        throw std::logic_error("exp_map: degenerate switch interval");
      }
      seg.duration = until_switch;
      const double t_switch = t + until_switch;
      pose = segment_pose(seg, t_switch);
      h = segment_covector(seg, t_switch);
      // Snap onto the switch line; |h2| = 1 there by conservation of H.
      h.h1 = 0.0;
      h.h2 = h.h2 >= 0.0 ? 1.0 : -1.0;
      traj.segments.push_back(std::move(seg));
      t = t_switch;
    } else {
      seg.duration = remaining;
      traj.segments.push_back(std::move(seg));
      t = T;
    }
    if (traj.segments.size() > max_segments) {
      throw std::runtime_error("exp_map: segment budget exceeded");
    }
  }
  return traj;
}

std::vector<TrajectorySample> sample_trajectory(const Trajectory& traj,
                                                int n) {
  if (n < 2) {
    throw std::domain_error("sample_trajectory: need at least 2 samples");
  }
  std::vector<TrajectorySample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = traj.total_time * i / (n - 1);
    TrajectorySample s;
    s.t = t;
    s.pose = traj.pose_at(t);
    s.covector = traj.covector_at(t);
    s.control = extremal_control(s.covector);
    out.push_back(s);
  }
  return out;
}

double arclength(const Trajectory& traj, double t) {
  if (t < -1e-12 || t > traj.total_time + 1e-12) {
    throw std::domain_error("arclength: time outside [0, total_time]");
  }
  double sum = 0.0;
  for (const ExtremalSegment& seg : traj.segments) {
    if (t <= seg.t_start) {
      break;
    }
    sum += segment_arclength(seg, std::min(t, seg.t_start + seg.duration));
  }
  return sum;
}

}  // namespace halfdisk
