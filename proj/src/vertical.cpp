#include "halfdisk/vertical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfdisk/elliptic.hpp"

namespace halfdisk {

namespace {

int sign_or(double v, int fallback) {
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return fallback;
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::Rotation:
      return "rotation";
    case Branch::Elliptic:
      return "elliptic";
    case Branch::StableEquilibrium:
      return "stable-equilibrium";
    case Branch::Line:
      return "line";
    case Branch::Tractrix:
      return "tractrix";
  }
  return "unknown";
}

double hamiltonian_H(const Covector& h) {
  if (h.h1 <= 0.0) {
    return std::fabs(h.h2);
  }
  return std::hypot(h.h1, h.h2);
}

double casimir_E(const Covector& h) { return h.h1 * h.h1 + h.h3 * h.h3; }

void require_unit_level(const Covector& h) {
  if (std::fabs(hamiltonian_H(h) - 1.0) > kUnitLevelTol) {
    throw std::invalid_argument(
        "covector violates the unit Hamiltonian level H = 1");
  }
}

Covector project_unit_level(const Covector& h) {
  const double H = hamiltonian_H(h);
  if (!(H > 0.0) || !std::isfinite(H)) {
    throw std::domain_error("project_unit_level: H must be positive");
  }
  Covector r = h;
  if (h.h1 <= 0.0) {
    r.h2 /= H;
  } else {
    r.h1 /= H;
    r.h2 /= H;
  }
  return r;
}

Control extremal_control(const Covector& h) {
  require_unit_level(h);
  if (h.h1 > 0.0) {
    const double n = std::hypot(h.h1, h.h2);
    return Control{h.h1 / n, h.h2 / n};
  }
  return Control{0.0, h.h2 >= 0.0 ? 1.0 : -1.0};
}

Branch branch_of(const Covector& h) {
  require_unit_level(h);
  const double E = casimir_E(h);
  if (std::fabs(h.h1) <= kSignZeroTol) {
    if (std::fabs(h.h3) <= kSignZeroTol) {
      return Branch::StableEquilibrium;
    }
    // On the switch line the side is decided by the crossing direction,
    // i.e. by the sign of h1' = -h2 h3.
    const int s2 = sign_or(h.h2, 1);
    const int s3 = sign_or(h.h3, s2);
    if (s2 * s3 > 0) {
      return Branch::Rotation;
    }
    return std::fabs(E - 1.0) < kSeparatrixTol ? Branch::Tractrix
                                               : Branch::Elliptic;
  }
  if (h.h1 < 0.0) {
    return Branch::Rotation;
  }
  if (std::fabs(h.h1 - 1.0) <= kSignZeroTol && std::fabs(h.h3) <= kSignZeroTol) {
    return Branch::Line;
  }
  return std::fabs(E - 1.0) < kSeparatrixTol ? Branch::Tractrix
                                             : Branch::Elliptic;
}

Covector rotation_vertical_flow(const Covector& h0, double dt) {
  if (!(dt >= 0.0)) {
    throw std::domain_error("rotation_vertical_flow: dt must be >= 0");
  }
  const int s2 = sign_or(h0.h2, 1);
  const double c = std::cos(dt);
  const double s = std::sin(dt);
  // (h1, h3) rotates by s2 * dt; h2 is frozen while u1 = 0.
  return Covector{h0.h1 * c - s2 * h0.h3 * s, h0.h2,
                  h0.h3 * c + s2 * h0.h1 * s};
}

double rotation_switch_time(const Covector& h0) {
  if (std::fabs(h0.h1) <= kSignZeroTol && std::fabs(h0.h3) <= kSignZeroTol) {
    return std::numeric_limits<double>::infinity();
  }
  if (std::fabs(h0.h1) <= kSignZeroTol) {
    // Arc entered on the switch line: the turn sweeps exactly pi.
    return kPi;
  }
  const int s2 = sign_or(h0.h2, 1);
  // First root of h1(dt) = 0 with the exit crossing sign:
  // the argument of -s2 h30 - i h10, wrapped onto (0, pi].
  double dt = std::atan2(-h0.h1, -s2 * h0.h3);
  if (dt <= 0.0) {
    dt += 2.0 * kPi;
  }
  return dt;
}

EllipticArcParams elliptic_arc_params(const Covector& h0, double t_start,
                                      const Pose& frame) {
  require_unit_level(h0);
  const double E = casimir_E(h0);
  if (std::fabs(E - 1.0) < kSeparatrixTol) {
    throw std::domain_error(
        "elliptic_arc_params: separatrix level, use the limit branch");
  }
  if (h0.h1 < -kSignZeroTol || E <= kSignZeroTol) {
    throw std::invalid_argument("elliptic_arc_params: not a forward arc");
  }

  EllipticArcParams p;
  p.E = E;
  p.M = E - 2.0;
  p.t_start = t_start;
  p.frame = frame;
  p.rotating = E > 1.0;

  if (p.rotating) {
    // |h3| >= sqrt(E - 1) > 0: h3 never vanishes, its sign drives the arc.
    p.k = 1.0 / std::sqrt(E);
    p.s = sign_or(h0.h3, 1);
    p.alpha = normalize_angle(std::atan2(-p.s * h0.h1, -p.s * h0.h2));
    p.xi0 = -p.s * incomplete_F(p.alpha, p.k);
    p.phase_rate = 1.0 / p.k;
  } else {
    // |h2| >= sqrt(1 - E) > 0: h2 never vanishes, its sign drives the arc.
    p.k = std::sqrt(E);
    const int s2 = sign_or(h0.h2, 1);
    p.s = -s2;
    p.alpha = normalize_angle(std::atan2(h0.h1, h0.h2) + (1 - s2) * kPi / 2);
    const double phi0 = std::atan2(h0.h1, -s2 * h0.h3);
    p.xi0 = incomplete_F(phi0, p.k);
    p.phase_rate = 1.0;
  }

  p.quarter_period = complete_K(p.k);
  const double period = 2.0 * p.quarter_period;
  if (p.xi0 < 0.0 && p.xi0 > -1e-9) {
    p.xi0 = 0.0;
  }
  if (!(p.xi0 >= 0.0 && p.xi0 < period)) {
    throw std::invalid_argument(
        "elliptic_arc_params: start phase outside the forward arc");
  }

  const JacobiValues j0 = jacobi(p.xi0, p.k);
  p.cn0 = j0.cn;
  p.dn0 = j0.dn;
  p.eps0 = jacobi_epsilon(p.xi0, p.k);
  const double axis0 = p.rotating ? j0.dn : j0.cn;
  const double tilt0 = -p.s * std::acos(std::clamp(axis0, -1.0, 1.0));
  p.beta0 = frame.theta - tilt0;
  return p;
}

Covector elliptic_vertical_flow(const EllipticArcParams& p, double t) {
  const double xi = p.xi0 + (t - p.t_start) * p.phase_rate;
  const JacobiValues j = jacobi(xi, p.k);
  if (p.rotating) {
    return Covector{j.sn, -p.s * j.cn, p.s / p.k * j.dn};
  }
  return Covector{p.k * j.sn, -p.s * j.dn, p.s * p.k * j.cn};
}

double elliptic_switch_time(const EllipticArcParams& p) {
  // h1 has its next zero at phase 2K, where sn vanishes.
  const double gap = 2.0 * p.quarter_period - p.xi0;
  double dt = gap / p.phase_rate;
  // One Newton polish pass; the root is transversal (|h1'| = sqrt(E) there).
  for (int i = 0; i < 3; ++i) {
    const Covector h = elliptic_vertical_flow(p, p.t_start + dt);
    if (std::fabs(h.h1) < 1e-12) {
      break;
    }
    const double slope = -h.h2 * h.h3;
    if (std::fabs(slope) < 1e-12) {
      break;
    }
    dt -= h.h1 / slope;
  }
  return dt;
}

}  // namespace halfdisk
