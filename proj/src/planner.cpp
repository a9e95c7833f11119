#include "halfdisk/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "halfdisk/elliptic.hpp"

namespace halfdisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec3 = std::array<double, 3>;

struct Candidate {
  CylinderPoint start;
  double T = 0.0;
  double residual = kInf;
};

double scalar_residual(const Pose& endpoint, const Pose& target) {
  return pose_distance(endpoint, target);
}

/// Three-component endpoint miss used by the Newton refinement.
Vec3 vector_residual(const Pose& endpoint, const Pose& target,
                     double angle_weight) {
  return Vec3{endpoint.x - target.x, endpoint.y - target.y,
              angle_weight * normalize_angle(endpoint.theta - target.theta)};
}

double norm(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

/// Solves (J^T J + lambda I) d = -J^T r. Returns false when the system is
/// numerically singular.
bool lm_step(const std::array<Vec3, 3>& jac_cols, const Vec3& r,
             double lambda, Vec3& d) {
  double A[3][3];
  double g[3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      A[i][j] = jac_cols[i][0] * jac_cols[j][0] +
                jac_cols[i][1] * jac_cols[j][1] +
                jac_cols[i][2] * jac_cols[j][2];
    }
    A[i][i] += lambda;
    g[i] = -(jac_cols[i][0] * r[0] + jac_cols[i][1] * r[1] +
             jac_cols[i][2] * r[2]);
  }
  // Gaussian elimination with partial pivoting.
  int perm[3] = {0, 1, 2};
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int rr = c + 1; rr < 3; ++rr) {
      if (std::fabs(A[perm[rr]][c]) > std::fabs(A[perm[p]][c])) {
        p = rr;
      }
    }
    std::swap(perm[c], perm[p]);
    const double piv = A[perm[c]][c];
    if (std::fabs(piv) < 1e-14) {
      return false;
    }
    for (int rr = c + 1; rr < 3; ++rr) {
      const double f = A[perm[rr]][c] / piv;
      for (int cc = c; cc < 3; ++cc) {
        A[perm[rr]][cc] -= f * A[perm[c]][cc];
      }
      g[perm[rr]] -= f * g[perm[c]];
    }
  }
  for (int c = 2; c >= 0; --c) {
    double v = g[perm[c]];
    for (int cc = c + 1; cc < 3; ++cc) {
      v -= A[perm[c]][cc] * d[cc];
    }
    d[c] = v / A[perm[c]][c];
  }
  return true;
}

bool structure_ok(const Trajectory& traj) {
  const std::size_t n = traj.segments.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ExtremalSegment& seg = traj.segments[i];
    const bool turn = seg.kind == Branch::Rotation ||
                      seg.kind == Branch::StableEquilibrium;
    if (!turn) {
      continue;
    }
    if (i != 0 && i + 1 != n) {
      return false;  // interior reversal: never optimal
    }
    if (seg.duration > kPi + 1e-9) {
      return false;  // a turn beyond pi is never optimal
    }
  }
  return true;
}

}  // namespace

FeasiblePlan feasible_plan(const Pose& q0, const Pose& q1) {
  const Pose rel = relative_target(q0, q1);
  FeasiblePlan plan;
  plan.l = std::hypot(rel.x, rel.y);
  plan.alpha = plan.l == 0.0 ? 0.0 : std::atan2(rel.y, rel.x);
  plan.beta = normalize_angle(rel.theta - plan.alpha);
  plan.T = std::fabs(plan.alpha) + plan.l + std::fabs(plan.beta);
  return plan;
}

Pose execute_plan(const Pose& q0, const FeasiblePlan& plan) {
  const Pose rel(plan.l * std::cos(plan.alpha), plan.l * std::sin(plan.alpha),
                 plan.alpha + plan.beta);
  return compose(q0, rel);
}

Covector decode(const CylinderPoint& p) {
  if (p.psi > kPi / 2.0) {
    return Covector{kPi / 2.0 - p.psi, 1.0, p.h3};
  }
  if (p.psi < -kPi / 2.0) {
    return Covector{p.psi + kPi / 2.0, -1.0, p.h3};
  }
  return Covector{std::cos(p.psi), std::sin(p.psi), p.h3};
}

CylinderPoint encode(const Covector& h) {
  require_unit_level(h);
  if (h.h1 < 0.0) {
    const double psi = h.h2 >= 0.0 ? kPi / 2.0 - h.h1 : -kPi / 2.0 + h.h1;
    return CylinderPoint{psi, h.h3};
  }
  return CylinderPoint{std::atan2(h.h2, h.h1), h.h3};
}

std::pair<double, Pose> shooting_residual(const CylinderPoint& p, double T,
                                          const Pose& target) {
  const Trajectory traj = exp_map(decode(p), T);
  const Pose endpoint = traj.end_pose();
  return {scalar_residual(endpoint, target), endpoint};
}

SolverNoConvergence::SolverNoConvergence(double best_residual_,
                                         const CylinderPoint& best_start_,
                                         double best_T_)
    : std::runtime_error("solve_bvp: no seed refined below tolerance"),
      best_residual(best_residual_),
      best_start(best_start_),
      best_T(best_T_) {}

std::vector<ShootingSolution> solve_bvp(const Pose& target,
                                        const ShootingGrid& grid, double tol,
                                        const ShootingConfig& cfg) {
  if (grid.n_psi < 8 || grid.n_h3 < 8 || grid.n_T < 8) {
    throw std::domain_error("solve_bvp: all grid counts must be >= 8");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::domain_error("solve_bvp: tolerance must be positive");
  }

  const double T_ub = feasible_plan(Pose{}, target).T;
  if (T_ub == 0.0) {
    ShootingSolution trivial;
    trivial.start = CylinderPoint{0.0, 0.0};
    trivial.trajectory = exp_map(decode(trivial.start), 0.0);
    return {trivial};
  }
  const double T_hi = T_ub + 1.0;

  auto evaluate = [&](const Candidate& c) -> double {
    try {
      return shooting_residual(c.start, c.T, target).first;
    } catch (const std::exception&) {
      return kInf;
    }
  };

  // Deterministic seed sweep over the unrolled cylinder chart and the time
  // axis, plus a few structured seeds for the degenerate targets.
  std::vector<Candidate> seeds;
  seeds.reserve(static_cast<std::size_t>(grid.n_psi) * grid.n_h3 * grid.n_T +
                4);
  const double psi_max = kPi + cfg.psi_pad;
  for (int i = 0; i < grid.n_psi; ++i) {
    const double psi = -psi_max + 2.0 * psi_max * i / (grid.n_psi - 1);
    for (int j = 0; j < grid.n_h3; ++j) {
      const double h3 = -cfg.h3_max + 2.0 * cfg.h3_max * j / (grid.n_h3 - 1);
      for (int k = 0; k < grid.n_T; ++k) {
        const double T = T_ub * (k + 1) / grid.n_T;
        seeds.push_back(Candidate{CylinderPoint{psi, h3}, T, kInf});
      }
    }
  }
  // Everything below the separatrix lives at |h3| < 1, so once the box is
  // wide the uniform sweep starves that band; give it its own dense sweep.
  if (2.0 * cfg.h3_max / (grid.n_h3 - 1) > 0.125) {
    const int n_psi_low = std::max(grid.n_psi, 64);
    for (int i = 0; i < n_psi_low; ++i) {
      const double psi = -psi_max + 2.0 * psi_max * i / (n_psi_low - 1);
      for (int j = 0; j < 25; ++j) {
        const double h3 = -1.2 + 2.4 * j / 24.0;
        for (int k = 0; k < grid.n_T; ++k) {
          const double T = T_ub * (k + 1) / grid.n_T;
          seeds.push_back(Candidate{CylinderPoint{psi, h3}, T, kInf});
        }
      }
    }
  }
  const double chord = std::hypot(target.x, target.y);
  const double turn = std::fabs(target.theta);
  if (chord > 0.0) {
    seeds.push_back(Candidate{CylinderPoint{0.0, 0.0}, chord, kInf});
  }
  if (turn > 0.0) {
    const double psi = target.theta > 0.0 ? kPi / 2.0 : -kPi / 2.0;
    seeds.push_back(Candidate{CylinderPoint{psi, 0.0}, turn, kInf});
  }
  // A full forward arc at modulus k covers a chord of hypot(2k, 2(K - E))
  // with zero net heading change, so a turn / full-arc / turn maneuver can be
  // solved for k and seeded in closed form.  The plain grid misses these
  // basins once the chord is short, because the arc needs |h3| ~ 2/chord.
  if (chord > 1e-12 && chord < 4.0) {
    double lo = 1e-9;
    double hi = 1.0 - 1e-9;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double span =
          std::hypot(2.0 * mid, 2.0 * (complete_K(mid) - complete_E(mid)));
      (span < chord ? lo : hi) = mid;
    }
    const double k = 0.5 * (lo + hi);
    const double quarter = complete_K(k);
    const double arc_drift = 2.0 * (quarter - complete_E(k));
    const double arc_time = 2.0 * quarter * k;
    const double aim = std::atan2(target.y, target.x);
    for (const int s3 : {+1, -1}) {
      const int s2 = -s3;  // arc entry needs the h2 h3 < 0 handover
      const double delta = std::atan2(-s3 * arc_drift, 2.0 * k);
      double da = s2 * normalize_angle(aim - delta);
      if (da < 0.0) da += 2.0 * kPi;
      const double db_raw = -s2 * normalize_angle(target.theta - s2 * da);
      double db = db_raw < 0.0 ? db_raw + 2.0 * kPi : db_raw;
      da = std::min(da, kPi);
      db = std::min(db, kPi);
      const Covector h_start{-std::sin(da) / k, static_cast<double>(s2),
                             std::cos(da) * s3 / k};
      const CylinderPoint start = encode(h_start);
      seeds.push_back(Candidate{start, da + arc_time + db, kInf});
      for (int m = 0; m < grid.n_T; ++m) {
        seeds.push_back(Candidate{start, T_ub * (m + 1) / grid.n_T, kInf});
      }
    }
  }
  // The oscillating counterpart: a full arc below the separatrix shifts the
  // pose sideways by 2(K - E)/k while turning the heading by exactly pi, and
  // hands the turn direction over unchanged.  This is the fast way to reach
  // targets behind the start, which need equal-signed turns at both ends.
  if (chord > 1e-12 && chord < 4.0) {
    double lo = 1e-9;
    double hi = 1.0 - 1e-9;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double span = 2.0 * (complete_K(mid) - complete_E(mid)) / mid;
      (span < chord ? lo : hi) = mid;
    }
    const double k = 0.5 * (lo + hi);
    const double arc_time = 2.0 * complete_K(k);
    const double aim = std::atan2(target.y, target.x);
    for (const int s2 : {+1, -1}) {
      const int s = -s2;  // lateral drift points along -s relative heading
      double da = s2 * normalize_angle(aim + s * kPi / 2.0);
      if (da < 0.0) da += 2.0 * kPi;
      const double db_raw =
          s2 * normalize_angle(target.theta - s2 * (da + kPi));
      double db = db_raw < 0.0 ? db_raw + 2.0 * kPi : db_raw;
      da = std::min(da, kPi);
      db = std::min(db, kPi);
      const Covector h_start{-k * std::sin(da), static_cast<double>(s2),
                             -s2 * k * std::cos(da)};
      const CylinderPoint start = encode(h_start);
      seeds.push_back(Candidate{start, da + arc_time + db, kInf});
      for (int m = 0; m < grid.n_T; ++m) {
        seeds.push_back(Candidate{start, T_ub * (m + 1) / grid.n_T, kInf});
      }
    }
  }

  for (Candidate& c : seeds) {
    c.residual = evaluate(c);
  }

  std::vector<std::size_t> order(seeds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return seeds[a].residual < seeds[b].residual;
                   });

  const double stop_tol = std::min(tol * 1e-3, 1e-9);
  const double fd_step = 1e-7;
  double best_residual = kInf;
  Candidate best_candidate = seeds.empty() ? Candidate{} : seeds[order[0]];

  std::vector<Candidate> roots;
  const int budget =
      std::min<std::size_t>(cfg.refine_candidates, order.size());
  for (int si = 0; si < budget; ++si) {
    Candidate c = seeds[order[static_cast<std::size_t>(si)]];
    if (!std::isfinite(c.residual)) {
      break;
    }

    double lambda = 0.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      Pose endpoint;
      try {
        endpoint = shooting_residual(c.start, c.T, target).second;
      } catch (const std::exception&) {
        break;
      }
      const Vec3 r = vector_residual(endpoint, target, cfg.angle_weight);
      c.residual = scalar_residual(endpoint, target);
      if (c.residual < best_residual) {
        best_residual = c.residual;
        best_candidate = c;
      }
      if (c.residual <= stop_tol) {
        break;
      }

      // Forward-difference Jacobian in (psi, h3, T).
      std::array<Vec3, 3> jac;
      bool jac_ok = true;
      for (int dim = 0; dim < 3 && jac_ok; ++dim) {
        Candidate probe = c;
        if (dim == 0) probe.start.psi += fd_step;
        if (dim == 1) probe.start.h3 += fd_step;
        if (dim == 2) probe.T += fd_step;
        try {
          const Pose pe = shooting_residual(probe.start, probe.T, target).second;
          const Vec3 pr = vector_residual(pe, target, cfg.angle_weight);
          for (int comp = 0; comp < 3; ++comp) {
            jac[dim][comp] = (pr[comp] - r[comp]) / fd_step;
          }
        } catch (const std::exception&) {
          jac_ok = false;
        }
      }
      if (!jac_ok) {
        break;
      }

      // Damped Gauss-Newton: grow the damping until the step reduces the
      // residual (this also walks through switching-count kinks).
      bool accepted = false;
      for (int attempt = 0; attempt < 16; ++attempt) {
        Vec3 d;
        if (!lm_step(jac, r, lambda, d)) {
          lambda = std::max(1e-6, lambda * 10.0);
          continue;
        }
        Candidate next = c;
        next.start.psi += d[0];
        next.start.h3 += d[1];
        next.T = std::clamp(next.T + d[2], 1e-9, T_hi);
        next.residual = evaluate(next);
        if (next.residual < c.residual) {
          c = next;
          lambda *= 0.25;
          if (lambda < 1e-12) {
            lambda = 0.0;
          }
          accepted = true;
          break;
        }
        lambda = std::max(1e-6, lambda * 10.0);
      }
      if (!accepted) {
        break;
      }
      if (std::fabs(norm(r)) < stop_tol) {
        break;
      }
    }

    if (c.residual < best_residual) {
      best_residual = c.residual;
      best_candidate = c;
    }
    if (c.residual <= tol) {
      roots.push_back(c);
    }
  }

  if (roots.empty()) {
    throw SolverNoConvergence(best_residual, best_candidate.start,
                              best_candidate.T);
  }

  std::stable_sort(roots.begin(), roots.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.T != b.T) return a.T < b.T;
                     if (std::fabs(a.start.h3) != std::fabs(b.start.h3)) {
                       return std::fabs(a.start.h3) < std::fabs(b.start.h3);
                     }
                     return a.start.psi < b.start.psi;
                   });

  std::vector<ShootingSolution> out;
  for (const Candidate& c : roots) {
    bool duplicate = false;
    for (const ShootingSolution& s : out) {
      const double d = std::sqrt(
          (c.start.psi - s.start.psi) * (c.start.psi - s.start.psi) +
          (c.start.h3 - s.start.h3) * (c.start.h3 - s.start.h3) +
          (c.T - s.T) * (c.T - s.T));
      if (d < cfg.dedup_radius) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      continue;
    }
    ShootingSolution s;
    s.start = c.start;
    s.T = c.T;
    s.residual = c.residual;
    s.trajectory = exp_map(decode(c.start), c.T);
    out.push_back(std::move(s));
  }
  return out;
}

Trajectory optimal_trajectory(const Pose& q0, const Pose& q1, double tol) {
  const Pose target = relative_target(q0, q1);
  if (pose_distance(target, Pose{}) <= 1e-15) {
    Trajectory traj;
    traj.start_pose = q0;
    traj.start_covector = Covector{0.0, 1.0, 0.0};
    return traj;
  }
  // Covering a short chord with a forward arc forces a fast arc: the full-arc
  // planar displacement is about 2/sqrt(E), so |h3| must reach ~2/chord.
  // Widen the seed box accordingly for near targets.
  ShootingGrid grid;
  ShootingConfig cfg;
  const double chord = std::hypot(target.x, target.y);
  if (chord > 0.0 && 3.0 / chord > cfg.h3_max) {
    cfg.h3_max = std::min(45.0, 3.0 / chord);
    cfg.refine_candidates = 96;
    grid.n_h3 = 48;
  }
  const std::vector<ShootingSolution> sols = solve_bvp(target, grid, tol, cfg);
  for (const ShootingSolution& s : sols) {
    if (structure_ok(s.trajectory)) {
      // Rebuild from q0 so all poses live in the caller's frame.
      return exp_map(decode(s.start), s.T, q0);
    }
  }
  throw SolverNoConvergence(sols.front().residual, sols.front().start,
                            sols.front().T);
}

ReversalShortcut shortcut_reversal(const Trajectory& traj) {
  ReversalShortcut result;
  const std::size_t n = traj.segments.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const ExtremalSegment& seg = traj.segments[i];
    const bool turn = seg.kind == Branch::Rotation ||
                      seg.kind == Branch::StableEquilibrium;
    if (!turn || std::fabs(seg.duration - kPi) > 1e-6) {
      continue;
    }
    const ExtremalSegment& prev = traj.segments[i - 1];
    const ExtremalSegment& next = traj.segments[i + 1];

    const double t_b0 = seg.t_start;
    const double t_b1 = seg.t_start + seg.duration;
    double tau_a = std::min(0.5, prev.duration);
    double tau_c = std::min(0.5, next.duration);
    for (int attempt = 0; attempt < 48; ++attempt) {
      const double t_a = t_b0 - tau_a;
      const double t_c = t_b1 + tau_c;
      const FeasiblePlan plan =
          feasible_plan(traj.pose_at(t_a), traj.pose_at(t_c));
      if (plan.T < (t_c - t_a) - 1e-12) {
        result.found = true;
        result.t_a = t_a;
        result.t_c = t_c;
        result.shortcut_time = plan.T;
        result.improved_total =
            traj.total_time - (t_c - t_a) + plan.T;
        return result;
      }
      tau_a *= 0.5;
      tau_c *= 0.5;
    }
  }
  return result;
}

}  // namespace halfdisk
