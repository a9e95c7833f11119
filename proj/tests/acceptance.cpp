// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. All tolerances are pinned here, and every check runs
// against the library (plus the CLI for the pipeline criterion) with fixed
// random seeds, so the gate is deterministic.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "halfdisk/elliptic.hpp"
#include "halfdisk/expmap.hpp"
#include "halfdisk/oracle.hpp"
#include "halfdisk/planner.hpp"
#include "halfdisk/se2.hpp"
#include "halfdisk/trajectory_io.hpp"
#include "halfdisk/vertical.hpp"
#include "support/quadrature.hpp"

using namespace halfdisk;

namespace {

int failures = 0;

void report(int index, const char* description, bool ok,
            const std::string& detail) {
  std::printf("%s %2d. %s%s%s\n", ok ? "PASS" : "FAIL", index, description,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) {
    ++failures;
  }
}

void criterion(int index, const char* description,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(index, description, ok, detail);
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

/// Random covector on the level set H = 1, covering the turn rays and the
/// forward half-circle; draws closer than `separatrix_gap` to the critical
/// level E = 1 are resampled (the limit branch pins E to 1 inside its band,
/// which would make conservation-against-E0 checks vacuous there).
Covector random_covector(std::mt19937& rng, double separatrix_gap) {
  std::uniform_real_distribution<double> chi_d(-kPi, kPi);
  std::uniform_real_distribution<double> h3_d(-2.5, 2.5);
  std::uniform_real_distribution<double> neg_d(-2.5, -0.02);
  for (;;) {
    const double chi = chi_d(rng);
    Covector h;
    if (std::cos(chi) > 0.0) {
      h = Covector{std::cos(chi), std::sin(chi), h3_d(rng)};
    } else {
      h = Covector{neg_d(rng), std::sin(chi) >= 0.0 ? 1.0 : -1.0, h3_d(rng)};
    }
    if (std::fabs(h.h1) < 1e-3 || casimir_E(h) < 1e-3) continue;
    if (std::fabs(casimir_E(h) - 1.0) <= separatrix_gap) continue;
    return h;
  }
}

Pose random_pose(std::mt19937& rng, double box) {
  std::uniform_real_distribution<double> pos(-box, box);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  return Pose(pos(rng), pos(rng), ang(rng));
}

bool is_turn(Branch b) {
  return b == Branch::Rotation || b == Branch::StableEquilibrium;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HALFDISK_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main() {
  criterion(1, "level set and Casimir conserved along extremals",
            [](std::string& detail) {
    std::mt19937 rng(101u);
    std::uniform_real_distribution<double> T_d(0.5, 8.0);
    double worst_H = 0.0, worst_E = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Covector h0 = random_covector(rng, 1e-5);
      const double E0 = casimir_E(h0);
      const auto samples = sample_trajectory(exp_map(h0, T_d(rng)), 100);
      for (const TrajectorySample& s : samples) {
        worst_H = std::max(worst_H,
                           std::fabs(hamiltonian_H(s.covector) - 1.0));
        worst_E = std::max(worst_E, std::fabs(casimir_E(s.covector) - E0));
      }
    }
    detail = fmt("max |H-1| %.2e, max |E-E0| %.2e", worst_H, worst_E);
    return worst_H < 1e-9 && worst_E < 1e-9;
  });

  criterion(2, "closed-form flow matches the direct RK4 integration",
            [](std::string& detail) {
    std::mt19937 rng(202u);
    std::uniform_real_distribution<double> T_d(0.5, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Covector h0 = random_covector(rng, 0.01);
      const double T = T_d(rng);
      std::vector<double> times(101);
      for (int j = 0; j <= 100; ++j) times[j] = T * j / 100;
      const auto closed = sample_trajectory(exp_map(h0, T), 101);
      const auto direct =
          oracle_samples(integrate_pmp(h0, T, 1e-4, Pose{}, times));
      worst = std::max(worst, trajectory_distance(closed, direct));
    }
    detail = fmt("max distance %.2e", worst);
    return worst < 1e-6;
  });

  criterion(3, "transverse momentum obeys the pendulum equation",
            [](std::string& detail) {
    std::mt19937 rng(303u);
    std::uniform_real_distribution<double> chi_d(-kPi / 2 + 0.05,
                                                 kPi / 2 - 0.05);
    std::uniform_real_distribution<double> h3_d(-2.2, 2.2);
    const double delta = 1e-4;
    double worst = 0.0;
    for (int arc = 0; arc < 20; ++arc) {
      Covector h0;
      EllipticArcParams params;
      double dur = 0.0;
      do {
        const double chi = chi_d(rng);
        h0 = Covector{std::cos(chi), std::sin(chi), h3_d(rng)};
        if (std::fabs(casimir_E(h0) - 1.0) <= 0.01) continue;
        params = elliptic_arc_params(h0, 0.0, Pose{});
        dur = elliptic_switch_time(params);
      } while (dur < 0.05);
      std::uniform_real_distribution<double> t_d(2 * delta, dur - 2 * delta);
      for (int p = 0; p < 50; ++p) {
        const double t = t_d(rng);
        const double h2m = elliptic_vertical_flow(params, t - delta).h2;
        const double h2 = elliptic_vertical_flow(params, t).h2;
        const double h2p = elliptic_vertical_flow(params, t + delta).h2;
        const double dd = (h2p - 2.0 * h2 + h2m) / (delta * delta);
        worst = std::max(
            worst, std::fabs(dd + params.M * h2 + 2.0 * h2 * h2 * h2));
      }
    }
    detail = fmt("max residual %.2e", worst);
    return worst < 1e-4;
  });

  criterion(4, "turn switch times match bisection; interior turns last pi",
            [](std::string& detail) {
    std::mt19937 rng(404u);
    std::uniform_real_distribution<double> phi_d(kPi / 2 + 0.05,
                                                 3 * kPi / 2 - 0.05);
    std::uniform_real_distribution<double> r_d(0.1, 3.0);
    std::uniform_int_distribution<int> sign_d(0, 1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double phi = phi_d(rng), r = r_d(rng);
      const Covector h{r * std::cos(phi), sign_d(rng) ? 1.0 : -1.0,
                       r * std::sin(phi)};
      double lo = 0.0, hi = -1.0;
      const int scan = 2048;
      for (int j = 1; j <= scan; ++j) {
        const double t = kPi * j / scan;
        if (rotation_vertical_flow(h, t).h1 >= 0.0) {
          lo = kPi * (j - 1) / scan;
          hi = t;
          break;
        }
      }
      if (hi < 0.0) return false;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rotation_vertical_flow(h, mid).h1 < 0.0 ? lo : hi) = mid;
      }
      worst = std::max(worst,
                       std::fabs(rotation_switch_time(h) - 0.5 * (lo + hi)));
    }
    // Interior turns of multi-segment extremals carry the exact value pi.
    bool interior_exact = true;
    int interior_seen = 0;
    for (int i = 0; i < 10; ++i) {
      const Trajectory traj = exp_map(random_covector(rng, 1e-3), 12.0);
      for (std::size_t j = 1; j + 1 < traj.segments.size(); ++j) {
        if (is_turn(traj.segments[j].kind)) {
          ++interior_seen;
          interior_exact &= traj.segments[j].duration == kPi;
        }
      }
    }
    detail = fmt("max switch-time error %.2e", worst) +
             fmt(", %.0f interior turns exact", interior_seen);
    return worst < 1e-10 && interior_exact && interior_seen > 0;
  });

  criterion(5, "pure rotation and straight line are exact",
            [](std::string& detail) {
    double worst = 0.0;
    for (const double t : {0.1, 1.0, 5.0}) {
      // Heading is an angle: compare poses with the wrapped metric.
      const Pose spin = exp_map(Covector{0.0, 1.0, 0.0}, t).end_pose();
      worst = std::max(worst, pose_distance(spin, Pose(0.0, 0.0, t)));
      const Pose line = exp_map(Covector{1.0, 0.0, 0.0}, t).end_pose();
      worst = std::max(worst, pose_distance(line, Pose(t, 0.0, 0.0)));
    }
    detail = fmt("max error %.2e", worst);
    return worst < 1e-12;
  });

  criterion(6, "rotate-drive-rotate plan reaches every target",
            [](std::string& detail) {
    std::mt19937 rng(606u);
    double worst = 0.0;
    bool time_exact = true;
    for (int i = 0; i < 100; ++i) {
      const Pose q0 = i < 20 ? random_pose(rng, 1.0) : Pose{};
      const Pose q1 = random_pose(rng, 2.0);
      const FeasiblePlan plan = feasible_plan(q0, q1);
      const Pose sim = compose(
          compose(compose(q0, Pose(0.0, 0.0, plan.alpha)),
                  Pose(plan.l, 0.0, 0.0)),
          Pose(0.0, 0.0, plan.beta));
      worst = std::max(worst, pose_distance(sim, q1));
      time_exact &=
          plan.T == std::fabs(plan.alpha) + plan.l + std::fabs(plan.beta);
    }
    detail = fmt("max endpoint miss %.2e", worst);
    return worst <= 1e-9 && time_exact;
  });

  criterion(7, "shooting recovers the endpoints of random extremals",
            [](std::string& detail) {
    std::mt19937 rng(707u);
    std::uniform_real_distribution<double> T_d(0.3, 3.0);
    double worst_r = 0.0, worst_dT = -1.0;
    for (int i = 0; i < 50; ++i) {
      Covector h0;
      Pose target;
      double T = 0.0;
      do {  // near-closed loops have sub-resolution chords; draw again
        h0 = random_covector(rng, 1e-3);
        T = T_d(rng);
        target = exp_map(h0, T).end_pose();
      } while (std::hypot(target.x, target.y) < 0.02);
      const auto sols = solve_bvp(target, ShootingGrid{}, 1e-6);
      if (sols.empty()) return false;
      worst_r = std::max(worst_r, sols.front().residual);
      worst_dT = std::max(worst_dT, sols.front().T - T);
    }
    detail = fmt("max residual %.2e, max T_found - T %.2e", worst_r, worst_dT);
    return worst_r < 1e-6 && worst_dT <= 1e-6;
  });

  criterion(8, "optimal trajectories keep turns at the ends only",
            [](std::string& detail) {
    std::mt19937 rng(808u);
    double worst_miss = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Pose q1 = random_pose(rng, 2.0);
      const Trajectory traj = optimal_trajectory(Pose{}, q1);
      worst_miss = std::max(worst_miss, pose_distance(traj.end_pose(), q1));
      const std::size_t n = traj.segments.size();
      for (std::size_t j = 0; j < n; ++j) {
        const ExtremalSegment& seg = traj.segments[j];
        if (is_turn(seg.kind)) {
          if (j != 0 && j + 1 != n) return false;        // interior turn
          if (seg.duration > kPi + 1e-9) return false;   // over-long turn
          continue;
        }
        for (int m = 1; m < 8; ++m) {  // middle section moves forward
          const double t = seg.t_start + seg.duration * m / 8.0;
          if (!(traj.control_at(t).u1 > 0.0)) return false;
        }
      }
    }
    detail = fmt("max endpoint miss %.2e over 100 targets", worst_miss);
    return worst_miss < 2e-6;
  });

  criterion(9, "interior reversals always admit a strict shortcut",
            [](std::string& detail) {
    std::mt19937 rng(909u);
    std::uniform_real_distribution<double> leg_d(0.3, 1.5);
    int checked = 0;
    double least_gain = 1e9;
    for (int i = 0; i < 10; ++i) {  // assembled drive / reverse / drive
      const double a = leg_d(rng), b = leg_d(rng);
      Trajectory zig;
      ExtremalSegment go;
      go.kind = Branch::Line;
      go.start_pose = Pose{};
      go.start_covector = Covector{1.0, 0.0, 0.0};
      go.duration = a;
      ExtremalSegment reverse;
      reverse.kind = Branch::Rotation;
      reverse.start_pose = Pose(a, 0.0, 0.0);
      reverse.start_covector = Covector{0.0, 1.0, 0.0};
      reverse.t_start = a;
      reverse.duration = kPi;
      ExtremalSegment back;
      back.kind = Branch::Line;
      back.start_pose = Pose(a, 0.0, kPi);
      back.start_covector = Covector{1.0, 0.0, 0.0};
      back.t_start = a + kPi;
      back.duration = b;
      zig.segments = {go, reverse, back};
      zig.total_time = a + kPi + b;
      zig.start_pose = Pose{};
      zig.start_covector = go.start_covector;
      const ReversalShortcut cut = shortcut_reversal(zig);
      if (!cut.found || !(cut.improved_total < zig.total_time - 1e-12)) {
        return false;
      }
      least_gain = std::min(least_gain, zig.total_time - cut.improved_total);
      ++checked;
    }
    while (checked < 20) {  // extremals that wander through a reversal
      const Trajectory traj = exp_map(random_covector(rng, 1e-3), 9.0);
      bool interior = false;
      for (std::size_t j = 1; j + 1 < traj.segments.size(); ++j) {
        interior |= is_turn(traj.segments[j].kind);
      }
      if (!interior) continue;
      const ReversalShortcut cut = shortcut_reversal(traj);
      if (!cut.found || !(cut.improved_total < traj.total_time - 1e-12)) {
        return false;
      }
      least_gain = std::min(least_gain, traj.total_time - cut.improved_total);
      ++checked;
    }
    detail = fmt("20 shortcuts, least gain %.3g", least_gain);
    return true;
  });

  criterion(10, "mirror targets have the same minimal time",
            [](std::string& detail) {
    std::mt19937 rng(1010u);
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      const Pose q1 = random_pose(rng, 2.0);
      const Pose mirror(q1.x, -q1.y, -q1.theta);
      const double T1 = optimal_trajectory(Pose{}, q1).total_time;
      const double T2 = optimal_trajectory(Pose{}, mirror).total_time;
      worst = std::max(worst, std::fabs(T1 - T2));
    }
    detail = fmt("max |T - T_mirror| %.2e", worst);
    return worst <= 1e-5;
  });

  criterion(11, "elliptic layer: identities, quadrature, limit cases",
            [](std::string& detail) {
    std::mt19937 rng(1111u);
    std::uniform_real_distribution<double> u_d(-15.0, 15.0);
    std::uniform_real_distribution<double> k_d(0.0, 0.999);
    double worst_id = 0.0;
    for (int i = 0; i < 500; ++i) {
      const double u = u_d(rng), k = k_d(rng);
      const JacobiValues v = jacobi(u, k);
      worst_id = std::max(worst_id,
                          std::fabs(v.sn * v.sn + v.cn * v.cn - 1.0));
      worst_id = std::max(
          worst_id, std::fabs(v.dn * v.dn + k * k * v.sn * v.sn - 1.0));
    }
    std::uniform_real_distribution<double> phi_d(-4.0, 4.0);
    std::uniform_real_distribution<double> kq_d(0.0, 0.99);
    double worst_q = 0.0;
    for (int i = 0; i < 120; ++i) {
      const double phi = phi_d(rng), k = kq_d(rng);
      worst_q = std::max(
          worst_q,
          std::fabs(incomplete_F(phi, k) - testsupport::legendre_F(phi, k)));
      worst_q = std::max(
          worst_q,
          std::fabs(incomplete_E(phi, k) - testsupport::legendre_E(phi, k)));
    }
    double worst_lim = std::fabs(complete_E(1.0) - 1.0);
    for (const double phi : {-2.1, 0.4, 1.3}) {
      worst_lim = std::max(worst_lim, std::fabs(incomplete_F(phi, 0.0) - phi));
      worst_lim = std::max(worst_lim, std::fabs(incomplete_E(phi, 0.0) - phi));
    }
    for (const double u : {-2.3, 0.4, 7.9}) {
      const JacobiValues v0 = jacobi(u, 0.0);
      worst_lim = std::max({worst_lim, std::fabs(v0.sn - std::sin(u)),
                            std::fabs(v0.cn - std::cos(u)),
                            std::fabs(v0.dn - 1.0)});
    }
    for (const double u : {-1.2, 0.3, 2.5}) {
      const JacobiValues v1 = jacobi(u, 1.0);
      worst_lim = std::max({worst_lim, std::fabs(v1.sn - std::tanh(u)),
                            std::fabs(v1.cn - 1.0 / std::cosh(u)),
                            std::fabs(v1.dn - 1.0 / std::cosh(u))});
    }
    detail = fmt("identities %.2e, quadrature %.2e,", worst_id, worst_q) +
             fmt(" limits %.2e", worst_lim);
    return worst_id < 1e-11 && worst_q < 1e-10 && worst_lim < 1e-12;
  });

  criterion(12, "command-line pipeline renders the showcase extremals",
            [](std::string& detail) {
    const std::string h0_str[2] = {"0.5,0.86602540378443865,1",
                                   "0.5,0.86602540378443865,0.7"};
    const Covector h0_val[2] = {
        Covector{0.5, std::sqrt(3.0) / 2.0, 1.0},
        Covector{0.5, std::sqrt(3.0) / 2.0, 0.7}};
    int interior_total = 0;
    for (int c = 0; c < 2; ++c) {
      const std::string csv = "acc_showcase_" + std::to_string(c) + ".csv";
      const std::string svg = "acc_showcase_" + std::to_string(c) + ".svg";
      if (run_cli("exp --h0 " + h0_str[c] + " --T 20 --samples 400 --out " +
                  csv) != 0) {
        return false;
      }
      if (run_cli("svg " + csv + " --out " + svg) != 0) return false;
      const std::string rendered = slurp(svg);
      if (rendered.find("<svg") == std::string::npos ||
          rendered.find("<polyline") == std::string::npos) {
        return false;
      }

      const Trajectory traj = exp_map(h0_val[c], 20.0);
      if (traj.segments.size() < 3) return false;
      for (std::size_t j = 0; j < traj.segments.size(); ++j) {
        const ExtremalSegment& seg = traj.segments[j];
        if (j > 0 && is_turn(seg.kind) == is_turn(traj.segments[j - 1].kind)) {
          return false;  // arcs and turns must alternate
        }
        const double t_end = std::min(seg.t_start + seg.duration, 20.0);
        if (is_turn(seg.kind)) {
          // Planar speed vanishes on turns; heading sweeps exactly pi on
          // the interior ones.
          if (traj.control_at(0.5 * (seg.t_start + t_end)).u1 != 0.0) {
            return false;
          }
          if (j > 0 && j + 1 < traj.segments.size()) {
            const double sweep = normalize_angle(traj.pose_at(t_end).theta -
                                                 traj.pose_at(seg.t_start).theta);
            if (std::fabs(std::fabs(sweep) - kPi) > 1e-9) return false;
            ++interior_total;
          }
        } else {
          for (int m = 1; m < 8; ++m) {  // speed is nonzero off junctions
            const double t = seg.t_start + (t_end - seg.t_start) * m / 8.0;
            if (!(traj.control_at(t).u1 > 0.0)) return false;
          }
        }
      }
    }
    detail = fmt("2 plots rendered, %.0f interior turns swept pi",
                 interior_total);
    return interior_total >= 2;
  });

  std::printf("acceptance: %d/12 criteria passed\n", 12 - failures);
  return failures;
}
