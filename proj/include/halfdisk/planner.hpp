#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "halfdisk/expmap.hpp"
#include "halfdisk/se2.hpp"
#include "halfdisk/vertical.hpp"

namespace halfdisk {

/// Three-phase rotate / drive / rotate plan. Always feasible; its time
/// T = |alpha| + l + |beta| is an upper bound for the optimal time.
struct FeasiblePlan {
  double alpha = 0.0;  // first turn, in (-pi, pi]
  double l = 0.0;      // straight drive length
  double beta = 0.0;   // final turn, in (-pi, pi]
  double T = 0.0;
};

/// Builds the point-turn plan from q0 to q1: aim at the target position,
/// drive the chord, restore the target heading. A zero chord aims nowhere
/// (alpha = 0).
FeasiblePlan feasible_plan(const Pose& q0, const Pose& q1);

/// Closed-form endpoint of the plan applied from q0.
Pose execute_plan(const Pose& q0, const FeasiblePlan& plan);

/// Chart on the unit-level cylinder of initial covectors, unrolled so that
/// one real coordinate covers both the forward half-circle and the two
/// turn-in-place rays:
///   |psi| <= pi/2        -> (h1, h2) = (cos psi, sin psi)
///   psi >  pi/2          -> (h1, h2) = (pi/2 - psi, +1)
///   psi < -pi/2          -> (h1, h2) = (psi + pi/2, -1)
struct CylinderPoint {
  double psi = 0.0;
  double h3 = 0.0;
};

Covector decode(const CylinderPoint& p);
CylinderPoint encode(const Covector& h);

/// One root of the shooting equations.
struct ShootingSolution {
  CylinderPoint start;
  double T = 0.0;
  double residual = 0.0;
  Trajectory trajectory;
};

struct ShootingGrid {
  int n_psi = 32;
  int n_h3 = 32;
  int n_T = 32;
};

struct ShootingConfig {
  double h3_max = 10.0;        // half-width of the h3 seed box
  double psi_pad = kPi / 2.0;  // seed range extension beyond psi = +-pi
  double angle_weight = 1.0;   // heading weight in the residual metric
  int refine_candidates = 64;  // best seeds taken to Newton refinement
  int max_iterations = 60;     // refinement iteration cap per seed
  double dedup_radius = 1e-4;  // (psi, h3, T) distance treated as one root
};

/// Endpoint miss of the extremal launched from p over time T, against the
/// target expressed in the start frame. Returns the scalar residual and the
/// reached endpoint.
std::pair<double, Pose> shooting_residual(const CylinderPoint& p, double T,
                                          const Pose& target);

/// Raised when no grid seed refines below the tolerance. Carries the best
/// candidate found so the caller can report how close the search came.
class SolverNoConvergence : public std::runtime_error {
 public:
  SolverNoConvergence(double best_residual, const CylinderPoint& best_start,
                      double best_T);
  double best_residual;
  CylinderPoint best_start;
  double best_T;
};

/// Deterministic multi-start shooting: seeds the (psi, h3, T) box on a
/// uniform grid, refines the most promising seeds by damped Gauss-Newton
/// with forward-difference Jacobians, deduplicates the roots and returns
/// them sorted by ascending T (ties by |h3|, then psi). Every returned
/// solution has residual <= tol. Requires all grid counts >= 8 and tol > 0.
std::vector<ShootingSolution> solve_bvp(const Pose& target,
                                        const ShootingGrid& grid, double tol,
                                        const ShootingConfig& cfg = {});

/// Shortest trajectory from q0 to q1 produced by the shooting solver, with
/// the turn-arc-turn optimality structure verified on the winner. Returns an
/// empty zero-time trajectory when q1 == q0. Throws SolverNoConvergence when
/// the solver finds no root (the three-phase plan always remains available
/// as a fallback bound).
Trajectory optimal_trajectory(const Pose& q0, const Pose& q1,
                              double tol = 1e-6);

/// Result of cutting one interior reversal (a turn-in-place of angle pi
/// between two forward arcs) out of a trajectory: poses shortly before and
/// after the reversal are rejoined by a three-phase plan, which is strictly
/// faster whenever the headings allow it.
struct ReversalShortcut {
  bool found = false;
  double t_a = 0.0;            // span start replaced by the shortcut
  double t_c = 0.0;            // span end replaced by the shortcut
  double shortcut_time = 0.0;  // three-phase time for the replaced span
  double improved_total = 0.0; // total_time - (t_c - t_a) + shortcut_time
};

/// Detects the first interior reversal of the trajectory and builds the
/// shortcut. Returns found = false when the trajectory has no interior
/// reversal.
ReversalShortcut shortcut_reversal(const Trajectory& traj);

}  // namespace halfdisk
