#pragma once

#include "halfdisk/se2.hpp"

namespace halfdisk {

/// Tolerance constants shared across the extremal machinery.
inline constexpr double kUnitLevelTol = 1e-9;    // |H - 1| contract
inline constexpr double kSignZeroTol = 1e-10;    // "zero" for sign decisions
inline constexpr double kSeparatrixTol = 1e-6;   // |E - 1| band using limit formulas

/// Momentum covector in the left-invariant frame: h1, h2 pair with the
/// translation generators along and across the heading, h3 with rotation.
struct Covector {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

/// Admissible control: forward speed u1 >= 0, turn rate u2,
/// with u1^2 + u2^2 <= 1.
struct Control {
  double u1 = 0.0;
  double u2 = 0.0;
};

/// Phase of the vertical subsystem.
///  - Rotation:           h1 < 0 (or h1 = 0 entering it): turn in place.
///  - Elliptic:           generic forward arc, Casimir level E != 1.
///  - Tractrix:           forward arc on the separatrix level E = 1.
///  - Line:               unstable equilibrium h = (1, 0, 0): straight drive.
///  - StableEquilibrium:  h = (0, +-1, 0): steady turn in place.
enum class Branch { Rotation, Elliptic, StableEquilibrium, Line, Tractrix };

const char* branch_name(Branch b);

/// Maximized Hamiltonian: |h2| on the closed half h1 <= 0, otherwise
/// sqrt(h1^2 + h2^2).
double hamiltonian_H(const Covector& h);

/// Casimir of the vertical flow: E = h1^2 + h3^2. Constant along extremals.
double casimir_E(const Covector& h);

/// Throws std::invalid_argument unless |hamiltonian_H(h) - 1| <= kUnitLevelTol.
void require_unit_level(const Covector& h);

/// Rescales (h1, h2) onto the unit level set H = 1. Requires H > 0.
Covector project_unit_level(const Covector& h);

/// Time-optimal control as a function of the covector on the level H = 1:
/// (0, sign h2) for h1 <= 0, the unit vector along (h1, h2) for h1 > 0.
/// Throws std::invalid_argument when |H - 1| > kUnitLevelTol.
Control extremal_control(const Covector& h);

/// Classifies the covector. Requires the unit level H = 1.
Branch branch_of(const Covector& h);

/// Vertical flow on a Rotation interval: (h1, h3) rotates rigidly while
/// h2 = s2 stays put. Valid for 0 <= dt <= rotation_switch_time(h0).
Covector rotation_vertical_flow(const Covector& h0, double dt);

/// First time the rotation interval ends (h1 returns to 0 from below with
/// the crossing sign): arg(-s2 h30 - i h10) taken in (0, pi]. Returns
/// +infinity at the stable equilibrium, where no switch ever occurs.
double rotation_switch_time(const Covector& h0);

/// Frozen description of one forward arc with E != 1, precomputed at the
/// arc start so repeated evaluation is cheap and reproducible.
struct EllipticArcParams {
  double E = 0.0;      // Casimir level
  double M = 0.0;      // pendulum coefficient E - 2
  double k = 0.0;      // computational modulus in (0,1):
                       //   1/sqrt(E) for E > 1, sqrt(E) for E < 1
  int s = 1;           // orientation sign of the h2 phase
  bool rotating = false;  // pendulum regime: true iff E > 1
  double alpha = 0.0;  // entry phase angle of (h2, h1)
  double xi0 = 0.0;    // elliptic phase at the arc start, in [0, 2K)
  double phase_rate = 1.0;  // d(phase)/dt: 1/k for E > 1, 1 for E < 1
  double beta0 = 0.0;  // heading of the arc frame
  double t_start = 0.0;
  Pose frame;          // pose at the arc start
  // Cached constants of the arc.
  double quarter_period = 0.0;  // complete_K(k)
  double cn0 = 1.0;
  double dn0 = 1.0;
  double eps0 = 0.0;   // jacobi_epsilon at xi0
};

/// Builds the arc description. Requires branch_of(h0) == Elliptic; covectors
/// inside the separatrix band |E - 1| < kSeparatrixTol are rejected and must
/// be routed to the limit branch instead.
EllipticArcParams elliptic_arc_params(const Covector& h0, double t_start,
                                      const Pose& frame);

/// Covector at absolute time t on the arc, t >= p.t_start.
Covector elliptic_vertical_flow(const EllipticArcParams& p, double t);

/// Duration until h1 returns to 0: the closed-form phase gap to 2K,
/// polished by a Newton pass on h1 so |h1| < 1e-12 at the switch.
double elliptic_switch_time(const EllipticArcParams& p);

}  // namespace halfdisk
