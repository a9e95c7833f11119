#pragma once

#include <vector>

#include "halfdisk/expmap.hpp"
#include "halfdisk/se2.hpp"
#include "halfdisk/vertical.hpp"

namespace halfdisk {

/// State record of the direct integrator.
struct OracleState {
  double t = 0.0;
  Pose pose;
  Covector covector;
};

/// Direct fixed-step RK4 integration of the coupled horizontal/vertical
/// extremal system, independent of the closed forms. The control is
/// re-evaluated from the covector at every stage. Steps that cross the
/// switch line h1 = 0 are bisected until the crossing is located to 1e-12;
/// h1 is snapped to 0 there and h2 to +-1 when a turn-in-place interval
/// begins. Requires 0 < dt <= 1e-3 and |H(h0) - 1| <= kUnitLevelTol.
///
/// With record_times empty, every accepted step is recorded; otherwise the
/// integrator lands on and records exactly the requested times (ascending,
/// within [0, T]).
/// Throws std::runtime_error if |H - 1| drifts beyond 1e-6.
std::vector<OracleState> integrate_pmp(const Covector& h0, double T,
                                       double dt, const Pose& q0 = Pose{},
                                       const std::vector<double>& record_times = {});

/// Converts oracle records to trajectory samples (control filled from the
/// covector).
std::vector<TrajectorySample> oracle_samples(const std::vector<OracleState>& states);

/// Uniform distance between two trajectories sampled on the same time grid:
/// max over samples of planar distance plus wrapped heading distance.
/// Throws std::invalid_argument when the grids differ.
double trajectory_distance(const std::vector<TrajectorySample>& a,
                           const std::vector<TrajectorySample>& b);

}  // namespace halfdisk
