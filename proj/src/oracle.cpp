#include "halfdisk/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace halfdisk {

namespace {

// State vector: x, y, theta, h1, h2, h3. Theta is kept unwrapped during
// integration and wrapped only when emitting poses.
using State = std::array<double, 6>;

/// Extremal control law extended off the exact level set H = 1, so that
/// intermediate RK4 stages (which drift off the set by O(dt^2)) still get
/// the maximizing direction.
Control stage_control(double h1, double h2) {
  if (h1 > 0.0) {
    const double n = std::hypot(h1, h2);
    if (n == 0.0) {
      return Control{0.0, 1.0};
    }
    return Control{h1 / n, h2 / n};
  }
  return Control{0.0, h2 >= 0.0 ? 1.0 : -1.0};
}

State derivative(const State& y) {
  const Control u = stage_control(y[3], y[4]);
  return State{u.u1 * std::cos(y[2]), u.u1 * std::sin(y[2]), u.u2,
               -u.u2 * y[5], u.u1 * y[5], u.u2 * y[3]};
}

State rk4_step(const State& y, double h) {
  const State k1 = derivative(y);
  State p;
  for (int i = 0; i < 6; ++i) p[i] = y[i] + 0.5 * h * k1[i];
  const State k2 = derivative(p);
  for (int i = 0; i < 6; ++i) p[i] = y[i] + 0.5 * h * k2[i];
  const State k3 = derivative(p);
  for (int i = 0; i < 6; ++i) p[i] = y[i] + h * k3[i];
  const State k4 = derivative(p);
  State out;
  for (int i = 0; i < 6; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

OracleState to_record(double t, const State& y) {
  OracleState s;
  s.t = t;
  s.pose = Pose(y[0], y[1], y[2]);
  s.covector = Covector{y[3], y[4], y[5]};
  return s;
}

void check_energy(const State& y) {
  const double H = hamiltonian_H(Covector{y[3], y[4], y[5]});
  if (std::fabs(H - 1.0) > 1e-6) {
    throw std::runtime_error("integrate_pmp: Hamiltonian drift beyond 1e-6");
  }
}

}  // namespace

std::vector<OracleState> integrate_pmp(const Covector& h0, double T,
                                       double dt, const Pose& q0,
                                       const std::vector<double>& record_times) {
  require_unit_level(h0);
  if (!(dt > 0.0) || dt > 1e-3) {
    throw std::domain_error("integrate_pmp: dt must be in (0, 1e-3]");
  }
  if (!std::isfinite(T) || T < 0.0) {
    throw std::domain_error("integrate_pmp: T must be finite and >= 0");
  }
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (record_times[i] < 0.0 || record_times[i] > T + 1e-12 ||
        (i > 0 && record_times[i] < record_times[i - 1])) {
      throw std::domain_error("integrate_pmp: bad record times");
    }
  }

  State y{q0.x, q0.y, q0.theta, h0.h1, h0.h2, h0.h3};
  double t = 0.0;
  std::vector<OracleState> out;
  std::size_t next_record = 0;
  const bool record_all = record_times.empty();

  auto maybe_record = [&]() {
    if (record_all) {
      out.push_back(to_record(t, y));
      return;
    }
    while (next_record < record_times.size() &&
           record_times[next_record] <= t + 1e-12) {
      out.push_back(to_record(record_times[next_record], y));
      ++next_record;
    }
  };

  maybe_record();
  while (t < T - 1e-15) {
    double step = std::min(dt, T - t);
    if (!record_all && next_record < record_times.size()) {
      step = std::min(step, record_times[next_record] - t);
      if (step <= 1e-15) {
        step = std::min(dt, T - t);
      }
    }

    State y1 = rk4_step(y, step);

    // Locate a switch-line crossing inside the step by bisection on the
    // sub-step length, then snap onto the line.
    if ((y[3] > 0.0 && y1[3] < 0.0) || (y[3] < 0.0 && y1[3] > 0.0)) {
      double lo = 0.0, hi = step;
      State yhi = y1;
      while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const State ym = rk4_step(y, mid);
        if ((y[3] > 0.0) == (ym[3] > 0.0)) {
          lo = mid;
        } else {
          hi = mid;
          yhi = ym;
        }
      }
      y1 = yhi;
      step = hi;
      y1[3] = 0.0;
      if (y1[4] * y1[5] > 0.0) {
        // Turn-in-place interval begins; |h2| = 1 by conservation of H.
        y1[4] = y1[4] >= 0.0 ? 1.0 : -1.0;
      }
    }

    y = y1;
    t += step;
    check_energy(y);
    maybe_record();
  }
  if (record_all && (out.empty() || out.back().t < t - 1e-15)) {
    out.push_back(to_record(t, y));
  }
  // A final requested time equal to T is served by the terminal state.
  if (!record_all) {
    while (next_record < record_times.size()) {
      out.push_back(to_record(record_times[next_record], y));
      ++next_record;
    }
  }
  return out;
}

std::vector<TrajectorySample> oracle_samples(const std::vector<OracleState>& states) {
  std::vector<TrajectorySample> out;
  out.reserve(states.size());
  for (const OracleState& s : states) {
    TrajectorySample smp;
    smp.t = s.t;
    smp.pose = s.pose;
    smp.covector = s.covector;
    const Covector proj = project_unit_level(s.covector);
    smp.control = extremal_control(proj);
    out.push_back(smp);
  }
  return out;
}

double trajectory_distance(const std::vector<TrajectorySample>& a,
                           const std::vector<TrajectorySample>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("trajectory_distance: sample grids differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i].t - b[i].t) > 1e-9) {
      throw std::invalid_argument("trajectory_distance: sample grids differ");
    }
    worst = std::max(worst, pose_distance(a[i].pose, b[i].pose));
  }
  return worst;
}

}  // namespace halfdisk
