// Command-line front end: evaluate extremals, build point-turn plans, solve
// boundary value problems and render trajectories as SVG.
//
// Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 solver
// non-convergence.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfdisk/expmap.hpp"
#include "halfdisk/oracle.hpp"
#include "halfdisk/planner.hpp"
#include "halfdisk/se2.hpp"
#include "halfdisk/trajectory_io.hpp"
#include "halfdisk/vertical.hpp"

namespace {

using namespace halfdisk;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_tuple(const std::string& text, std::size_t n,
                                const char* what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(item[used])) ++used;
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw std::domain_error(std::string(what) + ": malformed number '" +
                              item + "'");
    }
  }
  if (out.size() != n) {
    throw std::domain_error(std::string(what) + ": expected " +
                            std::to_string(n) + " comma-separated values");
  }
  return out;
}

Pose parse_pose(const std::string& text, const char* what) {
  const auto v = parse_tuple(text, 3, what);
  return Pose(v[0], v[1], v[2]);
}

Covector parse_covector(const std::string& text, const char* what) {
  const auto v = parse_tuple(text, 3, what);
  return Covector{v[0], v[1], v[2]};
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    if (std::fwrite(content.data(), 1, content.size(), stdout) !=
        content.size()) {
      throw IoError("failed to write to stdout");
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open output file: " + path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("failed to write output file: " + path);
  }
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open input file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed to read input file: " + path);
  }
  return buf.str();
}

std::string render(const std::vector<TrajectorySample>& samples,
                   const std::string& format) {
  if (format == "csv") {
    return to_csv(samples);
  }
  if (format == "json") {
    return to_json(samples);
  }
  if (format == "svg") {
    return to_svg(samples);
  }
  throw std::domain_error("unknown format: " + format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-optimal trajectories of the forward-only unicycle"};
  app.require_subcommand(1);

  std::string opt_q0 = "0,0,0";
  std::string opt_q1;
  std::string opt_h0;
  std::string opt_grid = "32,32,32";
  std::string opt_format;
  std::string opt_out;
  std::string opt_input;
  double opt_T = 0.0;
  double opt_tol = 1e-6;
  double opt_h3max = 10.0;
  double opt_ticks = 0.5;
  int opt_samples = 101;
  bool opt_renormalize = false;
  bool opt_best = false;

  CLI::App* cmd_exp =
      app.add_subcommand("exp", "Evaluate one extremal trajectory");
  cmd_exp->add_option("--h0", opt_h0, "initial covector h1,h2,h3")
      ->required();
  cmd_exp->add_option("--T", opt_T, "duration")->required();
  cmd_exp->add_option("--q0", opt_q0, "start pose x,y,theta");
  cmd_exp->add_option("--samples", opt_samples, "number of samples (>= 2)");
  cmd_exp->add_option("--format", opt_format, "csv|json|svg");
  cmd_exp->add_option("--out", opt_out, "output path (default stdout)");
  cmd_exp->add_flag("--renormalize", opt_renormalize,
                    "rescale h0 onto the level set H = 1 first");
  cmd_exp->callback([&]() {
    Covector h0 = parse_covector(opt_h0, "--h0");
    if (opt_renormalize) {
      h0 = project_unit_level(h0);
    }
    const Pose q0 = parse_pose(opt_q0, "--q0");
    if (opt_samples < 2) {
      throw std::domain_error("--samples must be >= 2");
    }
    const Trajectory traj = exp_map(h0, opt_T, q0);
    const auto samples = sample_trajectory(traj, opt_samples);
    write_output(opt_out,
                 render(samples, opt_format.empty() ? "csv" : opt_format));
  });

  CLI::App* cmd_plan =
      app.add_subcommand("plan", "Three-phase rotate/drive/rotate plan");
  cmd_plan->add_option("--q1", opt_q1, "target pose x,y,theta")->required();
  cmd_plan->add_option("--q0", opt_q0, "start pose x,y,theta");
  cmd_plan->add_option("--out", opt_out, "output path (default stdout)");
  cmd_plan->callback([&]() {
    const FeasiblePlan plan =
        feasible_plan(parse_pose(opt_q0, "--q0"), parse_pose(opt_q1, "--q1"));
    nlohmann::json j{{"alpha", plan.alpha},
                     {"l", plan.l},
                     {"beta", plan.beta},
                     {"T", plan.T}};
    write_output(opt_out, j.dump(2) + "\n");
  });

  CLI::App* cmd_shoot =
      app.add_subcommand("shoot", "Solve the boundary value problem");
  cmd_shoot->add_option("--q1", opt_q1, "target pose x,y,theta")->required();
  cmd_shoot->add_option("--q0", opt_q0, "start pose x,y,theta");
  cmd_shoot->add_option("--grid", opt_grid, "seed counts n_psi,n_h3,n_T");
  cmd_shoot->add_option("--tol", opt_tol, "residual tolerance");
  cmd_shoot->add_option("--h3max", opt_h3max, "half-width of the h3 seed box");
  cmd_shoot->add_flag("--best", opt_best,
                      "emit the minimum-time trajectory instead of the list");
  cmd_shoot->add_option("--samples", opt_samples,
                        "samples for --best (>= 2)");
  cmd_shoot->add_option("--format", opt_format, "json, or csv|json|svg with --best");
  cmd_shoot->add_option("--out", opt_out, "output path (default stdout)");
  cmd_shoot->callback([&]() {
    const Pose q0 = parse_pose(opt_q0, "--q0");
    const Pose q1 = parse_pose(opt_q1, "--q1");
    const auto g = parse_tuple(opt_grid, 3, "--grid");
    ShootingGrid grid;
    grid.n_psi = static_cast<int>(g[0]);
    grid.n_h3 = static_cast<int>(g[1]);
    grid.n_T = static_cast<int>(g[2]);
    ShootingConfig cfg;
    cfg.h3_max = opt_h3max;
    const auto sols = solve_bvp(relative_target(q0, q1), grid, opt_tol, cfg);
    if (opt_best) {
      if (opt_samples < 2) {
        throw std::domain_error("--samples must be >= 2");
      }
      const ShootingSolution& best = sols.front();
      const Trajectory traj = exp_map(decode(best.start), best.T, q0);
      const auto samples = sample_trajectory(traj, opt_samples);
      write_output(opt_out,
                   render(samples, opt_format.empty() ? "csv" : opt_format));
      return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const ShootingSolution& s : sols) {
      arr.push_back({{"psi", s.start.psi},
                     {"h3", s.start.h3},
                     {"T", s.T},
                     {"residual", s.residual}});
    }
    write_output(opt_out, arr.dump(2) + "\n");
  });

  CLI::App* cmd_svg =
      app.add_subcommand("svg", "Render a CSV trajectory as SVG");
  cmd_svg->add_option("input", opt_input, "CSV file produced by exp/shoot")
      ->required();
  cmd_svg->add_option("--out", opt_out, "output path (default stdout)");
  cmd_svg->add_option("--ticks", opt_ticks, "heading tick spacing in time");
  cmd_svg->callback([&]() {
    const auto samples = parse_csv(read_input(opt_input));
    write_output(opt_out, to_svg(samples, opt_ticks));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const SolverNoConvergence& e) {
    std::fprintf(stderr, "error: %s (best residual %.3e at psi=%.6f h3=%.6f T=%.6f)\n",
                 e.what(), e.best_residual, e.best_start.psi, e.best_start.h3,
                 e.best_T);
    return 4;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
