#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"
#include "dynamics.hpp"
#include "game.hpp"
#include "metrics.hpp"

namespace aggsolve {

enum class Status { ok = 0, usage = 1, nonconverged = 2, numeric = 3 };

/// Builds the game from `model.*` keys (builtins selected by name with
/// overridable scalar parameters).
AggregativeGame build_model(const KeyValueConfig& cfg);

/// Builds the digraph from `graph.*` keys or the compact `graph.spec` string
/// (ring | complete | er:<p>[:<seed>] | matrix).
Digraph build_graph(const KeyValueConfig& cfg, int default_n);

struct ApproxSpec {
  std::string mode = "regular";  // regular | greedy | exact | box | file
  int count = 8;                 // m for regular, s for greedy
  double theta0 = 0.0;
  std::string file;
  bool align_ne = false;         // orient so the reference NE sits mid-edge-fraction
  double align_fraction = 0.125;
};

ApproxSpec parse_approx(const KeyValueConfig& cfg);

/// Instantiates per-player polyhedra for the given spec; `x_reference` is
/// required when align_ne is set (per-player boundary parameter alignment).
std::vector<Polyhedron> build_approximation(const AggregativeGame& game,
                                            const ApproxSpec& spec,
                                            const Vec* x_reference = nullptr);

RunOptions build_options(const KeyValueConfig& cfg, const std::string& model_name);

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const AggregativeGame& game);

/// Executes a single run, writing trajectory.csv and report.txt under
/// `out.dir` (plus reference_ne.txt for exact runs).
Status cmd_run(const KeyValueConfig& cfg, std::ostream& log);

/// Polygon sweep (Table-1 style): one CSV row per m with
/// polygon,s,h_max,delta_H,epsilon_hat,ne_distance,steps,wall_time_s and a
/// trailing monotonicity summary line.
Status cmd_sweep_polygons(const KeyValueConfig& cfg, const std::string& m_list,
                          std::ostream& log);

/// Timing comparison across modes (exact vs polyhedral approximations),
/// medians over `compare.repeats` repetitions.
Status cmd_compare(const KeyValueConfig& cfg, std::ostream& log);

/// Prints balance / strong connectivity / lambda for the configured graph.
Status cmd_check_graph(const KeyValueConfig& cfg, std::ostream& log);

/// Runs the library invariant suite; one ok/FAIL line per check.
Status cmd_validate(const KeyValueConfig& cfg, std::ostream& log);

/// Worker width for sweeps: AGGSOLVE_THREADS env var, hardware concurrency
/// otherwise, never more than the job count.
int worker_width(int jobs);

}  // namespace aggsolve
