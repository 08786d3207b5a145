#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "game.hpp"
#include "geometry.hpp"
#include "network.hpp"
#include "polyproj.hpp"

namespace aggsolve {

/// Stacked solver state: actions x (N*n), consensus integrators phi (N*M),
/// aggregate estimates zeta = phi + q(x) (N*M), projection outputs y (N*n).
struct SolverState {
  double t = 0.0;
  Vec x, phi, zeta, y;
};

using Projector = std::function<Vec(int, ConstSpan)>;

struct StepStats {
  long qp_iterations = 0;
  double proj_seconds = 0.0;
};

/// One explicit Euler step of the consensus-projection dynamics with caller-
/// supplied per-player projectors: y_i = proj_i(x_i - beta1 U_i(x_i, zeta_i)),
/// x += h (y - x), phi_i += h beta2 sum_j a_ij (zeta_j - zeta_i),
/// zeta_i = phi_i + q_i(x_i).
SolverState step_with(const AggregativeGame& game,
                      const std::vector<Projector>& projectors,
                      const Digraph& graph, double beta1, double beta2,
                      const SolverState& state, double h,
                      StepStats* stats = nullptr);

/// Algorithm step with y_i = SOL-QP(x_i, zeta_i) on the inscribed polyhedra.
SolverState step_approx(const AggregativeGame& game,
                        const std::vector<Polyhedron>& polys,
                        const Digraph& graph, double beta1, double beta2,
                        const SolverState& state, double h,
                        StepStats* stats = nullptr,
                        std::vector<Vec>* warm_multipliers = nullptr);

/// Comparison step with the exact body projection in place of the QP.
SolverState step_exact(const AggregativeGame& game, const Digraph& graph,
                       double beta1, double beta2, const SolverState& state,
                       double h, StepStats* stats = nullptr);

enum class Mode { approx, exact };

struct RunOptions {
  double beta1 = 0.1;
  double beta2 = 1.0;
  double h = 0.01;        // must satisfy h <= 1 for feasibility invariance
  double t_tol = 1e-3;
  long max_steps = 100000;
  int record_every = 1;
  bool warm_start = true;
  bool use_rk4 = false;   // diagnostic only; not used by acceptance runs
  bool random_init = false;
  std::uint64_t seed = 0;
  double qp_tol = 1e-10;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> zeta;
  std::size_t size() const { return t.size(); }
};

struct RunReport {
  bool converged = false;
  long steps = 0;
  double wall_time = 0.0;   // seconds around the stepping loop only
  double proj_time = 0.0;   // seconds accumulated around projections
  Vec x_final, zeta_final;
  long qp_iterations_total = 0;
  double residual_x = std::numeric_limits<double>::infinity();
  double residual_zeta = std::numeric_limits<double>::infinity();
  GainCertificate gain;
  bool gain_ok = true;
};

struct RunResult {
  Trajectory trajectory;
  RunReport report;
};

/// Feasible initial state per Algorithm 1: x(0) = body centers (or a recorded
/// random feasible draw), y(0) = x(0), phi(0) = 0, zeta(0) = q(x(0)).
SolverState initial_state(const AggregativeGame& game,
                          const std::vector<Polyhedron>* polys = nullptr,
                          bool random_init = false, std::uint64_t seed = 0);

/// Integrates until both forward-difference residuals ||dx||/h and
/// ||dzeta||/h fall below t_tol, or max_steps. Nonconvergence is reported,
/// not thrown; NaN states abort with std::runtime_error.
RunResult run(const AggregativeGame& game, Mode mode,
              const std::vector<Polyhedron>* polys, const Digraph& graph,
              const RunOptions& options);

}  // namespace aggsolve
