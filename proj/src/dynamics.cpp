#include "dynamics.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aggsolve {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Projector> qp_projectors(const std::vector<Polyhedron>& polys,
                                     double qp_tol, StepStats* stats,
                                     std::vector<Vec>* warm) {
  std::vector<Projector> out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const Polyhedron* poly = &polys[i];
    out.push_back([poly, qp_tol, stats, warm, i](int, ConstSpan w) {
      Vec* wm = warm ? &(*warm)[i] : nullptr;
      QpSolution sol = project_polyhedron(*poly, w, qp_tol, wm);
      if (stats) stats->qp_iterations += sol.iterations;
      if (wm) *wm = sol.multipliers;
      return std::move(sol.point);
    });
  }
  return out;
}

std::vector<Projector> body_projectors(const AggregativeGame& game) {
  std::vector<Projector> out;
  for (int i = 0; i < game.players; ++i) {
    const ConvexBody* body = &game.bodies[i];
    out.push_back([body](int, ConstSpan w) { return body->project(w); });
  }
  return out;
}

struct Derivative {
  Vec dx;   // N*n
  Vec dphi; // N*M
};

/// Right-hand side of the compact dynamics at (x, phi).
Derivative rhs(const AggregativeGame& game,
               const std::vector<Projector>& projectors, const Digraph& graph,
               double beta1, double beta2, ConstSpan x, ConstSpan phi,
               StepStats* stats) {
  const int n = game.action_dim, m = game.aggregate_dim, np = game.players;
  Vec zeta(np * m);
  for (int i = 0; i < np; ++i) {
    const Vec qi = game.local_q(i, x.subspan(i * n, n));
    for (int k = 0; k < m; ++k) zeta[i * m + k] = phi[i * m + k] + qi[k];
  }
  Derivative d;
  d.dx.assign(np * n, 0.0);
  d.dphi.assign(np * m, 0.0);
  const auto t0 = Clock::now();
  for (int i = 0; i < np; ++i) {
    const Vec u = game.u_map(i, x.subspan(i * n, n),
                             ConstSpan(zeta).subspan(i * m, m));
    Vec w(n);
    for (int k = 0; k < n; ++k) w[k] = x[i * n + k] - beta1 * u[k];
    const Vec y = projectors[i](i, w);
    for (int k = 0; k < n; ++k) d.dx[i * n + k] = y[k] - x[i * n + k];
  }
  if (stats) stats->proj_seconds += seconds_since(t0);
  const Mat& a = graph.weights();
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) {
      const double w = a(i, j);
      if (w == 0.0) continue;
      for (int k = 0; k < m; ++k)
        d.dphi[i * m + k] += beta2 * w * (zeta[j * m + k] - zeta[i * m + k]);
    }
  return d;
}

SolverState advance(const AggregativeGame& game,
                    const std::vector<Projector>& projectors,
                    const Digraph& graph, double beta1, double beta2,
                    const SolverState& state, double h, StepStats* stats,
                    bool use_rk4) {
  const int n = game.action_dim, m = game.aggregate_dim, np = game.players;
  SolverState next;
  next.t = state.t + h;
  next.x.resize(np * n);
  next.phi.resize(np * m);

  if (!use_rk4) {
    const int nn = np * n, mm = np * m;
    // Euler: the y computed from the pre-step state is also recorded
    Derivative d = rhs(game, projectors, graph, beta1, beta2, state.x,
                       state.phi, stats);
    next.y.resize(nn);
    for (int k = 0; k < nn; ++k) {
      next.y[k] = state.x[k] + d.dx[k];
      next.x[k] = state.x[k] + h * d.dx[k];
    }
    for (int k = 0; k < mm; ++k) next.phi[k] = state.phi[k] + h * d.dphi[k];
  } else {
    auto blend = [&](const Vec& base, const Vec& delta, double f) {
      Vec out(base.size());
      for (std::size_t k = 0; k < base.size(); ++k) out[k] = base[k] + f * delta[k];
      return out;
    };
    Derivative k1 = rhs(game, projectors, graph, beta1, beta2, state.x, state.phi, stats);
    Derivative k2 = rhs(game, projectors, graph, beta1, beta2,
                        blend(state.x, k1.dx, h / 2), blend(state.phi, k1.dphi, h / 2), stats);
    Derivative k3 = rhs(game, projectors, graph, beta1, beta2,
                        blend(state.x, k2.dx, h / 2), blend(state.phi, k2.dphi, h / 2), stats);
    Derivative k4 = rhs(game, projectors, graph, beta1, beta2,
                        blend(state.x, k3.dx, h), blend(state.phi, k3.dphi, h), stats);
    next.y.resize(np * n);
    for (int k = 0; k < np * n; ++k) {
      const double dx = (k1.dx[k] + 2 * k2.dx[k] + 2 * k3.dx[k] + k4.dx[k]) / 6.0;
      next.x[k] = state.x[k] + h * dx;
      next.y[k] = state.x[k] + k1.dx[k];
    }
    for (int k = 0; k < np * m; ++k)
      next.phi[k] = state.phi[k] +
                    h * (k1.dphi[k] + 2 * k2.dphi[k] + 2 * k3.dphi[k] + k4.dphi[k]) / 6.0;
  }

  next.zeta.resize(np * m);
  for (int i = 0; i < np; ++i) {
    const Vec qi = game.local_q(i, ConstSpan(next.x).subspan(i * n, n));
    for (int k = 0; k < m; ++k) next.zeta[i * m + k] = next.phi[i * m + k] + qi[k];
  }
  return next;
}

}  // namespace

SolverState step_with(const AggregativeGame& game,
                      const std::vector<Projector>& projectors,
                      const Digraph& graph, double beta1, double beta2,
                      const SolverState& state, double h, StepStats* stats) {
  if (!(h > 0.0)) throw std::invalid_argument("step: h must be positive");
  return advance(game, projectors, graph, beta1, beta2, state, h, stats, false);
}

SolverState step_approx(const AggregativeGame& game,
                        const std::vector<Polyhedron>& polys,
                        const Digraph& graph, double beta1, double beta2,
                        const SolverState& state, double h, StepStats* stats,
                        std::vector<Vec>* warm_multipliers) {
  if (static_cast<int>(polys.size()) != game.players)
    throw std::invalid_argument("step_approx: one polyhedron per player");
  const auto projectors = qp_projectors(polys, 1e-10, stats, warm_multipliers);
  return step_with(game, projectors, graph, beta1, beta2, state, h, stats);
}

SolverState step_exact(const AggregativeGame& game, const Digraph& graph,
                       double beta1, double beta2, const SolverState& state,
                       double h, StepStats* stats) {
  return step_with(game, body_projectors(game), graph, beta1, beta2, state, h,
                   stats);
}

SolverState initial_state(const AggregativeGame& game,
                          const std::vector<Polyhedron>* polys,
                          bool random_init, std::uint64_t seed) {
  const int n = game.action_dim, m = game.aggregate_dim, np = game.players;
  SolverState s;
  s.x.resize(np * n);
  for (int i = 0; i < np; ++i) {
    Vec p = game.bodies[i].center();
    if (random_init) {
      Rng rng(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull);
      const ConvexBody& body = game.bodies[i];
      for (int tries = 0; tries < 100000; ++tries) {
        Vec cand(n);
        for (int k = 0; k < n; ++k) {
          const double c = body.center()[k], v = body.semiaxes()[k];
          cand[k] = rng.uniform(c - v, c + v);
        }
        if (!body.contains(cand, 0.0)) continue;
        if (polys && !(*polys)[i].contains(cand, 0.0)) continue;
        p = std::move(cand);
        break;
      }
    }
    std::copy(p.begin(), p.end(), s.x.begin() + i * n);
  }
  s.y = s.x;
  s.phi.assign(np * m, 0.0);
  s.zeta.resize(np * m);
  for (int i = 0; i < np; ++i) {
    const Vec qi = game.local_q(i, ConstSpan(s.x).subspan(i * n, n));
    std::copy(qi.begin(), qi.end(), s.zeta.begin() + i * m);
  }
  return s;
}

RunResult run(const AggregativeGame& game, Mode mode,
              const std::vector<Polyhedron>* polys, const Digraph& graph,
              const RunOptions& options) {
  if (mode == Mode::approx &&
      (!polys || static_cast<int>(polys->size()) != game.players))
    throw std::invalid_argument("run: approx mode needs one polyhedron per player");
  if (!(options.h > 0.0) || options.h > 1.0)
    throw std::invalid_argument("run: step size must lie in (0, 1]");

  RunResult result;
  RunReport& report = result.report;
  const GameConstants& gc = game.constants;
  if (gc.kappa > 0.0 && gc.c1 > 0.0 && gc.c2 > 0.0 && gc.c3 > 0.0) {
    report.gain = gain_gate(graph, gc.kappa, gc.c1, gc.c2, gc.c3,
                            options.beta1, options.beta2);
    report.gain_ok = report.gain.beta1_ok && report.gain.beta2_ok;
  }

  SolverState state = initial_state(game, mode == Mode::approx ? polys : nullptr,
                                    options.random_init, options.seed);
  std::vector<Vec> warm(game.players);
  StepStats stats;
  std::vector<Projector> projectors =
      mode == Mode::approx
          ? qp_projectors(*polys, options.qp_tol, &stats,
                          options.warm_start ? &warm : nullptr)
          : body_projectors(game);

  Trajectory& traj = result.trajectory;
  auto record = [&](const SolverState& st) {
    traj.t.push_back(st.t);
    traj.x.push_back(st.x);
    traj.zeta.push_back(st.zeta);
  };
  record(state);

  const auto t0 = Clock::now();
  long k = 0;
  for (; k < options.max_steps; ++k) {
    SolverState next = advance(game, projectors, graph, options.beta1,
                               options.beta2, state, options.h, &stats,
                               options.use_rk4);
    report.residual_x = distance(next.x, state.x) / options.h;
    report.residual_zeta = distance(next.zeta, state.zeta) / options.h;
    if (!std::isfinite(report.residual_x) || !std::isfinite(report.residual_zeta))
      throw std::runtime_error("run: state diverged to NaN/inf at step " +
                               std::to_string(k));
    state = std::move(next);
    const bool done = report.residual_x <= options.t_tol &&
                      report.residual_zeta <= options.t_tol;
    if ((k + 1) % options.record_every == 0 || done || k + 1 == options.max_steps)
      record(state);
    if (done) {
      report.converged = true;
      ++k;
      break;
    }
  }
  report.wall_time = seconds_since(t0);
  report.steps = k;
  report.proj_time = stats.proj_seconds;
  report.qp_iterations_total = stats.qp_iterations;
  report.x_final = state.x;
  report.zeta_final = state.zeta;
  return result;
}

}  // namespace aggsolve
