#pragma once

#include <functional>
#include <vector>

#include "geometry.hpp"
#include "vecmat.hpp"

namespace aggsolve {

struct GameConstants {
  double kappa = 0.0;  // strong monotonicity of the pseudo-gradient
  double c1 = 0.0;     // Lipschitz constant of U in x
  double c2 = 0.0;     // Lipschitz constant of U in zeta
  double c3 = 0.0;     // Lipschitz constant of the aggregation maps q_i
};

/// N-player aggregative game: payoffs f_i(x_i, Q), aggregation maps q_i with
/// Q(x) = (1/N) sum q_i(x_i), compact convex feasible bodies, and regularity
/// constants. Evaluators are pure; game values are immutable once built.
struct AggregativeGame {
  using PayoffFn = std::function<double(int, ConstSpan, ConstSpan)>;
  using GradFn = std::function<Vec(int, ConstSpan, ConstSpan)>;
  using MapFn = std::function<Vec(int, ConstSpan)>;
  using JacFn = std::function<Mat(int, ConstSpan)>;

  int players = 0;       // N
  int action_dim = 0;    // n
  int aggregate_dim = 0; // M
  std::vector<ConvexBody> bodies;
  PayoffFn payoff;  // f_i(x_i, Q)
  GradFn grad_x;    // nullable: central finite differences on payoff
  GradFn grad_q;    // nullable: central finite differences on payoff
  MapFn q_map;      // nullable: identity (requires M == n)
  JacFn q_jacobian; // nullable: identity
  GameConstants constants;
  Vec payoff_lipschitz;  // sigma_i estimates; empty until estimated

  Vec local_q(int i, ConstSpan xi) const;
  Mat local_q_jac(int i, ConstSpan xi) const;

  /// Q(x) = (1/N) sum_i q_i(x_i) for a stacked profile of N*n entries.
  Vec aggregate(ConstSpan x) const;

  /// J_i(x) = f_i(x_i, Q(x)).
  double payoff_at(int i, ConstSpan x) const;

  /// U_i(x_i, zeta_i) = grad_x f_i + (1/N) (grad q_i)^T grad_Q f_i, both
  /// evaluated with the aggregate argument substituted at zeta_i.
  Vec u_map(int i, ConstSpan xi, ConstSpan zetai) const;

  /// F(x) = col(grad_{x_i} J_i) including the (1/N) self-contribution of x_i
  /// through Q; equals u_map stacked at zeta_i = Q(x).
  Vec pseudo_gradient(ConstSpan x) const;

  /// argmin over Omega_i of J_i(., x_{-i}) by projected gradient descent with
  /// the exact body projection; step 1/L with L sampled (x1.2 safety).
  /// x_minus_i stacks the other N-1 actions in player order. Terminates when
  /// the projected-gradient residual is below tol; throws std::runtime_error
  /// after 1e6 iterations.
  Vec best_response(int i, ConstSpan x_minus_i, double tol = 1e-8) const;

  Vec grad_x_eval(int i, ConstSpan xi, ConstSpan q) const;
  Vec grad_q_eval(int i, ConstSpan xi, ConstSpan q) const;
};

/// Removes block i from a stacked profile (helper for best_response callers).
Vec drop_player(ConstSpan x, int i, int n);

struct CournotParams {
  int players = 4;
  double price_slope = 0.01;  // coefficient of Q in p(Q) = N 1 - slope Q
  Vec semiaxes = {4.0, 3.0};  // elliptical action set E_v(0)
};

/// Cournot production game, Eq.-(51)-style quadratic payoffs
/// f_i = x_i.(d_i(x_i) - p(Q)), d_i(x_i) = 0.5 x_i + (13-i) 1,
/// p(Q) = N 1 - slope Q, with kappa = 1, c1 = 1 + slope/N, c2 = slope, c3 = 1.
AggregativeGame make_cournot(const CournotParams& params = {});

struct DemandResponseParams {
  int players = 10;
  int dim = 3;
  double iota = 0.05;
  double omega = 0.001;
  double p0 = 1.0;
  double pi_scale = 0.5;      // pi_i = pi_scale (N - i) 1
  Vec semiaxes = {7.0, 6.0, 5.0};
  double ball_radius = 0.0;   // > 0: Omega_i is the dim-dimensional ball
};

/// Demand response management game:
/// f_i = iota (x_i - pi_i)^T (x_i - pi_i) + x_i^T (omega N Q + p0 1),
/// with kappa = 2 iota, c1 = 2 iota + omega, c2 = omega N, c3 = 1.
AggregativeGame make_demand_response(const DemandResponseParams& params = {});

/// Samples sigma_i = sup |J_i(x) - J_i(y)| / ||x - y|| over feasible pairs.
/// Reporting only; never used in control flow.
Vec estimate_payoff_lipschitz(const AggregativeGame& game, int samples = 200,
                              std::uint64_t seed = 7);

}  // namespace aggsolve
