#pragma once

#include "dynamics.hpp"
#include "game.hpp"
#include "geometry.hpp"

namespace aggsolve {

struct EpsilonReport {
  double epsilon_hat = 0.0;   // max_i per-player best-response gap
  Vec per_player_gaps;        // over the original sets Omega_i
  double ne_distance = 0.0;   // ||x*(D) - x*(Omega)||
  double delta_h = 0.0;       // delta(H) for the tested approximation
  Vec h_vector;               // per-player Hausdorff estimates
};

/// gap_i = J_i(x*) - J_i(best_response_i(x*_{-i}), x*_{-i}), best responses
/// taken over the original bodies with the exact projection (deliberately
/// independent of the polyhedral machinery under test).
EpsilonReport epsilon_measure(const AggregativeGame& game, ConstSpan x_star,
                              double tol = 1e-8);

/// epsilon_measure plus the approximation diagnostics: per-player Hausdorff
/// estimates, delta(H), and the distance to the reference equilibrium.
EpsilonReport approximation_report(const AggregativeGame& game,
                                   const std::vector<Polyhedron>& polys,
                                   ConstSpan x_star, ConstSpan x_reference,
                                   double tol = 1e-8);

/// ||e(z)|| at the given state: the stacked projection difference
/// Pi_D(x - beta1 U) - Pi_Omega(x - beta1 U) and its grad-q-weighted copy.
double perturbation_magnitude(const AggregativeGame& game,
                              const std::vector<Polyhedron>& polys,
                              ConstSpan x, ConstSpan zeta, double beta1);

/// The raw e(z) vector with caller-chosen projector families (the convenient
/// overload binds QP projection for D and the body projection for Omega).
Vec perturbation_vector(const AggregativeGame& game,
                        const std::vector<Projector>& proj_d,
                        const std::vector<Projector>& proj_omega, ConstSpan x,
                        ConstSpan zeta, double beta1);

/// ||sigma(t)|| with sigma_i = zeta_i - Q(x), one entry per recorded sample.
std::vector<double> sigma_norms(const Trajectory& trajectory,
                                const AggregativeGame& game);

struct RateFit {
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log ||x_k - x_ref|| against time over the middle 60%
/// of samples, after dropping the numerically flat tail below 10 * t_tol.
/// Throws std::runtime_error when fewer than 10 usable samples remain.
RateFit rate_fit(const Trajectory& trajectory, ConstSpan x_ref, double t_tol);

}  // namespace aggsolve
