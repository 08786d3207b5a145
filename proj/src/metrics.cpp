#include "metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace aggsolve {

EpsilonReport epsilon_measure(const AggregativeGame& game, ConstSpan x_star,
                              double tol) {
  const int n = game.action_dim;
  EpsilonReport rep;
  rep.per_player_gaps.resize(game.players);
  for (int i = 0; i < game.players; ++i) {
    const Vec x_minus_i = drop_player(x_star, i, n);
    const Vec br = game.best_response(i, x_minus_i, tol);
    Vec deviated(x_star.begin(), x_star.end());
    std::copy(br.begin(), br.end(), deviated.begin() + i * n);
    rep.per_player_gaps[i] =
        game.payoff_at(i, x_star) - game.payoff_at(i, deviated);
  }
  rep.epsilon_hat = *std::max_element(rep.per_player_gaps.begin(),
                                      rep.per_player_gaps.end());
  return rep;
}

EpsilonReport approximation_report(const AggregativeGame& game,
                                   const std::vector<Polyhedron>& polys,
                                   ConstSpan x_star, ConstSpan x_reference,
                                   double tol) {
  EpsilonReport rep = epsilon_measure(game, x_star, tol);
  rep.ne_distance = distance(x_star, x_reference);
  rep.h_vector.resize(game.players);
  Vec nu(game.players);
  for (int i = 0; i < game.players; ++i) {
    rep.h_vector[i] = hausdorff_estimate(game.bodies[i], polys[i]).value;
    nu[i] = curvature_nu(game.bodies[i]);
  }
  rep.delta_h = delta_bound(rep.h_vector, nu, game.constants.c3);
  return rep;
}

Vec perturbation_vector(const AggregativeGame& game,
                        const std::vector<Projector>& proj_d,
                        const std::vector<Projector>& proj_omega, ConstSpan x,
                        ConstSpan zeta, double beta1) {
  const int n = game.action_dim, m = game.aggregate_dim, np = game.players;
  std::vector<Vec> diff(np);
  std::vector<Mat> jac(np);
  for (int i = 0; i < np; ++i) {
    const ConstSpan xi = x.subspan(i * n, n);
    const Vec u = game.u_map(i, xi, zeta.subspan(i * m, m));
    Vec w(n);
    for (int k = 0; k < n; ++k) w[k] = xi[k] - beta1 * u[k];
    diff[i] = sub(proj_d[i](i, w), proj_omega[i](i, w));
    jac[i] = game.local_q_jac(i, xi);
  }
  // rho^T d: block i is Jq_i d_i - (1/N) sum_j Jq_j d_j
  Vec mean(m, 0.0);
  std::vector<Vec> jd(np);
  for (int i = 0; i < np; ++i) {
    jd[i] = matvec(jac[i], diff[i]);
    axpy(1.0 / np, jd[i], mean);
  }
  Vec e(np * n + np * m);
  for (int i = 0; i < np; ++i) {
    std::copy(diff[i].begin(), diff[i].end(), e.begin() + i * n);
    for (int k = 0; k < m; ++k) e[np * n + i * m + k] = jd[i][k] - mean[k];
  }
  return e;
}

double perturbation_magnitude(const AggregativeGame& game,
                              const std::vector<Polyhedron>& polys,
                              ConstSpan x, ConstSpan zeta, double beta1) {
  std::vector<Projector> proj_d, proj_omega;
  for (int i = 0; i < game.players; ++i) {
    const Polyhedron* poly = &polys[i];
    proj_d.push_back([poly](int, ConstSpan w) {
      return project_polyhedron(*poly, w).point;
    });
    const ConvexBody* body = &game.bodies[i];
    proj_omega.push_back([body](int, ConstSpan w) { return body->project(w); });
  }
  return norm(perturbation_vector(game, proj_d, proj_omega, x, zeta, beta1));
}

std::vector<double> sigma_norms(const Trajectory& trajectory,
                                const AggregativeGame& game) {
  const int m = game.aggregate_dim;
  std::vector<double> out;
  out.reserve(trajectory.size());
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const Vec q = game.aggregate(trajectory.x[k]);
    double ss = 0.0;
    for (int i = 0; i < game.players; ++i)
      for (int c = 0; c < m; ++c) {
        const double d = trajectory.zeta[k][i * m + c] - q[c];
        ss += d * d;
      }
    out.push_back(std::sqrt(ss));
  }
  return out;
}

RateFit rate_fit(const Trajectory& trajectory, ConstSpan x_ref, double t_tol) {
  std::vector<double> times, logs;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double d = distance(trajectory.x[k], x_ref);
    if (d > 10.0 * t_tol) {
      times.push_back(trajectory.t[k]);
      logs.push_back(std::log(d));
    }
  }
  const std::size_t usable = times.size();
  const std::size_t lo = usable / 5, hi = usable - usable / 5;
  if (usable < 10 || hi - lo < 10)
    throw std::runtime_error("rate_fit: fewer than 10 usable samples");
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double count = static_cast<double>(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    st += times[k];
    sy += logs[k];
    stt += times[k] * times[k];
    sty += times[k] * logs[k];
  }
  const double denom = count * stt - st * st;
  if (std::abs(denom) < 1e-30)
    throw std::runtime_error("rate_fit: degenerate time samples");
  RateFit fit;
  fit.slope = (count * sty - st * sy) / denom;
  const double intercept = (sy - fit.slope * st) / count;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / count;
  for (std::size_t k = lo; k < hi; ++k) {
    const double pred = intercept + fit.slope * times[k];
    ss_res += (logs[k] - pred) * (logs[k] - pred);
    ss_tot += (logs[k] - mean_y) * (logs[k] - mean_y);
  }
  fit.r_squared = ss_tot < 1e-30 ? (ss_res < 1e-30 ? 1.0 : 0.0)
                                 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace aggsolve
