#include "game.hpp"

#include <cmath>
#include <stdexcept>

namespace aggsolve {

namespace {
constexpr double kFdStep = 1e-6;
}

Vec AggregativeGame::local_q(int i, ConstSpan xi) const {
  if (q_map) return q_map(i, xi);
  if (aggregate_dim != action_dim)
    throw std::invalid_argument("game: identity q requires M == n");
  return Vec(xi.begin(), xi.end());
}

Mat AggregativeGame::local_q_jac(int i, ConstSpan xi) const {
  if (q_jacobian) return q_jacobian(i, xi);
  Mat jac(aggregate_dim, action_dim);
  for (int k = 0; k < std::min(aggregate_dim, action_dim); ++k) jac(k, k) = 1.0;
  return jac;
}

Vec AggregativeGame::aggregate(ConstSpan x) const {
  if (static_cast<int>(x.size()) != players * action_dim)
    throw std::invalid_argument("aggregate: profile must stack N*n entries");
  Vec q(aggregate_dim, 0.0);
  for (int i = 0; i < players; ++i) {
    const Vec qi = local_q(i, x.subspan(i * action_dim, action_dim));
    axpy(1.0 / players, qi, q);
  }
  return q;
}

double AggregativeGame::payoff_at(int i, ConstSpan x) const {
  const Vec q = aggregate(x);
  return payoff(i, x.subspan(i * action_dim, action_dim), q);
}

Vec AggregativeGame::grad_x_eval(int i, ConstSpan xi, ConstSpan q) const {
  if (grad_x) return grad_x(i, xi, q);
  Vec g(action_dim);
  Vec xp(xi.begin(), xi.end());
  for (int k = 0; k < action_dim; ++k) {
    const double keep = xp[k];
    xp[k] = keep + kFdStep;
    const double fp = payoff(i, xp, q);
    xp[k] = keep - kFdStep;
    const double fm = payoff(i, xp, q);
    xp[k] = keep;
    g[k] = (fp - fm) / (2.0 * kFdStep);
  }
  return g;
}

Vec AggregativeGame::grad_q_eval(int i, ConstSpan xi, ConstSpan q) const {
  if (grad_q) return grad_q(i, xi, q);
  Vec g(aggregate_dim);
  Vec qp(q.begin(), q.end());
  for (int k = 0; k < aggregate_dim; ++k) {
    const double keep = qp[k];
    qp[k] = keep + kFdStep;
    const double fp = payoff(i, xi, qp);
    qp[k] = keep - kFdStep;
    const double fm = payoff(i, xi, qp);
    qp[k] = keep;
    g[k] = (fp - fm) / (2.0 * kFdStep);
  }
  return g;
}

Vec AggregativeGame::u_map(int i, ConstSpan xi, ConstSpan zetai) const {
  if (static_cast<int>(xi.size()) != action_dim ||
      static_cast<int>(zetai.size()) != aggregate_dim)
    throw std::invalid_argument("u_map: dimension mismatch");
  Vec u = grad_x_eval(i, xi, zetai);
  const Vec gq = grad_q_eval(i, xi, zetai);
  const Mat jac = local_q_jac(i, xi);
  for (int k = 0; k < action_dim; ++k) {
    double s = 0.0;
    for (int r = 0; r < aggregate_dim; ++r) s += jac(r, k) * gq[r];
    u[k] += s / players;
  }
  return u;
}

Vec AggregativeGame::pseudo_gradient(ConstSpan x) const {
  const Vec q = aggregate(x);
  Vec f(players * action_dim);
  for (int i = 0; i < players; ++i) {
    const Vec fi = u_map(i, x.subspan(i * action_dim, action_dim), q);
    std::copy(fi.begin(), fi.end(), f.begin() + i * action_dim);
  }
  return f;
}

Vec drop_player(ConstSpan x, int i, int n) {
  Vec out;
  out.reserve(x.size() - n);
  for (int j = 0; j * n < static_cast<int>(x.size()); ++j) {
    if (j == i) continue;
    out.insert(out.end(), x.begin() + j * n, x.begin() + (j + 1) * n);
  }
  return out;
}

Vec AggregativeGame::best_response(int i, ConstSpan x_minus_i, double tol) const {
  if (static_cast<int>(x_minus_i.size()) != (players - 1) * action_dim)
    throw std::invalid_argument("best_response: x_minus_i must stack N-1 actions");
  const ConvexBody& body = bodies[i];

  // fixed contribution of the other players to the aggregate
  Vec others(aggregate_dim, 0.0);
  for (int j = 0, slot = 0; j < players; ++j) {
    if (j == i) continue;
    const Vec qj = local_q(j, x_minus_i.subspan(slot * action_dim, action_dim));
    axpy(1.0, qj, others);
    ++slot;
  }

  auto grad = [&](ConstSpan y) {
    Vec q = local_q(i, y);
    for (int k = 0; k < aggregate_dim; ++k) q[k] = (q[k] + others[k]) / players;
    Vec g = grad_x_eval(i, y, q);
    const Vec gq = grad_q_eval(i, y, q);
    const Mat jac = local_q_jac(i, y);
    for (int k = 0; k < action_dim; ++k) {
      double s = 0.0;
      for (int r = 0; r < aggregate_dim; ++r) s += jac(r, k) * gq[r];
      g[k] += s / players;
    }
    return g;
  };

  // local gradient-Lipschitz estimate by sampling, 1.2x safety factor
  Rng rng(0x5bd1e995u + static_cast<std::uint64_t>(i));
  double lip = 1e-8;
  for (int trial = 0; trial < 100; ++trial) {
    Vec a(action_dim), b(action_dim);
    for (int k = 0; k < action_dim; ++k) {
      const double c = body.center()[k], v = body.semiaxes()[k];
      a[k] = rng.uniform(c - v, c + v);
      b[k] = rng.uniform(c - v, c + v);
    }
    const double d = distance(a, b);
    if (d < 1e-9) continue;
    lip = std::max(lip, distance(grad(a), grad(b)) / d);
  }
  const double step = 1.0 / (1.2 * lip);

  Vec y = body.center();
  for (long it = 0; it < 1000000; ++it) {
    Vec g = grad(y);
    Vec target(action_dim);
    for (int k = 0; k < action_dim; ++k) target[k] = y[k] - step * g[k];
    Vec yn = body.project(target);
    const double residual = distance(yn, y) / step;
    y = std::move(yn);
    if (residual <= tol) return y;
  }
  throw std::runtime_error("best_response: projected gradient did not converge");
}

AggregativeGame make_cournot(const CournotParams& params) {
  if (params.players < 2) throw std::invalid_argument("make_cournot: N >= 2");
  if (params.semiaxes.size() != 2)
    throw std::invalid_argument("make_cournot: 2D action sets");
  AggregativeGame g;
  g.players = params.players;
  g.action_dim = 2;
  g.aggregate_dim = 2;
  for (int i = 0; i < g.players; ++i)
    g.bodies.push_back(ConvexBody::ellipsoid({0.0, 0.0}, params.semiaxes));
  const double slope = params.price_slope;
  const double n_players = params.players;
  // f_i = x_i . (d_i(x_i) - p(Q)), d_i(x_i) = 0.5 x_i + (13-i) 1 (i 1-based),
  // p(Q) = N 1 - slope Q
  g.payoff = [slope, n_players](int i, ConstSpan xi, ConstSpan q) {
    const double base = 12.0 - i;  // (13 - i) with 1-based i
    double s = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k)
      s += xi[k] * (0.5 * xi[k] + base - n_players + slope * q[k]);
    return s;
  };
  g.grad_x = [slope, n_players](int i, ConstSpan xi, ConstSpan q) {
    const double base = 12.0 - i;
    Vec out(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
      out[k] = xi[k] + base - n_players + slope * q[k];
    return out;
  };
  g.grad_q = [slope](int /*i*/, ConstSpan xi, ConstSpan /*q*/) {
    Vec out(xi.begin(), xi.end());
    for (double& v : out) v *= slope;
    return out;
  };
  g.constants = {1.0, 1.0 + slope / n_players, slope, 1.0};
  return g;
}

AggregativeGame make_demand_response(const DemandResponseParams& params) {
  if (params.players < 2) throw std::invalid_argument("make_demand_response: N >= 2");
  AggregativeGame g;
  g.players = params.players;
  g.action_dim = params.dim;
  g.aggregate_dim = params.dim;
  const Vec center(params.dim, 0.0);
  if (params.ball_radius > 0.0) {
    for (int i = 0; i < g.players; ++i)
      g.bodies.push_back(ConvexBody::ball(center, params.ball_radius));
  } else {
    if (static_cast<int>(params.semiaxes.size()) != params.dim)
      throw std::invalid_argument("make_demand_response: semiaxes/dim mismatch");
    for (int i = 0; i < g.players; ++i)
      g.bodies.push_back(ConvexBody::ellipsoid(center, params.semiaxes));
  }
  const double iota = params.iota, omega = params.omega, p0 = params.p0;
  const double n_players = params.players, pi_scale = params.pi_scale;
  auto nominal = [n_players, pi_scale](int i) {
    return pi_scale * (n_players - (i + 1.0));  // pi_i = scale (N - i) with 1-based i
  };
  g.payoff = [iota, omega, p0, n_players, nominal](int i, ConstSpan xi, ConstSpan q) {
    const double pi_i = nominal(i);
    double s = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      const double d = xi[k] - pi_i;
      s += iota * d * d + xi[k] * (omega * n_players * q[k] + p0);
    }
    return s;
  };
  g.grad_x = [iota, omega, p0, n_players, nominal](int i, ConstSpan xi, ConstSpan q) {
    const double pi_i = nominal(i);
    Vec out(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
      out[k] = 2.0 * iota * (xi[k] - pi_i) + omega * n_players * q[k] + p0;
    return out;
  };
  g.grad_q = [omega, n_players](int /*i*/, ConstSpan xi, ConstSpan /*q*/) {
    Vec out(xi.begin(), xi.end());
    for (double& v : out) v *= omega * n_players;
    return out;
  };
  g.constants = {2.0 * iota, 2.0 * iota + omega, omega * n_players, 1.0};
  return g;
}

Vec estimate_payoff_lipschitz(const AggregativeGame& game, int samples,
                              std::uint64_t seed) {
  Rng rng(seed);
  const int n = game.action_dim, N = game.players;
  auto random_profile = [&]() {
    Vec x(N * n);
    for (int i = 0; i < N; ++i) {
      const ConvexBody& body = game.bodies[i];
      Vec p(n);
      do {
        for (int k = 0; k < n; ++k) {
          const double c = body.center()[k], v = body.semiaxes()[k];
          p[k] = rng.uniform(c - v, c + v);
        }
      } while (!body.contains(p, 0.0));
      std::copy(p.begin(), p.end(), x.begin() + i * n);
    }
    return x;
  };
  Vec sigma(N, 0.0);
  for (int t = 0; t < samples; ++t) {
    const Vec a = random_profile(), b = random_profile();
    const double d = distance(a, b);
    if (d < 1e-9) continue;
    for (int i = 0; i < N; ++i)
      sigma[i] = std::max(sigma[i],
                          std::abs(game.payoff_at(i, a) - game.payoff_at(i, b)) / d);
  }
  return sigma;
}

}  // namespace aggsolve
