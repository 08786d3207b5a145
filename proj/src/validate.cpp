#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "experiment.hpp"

namespace aggsolve {

namespace {

struct Check {
  std::string name;
  std::function<bool(std::string&)> body;
};

bool run_checks(const std::vector<Check>& checks, std::ostream& log) {
  bool all_ok = true;
  for (const auto& check : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = check.body(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (ok) {
      log << "ok " << check.name << '\n';
    } else {
      log << "FAIL " << check.name << (detail.empty() ? "" : ": " + detail) << '\n';
      all_ok = false;
    }
  }
  return all_ok;
}

double max_abs_phi_sum(const Trajectory& traj, const AggregativeGame& game) {
  // phi = zeta - q(x); for weight-balanced graphs sum_i phi_i stays ~0
  const int m = game.aggregate_dim, n = game.action_dim;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (int c = 0; c < m; ++c) {
      double s = 0.0;
      for (int i = 0; i < game.players; ++i) {
        const Vec qi = game.local_q(i, ConstSpan(traj.x[k]).subspan(i * n, n));
        s += traj.zeta[k][i * m + c] - qi[c];
      }
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

}  // namespace

Status cmd_validate(const KeyValueConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("run.seed", 17));
  std::vector<Check> checks;

  checks.push_back({"support dominance (octagon in E_{4,3})", [&](std::string& d) {
    const ConvexBody body = ConvexBody::ellipsoid({0, 0}, {4, 3});
    const Polyhedron poly = inscribe_regular(body, 8);
    Rng rng(seed);
    for (int k = 0; k < 1000; ++k) {
      const Vec u = rng.unit_vector(2);
      if (poly.support_value(u) > body.support_value(u) + 1e-10) {
        d = "support dominance violated";
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"exact projection idempotent and nonexpansive", [&](std::string& d) {
    const ConvexBody body = ConvexBody::ellipsoid({0, 0}, {4, 3});
    Rng rng(seed + 1);
    for (int k = 0; k < 200; ++k) {
      const Vec z1 = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
      const Vec z2 = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
      const Vec p1 = body.project(z1), p2 = body.project(z2);
      if (distance(body.project(p1), p1) > 1e-10) {
        d = "not idempotent";
        return false;
      }
      if (distance(p1, p2) > distance(z1, z2) + 1e-12) {
        d = "expansive";
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"inscribed polygon stays inside the body", [&](std::string& d) {
    const ConvexBody body = ConvexBody::ellipsoid({0, 0}, {4, 3});
    const Polyhedron poly = inscribe_regular(body, 8);
    const auto& verts = poly.vertices();
    for (int k = 0; k < 10000; ++k) {
      const int e = k % poly.vertex_count();
      const double w = (k / 8 % 1000) / 999.0;
      Vec p(2);
      const Vec& a = verts[e];
      const Vec& b = verts[(e + 1) % poly.vertex_count()];
      for (int c = 0; c < 2; ++c) p[c] = (1 - w) * a[c] + w * b[c];
      if (body.membership(p) > 1.0 + 1e-8) {
        d = "boundary sample escaped the body";
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"QP projection satisfies KKT certificates", [&](std::string& d) {
    const ConvexBody body = ConvexBody::ellipsoid({0, 0}, {4, 3});
    const Polyhedron poly = inscribe_regular(body, 8);
    Rng rng(seed + 2);
    for (int k = 0; k < 200; ++k) {
      const Vec z = {rng.uniform(-12, 12), rng.uniform(-12, 12)};
      const QpSolution sol = project_polyhedron(poly, z);
      if (sol.kkt_residual > 1e-10) {
        d = "kkt residual " + fmt17(sol.kkt_residual);
        return false;
      }
      Vec stat = sub(sol.point, z);
      for (int j = 0; j < poly.facet_count(); ++j)
        axpy(sol.multipliers[j], poly.normals().row(j), stat);
      if (norm(stat) > 1e-9) {
        d = "stationarity residual " + fmt17(norm(stat));
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"ring Laplacian spectrum matches 1-cos(2pi/N)", [&](std::string& d) {
    for (int n = 3; n <= 12; ++n) {
      const double got = lambda_min_positive(ring(n));
      const double want = 1.0 - std::cos(2.0 * std::acos(-1.0) / n);
      if (std::abs(got - want) > 1e-10) {
        d = "N=" + std::to_string(n);
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"L 1 = 0 and balance on builtin graphs", [&](std::string& d) {
    for (const Digraph& g : {ring(5), complete(6), erdos_renyi(8, 0.5, 3)}) {
      const Mat l = g.laplacian();
      for (std::size_t i = 0; i < l.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < l.cols; ++j) s += l(i, j);
        if (s != 0.0) {
          d = "row sum nonzero";
          return false;
        }
      }
      if (!is_weight_balanced(g)) {
        d = "builtin graph not balanced";
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"U(x, 1 (x) Q(x)) = F(x)", [&](std::string& d) {
    for (const AggregativeGame& game : {make_cournot(), make_demand_response()}) {
      Rng rng(seed + 3);
      for (int t = 0; t < 100; ++t) {
        Vec x(game.players * game.action_dim);
        for (double& v : x) v = rng.uniform(-3, 3);
        const Vec q = game.aggregate(x);
        const Vec f = game.pseudo_gradient(x);
        for (int i = 0; i < game.players; ++i) {
          const Vec u = game.u_map(i, ConstSpan(x).subspan(i * game.action_dim, game.action_dim), q);
          for (int k = 0; k < game.action_dim; ++k)
            if (std::abs(u[k] - f[i * game.action_dim + k]) > 1e-12) {
              d = "identity violated";
              return false;
            }
        }
      }
    }
    return true;
  }});

  checks.push_back({"analytic gradients match finite differences", [&](std::string& d) {
    for (const AggregativeGame& game : {make_cournot(), make_demand_response()}) {
      AggregativeGame fd = game;
      fd.grad_x = nullptr;
      fd.grad_q = nullptr;
      Rng rng(seed + 4);
      for (int t = 0; t < 20; ++t) {
        Vec xi(game.action_dim), q(game.aggregate_dim);
        for (double& v : xi) v = rng.uniform(-2, 2);
        for (double& v : q) v = rng.uniform(-2, 2);
        const int i = t % game.players;
        const Vec a = game.u_map(i, xi, q);
        const Vec b = fd.u_map(i, xi, q);
        const double rel = distance(a, b) / std::max(1.0, norm(a));
        if (rel > 1e-5) {
          d = "relative error " + fmt17(rel);
          return false;
        }
      }
    }
    return true;
  }});

  checks.push_back({"Cournot pseudo-gradient strong monotonicity >= 0.99", [&](std::string& d) {
    const AggregativeGame game = make_cournot();
    Rng rng(seed + 5);
    for (int t = 0; t < 200; ++t) {
      Vec x(game.players * 2), y(game.players * 2);
      for (double& v : x) v = rng.uniform(-3, 3);
      for (double& v : y) v = rng.uniform(-3, 3);
      const double dd = distance(x, y);
      if (dd < 1e-9) continue;
      const Vec fx = game.pseudo_gradient(x), fy = game.pseudo_gradient(y);
      const double inner = dot(sub(fx, fy), sub(x, y));
      if (inner < 0.99 * dd * dd) {
        d = "kappa estimate " + fmt17(inner / (dd * dd));
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"empirical c2 below 0.011 (Cournot)", [&](std::string& d) {
    const AggregativeGame game = make_cournot();
    Rng rng(seed + 6);
    double c2 = 0.0;
    for (int t = 0; t < 200; ++t) {
      Vec xi = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      Vec z1 = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      Vec z2 = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double dz = distance(z1, z2);
      if (dz < 1e-9) continue;
      c2 = std::max(c2, distance(game.u_map(0, xi, z1), game.u_map(0, xi, z2)) / dz);
    }
    if (c2 > 0.011) {
      d = "c2 estimate " + fmt17(c2);
      return false;
    }
    return true;
  }});

  checks.push_back({"Cournot octagon run: consensus and conservation", [&](std::string& d) {
    const AggregativeGame game = make_cournot();
    std::vector<Polyhedron> polys;
    for (int i = 0; i < game.players; ++i)
      polys.push_back(inscribe_regular(game.bodies[i], 8));
    RunOptions opt;
    const RunResult rr = run(game, Mode::approx, &polys, ring(game.players), opt);
    if (!rr.report.converged) {
      d = "did not converge";
      return false;
    }
    const Vec q = game.aggregate(rr.report.x_final);
    for (int i = 0; i < game.players; ++i) {
      Vec zi(rr.report.zeta_final.begin() + i * 2, rr.report.zeta_final.begin() + (i + 1) * 2);
      if (distance(zi, q) > game.players * opt.t_tol) {
        d = "consensus error too large";
        return false;
      }
    }
    if (max_abs_phi_sum(rr.trajectory, game) > 1e-6) {
      d = "phi conservation violated";
      return false;
    }
    for (std::size_t k = 0; k < rr.trajectory.size(); k += 50) {
      for (int i = 0; i < game.players; ++i) {
        Vec xi(rr.trajectory.x[k].begin() + i * 2, rr.trajectory.x[k].begin() + (i + 1) * 2);
        if (!polys[i].contains(xi, 1e-8)) {
          d = "feasibility lost along the run";
          return false;
        }
      }
    }
    return true;
  }});

  checks.push_back({"perturbation dominated by delta(H)", [&](std::string& d) {
    const AggregativeGame game = make_cournot();
    std::vector<Polyhedron> polys;
    Vec h(game.players), nu(game.players);
    for (int i = 0; i < game.players; ++i) {
      polys.push_back(inscribe_regular(game.bodies[i], 8));
      h[i] = hausdorff_estimate(game.bodies[i], polys[i]).value;
      nu[i] = curvature_nu(game.bodies[i]);
    }
    const double delta = delta_bound(h, nu, game.constants.c3);
    Rng rng(seed + 7);
    for (int t = 0; t < 100; ++t) {
      Vec x(game.players * 2), zeta(game.players * 2);
      for (int i = 0; i < game.players; ++i) {
        Vec p(2);
        do {
          p = {rng.uniform(-4, 4), rng.uniform(-3, 3)};
        } while (!polys[i].contains(p, 0.0));
        x[i * 2] = p[0];
        x[i * 2 + 1] = p[1];
      }
      const Vec q = game.aggregate(x);
      for (int i = 0; i < game.players; ++i)
        for (int c = 0; c < 2; ++c)
          zeta[i * 2 + c] = q[c] + rng.uniform(-1, 1);
      const double e = perturbation_magnitude(game, polys, x, zeta, 0.1);
      if (e > delta) {
        d = "||e|| = " + fmt17(e) + " > delta = " + fmt17(delta);
        return false;
      }
    }
    return true;
  }});

  checks.push_back({"polyhedron text round-trip is bit-faithful", [&](std::string& d) {
    const ConvexBody body = ConvexBody::ellipsoid({0.25, -1.5}, {4, 3});
    const Polyhedron poly = inscribe_regular(body, 10, 0.37);
    std::stringstream ss;
    poly.save(ss);
    const Polyhedron back = Polyhedron::load(ss);
    for (int i = 0; i < poly.facet_count(); ++i) {
      if (poly.offsets()[i] != back.offsets()[i]) {
        d = "offset changed";
        return false;
      }
      for (int j = 0; j < poly.dim(); ++j)
        if (poly.normals()(i, j) != back.normals()(i, j)) {
          d = "normal changed";
          return false;
        }
    }
    for (int v = 0; v < poly.vertex_count(); ++v)
      for (int j = 0; j < poly.dim(); ++j)
        if (poly.vertices()[v][j] != back.vertices()[v][j]) {
          d = "vertex changed";
          return false;
        }
    return true;
  }});

  return run_checks(checks, log) ? Status::ok : Status::numeric;
}

}  // namespace aggsolve
