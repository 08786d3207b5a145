#include "polyproj.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aggsolve {

namespace {

double kkt_residual_of(const Mat& B, const Vec& b, ConstSpan y, const Vec& lam) {
  double res = 0.0;
  for (std::size_t j = 0; j < B.rows; ++j) {
    const double v = dot(B.row(j), y) - b[j];
    res = std::max(res, v);                           // primal feasibility
    res = std::max(res, lam[j] * std::max(0.0, -v));  // complementary slackness
  }
  return res;
}

void farkas_check(const Mat& B, const Vec& b, const Vec& lam) {
  double l1 = 0.0;
  for (double l : lam) l1 += l;
  if (l1 <= 0.0) return;
  Vec bt(B.cols, 0.0);
  double lb = 0.0;
  for (std::size_t j = 0; j < B.rows; ++j) {
    axpy(lam[j] / l1, B.row(j), bt);
    lb += lam[j] / l1 * b[j];
  }
  if (norm(bt) < 1e-10 && lb < -1e-10)
    throw std::runtime_error("project_polyhedron: infeasible halfspace system");
}

/// Equality-constrained projection on a working set with add/drop updates.
/// Returns the number of rounds spent; y and lam are overwritten.
int active_set_refine(const Mat& B, const Vec& b, ConstSpan z, double tol,
                      Vec& y, Vec& lam) {
  const std::size_t p = B.rows;
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < p; ++j)
    if (lam[j] > 0.0 || dot(B.row(j), y) > b[j] - 10.0 * tol) active.push_back(j);

  const int max_rounds = static_cast<int>(10 * p + 50);
  Vec mu;
  int round = 0;
  for (; round < max_rounds; ++round) {
    const std::size_t a = active.size();
    if (a == 0) {
      y.assign(z.begin(), z.end());
      mu.clear();
    } else {
      Mat g(a, a);
      Vec rhs(a);
      for (std::size_t r = 0; r < a; ++r) {
        for (std::size_t c = 0; c < a; ++c)
          g(r, c) = dot(B.row(active[r]), B.row(active[c]));
        rhs[r] = dot(B.row(active[r]), z) - b[active[r]];
      }
      solve_linear(std::move(g), std::move(rhs), mu);
      y.assign(z.begin(), z.end());
      for (std::size_t r = 0; r < a; ++r) axpy(-mu[r], B.row(active[r]), y);
      std::size_t worst = a;
      double most_neg = -1e-12;
      for (std::size_t r = 0; r < a; ++r)
        if (mu[r] < most_neg) {
          most_neg = mu[r];
          worst = r;
        }
      if (worst < a) {
        active.erase(active.begin() + static_cast<long>(worst));
        continue;
      }
    }
    std::size_t add = p;
    double worst_viol = 0.5 * tol;
    for (std::size_t j = 0; j < p; ++j) {
      const double v = dot(B.row(j), y) - b[j];
      if (v > worst_viol &&
          std::find(active.begin(), active.end(), j) == active.end()) {
        worst_viol = v;
        add = j;
      }
    }
    if (add == p) break;
    active.push_back(add);
  }
  std::fill(lam.begin(), lam.end(), 0.0);
  for (std::size_t r = 0; r < active.size() && r < mu.size(); ++r)
    lam[active[r]] = std::max(0.0, mu[r]);
  return round + 1;
}

}  // namespace

QpSolution project_polyhedron(const Polyhedron& poly, ConstSpan z, double tol,
                              const Vec* warm_multipliers) {
  if (!(tol > 0.0)) throw std::invalid_argument("project_polyhedron: tol must be positive");
  const Mat& B = poly.normals();
  const Vec& b = poly.offsets();
  const std::size_t p = B.rows;
  const std::size_t n = B.cols;
  if (z.size() != n) throw std::invalid_argument("project_polyhedron: point dimension mismatch");

  Vec lam(p, 0.0);
  if (warm_multipliers && warm_multipliers->size() == p) {
    lam = *warm_multipliers;
    for (double& l : lam) l = std::max(0.0, l);
  }
  // primal iterate maintained as y = z - B^T lam
  Vec y(z.begin(), z.end());
  for (std::size_t j = 0; j < p; ++j)
    if (lam[j] != 0.0) axpy(-lam[j], B.row(j), y);

  int iterations = 0;
  // Hildreth sweeps (P_jj = ||B_j||^2 = 1 for unit rows), run in short
  // batches with a KKT check per sweep: warm-started steady-state solves
  // finish in one or two sweeps, while coordinate ascent zigzag on nearly
  // coplanar facets is cut short and handed to the active-set pass.
  Vec y_prev = y;
  constexpr long kMaxSweeps = 200000;
  long sweeps_done = 0;
  int batch_budget = 8;
  while (kkt_residual_of(B, b, y, lam) > tol) {
    bool settled = false;
    bool solved = false;
    for (int s = 0; s < batch_budget && sweeps_done < kMaxSweeps; ++s, ++sweeps_done) {
      ++iterations;
      double dlam_max = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double viol = dot(B.row(j), y) - b[j];
        const double d = std::max(-lam[j], viol);
        if (d != 0.0) {
          lam[j] += d;
          axpy(-d, B.row(j), y);
          dlam_max = std::max(dlam_max, std::abs(d));
        }
      }
      if (kkt_residual_of(B, b, y, lam) <= tol) {
        solved = true;
        break;
      }
      const bool moved_little = distance(y, y_prev) < tol;
      y_prev = y;
      if (moved_little || dlam_max == 0.0) {
        settled = true;
        break;
      }
      if ((sweeps_done & 1023) == 1023) farkas_check(B, b, lam);
    }
    if (solved) break;
    iterations += active_set_refine(B, b, z, tol, y, lam);
    if (kkt_residual_of(B, b, y, lam) <= tol) break;
    if (settled || sweeps_done >= kMaxSweeps) break;  // refinement could not close the gap
    batch_budget = 64;
  }

  const double res = kkt_residual_of(B, b, y, lam);
  if (res > 100.0 * tol)
    throw std::runtime_error("project_polyhedron: did not reach KKT tolerance");
  return {std::move(y), std::move(lam), iterations, res};
}

}  // namespace aggsolve
