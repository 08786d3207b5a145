#include "network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aggsolve {

Digraph Digraph::from_weights(Mat weights) {
  if (weights.rows != weights.cols || weights.rows < 2)
    throw std::invalid_argument("Digraph: need a square weight matrix, N >= 2");
  for (std::size_t i = 0; i < weights.rows; ++i) {
    if (weights(i, i) != 0.0)
      throw std::invalid_argument("Digraph: diagonal must be zero");
    for (std::size_t j = 0; j < weights.cols; ++j)
      if (weights(i, j) < 0.0)
        throw std::invalid_argument("Digraph: weights must be nonnegative");
  }
  return Digraph(std::move(weights));
}

Mat Digraph::laplacian() const {
  const std::size_t n = weights_.rows;
  Mat l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) d += weights_(i, j);
    for (std::size_t j = 0; j < n; ++j) l(i, j) = -weights_(i, j);
    l(i, i) = d;
  }
  return l;
}

Digraph ring(int n) {
  if (n < 2) throw std::invalid_argument("ring: N >= 2 required");
  Mat w(n, n);
  for (int i = 0; i < n; ++i) w(i, (i + n - 1) % n) = 1.0;  // i receives from i-1
  return Digraph::from_weights(std::move(w));
}

Digraph complete(int n) {
  if (n < 2) throw std::invalid_argument("complete: N >= 2 required");
  Mat w(n, n, 1.0);
  for (int i = 0; i < n; ++i) w(i, i) = 0.0;
  return Digraph::from_weights(std::move(w));
}

Digraph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("erdos_renyi: N >= 2 required");
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("erdos_renyi: need 0 < p <= 1");
  Rng rng(seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Mat w(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(p)) w(i, j) = w(j, i) = 1.0;
    Digraph g = Digraph::from_weights(std::move(w));
    if (is_strongly_connected(g)) return g;
  }
  throw std::runtime_error("erdos_renyi: failed to sample a connected graph");
}

bool is_weight_balanced(const Digraph& g, double tol) {
  const Mat& w = g.weights();
  for (std::size_t i = 0; i < w.rows; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < w.cols; ++j) {
      row += w(i, j);
      col += w(j, i);
    }
    if (std::abs(row - col) > tol) return false;
  }
  return true;
}

namespace {

// reachability of every node from node 0 along a_{ij} > 0 edges (j -> i),
// optionally on the reversed graph
bool all_reachable(const Mat& w, bool reversed) {
  const int n = static_cast<int>(w.rows);
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      // edge u -> v exists when v receives from u: a_{vu} > 0
      const double a = reversed ? w(u, v) : w(v, u);
      if (a > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
  return all_reachable(g.weights(), false) && all_reachable(g.weights(), true);
}

Vec symmetric_eigenvalues(Mat s, double off_tol) {
  const std::size_t n = s.rows;
  if (s.cols != n) throw std::invalid_argument("symmetric_eigenvalues: not square");
  auto off_norm = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += s(i, j) * s(i, j);
    return std::sqrt(sum);
  };
  for (int sweep = 0; sweep < 100 && off_norm() > off_tol; ++sweep) {
    for (std::size_t pidx = 0; pidx + 1 < n; ++pidx) {
      for (std::size_t q = pidx + 1; q < n; ++q) {
        const double apq = s(pidx, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (s(q, q) - s(pidx, pidx)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double snu = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, pidx), skq = s(k, q);
          s(k, pidx) = c * skp - snu * skq;
          s(k, q) = snu * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(pidx, k), sqk = s(q, k);
          s(pidx, k) = c * spk - snu * sqk;
          s(q, k) = snu * spk + c * sqk;
        }
      }
    }
  }
  Vec eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = s(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double lambda_min_positive(const Digraph& g) {
  const Mat l = g.laplacian();
  const std::size_t n = l.rows;
  Mat sym(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (l(i, j) + l(j, i));
  const Vec eig = symmetric_eigenvalues(std::move(sym));
  for (double e : eig)
    if (e > 1e-9) return e;
  throw std::runtime_error("lambda_min_positive: no positive eigenvalue (graph disconnected?)");
}

GainCertificate gain_gate(const Digraph& g, double kappa, double c1, double c2,
                          double c3, double beta1, double beta2) {
  if (!(kappa > 0.0 && c1 > 0.0 && c2 > 0.0 && c3 > 0.0))
    throw std::invalid_argument("gain_gate: constants must be positive");
  GainCertificate cert;
  cert.beta1 = beta1;
  cert.beta2 = beta2;
  cert.kappa = kappa;
  cert.c1 = c1;
  cert.c2 = c2;
  cert.c3 = c3;
  cert.c = c1 + c2 * c3;
  cert.lambda = lambda_min_positive(g);
  const double beta1_upper = 2.0 * kappa / (cert.c * cert.c);
  cert.beta1_ok = beta1 > 0.0 && beta1 < beta1_upper;
  const double denom = cert.lambda * (2.0 * kappa - beta1 * cert.c * cert.c);
  if (denom <= 0.0) {
    cert.beta2_lower = std::numeric_limits<double>::infinity();
    cert.beta2_ok = false;
  } else {
    cert.beta2_lower =
        2.0 * c2 * c3 * (2.0 + beta1 * kappa + 2.0 * beta1 * cert.c) / denom;
    cert.beta2_ok = beta2 > cert.beta2_lower;
  }
  return cert;
}

}  // namespace aggsolve
