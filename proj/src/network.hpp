#pragma once

#include <cstdint>

#include "vecmat.hpp"

namespace aggsolve {

/// Weighted directed communication graph. a_ij > 0 means edge (j, i): node i
/// receives from node j. Immutable after construction.
class Digraph {
 public:
  static Digraph from_weights(Mat weights);

  int size() const { return static_cast<int>(weights_.rows); }
  const Mat& weights() const { return weights_; }
  /// L = Delta - A with Delta = diag(row sums); L 1 = 0 exactly.
  Mat laplacian() const;

 private:
  explicit Digraph(Mat w) : weights_(std::move(w)) {}
  Mat weights_;
};

Digraph ring(int n);
Digraph complete(int n);
/// Undirected Erdos-Renyi: each pair joined with probability p (both
/// directions, weight 1); resampled until strongly connected.
Digraph erdos_renyi(int n, double p, std::uint64_t seed);

bool is_weight_balanced(const Digraph& g, double tol = 1e-12);
bool is_strongly_connected(const Digraph& g);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vec symmetric_eigenvalues(Mat s, double off_tol = 1e-12);

/// Smallest eigenvalue of (L + L^T)/2 above 1e-9. Throws std::runtime_error
/// when no positive eigenvalue clears the threshold (disconnected graph).
double lambda_min_positive(const Digraph& g);

struct GainCertificate {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double kappa = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double c = 0.0;            // c1 + c2*c3
  double lambda = 0.0;       // smallest positive eigenvalue of (L+L^T)/2
  double beta2_lower = 0.0;  // right side of the beta2 condition (inf if void)
  bool beta1_ok = false;
  bool beta2_ok = false;
};

/// Evaluates the gain conditions 0 < beta1 < 2 kappa / c^2 and
/// beta2 > 2 c2 c3 (2 + beta1 kappa + 2 beta1 c) / (lambda (2 kappa - beta1 c^2)).
GainCertificate gain_gate(const Digraph& g, double kappa, double c1, double c2,
                          double c3, double beta1, double beta2);

}  // namespace aggsolve
