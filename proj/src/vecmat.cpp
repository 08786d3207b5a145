#include "vecmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace aggsolve {

double dot(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(ConstSpan a) { return std::sqrt(dot(a, a)); }

double distance(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vec sub(ConstSpan a, ConstSpan b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec add(ConstSpan a, ConstSpan b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec scaled(ConstSpan a, double s) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

void axpy(double alpha, ConstSpan x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec matvec(const Mat& m, ConstSpan x) {
  if (x.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
  Vec out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) out[i] = dot(m.row(i), x);
  return out;
}

bool solve_linear(Mat a, Vec rhs, Vec& out, double pivot_tol,
                  std::vector<std::size_t>* dropped) {
  const std::size_t n = a.rows;
  if (a.cols != n || rhs.size() != n) throw std::invalid_argument("solve_linear: not square");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  const double thresh = pivot_tol * std::max(1.0, scale);

  std::vector<bool> alive(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    // partial pivot over remaining rows
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best <= thresh) {
      // dependent column: fix unknown k to zero
      alive[k] = false;
      if (dropped) dropped->push_back(k);
      for (std::size_t i = k; i < n; ++i) a(i, k) = 0.0;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t kk = n; kk-- > 0;) {
    if (!alive[kk]) {
      out[kk] = 0.0;
      continue;
    }
    double s = rhs[kk];
    for (std::size_t j = kk + 1; j < n; ++j) s -= a(kk, j) * out[j];
    out[kk] = s / a(kk, kk);
  }
  return true;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec Rng::unit_vector(int n) {
  Vec u(n);
  double s = 0.0;
  do {
    for (int i = 0; i < n; ++i) u[i] = normal();
    s = norm(u);
  } while (s < 1e-12);
  for (int i = 0; i < n; ++i) u[i] /= s;
  return u;
}

}  // namespace aggsolve
