#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace aggsolve {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

/// Dense row-major matrix, sized for the small systems this library deals
/// with (facet counts and player counts in the tens to low hundreds).
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  ConstSpan row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

double dot(ConstSpan a, ConstSpan b);
double norm(ConstSpan a);
double distance(ConstSpan a, ConstSpan b);
Vec sub(ConstSpan a, ConstSpan b);
Vec add(ConstSpan a, ConstSpan b);
Vec scaled(ConstSpan a, double s);
void axpy(double alpha, ConstSpan x, Vec& y);  // y += alpha * x
Vec matvec(const Mat& m, ConstSpan x);

/// Solves A x = rhs by Gaussian elimination with partial pivoting. Rows whose
/// pivot falls below `pivot_tol` (relative to the largest diagonal entry) are
/// treated as linearly dependent: their unknown is fixed to zero and the
/// corresponding index is reported in `dropped` when non-null.
bool solve_linear(Mat a, Vec rhs, Vec& out, double pivot_tol = 1e-12,
                  std::vector<std::size_t>* dropped = nullptr);

/// Formats a double at 17 significant digits (lossless for binary64).
std::string fmt17(double v);

/// Deterministic RNG wrapper used everywhere randomness is needed so runs are
/// reproducible from a recorded seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  bool bernoulli(double p) { return std::bernoulli_distribution(p)(eng_); }
  Vec unit_vector(int n);
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace aggsolve
