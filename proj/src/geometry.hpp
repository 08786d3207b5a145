#pragma once

#include <iosfwd>
#include <vector>

#include "vecmat.hpp"

namespace aggsolve {

enum class BodyKind { ellipsoid, ball };

/// Compact convex feasible set that admits an exact Euclidean projection and
/// a support-function oracle. Axis-aligned ellipsoids and balls only; a ball
/// is stored as an ellipsoid with equal semiaxes.
class ConvexBody {
 public:
  static ConvexBody ellipsoid(Vec center, Vec semiaxes);
  static ConvexBody ball(Vec center, double radius);

  BodyKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  const Vec& semiaxes() const { return semiaxes_; }

  /// Left-hand side of the defining inequality, sum_i (x_i-c_i)^2 / v_i^2.
  double membership(ConstSpan x) const;
  bool contains(ConstSpan x, double tol = 1e-12) const;

  /// Support function value max{<u,x> : x in body}; u need not be unit here.
  double support_value(ConstSpan u) const;

  /// argmax{<u,x> : x in body} for unit u: c + (v^2 .* u) / ||v .* u||.
  /// Throws std::invalid_argument when ||u|| deviates from 1 by more than
  /// 1e-12 (in particular for the zero direction).
  Vec support_point(ConstSpan u) const;

  /// Exact projection. Interior points are fixed; exterior points solve the
  /// secular equation sum v_i^2 w_i^2 / (v_i^2 + lam)^2 = 1 by geometric
  /// bracket growth followed by bisection (<= 200 steps, 1e-12 accuracy).
  Vec project(ConstSpan z) const;

  /// Boundary point at parameter angle theta (2D bodies only):
  /// (c1 + v1 cos theta, c2 + v2 sin theta).
  Vec boundary_point(double theta) const;

 private:
  ConvexBody(BodyKind k, Vec c, Vec v);
  BodyKind kind_;
  Vec center_;
  Vec semiaxes_;
};

/// Bounded halfspace intersection {x : Bx <= b} with unit-norm facet normals,
/// plus the inscribed vertices that generated it.
class Polyhedron {
 public:
  /// Validates unit rows (1e-12) and vertex feasibility (1e-10). Boundedness
  /// is checked by the inscribe constructors and the text loader, not here,
  /// so raw systems (single halfspaces, boxes) can be formed for projection.
  Polyhedron(Mat normals, Vec offsets, std::vector<Vec> vertices);

  int dim() const { return static_cast<int>(normals_.cols); }
  int facet_count() const { return static_cast<int>(normals_.rows); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  bool contains(ConstSpan x, double tol = 1e-10) const;
  /// Support function evaluated on the generating vertices.
  double support_value(ConstSpan u) const;

  /// True when the recession cone {d : Bd <= 0} is trivial, established by
  /// checking that every +-e_j lies in the cone of the facet normals
  /// (nonnegative least squares residual below 1e-8).
  bool is_bounded() const;

  /// Plain-text block: "p n", p rows of n+1 decimals (B row then b entry),
  /// then the vertex count, then the vertex rows; 17 significant digits.
  void save(std::ostream& os) const;
  static Polyhedron load(std::istream& is);

 private:
  Mat normals_;
  Vec offsets_;
  std::vector<Vec> vertices_;
};

struct HausdorffEstimate {
  double value = 0.0;
  int resolution = 0;
  bool refined = false;
};

/// Inscribed polygon with vertices at uniform parameter angles
/// theta_k = theta0 + 2 pi k / m on a 2D body. theta0 defaults to a vertex on
/// the positive major axis.
Polyhedron inscribe_regular(const ConvexBody& body, int m, double theta0 = 0.0);

/// Greedy support-gap refinement: starting from a boundary simplex, repeatedly
/// adds the support point in the facet-normal direction with the largest
/// gap g_body(u) - g_poly(u) and recomputes the hull, until s vertices.
/// 2D bodies use ordered polygon insertion, 3D an incremental convex hull.
Polyhedron inscribe_greedy(const ConvexBody& body, int s,
                           const std::vector<Vec>& seed);
Polyhedron inscribe_greedy(const ConvexBody& body, int s);  // canonical seed

/// Inscribed box |x_j - c_j| <= r/sqrt(n) for a ball; the n > 3 construction
/// accepted by the experiment harness (2n facets, 2n stored vertices).
Polyhedron inscribe_box(const ConvexBody& ball);

/// Since poly is inscribed in body, H(body, poly) = max_u g_body(u)-g_poly(u)
/// over unit directions; maximized on a direction grid (default 4096 angles
/// in 2D, 20480 Fibonacci sphere points in 3D) then polished by golden-section
/// refinement around the best direction. Throws std::invalid_argument if a
/// vertex lies outside the body.
HausdorffEstimate hausdorff_estimate(const ConvexBody& body,
                                     const Polyhedron& poly, int grid = 0);

/// Maximum principal curvature of the boundary: max_i (max_j v_j) / v_i^2,
/// which is 1/r for a ball.
double curvature_nu(const ConvexBody& body);

/// delta(H) = (1 + c3) * sqrt(sum_i (2/nu_i * acos(1 - nu_i h_i) + h_i)^2).
/// Requires 0 <= nu_i h_i <= 2 (throws std::domain_error otherwise).
double delta_bound(ConstSpan h, ConstSpan nu, double c3);

}  // namespace aggsolve
