#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

namespace aggsolve {

namespace {

constexpr double kPi = std::numbers::pi;

/// Golden-section maximization of a unimodal-ish function on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi, int iters = 90) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters && b - a > 1e-15; ++k) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Vec cross3(ConstSpan a, ConstSpan b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexBody

ConvexBody::ConvexBody(BodyKind k, Vec c, Vec v)
    : kind_(k), center_(std::move(c)), semiaxes_(std::move(v)) {
  if (center_.size() != semiaxes_.size() || center_.empty())
    throw std::invalid_argument("ConvexBody: center/semiaxes size mismatch");
  for (double s : semiaxes_)
    if (!(s > 0.0)) throw std::invalid_argument("ConvexBody: semiaxes must be positive");
}

ConvexBody ConvexBody::ellipsoid(Vec center, Vec semiaxes) {
  return ConvexBody(BodyKind::ellipsoid, std::move(center), std::move(semiaxes));
}

ConvexBody ConvexBody::ball(Vec center, double radius) {
  Vec v(center.size(), radius);
  return ConvexBody(BodyKind::ball, std::move(center), std::move(v));
}

double ConvexBody::membership(ConstSpan x) const {
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double w = (x[i] - center_[i]) / semiaxes_[i];
    s += w * w;
  }
  return s;
}

bool ConvexBody::contains(ConstSpan x, double tol) const {
  return membership(x) <= 1.0 + tol;
}

double ConvexBody::support_value(ConstSpan u) const {
  double s = dot(u, center_);
  double q = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double t = semiaxes_[i] * u[i];
    q += t * t;
  }
  return s + std::sqrt(q);
}

Vec ConvexBody::support_point(ConstSpan u) const {
  const double un = norm(u);
  if (std::abs(un - 1.0) > 1e-12)
    throw std::invalid_argument("support_point: direction must be a unit vector");
  double q = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double t = semiaxes_[i] * u[i];
    q += t * t;
  }
  const double denom = std::sqrt(q);
  Vec p(dim());
  for (int i = 0; i < dim(); ++i)
    p[i] = center_[i] + semiaxes_[i] * semiaxes_[i] * u[i] / denom;
  return p;
}

Vec ConvexBody::project(ConstSpan z) const {
  if (membership(z) <= 1.0) return Vec(z.begin(), z.end());
  const int n = dim();
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = z[i] - center_[i];
  // residual of the secular equation; strictly decreasing in lam on [0, inf)
  auto residual = [&](double lam) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v2 = semiaxes_[i] * semiaxes_[i];
      const double t = v2 + lam;
      s += v2 * w[i] * w[i] / (t * t);
    }
    return s - 1.0;
  };
  double hi = 1.0;
  int grow = 0;
  while (residual(hi) > 0.0 && grow++ < 200) hi *= 2.0;
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  if (residual(lo) < 0.0) lo = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lam = 0.5 * (lo + hi);
  Vec p(n);
  for (int i = 0; i < n; ++i) {
    const double v2 = semiaxes_[i] * semiaxes_[i];
    p[i] = center_[i] + v2 * w[i] / (v2 + lam);
  }
  return p;
}

Vec ConvexBody::boundary_point(double theta) const {
  if (dim() != 2) throw std::invalid_argument("boundary_point: 2D bodies only");
  return {center_[0] + semiaxes_[0] * std::cos(theta),
          center_[1] + semiaxes_[1] * std::sin(theta)};
}

// ---------------------------------------------------------------------------
// Polyhedron

Polyhedron::Polyhedron(Mat normals, Vec offsets, std::vector<Vec> vertices)
    : normals_(std::move(normals)),
      offsets_(std::move(offsets)),
      vertices_(std::move(vertices)) {
  if (normals_.rows == 0 || normals_.cols == 0)
    throw std::invalid_argument("Polyhedron: empty halfspace system");
  if (offsets_.size() != normals_.rows)
    throw std::invalid_argument("Polyhedron: offsets/rows mismatch");
  for (std::size_t i = 0; i < normals_.rows; ++i) {
    if (std::abs(norm(normals_.row(i)) - 1.0) > 1e-12)
      throw std::invalid_argument("Polyhedron: facet normals must be unit norm");
  }
  for (const Vec& v : vertices_) {
    if (v.size() != normals_.cols)
      throw std::invalid_argument("Polyhedron: vertex dimension mismatch");
    for (std::size_t i = 0; i < normals_.rows; ++i)
      if (dot(normals_.row(i), v) > offsets_[i] + 1e-10)
        throw std::invalid_argument("Polyhedron: stored vertex violates a facet");
  }
}

bool Polyhedron::contains(ConstSpan x, double tol) const {
  for (std::size_t i = 0; i < normals_.rows; ++i)
    if (dot(normals_.row(i), x) > offsets_[i] + tol) return false;
  return true;
}

double Polyhedron::support_value(ConstSpan u) const {
  if (vertices_.empty())
    throw std::invalid_argument("Polyhedron: no generating vertices");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& v : vertices_) best = std::max(best, dot(u, v));
  return best;
}

bool Polyhedron::is_bounded() const {
  const int n = dim();
  const std::size_t p = normals_.rows;
  // nonnegative least squares ||B^T lam - t||: t in cone(rows) iff residual -> 0
  auto in_cone = [&](const Vec& target) {
    Vec lam(p, 0.0);
    Vec r = scaled(target, -1.0);  // r = B^T lam - t
    for (int sweep = 0; sweep < 4000; ++sweep) {
      double moved = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double g = dot(normals_.row(j), r);
        const double d = std::max(-lam[j], -g);
        if (d != 0.0) {
          lam[j] += d;
          axpy(d, normals_.row(j), r);
          moved = std::max(moved, std::abs(d));
        }
      }
      if (moved < 1e-14) break;
    }
    return norm(r) <= 1e-8;
  };
  for (int k = 0; k < n; ++k) {
    Vec t(n, 0.0);
    t[k] = 1.0;
    if (!in_cone(t)) return false;
    t[k] = -1.0;
    if (!in_cone(t)) return false;
  }
  return true;
}

void Polyhedron::save(std::ostream& os) const {
  os << facet_count() << ' ' << dim() << '\n';
  for (int i = 0; i < facet_count(); ++i) {
    for (int j = 0; j < dim(); ++j) os << fmt17(normals_(i, j)) << ' ';
    os << fmt17(offsets_[i]) << '\n';
  }
  os << vertex_count() << '\n';
  for (const Vec& v : vertices_) {
    for (int j = 0; j < dim(); ++j) os << fmt17(v[j]) << (j + 1 < dim() ? ' ' : '\n');
  }
}

Polyhedron Polyhedron::load(std::istream& is) {
  std::size_t p = 0, n = 0;
  if (!(is >> p >> n) || p == 0 || n == 0)
    throw std::invalid_argument("Polyhedron::load: bad header");
  Mat b(p, n);
  Vec off(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (!(is >> b(i, j))) throw std::invalid_argument("Polyhedron::load: bad facet row");
    if (!(is >> off[i])) throw std::invalid_argument("Polyhedron::load: bad offset");
  }
  std::size_t s = 0;
  if (!(is >> s)) throw std::invalid_argument("Polyhedron::load: bad vertex count");
  std::vector<Vec> verts(s, Vec(n));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(is >> verts[i][j])) throw std::invalid_argument("Polyhedron::load: bad vertex row");
  return Polyhedron(std::move(b), std::move(off), std::move(verts));
}

// ---------------------------------------------------------------------------
// Construction

namespace {

/// Builds the 2D polygon facet system from vertices in convex position,
/// ordered counterclockwise around `center`.
Polyhedron polygon_from_vertices(const Vec& center, std::vector<Vec> verts) {
  const int m = static_cast<int>(verts.size());
  std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a[1] - center[1], a[0] - center[0]) <
           std::atan2(b[1] - center[1], b[0] - center[0]);
  });
  Mat bmat(m, 2);
  Vec off(m);
  for (int k = 0; k < m; ++k) {
    const Vec& p = verts[k];
    const Vec& q = verts[(k + 1) % m];
    const double dx = q[0] - p[0], dy = q[1] - p[1];
    const double len = std::hypot(dx, dy);
    if (len < 1e-14) throw std::invalid_argument("polygon: duplicate vertices");
    // outward normal of a CCW edge
    bmat(k, 0) = dy / len;
    bmat(k, 1) = -dx / len;
    off[k] = bmat(k, 0) * p[0] + bmat(k, 1) * p[1];
  }
  return Polyhedron(std::move(bmat), std::move(off), std::move(verts));
}

struct HullFace {
  std::array<int, 3> v;
  Vec n;
  double off;
};

HullFace make_face(const std::vector<Vec>& pts, int a, int b, int c,
                   const Vec& interior) {
  Vec e1 = sub(pts[b], pts[a]);
  Vec e2 = sub(pts[c], pts[a]);
  Vec n = cross3(e1, e2);
  const double ln = norm(n);
  if (ln < 1e-13) throw std::invalid_argument("hull: degenerate (collinear) face");
  for (double& x : n) x /= ln;
  double off = dot(n, pts[a]);
  int bb = b, cc = c;
  if (dot(n, interior) > off) {
    std::swap(bb, cc);
    for (double& x : n) x = -x;
    off = -off;
  }
  return {{a, bb, cc}, std::move(n), off};
}

/// Incremental 3D convex hull for points in strictly convex position.
class Hull3 {
 public:
  Hull3(std::vector<Vec> seed) : pts_(std::move(seed)) {
    if (pts_.size() != 4) throw std::invalid_argument("hull: seed must have 4 points");
    interior_.assign(3, 0.0);
    for (const Vec& p : pts_)
      for (int i = 0; i < 3; ++i) interior_[i] += p[i] / 4.0;
    Vec e1 = sub(pts_[1], pts_[0]), e2 = sub(pts_[2], pts_[0]), e3 = sub(pts_[3], pts_[0]);
    if (std::abs(dot(cross3(e1, e2), e3)) < 1e-10)
      throw std::invalid_argument("hull: seed simplex is affinely dependent");
    faces_.push_back(make_face(pts_, 0, 1, 2, interior_));
    faces_.push_back(make_face(pts_, 0, 1, 3, interior_));
    faces_.push_back(make_face(pts_, 0, 2, 3, interior_));
    faces_.push_back(make_face(pts_, 1, 2, 3, interior_));
  }

  void add(Vec p) {
    const int idx = static_cast<int>(pts_.size());
    pts_.push_back(std::move(p));
    std::vector<HullFace> visible, kept;
    for (auto& f : faces_) {
      if (dot(f.n, pts_[idx]) > f.off + 1e-12)
        visible.push_back(f);
      else
        kept.push_back(f);
    }
    if (visible.empty()) return;  // inside current hull; nothing to stitch
    // horizon: directed edges of visible faces whose reverse is not visible
    std::set<std::pair<int, int>> dir;
    for (const auto& f : visible)
      for (int e = 0; e < 3; ++e) dir.insert({f.v[e], f.v[(e + 1) % 3]});
    faces_ = std::move(kept);
    for (const auto& [u, v] : dir) {
      if (dir.count({v, u})) continue;  // internal to the visible patch
      faces_.push_back(make_face(pts_, u, v, idx, interior_));
    }
  }

  const std::vector<HullFace>& faces() const { return faces_; }
  const std::vector<Vec>& points() const { return pts_; }

 private:
  std::vector<Vec> pts_;
  Vec interior_;
  std::vector<HullFace> faces_;
};

Polyhedron hull_to_polyhedron(const Hull3& h) {
  const auto& faces = h.faces();
  Mat bmat(faces.size(), 3);
  Vec off(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (int j = 0; j < 3; ++j) bmat(i, j) = faces[i].n[j];
    off[i] = faces[i].off;
  }
  return Polyhedron(std::move(bmat), std::move(off), h.points());
}

}  // namespace

Polyhedron inscribe_regular(const ConvexBody& body, int m, double theta0) {
  if (body.dim() != 2) throw std::invalid_argument("inscribe_regular: 2D bodies only");
  if (m < 3) throw std::invalid_argument("inscribe_regular: need at least 3 vertices");
  std::vector<Vec> verts;
  verts.reserve(m);
  for (int k = 0; k < m; ++k)
    verts.push_back(body.boundary_point(theta0 + 2.0 * kPi * k / m));
  return polygon_from_vertices(body.center(), std::move(verts));
}

Polyhedron inscribe_greedy(const ConvexBody& body, int s,
                           const std::vector<Vec>& seed) {
  const int n = body.dim();
  if (n != 2 && n != 3)
    throw std::invalid_argument("inscribe_greedy: automatic construction is 2D/3D only");
  if (static_cast<int>(seed.size()) != n + 1)
    throw std::invalid_argument("inscribe_greedy: seed must be a boundary simplex (n+1 points)");
  if (s < n + 1) throw std::invalid_argument("inscribe_greedy: target below simplex size");
  for (const Vec& v : seed)
    if (std::abs(body.membership(v) - 1.0) > 1e-8)
      throw std::invalid_argument("inscribe_greedy: seed point not on the boundary");

  if (n == 2) {
    // degenerate (collinear) seed check via triangle area
    const double area =
        (seed[1][0] - seed[0][0]) * (seed[2][1] - seed[0][1]) -
        (seed[1][1] - seed[0][1]) * (seed[2][0] - seed[0][0]);
    if (std::abs(area) < 1e-10)
      throw std::invalid_argument("inscribe_greedy: seed simplex is affinely dependent");
    std::vector<Vec> verts = seed;
    while (static_cast<int>(verts.size()) < s) {
      Polyhedron poly = polygon_from_vertices(body.center(), verts);
      double best_gap = -1.0;
      Vec best_u;
      for (int f = 0; f < poly.facet_count(); ++f) {
        ConstSpan u = poly.normals().row(f);
        const double gap = body.support_value(u) - poly.offsets()[f];
        if (gap > best_gap) {
          best_gap = gap;
          best_u = Vec(u.begin(), u.end());
        }
      }
      verts.push_back(body.support_point(best_u));
    }
    return polygon_from_vertices(body.center(), std::move(verts));
  }

  Hull3 hull(seed);
  while (static_cast<int>(hull.points().size()) < s) {
    double best_gap = -1.0;
    Vec best_u;
    for (const auto& f : hull.faces()) {
      const double gap = body.support_value(f.n) - f.off;
      if (gap > best_gap) {
        best_gap = gap;
        best_u = f.n;
      }
    }
    hull.add(body.support_point(best_u));
  }
  return hull_to_polyhedron(hull);
}

Polyhedron inscribe_greedy(const ConvexBody& body, int s) {
  std::vector<Vec> seed;
  if (body.dim() == 2) {
    for (int k = 0; k < 3; ++k) seed.push_back(body.boundary_point(2.0 * kPi * k / 3));
  } else if (body.dim() == 3) {
    const double r = 1.0 / std::sqrt(3.0);
    const double dirs[4][3] = {{r, r, r}, {r, -r, -r}, {-r, r, -r}, {-r, -r, r}};
    for (const auto& d : dirs) {
      Vec p(3);
      for (int i = 0; i < 3; ++i)
        p[i] = body.center()[i] + body.semiaxes()[i] * d[i];
      seed.push_back(std::move(p));
    }
  } else {
    throw std::invalid_argument("inscribe_greedy: automatic construction is 2D/3D only");
  }
  return inscribe_greedy(body, s, seed);
}

Polyhedron inscribe_box(const ConvexBody& ball) {
  const int n = ball.dim();
  const double r = ball.semiaxes()[0];
  for (double v : ball.semiaxes())
    if (std::abs(v - r) > 1e-12)
      throw std::invalid_argument("inscribe_box: equal semiaxes (ball) required");
  const double half = r / std::sqrt(static_cast<double>(n));
  Mat bmat(2 * n, n);
  Vec off(2 * n);
  for (int j = 0; j < n; ++j) {
    bmat(2 * j, j) = 1.0;
    off[2 * j] = ball.center()[j] + half;
    bmat(2 * j + 1, j) = -1.0;
    off[2 * j + 1] = -(ball.center()[j] - half);
  }
  // representative sphere vertices: cyclic sign patterns (+...+, -+...+, ...)
  std::vector<Vec> verts;
  for (int k = 0; k < 2 * n; ++k) {
    Vec v(n);
    for (int j = 0; j < n; ++j) {
      const bool neg = (k < n) ? (j < k) : (j >= k - n);
      v[j] = ball.center()[j] + (neg ? -half : half);
    }
    verts.push_back(std::move(v));
  }
  return Polyhedron(std::move(bmat), std::move(off), std::move(verts));
}

// ---------------------------------------------------------------------------
// Hausdorff estimate

HausdorffEstimate hausdorff_estimate(const ConvexBody& body,
                                     const Polyhedron& poly, int grid) {
  if (poly.dim() != body.dim())
    throw std::invalid_argument("hausdorff_estimate: dimension mismatch");
  for (const Vec& v : poly.vertices())
    if (body.membership(v) > 1.0 + 1e-10)
      throw std::invalid_argument("hausdorff_estimate: not an inscribed polyhedron");
  const int n = body.dim();
  auto gap = [&](ConstSpan u) { return body.support_value(u) - poly.support_value(u); };

  HausdorffEstimate est;
  if (n == 2) {
    const int res = grid > 0 ? grid : 4096;
    est.resolution = res;
    double best_theta = 0.0, best = -1.0;
    for (int k = 0; k < res; ++k) {
      const double th = 2.0 * kPi * k / res;
      const Vec u = {std::cos(th), std::sin(th)};
      const double g = gap(u);
      if (g > best) {
        best = g;
        best_theta = th;
      }
    }
    const double delta = 2.0 * kPi / res;
    auto f = [&](double th) {
      const Vec u = {std::cos(th), std::sin(th)};
      return gap(u);
    };
    const double th = golden_max(f, best_theta - delta, best_theta + delta);
    est.value = std::max(best, f(th));
    est.refined = true;
    return est;
  }
  if (n == 3) {
    const int res = grid > 0 ? grid : 20480;
    est.resolution = res;
    const double ga = kPi * (3.0 - std::sqrt(5.0));  // golden angle
    Vec best_u(3);
    double best = -1.0;
    for (int k = 0; k < res; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / res;
      const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = ga * k;
      const Vec u = {rr * std::cos(phi), rr * std::sin(phi), z};
      const double g = gap(u);
      if (g > best) {
        best = g;
        best_u = u;
      }
    }
    // local refinement: alternating golden-section along two tangent arcs
    double delta = 2.0 * std::sqrt(4.0 * kPi / res);
    for (int round = 0; round < 6; ++round) {
      // orthonormal tangent frame at best_u
      Vec a = std::abs(best_u[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
      Vec t1 = cross3(best_u, a);
      const double n1 = norm(t1);
      for (double& x : t1) x /= n1;
      Vec t2 = cross3(best_u, t1);
      for (Vec* t : {&t1, &t2}) {
        auto f = [&](double alpha) {
          Vec u(3);
          for (int i = 0; i < 3; ++i)
            u[i] = std::cos(alpha) * best_u[i] + std::sin(alpha) * (*t)[i];
          return gap(u);
        };
        const double alpha = golden_max(f, -delta, delta, 60);
        Vec u(3);
        for (int i = 0; i < 3; ++i)
          u[i] = std::cos(alpha) * best_u[i] + std::sin(alpha) * (*t)[i];
        const double g = gap(u);
        if (g > best) {
          best = g;
          best_u = u;
        }
      }
      delta *= 0.35;
    }
    est.value = best;
    est.refined = true;
    return est;
  }
  // n > 3: sampled directions only (user-supplied systems); coarse but honest
  const int res = grid > 0 ? grid : 20480;
  est.resolution = res;
  Rng rng(0x9e3779b97f4a7c15ull);
  double best = -1.0;
  for (int k = 0; k < res; ++k) best = std::max(best, gap(rng.unit_vector(n)));
  est.value = best;
  est.refined = false;
  return est;
}

double curvature_nu(const ConvexBody& body) {
  const double vmax = *std::max_element(body.semiaxes().begin(), body.semiaxes().end());
  double nu = 0.0;
  for (double v : body.semiaxes()) nu = std::max(nu, vmax / (v * v));
  return nu;
}

double delta_bound(ConstSpan h, ConstSpan nu, double c3) {
  if (h.size() != nu.size()) throw std::invalid_argument("delta_bound: size mismatch");
  if (!(c3 > 0.0)) throw std::invalid_argument("delta_bound: c3 must be positive");
  double ss = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] < 0.0) throw std::invalid_argument("delta_bound: negative Hausdorff distance");
    const double prod = nu[i] * h[i];
    if (prod > 2.0)
      throw std::domain_error("delta_bound: nu*h > 2, approximation too coarse for the arc construction");
    const double term = 2.0 / nu[i] * std::acos(1.0 - prod) + h[i];
    ss += term * term;
  }
  return (1.0 + c3) * std::sqrt(ss);
}

}  // namespace aggsolve
