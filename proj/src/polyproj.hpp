#pragma once

#include "geometry.hpp"
#include "vecmat.hpp"

namespace aggsolve {

struct QpSolution {
  Vec point;
  Vec multipliers;
  int iterations = 0;
  double kkt_residual = 0.0;
};

/// Euclidean projection of z onto {y : By <= b}: Hildreth dual cyclic
/// coordinate ascent, then an active-set refinement pass that pins the KKT
/// residual below tol. `warm_multipliers` seeds the dual iterate (the
/// dynamics pass the previous step's multipliers); correctness does not
/// depend on it. Throws std::runtime_error on an infeasible system (Farkas
/// certificate detected from the diverging dual).
QpSolution project_polyhedron(const Polyhedron& poly, ConstSpan z,
                              double tol = 1e-10,
                              const Vec* warm_multipliers = nullptr);

}  // namespace aggsolve
