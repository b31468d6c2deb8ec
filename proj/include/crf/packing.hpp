#pragma once

#include <Eigen/Core>

#include "crf/surface.hpp"

namespace crf {

/// Circle packing on a surface: one radius per vertex, one intersection
/// angle per edge (indexed like TriangulatedSurface::edges()). The
/// angles are the packing's conformal structure and stay fixed under
/// the flow; only radii evolve.
struct CirclePacking {
  Eigen::VectorXd radii;
  Eigen::VectorXd phi;  // in [0, pi/2]
  Background background = Background::Euclidean;
};

/// Edge lengths induced by a packing.
/// Euclidean:  l^2 = r_i^2 + r_j^2 + 2 r_i r_j cos(phi)
/// Hyperbolic: cosh l = cosh r_i cosh r_j + sinh r_i sinh r_j cos(phi)
/// Validity of the result is not guaranteed; check with validate_lengths.
LengthAssignment lengths_from_packing(const CirclePacking& p, const TriangulatedSurface& s);

/// Multiplies all radii by lambda (Euclidean backgrounds only; hyperbolic
/// lengths are not scale-covariant).
CirclePacking scale_packing(const CirclePacking& p, double lambda);

}  // namespace crf
