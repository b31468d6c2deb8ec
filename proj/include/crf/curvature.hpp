#pragma once

#include <Eigen/Core>

#include "crf/surface.hpp"

namespace crf {

/// Angular-defect curvature K_i = 2*pi - sum of face angles at vertex i.
struct CurvatureField {
  Eigen::VectorXd defects;
  Background background = Background::Euclidean;
  double total = 0.0;    // sum of defects
  double average = 0.0;  // total / V
};

/// Corner angles per face, column c holding the angle at faces()[f][c].
/// Euclidean corners use the planar law of cosines, hyperbolic ones
/// cos a = (cosh b cosh c - cosh a) / (sinh b sinh c). acos arguments
/// within 1e-10 of [-1,1] are clamped, beyond that NumericalDomain.
Eigen::MatrixX3d face_angles(const TriangulatedSurface& s, const LengthAssignment& l);

CurvatureField vertex_defects(const TriangulatedSurface& s, Background background,
                              const Eigen::MatrixX3d& angles);

inline double average_curvature(const CurvatureField& field) { return field.average; }

/// pi - (angle sum) of face f; the hyperbolic area of the face.
double hyperbolic_face_area(const Eigen::MatrixX3d& angles, int f);

}  // namespace crf
