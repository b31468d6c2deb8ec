#include "crf/curvature.hpp"

#include <cmath>
#include <string>

namespace crf {

namespace {

constexpr double kClamp = 1e-10;

double safe_acos(double x, const char* where) {
  if (x > 1.0) {
    if (x > 1.0 + kClamp) throw NumericalDomain(std::string(where) + ": acos argument > 1");
    x = 1.0;
  } else if (x < -1.0) {
    if (x < -1.0 - kClamp) throw NumericalDomain(std::string(where) + ": acos argument < -1");
    x = -1.0;
  }
  return std::acos(x);
}

}  // namespace

Eigen::MatrixX3d face_angles(const TriangulatedSurface& s, const LengthAssignment& l) {
  if (!validate_lengths(s, l).empty())
    throw InvalidLengths("length assignment violates the triangle inequality");

  Eigen::MatrixX3d angles(s.face_count(), 3);
  for (int fi = 0; fi < s.face_count(); ++fi) {
    const auto& f = s.faces()[fi];
    // side[c] is opposite corner c
    std::array<double, 3> side;
    for (int c = 0; c < 3; ++c)
      side[c] = l.lengths[s.edge_index(f[(c + 1) % 3], f[(c + 2) % 3])];
    for (int c = 0; c < 3; ++c) {
      double a = side[c], b = side[(c + 1) % 3], cc = side[(c + 2) % 3];
      double cosv;
      if (l.background == Background::Euclidean) {
        cosv = (b * b + cc * cc - a * a) / (2.0 * b * cc);
      } else {
        cosv = (std::cosh(b) * std::cosh(cc) - std::cosh(a)) /
               (std::sinh(b) * std::sinh(cc));
      }
      angles(fi, c) = safe_acos(cosv, "face_angles");
    }
  }
  return angles;
}

CurvatureField vertex_defects(const TriangulatedSurface& s, Background background,
                              const Eigen::MatrixX3d& angles) {
  CurvatureField field;
  field.background = background;
  field.defects = Eigen::VectorXd::Constant(s.vertex_count(), 2.0 * M_PI);
  for (int fi = 0; fi < s.face_count(); ++fi) {
    const auto& f = s.faces()[fi];
    for (int c = 0; c < 3; ++c) field.defects[f[c]] -= angles(fi, c);
  }
  field.total = field.defects.sum();
  field.average = field.total / s.vertex_count();
  return field;
}

double hyperbolic_face_area(const Eigen::MatrixX3d& angles, int f) {
  return M_PI - angles.row(f).sum();
}

}  // namespace crf
