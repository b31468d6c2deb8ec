#pragma once

#include <vector>

#include <Eigen/Core>

#include "crf/surface.hpp"

namespace crf {
namespace shapes {

struct EmbeddedMesh {
  std::vector<Eigen::Vector3d> positions;
  std::vector<std::array<int, 3>> faces;
};

EmbeddedMesh tetrahedron();   // regular, unit circumradius
EmbeddedMesh icosahedron();   // regular, unit circumradius

/// Icosahedron with every face split into frequency^2 triangles, all
/// vertices projected to the unit sphere.
EmbeddedMesh geodesic_sphere(int frequency);

/// Hexagonal bipyramid whose top star is a planar fan of unit
/// equilateral faces; vertex 0 is interior-flat, the bottom apex is not.
EmbeddedMesh flat_hexagon_pyramid();

/// Closed mesh whose vertex 0 carries seven unit equilateral faces
/// (negative defect). Returned as combinatorics only; use
/// saddle_lengths() for the unit-length metric.
TriangulatedSurface saddle_7();
LengthAssignment saddle_lengths(const TriangulatedSurface& s);

/// Minimal 3x3 grid torus (V=9, E=27, F=18).
TriangulatedSurface torus_3x3();

/// Genus-2 surface built as the connected sum of two 3x3 grid tori
/// (V=15, E=51, F=34, chi=-2).
TriangulatedSurface genus2();

}  // namespace shapes
}  // namespace crf
