#pragma once

#include <optional>
#include <vector>

#include "crf/surface.hpp"
#include "crf/wald.hpp"

namespace crf {

/// Local isometric-embeddability report for one polyhedral vertex. The
/// three inequality families are evaluated over the star of the vertex:
///   1. A0 = max over neighbour triples of V_0  <=  2*pi
///   2. comparison angles at v satisfy the triangle inequality
///   3. V_kappa(v) <= 2*pi for every neighbour triple
struct VertexEmbeddabilityReport {
  int vertex = -1;
  double a0 = 0.0;
  bool a0_ok = false;
  bool angle_triangle_ok = false;
  bool vk_ok = false;
  bool embeddable = false;

  struct TripleWitness {
    std::array<int, 3> neighbors;  // link positions translated to vertex ids
    double value;
  };
  std::optional<TripleWitness> a0_witness;             // triple with V_0 > 2*pi
  std::optional<TripleWitness> angle_triangle_witness; // (j,l,p) breaking subadditivity
  std::optional<TripleWitness> vk_witness;             // triple with V_kappa > 2*pi
};

VertexEmbeddabilityReport check_vertex(const TriangulatedSurface& s,
                                       const LengthAssignment& l, int v,
                                       double kappa = 0.0);

std::vector<VertexEmbeddabilityReport> check_surface(const TriangulatedSurface& s,
                                                     const LengthAssignment& l,
                                                     double kappa = 0.0);

}  // namespace crf
