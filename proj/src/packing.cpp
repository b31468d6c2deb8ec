#include "crf/packing.hpp"

#include <cmath>
#include <string>

namespace crf {

LengthAssignment lengths_from_packing(const CirclePacking& p, const TriangulatedSurface& s) {
  if (p.radii.size() != s.vertex_count())
    throw MissingRadius("packing has " + std::to_string(p.radii.size()) + " radii for " +
                        std::to_string(s.vertex_count()) + " vertices");
  if (p.phi.size() != s.edge_count())
    throw MissingAngle("packing has " + std::to_string(p.phi.size()) + " angles for " +
                       std::to_string(s.edge_count()) + " edges");
  for (int v = 0; v < s.vertex_count(); ++v)
    if (!(p.radii[v] > 0.0))
      throw MissingRadius("non-positive radius at vertex " + std::to_string(v));
  for (int e = 0; e < s.edge_count(); ++e)
    if (!(p.phi[e] >= 0.0 && p.phi[e] <= M_PI / 2))
      throw AngleOutOfRange("phi outside [0, pi/2] on edge " + std::to_string(e));

  LengthAssignment l;
  l.background = p.background;
  l.lengths.resize(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e) {
    const auto& [i, j] = s.edges()[e];
    double ri = p.radii[i], rj = p.radii[j];
    double c = std::cos(p.phi[e]);
    if (p.background == Background::Euclidean) {
      l.lengths[e] = std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * c);
    } else {
      double ch = std::cosh(ri) * std::cosh(rj) + std::sinh(ri) * std::sinh(rj) * c;
      l.lengths[e] = std::acosh(ch);
    }
  }
  return l;
}

CirclePacking scale_packing(const CirclePacking& p, double lambda) {
  if (!(lambda > 0.0)) throw NonPositiveScale("scale factor must be positive");
  if (p.background != Background::Euclidean)
    throw HyperbolicScaleUnsupported("hyperbolic packings cannot be rescaled");
  CirclePacking q = p;
  q.radii *= lambda;
  return q;
}

}  // namespace crf
