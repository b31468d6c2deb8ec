#include "crf/embeddability.hpp"

#include <cmath>
#include <limits>

namespace crf {

namespace {

constexpr double kTol = 1e-9;  // slack on the 2*pi comparisons

}  // namespace

VertexEmbeddabilityReport check_vertex(const TriangulatedSurface& s,
                                       const LengthAssignment& l, int v, double kappa) {
  StarGeometry g = star_geometry(s, l, v);
  int deg = (int)g.neighbors.size();

  VertexEmbeddabilityReport rep;
  rep.vertex = v;

  // Euclidean comparison angles at v between every pair of neighbours.
  Eigen::MatrixXd alpha0 = Eigen::MatrixXd::Zero(deg, deg);
  for (int j = 0; j < deg; ++j)
    for (int k = j + 1; k < deg; ++k)
      alpha0(j, k) = alpha0(k, j) =
          comparison_angle(g.spoke[j], g.spoke[k], g.chord(j, k), 0.0);

  rep.a0_ok = true;
  rep.vk_ok = true;
  rep.a0 = 0.0;
  double worst_vk = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < deg; ++j)
    for (int k = j + 1; k < deg; ++k)
      for (int m = k + 1; m < deg; ++m) {
        double v0 = alpha0(j, k) + alpha0(j, m) + alpha0(k, m);
        if (v0 > rep.a0) rep.a0 = v0;
        if (v0 > 2.0 * M_PI + kTol && !rep.a0_witness)
          rep.a0_witness = VertexEmbeddabilityReport::TripleWitness{
              {g.neighbors[j], g.neighbors[k], g.neighbors[m]}, v0};

        double vk;
        try {
          vk = kappa == 0.0 ? v0 : v_kappa(g.quadruple(j, k, m), 0, kappa);
        } catch (const SphericalDomain&) {
          vk = std::numeric_limits<double>::infinity();
        }
        if (vk > worst_vk) worst_vk = vk;
        if (vk > 2.0 * M_PI + kTol && !rep.vk_witness)
          rep.vk_witness = VertexEmbeddabilityReport::TripleWitness{
              {g.neighbors[j], g.neighbors[k], g.neighbors[m]}, vk};
      }
  rep.a0_ok = !rep.a0_witness;
  rep.vk_ok = !rep.vk_witness;

  // Subadditivity of the comparison angles at v.
  rep.angle_triangle_ok = true;
  for (int j = 0; j < deg && rep.angle_triangle_ok; ++j)
    for (int k = 0; k < deg && rep.angle_triangle_ok; ++k)
      for (int p = 0; p < deg; ++p) {
        if (j == k || j == p || k == p) continue;
        if (alpha0(j, k) > alpha0(j, p) + alpha0(k, p) + kTol) {
          rep.angle_triangle_ok = false;
          rep.angle_triangle_witness = VertexEmbeddabilityReport::TripleWitness{
              {g.neighbors[j], g.neighbors[k], g.neighbors[p]},
              alpha0(j, k) - alpha0(j, p) - alpha0(k, p)};
          break;
        }
      }

  rep.embeddable = rep.a0_ok && rep.angle_triangle_ok && rep.vk_ok;
  return rep;
}

std::vector<VertexEmbeddabilityReport> check_surface(const TriangulatedSurface& s,
                                                     const LengthAssignment& l,
                                                     double kappa) {
  std::vector<VertexEmbeddabilityReport> out;
  out.reserve(s.vertex_count());
  for (int v = 0; v < s.vertex_count(); ++v) out.push_back(check_vertex(s, l, v, kappa));
  return out;
}

}  // namespace crf
