#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "crf/surface.hpp"

namespace crf {

/// Four points with their six pairwise distances. Stored as a symmetric
/// 4x4 matrix with zero diagonal; construction checks the metric axioms.
class MetricQuadruple {
 public:
  /// Distances in the order d12, d13, d14, d23, d24, d34.
  static MetricQuadruple from_distances(const std::array<double, 6>& d);
  static MetricQuadruple from_matrix(const Eigen::Matrix4d& d);

  double d(int i, int j) const { return d_(i, j); }
  const Eigen::Matrix4d& matrix() const { return d_; }
  double max_distance() const { return d_.maxCoeff(); }

 private:
  MetricQuadruple() = default;
  Eigen::Matrix4d d_;
};

/// The 5x5 Cayley-Menger determinant of the quadruple; zero iff the four
/// points embed in the Euclidean plane (288 * squared 3-volume otherwise).
double cayley_menger(const MetricQuadruple& q);

/// Determinant of the 4x4 gauge matrix with entries cos(sqrt(kappa) d_ij)
/// for kappa > 0 or cosh(sqrt(-kappa) d_ij) for kappa < 0 (unit diagonal).
/// Evaluated through a rank-one split so the O(kappa^3) behaviour near
/// zero is resolved without cancellation.
double gauge_determinant(const MetricQuadruple& q, double kappa);

enum class CurvatureBranch { Flat, Spherical, Hyperbolic };

struct EmbeddingCurvatureResult {
  double kappa = 0.0;
  CurvatureBranch branch = CurvatureBranch::Flat;
  double residual = 0.0;               // gauge determinant at the root
  std::vector<double> admissible_roots;  // all roots passing the side conditions
};

struct EmbeddingSolverOptions {
  bool require_unique = false;     // throw AmbiguousRoot on several roots
  double flat_tolerance = 1e-10;   // |D(Q)| <= tol * (max d)^6 => flat
  int grid_nodes = 200;            // log-spaced bracketing nodes per sign
  double kappa_min_factor = 1e-8;  // grid start, units 1/(max d)^2
  double kappa_max_factor = 1e4;   // grid end, units 1/(max d)^2
  double bisect_rel_width = 1e-12;
  double minor_tolerance = 1e-10;  // spherical principal-minor slack
};

/// Curvature of the model surface the quadruple embeds into. Flat branch
/// taken when the Cayley-Menger determinant vanishes at scale-covariant
/// tolerance; otherwise the gauge determinant is bracketed on both signs
/// of kappa and the admissible root of smallest |kappa| is returned.
EmbeddingCurvatureResult embedding_curvature(const MetricQuadruple& q,
                                             const EmbeddingSolverOptions& opts = {});

/// Apex angle of the triangle with sides a, b and opposite side opp in
/// the model surface of curvature kappa.
double comparison_angle(double a, double b, double opp, double kappa);

/// Sum of the three comparison angles at the apex point of the quadruple.
double v_kappa(const MetricQuadruple& q, int apex, double kappa);

struct CurvatureWitness {
  int quadruple = -1;
  int apex = -1;
  double v = 0.0;
};

struct RegionCurvatureResult {
  bool at_least = false;
  std::optional<CurvatureWitness> witness;  // set when at_least is false
};

/// Checks V_kappa(x) <= 2*pi for every quadruple and apex; on failure
/// reports the first witness.
RegionCurvatureResult region_curvature_at_least(const std::vector<MetricQuadruple>& quadruples,
                                                double kappa, double eps_angle = 1e-9);

/// Intrinsic geometry of the closed star of a vertex: distances from the
/// center to its link neighbours and between neighbours, measured inside
/// the star (unfolded into the background model surface).
struct StarGeometry {
  std::vector<int> neighbors;  // link order
  Eigen::VectorXd spoke;       // distance center -> neighbors[k]
  Eigen::MatrixXd chord;       // distance neighbors[j] -> neighbors[k]
  MetricQuadruple quadruple(int j, int k, int m) const;  // apex = point 0
};

StarGeometry star_geometry(const TriangulatedSurface& s, const LengthAssignment& l, int v);

/// sup{ kappa : V_kappa(v) <= 2*pi for every quadruple {v, three
/// neighbours} in the star of v }, located by bisection (V_kappa is
/// nondecreasing in kappa).
double vertex_wald_curvature(const TriangulatedSurface& s, const LengthAssignment& l, int v);

}  // namespace crf
