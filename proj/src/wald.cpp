#include "crf/wald.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace crf {

namespace {

constexpr double kClamp = 1e-10;
constexpr double kMetricSlack = 1e-9;  // relative slack on metric axioms

double clamped_acos(double x) {
  if (x > 1.0) {
    if (x > 1.0 + kClamp) throw NumericalDomain("acos argument > 1");
    x = 1.0;
  } else if (x < -1.0) {
    if (x < -1.0 - kClamp) throw NumericalDomain("acos argument < -1");
    x = -1.0;
  }
  return std::acos(x);
}

double det3(const Eigen::Matrix4d& m, int skip_row, int skip_col) {
  double sub[3][3];
  int r = 0;
  for (int i = 0; i < 4; ++i) {
    if (i == skip_row) continue;
    int c = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == skip_col) continue;
      sub[r][c++] = m(i, j);
    }
    ++r;
  }
  return sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
         sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
         sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
}

Eigen::Matrix4d gauge_matrix(const MetricQuadruple& q, double kappa) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  double s = std::sqrt(std::abs(kappa));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double x = s * q.d(i, j);
      m(i, j) = m(j, i) = kappa > 0 ? std::cos(x) : std::cosh(x);
    }
  return m;
}

}  // namespace

MetricQuadruple MetricQuadruple::from_distances(const std::array<double, 6>& d) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m(i, j) = m(j, i) = d[k++];
  return from_matrix(m);
}

MetricQuadruple MetricQuadruple::from_matrix(const Eigen::Matrix4d& d) {
  MetricQuadruple q;
  q.d_ = d;
  for (int i = 0; i < 4; ++i) {
    if (d(i, i) != 0.0) throw InvalidTriangle("quadruple diagonal must be zero");
    for (int j = i + 1; j < 4; ++j) {
      if (d(i, j) != d(j, i)) throw InvalidTriangle("quadruple distances not symmetric");
      if (!(d(i, j) > 0.0)) throw InvalidTriangle("quadruple distances must be positive");
    }
  }
  // Triangle inequality over every triple.
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        if (k == i || k == j) continue;
        double slack = (d(i, k) + d(k, j)) * (1.0 + kMetricSlack);
        if (d(i, j) > slack)
          throw InvalidTriangle("quadruple breaks the triangle inequality on (" +
                                std::to_string(i) + "," + std::to_string(j) + "," +
                                std::to_string(k) + ")");
      }
  return q;
}

double cayley_menger(const MetricQuadruple& q) {
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  for (int i = 1; i < 5; ++i) m(0, i) = m(i, 0) = 1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double d = q.d(i, j);
      m(i + 1, j + 1) = d * d;
    }
  return m.determinant();
}

double gauge_determinant(const MetricQuadruple& q, double kappa) {
  if (kappa == 0.0) throw ZeroKappa("gauge determinant needs kappa != 0");
  double s = std::sqrt(std::abs(kappa));
  if (kappa > 0 && s * q.max_distance() > M_PI * (1.0 + 1e-12))
    throw DomainExceeded("sqrt(kappa) * max distance exceeds pi");

  // Split the gauge matrix as J + E with J all ones: E_ij = cos(x)-1 =
  // -2 sin^2(x/2) (resp. cosh(x)-1 = 2 sinh^2(x/2)), zero diagonal. Then
  // det(J + E) = det(E) + sum of cofactors of E, which keeps the
  // O(kappa^3) small-kappa regime free of cancellation.
  Eigen::Matrix4d e = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double h = 0.5 * s * q.d(i, j);
      e(i, j) = e(j, i) = kappa > 0 ? -2.0 * std::sin(h) * std::sin(h)
                                    : 2.0 * std::sinh(h) * std::sinh(h);
    }
  double cof_sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      cof_sum += (((i + j) & 1) ? -1.0 : 1.0) * det3(e, i, j);
  return e.determinant() + cof_sum;
}

namespace {

// A root of the gauge determinant is a genuine embedding only when the
// gauge matrix is a valid Gram matrix of the model: for S_kappa (kappa >
// 0) the cos-matrix must be positive semidefinite (rank <= 3 unit
// vectors in R^3); for H_kappa (kappa < 0) the cosh-matrix must carry
// the Minkowski signature with exactly one positive eigenvalue.
bool side_conditions(const MetricQuadruple& q, double kappa, double minor_tol) {
  if (kappa > 0) {
    if (std::sqrt(kappa) * q.max_distance() > M_PI * (1.0 + 1e-12)) return false;
    Eigen::Matrix4d m = gauge_matrix(q, kappa);
    for (int skip = 0; skip < 4; ++skip)
      if (det3(m, skip, skip) < -minor_tol) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
    double tol = 1e-7 * es.eigenvalues().cwiseAbs().maxCoeff();
    return es.eigenvalues().minCoeff() >= -tol;
  }
  Eigen::Matrix4d m = gauge_matrix(q, kappa);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  double tol = 1e-7 * es.eigenvalues().cwiseAbs().maxCoeff();
  // Eigenvalues ascend; the second largest must vanish or be negative.
  return es.eigenvalues()[2] <= tol;
}

double bisect_root(const MetricQuadruple& q, double lo, double hi, double f_lo,
                   double rel_width) {
  // Invariant: sign(f(lo)) == sign(f_lo) != sign(f(hi)).
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (std::abs(hi - lo) <= rel_width * std::abs(mid)) return mid;
    double f_mid = gauge_determinant(q, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EmbeddingCurvatureResult embedding_curvature(const MetricQuadruple& q,
                                             const EmbeddingSolverOptions& opts) {
  double scale = q.max_distance();
  double d_q = cayley_menger(q);

  EmbeddingCurvatureResult res;
  // The Cayley-Menger determinant is homogeneous of degree 6 in the
  // distances, so the flat threshold scales with the sixth power.
  if (std::abs(d_q) <= opts.flat_tolerance * std::pow(scale, 6)) {
    res.kappa = 0.0;
    res.branch = CurvatureBranch::Flat;
    res.residual = d_q;
    res.admissible_roots = {0.0};
    return res;
  }

  double inv_l2 = 1.0 / (scale * scale);
  double k_lo = opts.kappa_min_factor * inv_l2;
  std::vector<double> roots;

  for (int sign = -1; sign <= 1; sign += 2) {
    double k_hi = opts.kappa_max_factor * inv_l2;
    if (sign > 0) k_hi = std::min(k_hi, (M_PI / scale) * (M_PI / scale));
    if (k_hi <= k_lo) continue;
    double ratio = std::pow(k_hi / k_lo, 1.0 / (opts.grid_nodes - 1));
    double prev_k = sign * k_lo;
    double prev_f = gauge_determinant(q, prev_k);
    double mag = k_lo;
    for (int n = 1; n < opts.grid_nodes; ++n) {
      mag = (n == opts.grid_nodes - 1) ? k_hi : mag * ratio;
      double k = sign * mag;
      double f = gauge_determinant(q, k);
      if (prev_f == 0.0) {
        roots.push_back(prev_k);
      } else if ((f > 0) != (prev_f > 0)) {
        double lo = prev_k, hi = k;
        roots.push_back(bisect_root(q, lo, hi, prev_f, opts.bisect_rel_width));
      }
      prev_k = k;
      prev_f = f;
    }
    if (prev_f == 0.0) roots.push_back(prev_k);
  }

  std::vector<double> admissible;
  for (double k : roots) {
    if (!side_conditions(q, k, opts.minor_tolerance)) continue;
    bool dup = false;
    for (double a : admissible)
      if (std::abs(a - k) <= 1e-6 * std::max(std::abs(a), std::abs(k))) dup = true;
    if (!dup) admissible.push_back(k);
  }
  if (admissible.empty())
    throw NoAdmissibleRoot("no admissible root of the gauge determinant");
  std::sort(admissible.begin(), admissible.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (opts.require_unique && admissible.size() > 1)
    throw AmbiguousRoot("multiple admissible embedding curvatures");

  res.kappa = admissible.front();
  res.branch = res.kappa > 0 ? CurvatureBranch::Spherical : CurvatureBranch::Hyperbolic;
  res.residual = gauge_determinant(q, res.kappa);
  res.admissible_roots = std::move(admissible);
  return res;
}

double comparison_angle(double a, double b, double opp, double kappa) {
  if (!(a > 0.0 && b > 0.0 && opp > 0.0))
    throw InvalidTriangle("comparison triangle sides must be positive");
  double slack = 1.0 + kMetricSlack;
  if (opp > (a + b) * slack || a > (b + opp) * slack || b > (a + opp) * slack)
    throw InvalidTriangle("comparison triangle breaks the triangle inequality");

  if (kappa == 0.0)
    return clamped_acos((a * a + b * b - opp * opp) / (2.0 * a * b));

  // Half-angle product forms: unlike the raw law of cosines these have
  // no cancellation as kappa -> 0, which the curvature bisections need.
  //   tan^2(alpha/2) = f((opp+a-b)/2) f((opp-a+b)/2)
  //                  / (f((a+b+opp)/2) f((a+b-opp)/2)),
  // with f = sin on the sphere and f = sinh in the hyperbolic plane.
  double s = std::sqrt(std::abs(kappa));
  double p1 = 0.5 * s * (opp + a - b), p2 = 0.5 * s * (opp - a + b);
  double q1 = 0.5 * s * (a + b + opp), q2 = 0.5 * s * (a + b - opp);
  double num, den;
  if (kappa > 0) {
    if (s * (a + b + opp) > 2.0 * M_PI * (1.0 + 1e-12))
      throw SphericalDomain("triangle perimeter exceeds the model sphere");
    num = std::sin(std::max(0.0, p1)) * std::sin(std::max(0.0, p2));
    den = std::sin(q1) * std::sin(std::max(0.0, q2));
  } else {
    num = std::sinh(std::max(0.0, p1)) * std::sinh(std::max(0.0, p2));
    den = std::sinh(q1) * std::sinh(std::max(0.0, q2));
  }
  return 2.0 * std::atan2(std::sqrt(std::max(0.0, num)), std::sqrt(std::max(0.0, den)));
}

double v_kappa(const MetricQuadruple& q, int apex, double kappa) {
  int other[3], n = 0;
  for (int i = 0; i < 4; ++i)
    if (i != apex) other[n++] = i;
  double sum = 0.0;
  for (int u = 0; u < 3; ++u)
    for (int w = u + 1; w < 3; ++w)
      sum += comparison_angle(q.d(apex, other[u]), q.d(apex, other[w]),
                              q.d(other[u], other[w]), kappa);
  return sum;
}

RegionCurvatureResult region_curvature_at_least(const std::vector<MetricQuadruple>& quadruples,
                                                double kappa, double eps_angle) {
  RegionCurvatureResult res;
  for (int qi = 0; qi < (int)quadruples.size(); ++qi)
    for (int apex = 0; apex < 4; ++apex) {
      double v;
      try {
        v = v_kappa(quadruples[qi], apex, kappa);
      } catch (const SphericalDomain&) {
        // Triangles at the apex no longer fit the model sphere: the
        // quadruple cannot witness curvature >= kappa.
        res.witness = CurvatureWitness{qi, apex, std::numeric_limits<double>::infinity()};
        return res;
      }
      if (v > 2.0 * M_PI + eps_angle) {
        res.witness = CurvatureWitness{qi, apex, v};
        return res;
      }
    }
  res.at_least = true;
  return res;
}

MetricQuadruple StarGeometry::quadruple(int j, int k, int m) const {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 1) = d(1, 0) = spoke[j];
  d(0, 2) = d(2, 0) = spoke[k];
  d(0, 3) = d(3, 0) = spoke[m];
  d(1, 2) = d(2, 1) = chord(j, k);
  d(1, 3) = d(3, 1) = chord(j, m);
  d(2, 3) = d(3, 2) = chord(k, m);
  return MetricQuadruple::from_matrix(d);
}

StarGeometry star_geometry(const TriangulatedSurface& s, const LengthAssignment& l, int v) {
  const auto& link = s.link(v);
  int deg = (int)link.size();
  if (deg < 3) throw StarTooSmall("vertex star needs at least 3 neighbours");

  StarGeometry g;
  g.neighbors = link;
  g.spoke.resize(deg);
  for (int k = 0; k < deg; ++k) g.spoke[k] = l.lengths[s.edge_index(v, link[k])];

  bool hyp = l.background == Background::Hyperbolic;
  // Unfold the star: cumulative wedge angle of each neighbour around v.
  Eigen::VectorXd theta(deg);
  theta[0] = 0.0;
  double total = 0.0;
  for (int k = 0; k < deg; ++k) {
    int kn = (k + 1) % deg;
    double opp = l.lengths[s.edge_index(link[k], link[kn])];
    double wedge = comparison_angle(g.spoke[k], g.spoke[kn], opp, hyp ? -1.0 : 0.0);
    total += wedge;
    if (kn != 0) theta[kn] = total;
  }

  g.chord.setZero(deg, deg);
  for (int j = 0; j < deg; ++j)
    for (int k = j + 1; k < deg; ++k) {
      double dist;
      if (k == j + 1 || (j == 0 && k == deg - 1)) {
        // Link-adjacent neighbours: the connecting edge itself.
        dist = l.lengths[s.edge_index(link[j], link[k])];
      } else {
        double gap = std::min(theta[k] - theta[j], total - (theta[k] - theta[j]));
        if (gap >= M_PI) {
          dist = g.spoke[j] + g.spoke[k];  // geodesic passes through v
        } else if (hyp) {
          double ch = std::cosh(g.spoke[j]) * std::cosh(g.spoke[k]) -
                      std::sinh(g.spoke[j]) * std::sinh(g.spoke[k]) * std::cos(gap);
          dist = std::acosh(std::max(1.0, ch));
        } else {
          double a = g.spoke[j], b = g.spoke[k];
          dist = std::sqrt(std::max(0.0, a * a + b * b - 2.0 * a * b * std::cos(gap)));
        }
      }
      g.chord(j, k) = g.chord(k, j) = dist;
    }
  return g;
}

double vertex_wald_curvature(const TriangulatedSurface& s, const LengthAssignment& l, int v) {
  StarGeometry g = star_geometry(s, l, v);
  int deg = (int)g.neighbors.size();

  // Worst V_kappa at v over all neighbour triples, +inf once the model
  // sphere is too small. Nondecreasing in kappa.
  auto excess = [&](double kappa) -> double {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < deg; ++j)
      for (int k = j + 1; k < deg; ++k)
        for (int m = k + 1; m < deg; ++m) {
          double sum;
          try {
            MetricQuadruple q = g.quadruple(j, k, m);
            sum = v_kappa(q, 0, kappa);
          } catch (const SphericalDomain&) {
            return std::numeric_limits<double>::infinity();
          }
          worst = std::max(worst, sum);
        }
    return worst - 2.0 * M_PI;
  };

  double inv_l2 = 1.0 / (g.chord.maxCoeff() * g.chord.maxCoeff());
  double lo, hi;
  if (excess(0.0) > 0.0) {
    hi = 0.0;
    lo = -inv_l2;
    int guard = 0;
    while (excess(lo) > 0.0) {
      lo *= 4.0;
      if (++guard > 80) throw NumericalDomain("no lower bracket for the Wald curvature");
    }
  } else {
    lo = 0.0;
    hi = inv_l2;
    int guard = 0;
    while (excess(hi) <= 0.0) {
      lo = hi;
      hi *= 4.0;
      if (++guard > 80) throw NumericalDomain("no upper bracket for the Wald curvature");
    }
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
    if (excess(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace crf
