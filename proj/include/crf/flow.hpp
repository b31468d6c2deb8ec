#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "crf/curvature.hpp"
#include "crf/packing.hpp"
#include "crf/surface.hpp"

namespace crf {

enum class FlowDirection { Forward, Backward };

struct IntegratorOptions {
  // Error control keeps the state in a band of width ~tol around the true
  // trajectory, so the spread floor tracks these; they must sit well below
  // conv_tol or convergence can never be declared.
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-12;
  double conv_tol = 1e-10;   // spread threshold for convergence
  int conv_steps = 3;        // consecutive accepted steps below conv_tol
  int stride = 1;            // record every stride-th accepted step
  double fixed_step = 0.0;   // > 0: constant step size, no adaptation
  double triangle_eps = kTriangleTolerance;  // flow-time degeneracy tolerance
};

struct FlowProblem {
  const TriangulatedSurface* surface = nullptr;
  CirclePacking packing;  // initial radii + fixed phi
  FlowDirection direction = FlowDirection::Forward;
  bool normalized = false;
  bool area_weighted_average = false;  // weight K-bar by 1/3 adjacent face area
  double t_end = 1.0;
  IntegratorOptions opts;
};

enum class Termination { ReachedTEnd, Converged, Singularity, StepUnderflow };

struct FlowSample {
  double t;
  Eigen::VectorXd radii;
  CurvatureField curvature;
};

struct SingularityInfo {
  FaceViolation violation;
  Eigen::VectorXd rejected_radii;  // state that broke the triangle inequality
  double t_rejected;
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  Termination termination = Termination::ReachedTEnd;
  std::optional<SingularityInfo> singularity;
  const TriangulatedSurface* surface = nullptr;
  CirclePacking packing0;
  bool normalized = false;
};

/// dr_i/dt of the combinatorial Ricci flow at the given radii.
/// Forward: -2 K_i r_i; normalized: -2 (K_i - K_bar) r_i; backward flips
/// the sign. Throws InvalidLengths when the induced lengths degenerate.
Eigen::VectorXd flow_rhs(const Eigen::VectorXd& radii, const FlowProblem& problem);

/// Integrates the flow with an adaptive Dormand-Prince RK5(4) scheme
/// until t_end, convergence, or a triangle-inequality singularity.
FlowTrace integrate(const FlowProblem& problem);

/// First face (in face order) whose induced lengths violate the
/// triangle-inequality tolerance, if any.
std::optional<FaceViolation> detect_singularity(const Eigen::VectorXd& radii,
                                                const FlowProblem& problem);

/// Forward to t_mid, then backward to 0; max relative radii discrepancy
/// against the initial state.
double roundtrip(const FlowProblem& problem, double t_mid);

struct ConvergenceReport {
  double fitted_rate = 0.0;  // slope of log spread over the tail half
  std::vector<double> times;
  std::vector<double> spread;                 // max_i |K_i - K_bar| per sample
  std::vector<Eigen::VectorXd> distortion;    // per-edge l(t)/l(0) per sample
  double k_max = 0.0;    // max_t max_i |K_i(t)|
  double c_metric = 0.0; // e^{2 K_max}
  double c_prime = 0.0;  // smallest envelope constant for the K-bar sign case
  bool corridor_ok = false;   // distortion within e^{+-rate*t}, rate measured
                              // from the trace (2 K_max when Euclidean
                              // unnormalized)
  bool envelope_ok = false;   // curvature envelope with fitted c_prime
};

ConvergenceReport convergence_report(const FlowTrace& trace);

}  // namespace crf
