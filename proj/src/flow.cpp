#include "crf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crf {

namespace {

struct FlowState {
  LengthAssignment lengths;
  Eigen::MatrixX3d angles;
  CurvatureField curvature;
};

FlowState evaluate_state(const Eigen::VectorXd& radii, const FlowProblem& p) {
  for (int i = 0; i < radii.size(); ++i)
    if (!(radii[i] > 0.0)) throw InvalidLengths("non-positive radius during flow");
  CirclePacking packing = p.packing;
  packing.radii = radii;
  FlowState st;
  st.lengths = lengths_from_packing(packing, *p.surface);
  if (!validate_lengths(*p.surface, st.lengths, p.opts.triangle_eps).empty())
    throw InvalidLengths("triangle inequality broken during flow");
  st.angles = face_angles(*p.surface, st.lengths);
  st.curvature = vertex_defects(*p.surface, p.packing.background, st.angles);
  return st;
}

double face_area(const FlowState& st, const TriangulatedSurface& s, int fi,
                 Background bg) {
  if (bg == Background::Hyperbolic) return hyperbolic_face_area(st.angles, fi);
  const auto& f = s.faces()[fi];
  double a = st.lengths.lengths[s.edge_index(f[0], f[1])];
  double b = st.lengths.lengths[s.edge_index(f[1], f[2])];
  double c = st.lengths.lengths[s.edge_index(f[2], f[0])];
  double sp = 0.5 * (a + b + c);
  return std::sqrt(std::max(0.0, sp * (sp - a) * (sp - b) * (sp - c)));
}

double mean_curvature(const FlowState& st, const FlowProblem& p) {
  if (!p.area_weighted_average) return st.curvature.average;
  const auto& s = *p.surface;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(s.vertex_count());
  for (int fi = 0; fi < s.face_count(); ++fi) {
    double third = face_area(st, s, fi, p.packing.background) / 3.0;
    for (int v : s.faces()[fi]) w[v] += third;
  }
  return w.dot(st.curvature.defects) / w.sum();
}

Eigen::VectorXd rhs_from_state(const Eigen::VectorXd& radii, const FlowState& st,
                               const FlowProblem& p) {
  Eigen::VectorXd dot(radii.size());
  double k_bar = p.normalized ? mean_curvature(st, p) : 0.0;
  for (int i = 0; i < radii.size(); ++i)
    dot[i] = -2.0 * (st.curvature.defects[i] - k_bar) * radii[i];
  if (p.direction == FlowDirection::Backward) dot = -dot;
  return dot;
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

}  // namespace

Eigen::VectorXd flow_rhs(const Eigen::VectorXd& radii, const FlowProblem& problem) {
  FlowState st = evaluate_state(radii, problem);
  return rhs_from_state(radii, st, problem);
}

std::optional<FaceViolation> detect_singularity(const Eigen::VectorXd& radii,
                                                const FlowProblem& problem) {
  CirclePacking packing = problem.packing;
  packing.radii = radii;
  LengthAssignment l = lengths_from_packing(packing, *problem.surface);
  auto violations = validate_lengths(*problem.surface, l, problem.opts.triangle_eps);
  if (violations.empty()) return std::nullopt;
  return violations.front();
}

FlowTrace integrate(const FlowProblem& problem) {
  const auto& opts = problem.opts;
  FlowTrace trace;
  trace.surface = problem.surface;
  trace.packing0 = problem.packing;
  trace.normalized = problem.normalized;

  Eigen::VectorXd y = problem.packing.radii;
  FlowState st;
  try {
    st = evaluate_state(y, problem);
  } catch (const Error& e) {
    throw InitialStateInvalid(std::string("initial packing invalid: ") + e.what());
  }
  double t = 0.0;
  trace.samples.push_back({t, y, st.curvature});

  auto spread_of = [](const CurvatureField& c) {
    return (c.defects.array() - c.average).abs().maxCoeff();
  };

  bool fixed = opts.fixed_step > 0.0;
  double h = std::min(fixed ? opts.fixed_step : opts.h_init, problem.t_end);
  int conv_run = 0;
  long accepted = 0;
  Eigen::VectorXd k1 = rhs_from_state(y, st, problem);

  while (t < problem.t_end) {
    h = std::min(h, problem.t_end - t);
    Eigen::VectorXd k2, k3, k4, k5, k6, k7, y5;
    Eigen::VectorXd bad_state;
    bool stage_ok = true;
    try {
      k2 = flow_rhs(bad_state = y + h * (A21 * k1), problem);
      k3 = flow_rhs(bad_state = y + h * (A31 * k1 + A32 * k2), problem);
      k4 = flow_rhs(bad_state = y + h * (A41 * k1 + A42 * k2 + A43 * k3), problem);
      k5 = flow_rhs(bad_state = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), problem);
      k6 = flow_rhs(bad_state = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
                    problem);
      y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
      k7 = flow_rhs(bad_state = y5, problem);
    } catch (const InvalidLengths&) {
      stage_ok = false;
    }

    if (!stage_ok) {
      h *= 0.5;
      if (h < opts.h_min) {
        auto violation = detect_singularity(bad_state, problem);
        if (violation) {
          trace.termination = Termination::Singularity;
          trace.singularity = SingularityInfo{*violation, bad_state, t + h};
        } else {
          trace.termination = Termination::StepUnderflow;
        }
        return trace;
      }
      continue;
    }

    Eigen::VectorXd err_vec =
        h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    double err = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      double r = err_vec[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / y.size());

    if (fixed || err <= 1.0) {
      t += h;
      y = y5;
      st = evaluate_state(y, problem);
      k1 = k7;  // FSAL
      ++accepted;
      if (accepted % opts.stride == 0) trace.samples.push_back({t, y, st.curvature});

      // The unnormalized flow never stalls at uniform curvature (the radii
      // keep scaling), so only the normalized flow can converge.
      if (problem.normalized && spread_of(st.curvature) < opts.conv_tol) {
        if (++conv_run >= opts.conv_steps) {
          if (trace.samples.back().t != t) trace.samples.push_back({t, y, st.curvature});
          trace.termination = Termination::Converged;
          return trace;
        }
      } else {
        conv_run = 0;
      }
    }

    if (!fixed) {
      double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
      if (h < opts.h_min) {
        trace.termination = Termination::StepUnderflow;
        return trace;
      }
    } else {
      h = opts.fixed_step;
    }
  }

  if (trace.samples.back().t != t) trace.samples.push_back({t, y, st.curvature});
  trace.termination = Termination::ReachedTEnd;
  return trace;
}

double roundtrip(const FlowProblem& problem, double t_mid) {
  if (t_mid == 0.0) return 0.0;
  FlowProblem fwd = problem;
  fwd.t_end = t_mid;
  fwd.opts.conv_tol = 0.0;  // run the full interval
  FlowTrace out = integrate(fwd);
  if (out.termination != Termination::ReachedTEnd)
    throw InvalidLengths("forward leg of the round trip did not reach t_mid");

  FlowProblem back = fwd;
  back.packing.radii = out.samples.back().radii;
  back.direction = problem.direction == FlowDirection::Forward ? FlowDirection::Backward
                                                               : FlowDirection::Forward;
  FlowTrace ret = integrate(back);
  if (ret.termination != Termination::ReachedTEnd)
    throw InvalidLengths("backward leg of the round trip did not reach t_mid");

  const Eigen::VectorXd& r0 = problem.packing.radii;
  const Eigen::VectorXd& r1 = ret.samples.back().radii;
  return ((r1 - r0).array() / r0.array()).abs().maxCoeff();
}

ConvergenceReport convergence_report(const FlowTrace& trace) {
  std::vector<const FlowSample*> valid;
  for (const auto& s : trace.samples) valid.push_back(&s);
  if (trace.termination == Termination::Singularity && !valid.empty()) {
    // Final sample may sit at the degenerate state; keep valid ones only.
    CirclePacking p = trace.packing0;
    p.radii = valid.back()->radii;
    LengthAssignment l = lengths_from_packing(p, *trace.surface);
    if (!validate_lengths(*trace.surface, l).empty()) valid.pop_back();
  }
  if (valid.size() < 10)
    throw InsufficientSamples("convergence report needs at least 10 valid samples");

  ConvergenceReport rep;
  int n = (int)valid.size();
  rep.times.resize(n);
  rep.spread.resize(n);
  rep.distortion.resize(n);

  Eigen::VectorXd l0;
  double rate_max = 0.0;   // max_i |dr_i/dt| / r_i over the trace
  double sens_max = 1.0;   // max log-sensitivity of a length to its radii
  const auto& edges = trace.surface->edges();
  for (int i = 0; i < n; ++i) {
    const FlowSample& s = *valid[i];
    rep.times[i] = s.t;
    rep.spread[i] = (s.curvature.defects.array() - s.curvature.average).abs().maxCoeff();
    rep.k_max = std::max(rep.k_max, s.curvature.defects.array().abs().maxCoeff());
    double shift = trace.normalized ? s.curvature.average : 0.0;
    rate_max = std::max(rate_max,
                        2.0 * (s.curvature.defects.array() - shift).abs().maxCoeff());
    CirclePacking p = trace.packing0;
    p.radii = s.radii;
    Eigen::VectorXd l = lengths_from_packing(p, *trace.surface).lengths;
    if (i == 0) l0 = l;
    rep.distortion[i] = l.array() / l0.array();
    if (trace.packing0.background == Background::Hyperbolic) {
      // d log l / d log r_i from cosh l = cosh r_i cosh r_j
      // + sinh r_i sinh r_j cos phi; the two sensitivities sum to
      // exactly 1 in the Euclidean background but exceed 1 here.
      for (int e = 0; e < (int)edges.size(); ++e) {
        double ri = s.radii[edges[e][0]], rj = s.radii[edges[e][1]];
        double c = std::cos(trace.packing0.phi[e]);
        double denom = l[e] * std::sinh(l[e]);
        double si = ri * (std::sinh(ri) * std::cosh(rj) + std::cosh(ri) * std::sinh(rj) * c);
        double sj = rj * (std::cosh(ri) * std::sinh(rj) + std::sinh(ri) * std::cosh(rj) * c);
        sens_max = std::max(sens_max, (si + sj) / denom);
      }
    }
  }
  rep.c_metric = std::exp(2.0 * rep.k_max);

  // Log-linear fit of the spread over the tail half.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = n / 2; i < n; ++i) {
      if (!(rep.spread[i] > 0.0)) continue;
      double x = rep.times[i], yv = std::log(rep.spread[i]);
      sx += x;
      sy += yv;
      sxx += x * x;
      sxy += x * yv;
      ++m;
    }
    double den = m * sxx - sx * sx;
    rep.fitted_rate = (m >= 2 && den != 0.0) ? (m * sxy - sx * sy) / den : 0.0;
  }

  // Metric distortion corridor. |d log l / dt| is a nonnegative
  // combination (weights summing to the sensitivity, 1 when Euclidean) of
  // the per-endpoint rates |dr/dt|/r, so l(t)/l(0) stays inside
  // e^{+-rate_max*sens_max*t}. For the unnormalized Euclidean flow this is
  // e^{+-2 K_max t}, attained with equality on the uniform-curvature ray,
  // hence the relative slack.
  double corridor_rate = rate_max * sens_max;
  rep.corridor_ok = true;
  for (int i = 0; i < n && rep.corridor_ok; ++i) {
    double up = std::exp(corridor_rate * rep.times[i]) * (1.0 + 1e-7);
    double dn = std::exp(-corridor_rate * rep.times[i]) * (1.0 - 1e-7);
    if ((rep.distortion[i].array() > up).any() || (rep.distortion[i].array() < dn).any())
      rep.corridor_ok = false;
  }

  // Smallest envelope constant for the sign case of the limiting K-bar.
  double k_bar = valid.back()->curvature.average;
  double c_prime = 0.0;
  bool feasible = true;
  if (std::abs(k_bar) < 1e-9) {
    for (int i = 0; i < n; ++i) {
      const auto& d = valid[i]->curvature.defects;
      c_prime = std::max(c_prime, d.maxCoeff());
      double m_t = -d.minCoeff();
      if (m_t > 0.0) {
        if (m_t * rep.times[i] >= 1.0) {
          feasible = false;
        } else {
          c_prime = std::max(c_prime, m_t / (1.0 - m_t * rep.times[i]));
        }
      }
    }
  } else {
    // |K_i - K_bar| <= C' e^{K_bar t} (exponential cases of the rate bound).
    for (int i = 0; i < n; ++i) {
      const auto& d = valid[i]->curvature.defects;
      double dev = (d.array() - k_bar).abs().maxCoeff();
      c_prime = std::max(c_prime, dev * std::exp(-k_bar * rep.times[i]));
    }
  }
  rep.c_prime = c_prime;
  rep.envelope_ok = feasible && std::isfinite(c_prime);
  return rep;
}

}  // namespace crf
