// Acceptance gate: runs every top-level criterion and prints one
// pass/fail line each. Optional arguments enable the CLI determinism
// check: acceptance [cli-binary] [data-dir] [work-dir].

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crf/curvature.hpp"
#include "crf/embeddability.hpp"
#include "crf/flow.hpp"
#include "crf/io.hpp"
#include "crf/shapes.hpp"
#include "crf/wald.hpp"

using namespace crf;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%2d] %-34s %s%s%s\n", index, name.c_str(), pass ? "PASS" : "FAIL",
              detail.empty() ? "" : "  ", detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// Traces keep a pointer to their surface, and criterion 5 re-reads the
// traces of criteria 2-4, so those surfaces must outlive their criterion.
const TriangulatedSurface& tetra_surface() {
  static auto s = TriangulatedSurface::build(shapes::tetrahedron().faces);
  return s;
}

const TriangulatedSurface& genus2_surface() {
  static auto s = shapes::genus2();
  return s;
}

FlowProblem tetra_problem(const TriangulatedSurface& s) {
  FlowProblem p;
  p.surface = &s;
  p.packing.radii = Eigen::VectorXd::Ones(s.vertex_count());
  p.packing.phi = Eigen::VectorXd::Constant(s.edge_count(), M_PI / 4);
  p.packing.background = Background::Euclidean;
  return p;
}

Eigen::VectorXd jitter(int n, unsigned seed, double amount = 0.1) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(1.0 - amount, 1.0 + amount);
  return Eigen::VectorXd::NullaryExpr(n, [&](int) { return d(rng); });
}

double spread_of(const CurvatureField& c) {
  return (c.defects.array() - c.average).abs().maxCoeff();
}

// Terminations of every valid-mesh flow run, for criterion 10.
std::vector<Termination> valid_run_terminations;

// Traces from criteria 2-4, for criterion 5.
std::vector<FlowTrace> kept_traces;

// ---------------------------------------------------------------- 1
void c1_gauss_bonnet() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> len(0.9, 1.1);
  std::vector<TriangulatedSurface> surfaces;
  surfaces.push_back(TriangulatedSurface::build(shapes::tetrahedron().faces));
  surfaces.push_back(TriangulatedSurface::build(shapes::icosahedron().faces));
  surfaces.push_back(shapes::torus_3x3());
  surfaces.push_back(shapes::genus2());
  double worst = 0.0;
  for (const auto& s : surfaces)
    for (int trial = 0; trial < 5; ++trial) {
      LengthAssignment l;
      l.background = Background::Euclidean;
      l.lengths = Eigen::VectorXd::NullaryExpr(s.edge_count(), [&](int) { return len(rng); });
      auto f = vertex_defects(s, Background::Euclidean, face_angles(s, l));
      worst = std::max(worst, std::abs(f.total - 2 * M_PI * s.euler_characteristic()));
    }
  double dt = seconds_since(t0);
  report(1, "gauss-bonnet exactness", worst < 1e-9 && dt < 1.0,
         "max |total - 2 pi chi| = " + fmt(worst) + ", " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- 2
void c2_closed_form_flow() {
  auto t0 = std::chrono::steady_clock::now();
  const auto& s = tetra_surface();
  double worst = 0.0;
  for (double t_end : {0.05, 0.1, 0.2}) {
    auto p = tetra_problem(s);
    p.t_end = t_end;
    auto trace = integrate(p);
    valid_run_terminations.push_back(trace.termination);
    double expected = std::exp(-2 * M_PI * t_end);
    worst = std::max(
        worst, ((trace.samples.back().radii.array() - expected) / expected).abs().maxCoeff());
    if (t_end == 0.2) kept_traces.push_back(trace);
  }
  double dt = seconds_since(t0);
  report(2, "closed-form flow", worst < 1e-6 && dt < 1.0,
         "max rel error = " + fmt(worst) + ", " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- 3
void c3_convergence_positive() {
  auto t0 = std::chrono::steady_clock::now();
  const auto& s = tetra_surface();
  bool all = true;
  double worst_spread = 0.0, worst_rate = -1e30;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto p = tetra_problem(s);
    p.normalized = true;
    p.packing.radii = jitter(4, seed);
    p.t_end = 50.0;
    auto trace = integrate(p);
    valid_run_terminations.push_back(trace.termination);
    double final_spread = spread_of(trace.samples.back().curvature);
    double rate = convergence_report(trace).fitted_rate;
    worst_spread = std::max(worst_spread, final_spread);
    worst_rate = std::max(worst_rate, rate);
    all = all && trace.termination == Termination::Converged && final_spread < 1e-8 &&
          rate < -0.1;
    if (seed == 1) kept_traces.push_back(trace);
  }
  double dt = seconds_since(t0);
  report(3, "convergence, positive curvature", all && dt < 30.0,
         "worst spread = " + fmt(worst_spread) + ", worst rate = " + fmt(worst_rate) + ", " +
             fmt(dt) + " s");
}

// ---------------------------------------------------------------- 4
void c4_convergence_negative() {
  auto t0 = std::chrono::steady_clock::now();
  const auto& s = genus2_surface();
  FlowProblem p;
  p.surface = &s;
  p.packing.background = Background::Hyperbolic;
  p.packing.radii = 0.8 * jitter(s.vertex_count(), 77);
  p.packing.phi = Eigen::VectorXd::Constant(s.edge_count(), M_PI / 3);
  p.normalized = true;
  p.t_end = 50.0;
  auto trace = integrate(p);
  valid_run_terminations.push_back(trace.termination);
  auto rep = convergence_report(trace);
  bool pass = trace.termination == Termination::Converged && rep.fitted_rate < 0.0 &&
              rep.envelope_ok;
  double dt = seconds_since(t0);
  report(4, "convergence, negative curvature", pass && dt < 60.0,
         "rate = " + fmt(rep.fitted_rate) +
             ", K-bar = " + fmt(trace.samples.back().curvature.average) + ", " + fmt(dt) + " s");
  kept_traces.push_back(std::move(trace));
}

// ---------------------------------------------------------------- 5
void c5_corridor() {
  bool all = !kept_traces.empty();
  for (const auto& trace : kept_traces)
    all = all && convergence_report(trace).corridor_ok;
  report(5, "metric-distortion corridor", all,
         fmt((double)kept_traces.size()) + " traces checked");
}

// ---------------------------------------------------------------- 6
void c6_roundtrip() {
  auto s = TriangulatedSurface::build(shapes::tetrahedron().faces);
  double worst = 0.0;
  for (double t_mid : {0.1, 0.5}) {
    auto uniform = tetra_problem(s);
    worst = std::max(worst, roundtrip(uniform, t_mid));
    auto perturbed = tetra_problem(s);
    perturbed.normalized = true;
    perturbed.packing.radii = jitter(4, 5);
    worst = std::max(worst, roundtrip(perturbed, t_mid));
  }
  valid_run_terminations.push_back(Termination::ReachedTEnd);  // roundtrip throws otherwise
  report(6, "backward round trip", worst < 1e-6, "max rel discrepancy = " + fmt(worst));
}

// ---------------------------------------------------------------- 7
// Three spread-out model points plus a fourth interior to their triangle:
// for such quadruples the smallest-|kappa| embedding curvature root is the
// model curvature, so they act as a recovery oracle.
MetricQuadruple sample_model_quadruple(std::mt19937& rng, double kappa) {
  std::uniform_real_distribution<double> weight(0.35, 1.0);
  if (kappa > 0) {
    double radius = 1.0 / std::sqrt(kappa);
    std::normal_distribution<double> gauss;
    while (true) {
      std::array<Eigen::Vector3d, 4> pts;
      for (int i = 0; i < 3; ++i)
        pts[i] = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng)).normalized();
      pts[3] = (weight(rng) * pts[0] + weight(rng) * pts[1] + weight(rng) * pts[2]).normalized();
      Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
      double min_spoke = 1e30, min_outer = 1e30, max_d = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
          d(i, j) = d(j, i) = radius * std::acos(std::clamp(pts[i].dot(pts[j]), -1.0, 1.0));
          (j == 3 ? min_spoke : min_outer) = std::min(j == 3 ? min_spoke : min_outer, d(i, j));
          max_d = std::max(max_d, d(i, j));
        }
      if (min_spoke < 0.35 * radius || min_outer < 0.6 * radius || max_d > 1.9 * radius)
        continue;
      return MetricQuadruple::from_matrix(d);
    }
  }
  double radius = 1.0 / std::sqrt(-kappa);
  std::uniform_real_distribution<double> rho_d(0.5, 1.4), theta_d(0.0, 2 * M_PI);
  while (true) {
    std::array<Eigen::Vector3d, 4> pts;  // (t, x, y) on the unit hyperboloid
    for (int i = 0; i < 3; ++i) {
      double rho = rho_d(rng), theta = theta_d(rng);
      pts[i] = {std::cosh(rho), std::sinh(rho) * std::cos(theta), std::sinh(rho) * std::sin(theta)};
    }
    Eigen::Vector3d mix = weight(rng) * pts[0] + weight(rng) * pts[1] + weight(rng) * pts[2];
    pts[3] = mix / std::sqrt(mix[0] * mix[0] - mix[1] * mix[1] - mix[2] * mix[2]);
    Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
    double min_spoke = 1e30, min_outer = 1e30;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        double m = pts[i][0] * pts[j][0] - pts[i][1] * pts[j][1] - pts[i][2] * pts[j][2];
        d(i, j) = d(j, i) = radius * std::acosh(std::max(1.0, m));
        (j == 3 ? min_spoke : min_outer) = std::min(j == 3 ? min_spoke : min_outer, d(i, j));
      }
    if (min_spoke < 0.35 * radius || min_outer < 0.6 * radius) continue;
    return MetricQuadruple::from_matrix(d);
  }
}

MetricQuadruple sample_planar_quadruple(std::mt19937& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  while (true) {
    std::array<Eigen::Vector2d, 4> pts;
    for (auto& pt : pts) pt = {coord(rng), coord(rng)};
    Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
    double min_d = 1e30;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        d(i, j) = d(j, i) = (pts[i] - pts[j]).norm();
        min_d = std::min(min_d, d(i, j));
      }
    if (min_d < 0.2) continue;
    return MetricQuadruple::from_matrix(d);
  }
}

void c7_wald_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(707);
  double worst = 0.0;
  bool ok = true;
  for (double kappa : {-1.0, -0.25, 0.25, 1.0})
    for (int trial = 0; trial < 50; ++trial) {
      auto q = sample_model_quadruple(rng, kappa);
      auto res = embedding_curvature(q);
      worst = std::max(worst, std::abs(res.kappa - kappa));
      ok = ok && std::abs(res.kappa - kappa) < 1e-5;
    }
  bool flat_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    auto res = embedding_curvature(sample_planar_quadruple(rng));
    flat_ok = flat_ok && res.branch == CurvatureBranch::Flat && res.kappa == 0.0;
  }
  double dt = seconds_since(t0);
  report(7, "wald oracle recovery", ok && flat_ok && dt < 30.0,
         "max |kappa error| = " + fmt(worst) + ", " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- 8
void c8_region_equivalence() {
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  bool ok = true;
  const std::vector<double> grid = {-4.0, -1.0, -0.25, 0.0, 0.25, 1.0, 4.0};
  for (int trial = 0; trial < 100 && ok; ++trial) {
    std::array<Eigen::Vector3d, 4> pts;
    for (auto& pt : pts) pt = {coord(rng), coord(rng), coord(rng)};
    Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
    double min_d = 1e30;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        d(i, j) = d(j, i) = (pts[i] - pts[j]).norm();
        min_d = std::min(min_d, d(i, j));
      }
    if (min_d < 0.3) {
      --trial;
      continue;
    }
    auto q = MetricQuadruple::from_matrix(d);
    for (double kappa : grid) {
      // Direct evaluation: every apex angle sum at most 2 pi, with a
      // too-small model sphere counting as failure.
      bool direct = true;
      for (int apex = 0; apex < 4 && direct; ++apex) {
        try {
          direct = v_kappa(q, apex, kappa) <= 2 * M_PI + 1e-9;
        } catch (const SphericalDomain&) {
          direct = false;
        }
      }
      ok = ok && region_curvature_at_least({q}, kappa).at_least == direct;
    }
    // v_kappa monotone in kappa wherever defined.
    for (int apex = 0; apex < 4 && ok; ++apex) {
      double prev = -1e30;
      for (double kappa : grid) {
        double v;
        try {
          v = v_kappa(q, apex, kappa);
        } catch (const SphericalDomain&) {
          break;
        }
        ok = ok && v >= prev - 1e-9;
        prev = v;
      }
    }
  }
  report(8, "angle-sum region equivalence", ok, "100 quadruples x 7 kappa values");
}

// ---------------------------------------------------------------- 9
void c9_curvature_measure() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<double> errors;
  for (int frequency : {2, 4, 8, 16}) {
    auto mesh = shapes::geodesic_sphere(frequency);
    auto s = TriangulatedSurface::build(mesh.faces);
    auto l = lengths_from_embedding(mesh.positions, s);
    auto angles = face_angles(s, l);
    auto field = vertex_defects(s, Background::Euclidean, angles);
    Eigen::VectorXd area = Eigen::VectorXd::Zero(s.vertex_count());
    for (int fi = 0; fi < s.face_count(); ++fi) {
      const auto& f = s.faces()[fi];
      double a = l.lengths[s.edge_index(f[0], f[1])];
      double b = l.lengths[s.edge_index(f[1], f[2])];
      double c = l.lengths[s.edge_index(f[2], f[0])];
      double sp = 0.5 * (a + b + c);
      double heron = std::sqrt(sp * (sp - a) * (sp - b) * (sp - c));
      for (int v : f) area[v] += heron / 3.0;
    }
    // Mean relative deviation of defect / (third of adjacent area) from
    // the unit-sphere curvature 1.
    double err = (field.defects.array() / area.array() - 1.0).abs().mean();
    errors.push_back(err);
  }
  bool monotone = true;
  for (size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] < errors[i - 1];
  double dt = seconds_since(t0);
  report(9, "curvature-measure convergence", monotone && errors.back() < 0.05 && dt < 60.0,
         "errors " + fmt(errors[0]) + " -> " + fmt(errors[1]) + " -> " + fmt(errors[2]) +
             " -> " + fmt(errors[3]) + ", " + fmt(dt) + " s");
}

// ---------------------------------------------------------------- 10
void c10_singularity(const std::string& data_dir) {
  bool stored_ok = false;
  std::string detail;
  try {
    auto data = io::read_cps_file(data_dir + "/singular.cps");
    auto s = TriangulatedSurface::build(data.faces);
    FlowProblem p;
    p.surface = &s;
    p.packing = data.packing;
    p.direction = FlowDirection::Backward;
    p.t_end = 50.0;
    auto trace = integrate(p);
    if (trace.termination == Termination::Singularity && trace.singularity) {
      auto face = s.faces()[trace.singularity->violation.face];
      std::sort(face.begin(), face.end());
      stored_ok = face == std::array<int, 3>{0, 1, 2};
      detail = "face {" + std::to_string(face[0]) + "," + std::to_string(face[1]) + "," +
               std::to_string(face[2]) + "}";
    } else {
      detail = "no singularity reported";
    }
  } catch (const Error& e) {
    detail = e.what();
  }
  bool none_spurious = true;
  for (auto term : valid_run_terminations)
    none_spurious = none_spurious && term != Termination::Singularity;
  report(10, "singularity detection", stored_ok && none_spurious,
         detail + "; " + fmt((double)valid_run_terminations.size()) + " valid runs clean");
}

// ---------------------------------------------------------------- 11
void c11_embeddability() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;

  auto hexagon = shapes::flat_hexagon_pyramid();
  auto hs = TriangulatedSurface::build(hexagon.faces);
  auto hrep = check_vertex(hs, lengths_from_embedding(hexagon.positions, hs), 0);
  ok = ok && hrep.embeddable && std::abs(hrep.a0 - 2 * M_PI) < 1e-9;

  auto ss = shapes::saddle_7();
  auto srep = check_vertex(ss, shapes::saddle_lengths(ss), 0);
  ok = ok && !srep.embeddable && srep.a0_witness.has_value();

  for (const auto& mesh : {shapes::tetrahedron(), shapes::icosahedron()}) {
    auto s = TriangulatedSurface::build(mesh.faces);
    LengthAssignment l;
    l.background = Background::Euclidean;
    l.lengths = Eigen::VectorXd::Ones(s.edge_count());
    for (const auto& rep : check_surface(s, l)) ok = ok && rep.embeddable;
  }
  double dt = seconds_since(t0);
  report(11, "embeddability criterion", ok && dt < 1.0, fmt(dt) + " s");
}

// ---------------------------------------------------------------- 12
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void c12_cli_determinism(const std::string& cli, const std::string& data_dir,
                         const std::string& work_dir) {
  if (cli.empty()) {
    report(12, "cli determinism", false, "cli binary path not provided");
    return;
  }
  struct Run {
    std::string name;
    std::string args;
    std::vector<std::string> outputs;
  };
  std::vector<Run> runs = {
      {"curvature", "curvature --input " + data_dir + "/tetrahedron.off --output " + work_dir +
                        "/curv#.csv",
       {"/curv#.csv"}},
      {"flow", "flow --input " + data_dir + "/tetra_perturbed.cps --normalized --t-end 5 "
                   "--output " + work_dir + "/flow#",
       {"/flow#.trace.csv", "/flow#.final.cps", "/flow#.report.txt"}},
      {"wald", "wald --input " + data_dir + "/flat_hexagon.cps --output " + work_dir +
                   "/wald#.csv",
       {"/wald#.csv"}},
      {"embed-check", "embed-check --input " + data_dir + "/icosahedron.off --output " +
                          work_dir + "/embed#.csv",
       {"/embed#.csv"}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& run : runs) {
    bool same = true;
    for (int attempt = 1; attempt <= 2; ++attempt) {
      std::string args = run.args;
      for (size_t pos; (pos = args.find('#')) != std::string::npos;)
        args.replace(pos, 1, std::to_string(attempt));
      int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
      if (rc != 0) same = false;
    }
    for (const auto& out : run.outputs) {
      std::string p1 = work_dir + out, p2 = work_dir + out;
      p1.replace(p1.find('#'), 1, "1");
      p2.replace(p2.find('#'), 1, "2");
      std::string b1 = slurp(p1), b2 = slurp(p2);
      same = same && !b1.empty() && b1 == b2;
    }
    if (!same) detail += run.name + " differs; ";
    ok = ok && same;
  }
  report(12, "cli determinism", ok, ok ? "4 verbs, byte-identical reruns" : detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  std::string data_dir = argc > 2 ? argv[2] : "data";
  std::string work_dir = argc > 3 ? argv[3] : ".";
  if (!work_dir.empty()) std::filesystem::create_directories(work_dir);

  c1_gauss_bonnet();
  c2_closed_form_flow();
  c3_convergence_positive();
  c4_convergence_negative();
  c5_corridor();
  c6_roundtrip();
  c7_wald_oracle();
  c8_region_equivalence();
  c9_curvature_measure();
  c10_singularity(data_dir);
  c11_embeddability();
  c12_cli_determinism(cli, data_dir, work_dir);

  if (failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", failures);
  return 1;
}
