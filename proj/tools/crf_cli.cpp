#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crf/curvature.hpp"
#include "crf/embeddability.hpp"
#include "crf/flow.hpp"
#include "crf/io.hpp"
#include "crf/packing.hpp"
#include "crf/surface.hpp"
#include "crf/wald.hpp"

namespace {

using namespace crf;

constexpr int kExitOk = 0;
constexpr int kExitSingularity = 2;
constexpr int kExitInvalidInput = 3;
constexpr int kExitNumeric = 4;

struct LoadedInput {
  TriangulatedSurface surface;
  LengthAssignment lengths;
  std::optional<CirclePacking> packing;  // present for .cps inputs
};

bool has_extension(const std::string& path, const char* ext) {
  auto dot = path.rfind('.');
  return dot != std::string::npos && path.substr(dot) == ext;
}

LoadedInput load_input(const std::string& path) {
  if (has_extension(path, ".cps")) {
    auto data = io::read_cps_file(path);
    auto surface = TriangulatedSurface::build(data.faces);
    auto lengths = lengths_from_packing(data.packing, surface);
    return {std::move(surface), std::move(lengths), std::move(data.packing)};
  }
  auto mesh = io::read_mesh_file(path);
  auto surface = TriangulatedSurface::build(mesh.faces);
  auto lengths = lengths_from_embedding(mesh.positions, surface);
  return {std::move(surface), std::move(lengths), std::nullopt};
}

// Output sink: file when a path is given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

double min_face_margin(const TriangulatedSurface& s, const Eigen::VectorXd& lengths) {
  double margin = std::numeric_limits<double>::infinity();
  for (int f = 0; f < s.face_count(); ++f) {
    const auto& face = s.faces()[f];
    double a = lengths[s.edge_index(face[0], face[1])];
    double b = lengths[s.edge_index(face[1], face[2])];
    double c = lengths[s.edge_index(face[2], face[0])];
    double mx = std::max({a, b, c});
    margin = std::min(margin, (a + b + c - 2 * mx) / mx);
  }
  return margin;
}

int cmd_curvature(const std::string& input, const std::string& output) {
  auto in = load_input(input);
  auto field = vertex_defects(in.surface, in.lengths.background,
                              face_angles(in.surface, in.lengths));
  Sink sink(output);
  auto& os = sink.out();
  os << "vertex,K\n";
  for (int v = 0; v < in.surface.vertex_count(); ++v)
    os << v << ',' << io::format_double(field.defects[v]) << '\n';
  os << "total," << io::format_double(field.total) << '\n';
  os << "average," << io::format_double(field.average) << '\n';
  os << "euler_characteristic," << in.surface.euler_characteristic() << '\n';
  return kExitOk;
}

int cmd_flow(const std::string& input, const std::string& output, bool normalized,
             bool backward, double t_end, double tol, int stride) {
  auto data = io::read_cps_file(input);

  FlowProblem problem;
  TriangulatedSurface surface = TriangulatedSurface::build(data.faces);
  problem.surface = &surface;
  problem.packing = data.packing;
  problem.direction = backward ? FlowDirection::Backward : FlowDirection::Forward;
  problem.normalized = normalized;
  problem.t_end = t_end;
  problem.opts.abs_tol = problem.opts.rel_tol = tol;
  problem.opts.stride = stride;

  auto trace = integrate(problem);

  std::string prefix = output.empty() ? "flow_out" : output;
  {
    std::ofstream csv(prefix + ".trace.csv");
    if (!csv) throw IoError("cannot open '" + prefix + ".trace.csv' for writing");
    int n = surface.vertex_count();
    csv << 't';
    for (int v = 0; v < n; ++v) csv << ",r_" << v;
    for (int v = 0; v < n; ++v) csv << ",K_" << v;
    csv << ",spread,min_face_margin\n";
    for (const auto& sample : trace.samples) {
      csv << io::format_double(sample.t);
      for (int v = 0; v < n; ++v) csv << ',' << io::format_double(sample.radii[v]);
      for (int v = 0; v < n; ++v)
        csv << ',' << io::format_double(sample.curvature.defects[v]);
      double spread =
          (sample.curvature.defects.array() - sample.curvature.average).abs().maxCoeff();
      CirclePacking p = data.packing;
      p.radii = sample.radii;
      double margin = min_face_margin(surface, lengths_from_packing(p, surface).lengths);
      csv << ',' << io::format_double(spread) << ',' << io::format_double(margin) << '\n';
    }
  }
  {
    std::ofstream cps(prefix + ".final.cps");
    if (!cps) throw IoError("cannot open '" + prefix + ".final.cps' for writing");
    CirclePacking final_packing = data.packing;
    final_packing.radii = trace.samples.back().radii;
    io::write_cps(cps, surface, final_packing);
  }
  {
    std::ofstream rep(prefix + ".report.txt");
    if (!rep) throw IoError("cannot open '" + prefix + ".report.txt' for writing");
    const char* term = "reached_t_end";
    if (trace.termination == Termination::Converged) term = "converged";
    if (trace.termination == Termination::Singularity) term = "singularity";
    if (trace.termination == Termination::StepUnderflow) term = "step_underflow";
    rep << "termination " << term << '\n';
    rep << "t_final " << io::format_double(trace.samples.back().t) << '\n';
    if (trace.singularity) {
      const auto& sing = *trace.singularity;
      const auto& f = surface.faces()[sing.violation.face];
      rep << "singular_face " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
      rep << "t_rejected " << io::format_double(sing.t_rejected) << '\n';
    }
    try {
      auto report = convergence_report(trace);
      rep << "fitted_rate " << io::format_double(report.fitted_rate) << '\n';
      rep << "k_max " << io::format_double(report.k_max) << '\n';
      rep << "c_metric " << io::format_double(report.c_metric) << '\n';
      rep << "c_prime " << io::format_double(report.c_prime) << '\n';
      rep << "corridor_ok " << (report.corridor_ok ? 1 : 0) << '\n';
      rep << "envelope_ok " << (report.envelope_ok ? 1 : 0) << '\n';
    } catch (const InsufficientSamples&) {
      rep << "fitted_rate unavailable\n";
    }
  }
  if (trace.termination == Termination::Singularity) return kExitSingularity;
  if (trace.termination == Termination::StepUnderflow) return kExitNumeric;
  return kExitOk;
}

int cmd_wald(const std::string& input, const std::string& output,
             const std::vector<double>& quadruple) {
  if (!quadruple.empty()) {
    auto q = MetricQuadruple::from_distances(
        {quadruple[0], quadruple[1], quadruple[2], quadruple[3], quadruple[4], quadruple[5]});
    auto result = embedding_curvature(q);
    Sink sink(output);
    sink.out() << io::format_double(result.kappa) << '\n';
    return kExitOk;
  }
  auto in = load_input(input);
  Sink sink(output);
  auto& os = sink.out();
  os << "vertex,wald_kappa\n";
  for (int v = 0; v < in.surface.vertex_count(); ++v)
    os << v << ','
       << io::format_double(vertex_wald_curvature(in.surface, in.lengths, v)) << '\n';
  return kExitOk;
}

int cmd_embed_check(const std::string& input, const std::string& output, double kappa) {
  auto in = load_input(input);
  auto reports = check_surface(in.surface, in.lengths, kappa);
  Sink sink(output);
  auto& os = sink.out();
  os << "vertex,a0,a0_ok,angle_triangle_ok,vk_ok,embeddable,witness\n";
  for (const auto& rep : reports) {
    os << rep.vertex << ',' << io::format_double(rep.a0) << ',' << (rep.a0_ok ? 1 : 0)
       << ',' << (rep.angle_triangle_ok ? 1 : 0) << ',' << (rep.vk_ok ? 1 : 0) << ','
       << (rep.embeddable ? 1 : 0) << ',';
    const auto* witness = rep.a0_witness   ? &*rep.a0_witness
                          : rep.angle_triangle_witness ? &*rep.angle_triangle_witness
                          : rep.vk_witness ? &*rep.vk_witness
                                           : nullptr;
    if (witness)
      os << witness->neighbors[0] << ' ' << witness->neighbors[1] << ' '
         << witness->neighbors[2];
    os << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial Ricci flow and metric-curvature toolkit"};
  app.require_subcommand(1);

  std::string input, output;
  bool normalized = false, backward = false;
  double t_end = 1.0, tol = 1e-9, kappa = 0.0;
  int stride = 1;
  std::vector<double> quadruple;

  auto* curvature = app.add_subcommand("curvature", "Per-vertex angular defects");
  curvature->add_option("--input", input, "Mesh (.off/.obj) or packing (.cps)")->required();
  curvature->add_option("--output", output, "CSV path (stdout when omitted)");

  auto* flow = app.add_subcommand("flow", "Integrate the combinatorial Ricci flow");
  flow->add_option("--input", input, "Packing file (.cps)")->required();
  flow->add_option("--output", output, "Output prefix (default flow_out)");
  flow->add_flag("--normalized", normalized, "Flow toward constant curvature");
  flow->add_flag("--backward", backward, "Reverse the flow direction");
  flow->add_option("--t-end", t_end, "Integration horizon")->check(CLI::PositiveNumber);
  flow->add_option("--tol", tol, "Step error tolerance")->check(CLI::PositiveNumber);
  flow->add_option("--stride", stride, "Record every n-th step")->check(CLI::PositiveNumber);

  auto* wald = app.add_subcommand("wald", "Wald curvature per vertex, or of one quadruple");
  auto* wald_input = wald->add_option("--input", input, "Mesh or packing file");
  auto* wald_quad = wald
                        ->add_option("--quadruple", quadruple,
                                     "Six distances d12 d13 d14 d23 d24 d34")
                        ->expected(6);
  wald->add_option("--output", output, "Output path (stdout when omitted)");
  wald_input->excludes(wald_quad);

  auto* embed = app.add_subcommand("embed-check", "Local embeddability per vertex");
  embed->add_option("--input", input, "Mesh (.off/.obj) or packing (.cps)")->required();
  embed->add_option("--output", output, "CSV path (stdout when omitted)");
  embed->add_option("--kappa", kappa, "Ambient model curvature for the V_kappa test");

  CLI11_PARSE(app, argc, argv);

  try {
    if (curvature->parsed()) return cmd_curvature(input, output);
    if (flow->parsed()) return cmd_flow(input, output, normalized, backward, t_end, tol, stride);
    if (wald->parsed()) {
      if (input.empty() && quadruple.empty()) {
        std::cerr << "error: wald needs --input or --quadruple\n";
        return kExitInvalidInput;
      }
      return cmd_wald(input, output, quadruple);
    }
    if (embed->parsed()) return cmd_embed_check(input, output, kappa);
  } catch (const NumericalDomain& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NoAdmissibleRoot& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const AmbiguousRoot& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const SphericalDomain& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const StepUnderflow& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InsufficientSamples& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    // Parse errors, IO errors, invalid meshes/lengths/packings.
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
