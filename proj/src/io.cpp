#include "crf/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace crf {
namespace io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

// Next non-empty, non-comment line ('#' comments; OFF also uses them).
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

shapes::EmbeddedMesh read_off(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("empty OFF stream");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw ParseError("missing OFF header");

  long v = 0, f = 0, e = 0;
  if (!(header >> v >> f >> e)) {
    if (!next_line(in, line)) throw ParseError("truncated OFF counts");
    std::istringstream counts(line);
    if (!(counts >> v >> f >> e)) throw ParseError("bad OFF counts");
  }

  shapes::EmbeddedMesh mesh;
  mesh.positions.reserve(v);
  for (long i = 0; i < v; ++i) {
    if (!next_line(in, line)) throw ParseError("truncated OFF vertex list");
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) throw ParseError("bad OFF vertex line");
    mesh.positions.push_back({x, y, z});
  }
  for (long i = 0; i < f; ++i) {
    if (!next_line(in, line)) throw ParseError("truncated OFF face list");
    std::istringstream ls(line);
    int n, a, b, c;
    if (!(ls >> n)) throw ParseError("bad OFF face line");
    if (n != 3) throw ParseError("only triangular faces are supported");
    if (!(ls >> a >> b >> c)) throw ParseError("bad OFF face line");
    if (a < 0 || b < 0 || c < 0 || a >= v || b >= v || c >= v)
      throw ParseError("OFF face vertex index out of range");
    mesh.faces.push_back({a, b, c});
  }
  return mesh;
}

shapes::EmbeddedMesh read_obj(std::istream& in) {
  shapes::EmbeddedMesh mesh;
  std::string line;
  while (next_line(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw ParseError("bad OBJ vertex line");
      mesh.positions.push_back({x, y, z});
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        // "i", "i/t", "i/t/n" forms; only the vertex index matters.
        idx.push_back(std::stoi(tok.substr(0, tok.find('/'))));
      }
      if (idx.size() != 3) throw ParseError("only triangular faces are supported");
      mesh.faces.push_back({idx[0] - 1, idx[1] - 1, idx[2] - 1});
    }
  }
  int v = static_cast<int>(mesh.positions.size());
  for (const auto& f : mesh.faces)
    for (int i : f)
      if (i < 0 || i >= v) throw ParseError("OBJ face vertex index out of range");
  return mesh;
}

void write_off(std::ostream& out, const shapes::EmbeddedMesh& mesh) {
  out << "OFF\n" << mesh.positions.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const auto& p : mesh.positions)
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_obj(std::ostream& out, const shapes::EmbeddedMesh& mesh) {
  for (const auto& p : mesh.positions)
    out << "v " << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << '\n';
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

CpsData read_cps(std::istream& in) {
  std::string line, word;
  auto expect_line = [&](const char* what) {
    if (!next_line(in, line)) throw ParseError(std::string("truncated cps file at ") + what);
    return std::istringstream(line);
  };

  {
    auto ls = expect_line("header");
    int version = 0;
    ls >> word >> version;
    if (word != "cps" || version != 1) throw ParseError("expected 'cps 1' header");
  }
  CpsData data;
  {
    auto ls = expect_line("background");
    std::string bg;
    ls >> word >> bg;
    if (word != "background") throw ParseError("expected background line");
    if (bg == "euclidean")
      data.packing.background = Background::Euclidean;
    else if (bg == "hyperbolic")
      data.packing.background = Background::Hyperbolic;
    else
      throw ParseError("unknown background '" + bg + "'");
  }
  int v_count = 0, f_count = 0;
  {
    auto ls = expect_line("vertices");
    ls >> word >> v_count;
    if (word != "vertices" || v_count <= 0) throw ParseError("expected vertices line");
  }
  {
    auto ls = expect_line("faces");
    ls >> word >> f_count;
    if (word != "faces" || f_count <= 0) throw ParseError("expected faces line");
  }
  for (int i = 0; i < f_count; ++i) {
    auto ls = expect_line("face list");
    int a, b, c;
    ls >> word >> a >> b >> c;
    if (word != "f" || ls.fail()) throw ParseError("bad face line");
    data.faces.push_back({a, b, c});
  }
  TriangulatedSurface s = TriangulatedSurface::build(data.faces);
  if (s.vertex_count() != v_count) throw ParseError("vertex count does not match faces");

  {
    auto ls = expect_line("radii");
    ls >> word;
    if (word != "radii") throw ParseError("expected radii section");
  }
  data.packing.radii = Eigen::VectorXd::Zero(v_count);
  for (int i = 0; i < v_count; ++i) {
    auto ls = expect_line("radius list");
    int idx;
    double r;
    ls >> word >> idx >> r;
    if (word != "r" || ls.fail() || idx < 0 || idx >= v_count)
      throw ParseError("bad radius line");
    data.packing.radii[idx] = r;
  }
  {
    auto ls = expect_line("phi");
    ls >> word;
    if (word != "phi") throw ParseError("expected phi section");
  }
  data.packing.phi = Eigen::VectorXd::Constant(s.edge_count(), -1.0);
  for (int e = 0; e < s.edge_count(); ++e) {
    auto ls = expect_line("phi list");
    int a, b;
    double value;
    ls >> word >> a >> b >> value;
    if (word != "phi" || ls.fail()) throw ParseError("bad phi line");
    data.packing.phi[s.edge_index(a, b)] = value;
  }
  for (int e = 0; e < s.edge_count(); ++e)
    if (data.packing.phi[e] < 0.0) throw ParseError("phi missing for some edge");
  return data;
}

void write_cps(std::ostream& out, const TriangulatedSurface& s, const CirclePacking& p) {
  out << "cps 1\n";
  out << "background "
      << (p.background == Background::Euclidean ? "euclidean" : "hyperbolic") << '\n';
  out << "vertices " << s.vertex_count() << '\n';
  out << "faces " << s.face_count() << '\n';
  for (const auto& f : s.faces()) out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  out << "radii\n";
  for (int v = 0; v < s.vertex_count(); ++v)
    out << "r " << v << ' ' << format_double(p.radii[v]) << '\n';
  out << "phi\n";
  for (int e = 0; e < s.edge_count(); ++e)
    out << "phi " << s.edges()[e][0] << ' ' << s.edges()[e][1] << ' '
        << format_double(p.phi[e]) << '\n';
}

namespace {

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

}  // namespace

shapes::EmbeddedMesh read_mesh_file(const std::string& path) {
  auto in = open_file(path);
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".off" || ext == ".OFF") return read_off(in);
  if (ext == ".obj" || ext == ".OBJ") return read_obj(in);
  throw IoError("unsupported mesh extension on '" + path + "'");
}

CpsData read_cps_file(const std::string& path) {
  auto in = open_file(path);
  return read_cps(in);
}

}  // namespace io
}  // namespace crf
