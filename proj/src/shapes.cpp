#include "crf/shapes.hpp"

#include <cmath>
#include <map>
#include <tuple>

namespace crf {
namespace shapes {

EmbeddedMesh tetrahedron() {
  double s = 1.0 / std::sqrt(3.0);
  EmbeddedMesh m;
  m.positions = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  m.faces = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

EmbeddedMesh icosahedron() {
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  double n = std::sqrt(1.0 + phi * phi);
  double a = 1.0 / n, b = phi / n;
  EmbeddedMesh m;
  m.positions = {{-a, b, 0}, {a, b, 0},  {-a, -b, 0}, {a, -b, 0},
                 {0, -a, b}, {0, a, b},  {0, -a, -b}, {0, a, -b},
                 {b, 0, -a}, {b, 0, a},  {-b, 0, -a}, {-b, 0, a}};
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return m;
}

EmbeddedMesh geodesic_sphere(int frequency) {
  EmbeddedMesh base = icosahedron();
  int f = frequency;
  EmbeddedMesh out;
  // Canonical keys so shared subdivision points dedupe across faces:
  // corners by icosa vertex id, edge points by oriented (min,max,step).
  std::map<int, int> corner_id;
  std::map<std::tuple<int, int, int>, int> edge_id;

  auto add_point = [&](const Eigen::Vector3d& p) {
    out.positions.push_back(p.normalized());
    return (int)out.positions.size() - 1;
  };

  for (const auto& face : base.faces) {
    int a = face[0], b = face[1], c = face[2];
    const Eigen::Vector3d &pa = base.positions[a], &pb = base.positions[b],
                          &pc = base.positions[c];
    // idx(i,j): weight i on a, j on b, f-i-j on c.
    std::map<std::pair<int, int>, int> local;
    for (int i = 0; i <= f; ++i)
      for (int j = 0; j <= f - i; ++j) {
        int k = f - i - j;
        Eigen::Vector3d p = (i * pa + j * pb + k * pc) / f;
        int id;
        if (j == 0 && k == 0) {
          auto it = corner_id.find(a);
          id = it != corner_id.end() ? it->second : corner_id[a] = add_point(p);
        } else if (i == 0 && k == 0) {
          auto it = corner_id.find(b);
          id = it != corner_id.end() ? it->second : corner_id[b] = add_point(p);
        } else if (i == 0 && j == 0) {
          auto it = corner_id.find(c);
          id = it != corner_id.end() ? it->second : corner_id[c] = add_point(p);
        } else if (k == 0 || j == 0 || i == 0) {
          int u, v, step;
          if (k == 0) {
            u = a; v = b; step = i;
          } else if (j == 0) {
            u = a; v = c; step = i;
          } else {
            u = b; v = c; step = j;
          }
          if (u > v) {
            std::swap(u, v);
            step = f - step;
          }
          auto key = std::make_tuple(u, v, step);
          auto it = edge_id.find(key);
          id = it != edge_id.end() ? it->second : edge_id[key] = add_point(p);
        } else {
          id = add_point(p);
        }
        local[{i, j}] = id;
      }
    for (int i = 0; i < f; ++i)
      for (int j = 0; j < f - i; ++j) {
        out.faces.push_back({local[{i, j}], local[{i + 1, j}], local[{i, j + 1}]});
        if (i + j < f - 1)
          out.faces.push_back({local[{i + 1, j}], local[{i + 1, j + 1}], local[{i, j + 1}]});
      }
  }
  return out;
}

namespace {

// Bipyramid over an n-gon: apex 0, ring 1..n, bottom n+1.
std::vector<std::array<int, 3>> bipyramid_faces(int n) {
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < n; ++i) {
    int r0 = 1 + i, r1 = 1 + (i + 1) % n;
    faces.push_back({0, r0, r1});
    faces.push_back({n + 1, r1, r0});
  }
  return faces;
}

}  // namespace

EmbeddedMesh flat_hexagon_pyramid() {
  // Top star is a flat unit-equilateral fan; the bottom apex sits below
  // the plane, so only vertex 0 is exactly flat.
  EmbeddedMesh m;
  m.positions.push_back({0, 0, 0});
  for (int i = 0; i < 6; ++i) {
    double a = i * M_PI / 3.0;
    m.positions.push_back({std::cos(a), std::sin(a), 0.0});
  }
  m.positions.push_back({0, 0, -0.8});
  m.faces = bipyramid_faces(6);
  return m;
}

TriangulatedSurface saddle_7() {
  return TriangulatedSurface::build(bipyramid_faces(7));
}

LengthAssignment saddle_lengths(const TriangulatedSurface& s) {
  LengthAssignment l;
  l.background = Background::Euclidean;
  l.lengths = Eigen::VectorXd::Ones(s.edge_count());
  return l;
}

namespace {

std::vector<std::array<int, 3>> torus_faces(int offset) {
  auto v = [&](int i, int j) { return offset + 3 * ((i + 3) % 3) + (j + 3) % 3; };
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      faces.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
      faces.push_back({v(i, j), v(i + 1, j + 1), v(i, j + 1)});
    }
  return faces;
}

}  // namespace

TriangulatedSurface torus_3x3() {
  return TriangulatedSurface::build(torus_faces(0));
}

TriangulatedSurface genus2() {
  // Connected sum of two grid tori: cut face (0,3,4) from each and glue
  // the boundary triangles. Two candidate identifications; keep the one
  // giving an orientable complex.
  for (int variant = 0; variant < 2; ++variant) {
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : torus_faces(0)) {
      if ((f[0] == 0 && f[1] == 3 && f[2] == 4)) continue;
      faces.push_back(f);
    }
    // Remap the second torus: glued vertices {0,3,4} onto the first
    // torus's, the rest to fresh ids 9..14.
    std::array<int, 9> remap;
    int next = 9;
    for (int v = 0; v < 9; ++v) {
      if (v == 0) remap[v] = 0;
      else if (v == 3) remap[v] = variant == 0 ? 3 : 4;
      else if (v == 4) remap[v] = variant == 0 ? 4 : 3;
      else remap[v] = next++;
    }
    for (const auto& f : torus_faces(0)) {
      if ((f[0] == 0 && f[1] == 3 && f[2] == 4)) continue;
      faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
    }
    try {
      return TriangulatedSurface::build(std::move(faces));
    } catch (const NonManifold&) {
      if (variant == 1) throw;
    }
  }
  throw NonManifold("unreachable");
}

}  // namespace shapes
}  // namespace crf
