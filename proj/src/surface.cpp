#include "crf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace crf {

namespace {

std::int64_t edge_key(int a, int b, int v_count) {
  if (a > b) std::swap(a, b);
  return static_cast<std::int64_t>(a) * v_count + b;
}

}  // namespace

TriangulatedSurface TriangulatedSurface::build(std::vector<std::array<int, 3>> faces) {
  if (faces.empty()) throw DegenerateFace("empty face list");

  int v_count = 0;
  for (const auto& f : faces) {
    for (int v : f) {
      if (v < 0) throw DegenerateFace("negative vertex index");
      v_count = std::max(v_count, v + 1);
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw DegenerateFace("face with repeated vertex");
  }

  // Reject duplicate faces up to cyclic rotation and reflection.
  {
    std::set<std::array<int, 3>> seen;
    for (const auto& f : faces) {
      std::array<int, 3> key = f;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second)
        throw NonManifold("duplicate face over the same vertex triple");
    }
  }

  TriangulatedSurface s;
  s.vertex_count_ = v_count;
  s.faces_ = std::move(faces);

  // Collect edges and edge->face incidence.
  std::map<std::array<int, 2>, std::vector<int>> edge_map;
  for (int fi = 0; fi < (int)s.faces_.size(); ++fi) {
    const auto& f = s.faces_[fi];
    for (int c = 0; c < 3; ++c) {
      int a = f[c], b = f[(c + 1) % 3];
      std::array<int, 2> e = {std::min(a, b), std::max(a, b)};
      edge_map[e].push_back(fi);
    }
  }
  for (const auto& [e, fs] : edge_map) {
    if (fs.size() != 2)
      throw NonManifold("edge {" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                        "} belongs to " + std::to_string(fs.size()) + " faces");
  }

  // Normalize orientation: neighbouring faces must traverse their shared
  // edge in opposite directions. BFS over face adjacency, flipping as needed.
  {
    auto traverses_forward = [&](int fi, int a, int b) {
      const auto& f = s.faces_[fi];
      for (int c = 0; c < 3; ++c)
        if (f[c] == a && f[(c + 1) % 3] == b) return true;
      return false;
    };
    std::vector<int> state(s.faces_.size(), 0);  // 0 unseen, 1 queued/done
    std::vector<int> queue;
    queue.push_back(0);
    state[0] = 1;
    std::size_t head = 0;
    while (head < queue.size()) {
      int fi = queue[head++];
      const auto f = s.faces_[fi];
      for (int c = 0; c < 3; ++c) {
        int a = f[c], b = f[(c + 1) % 3];
        const auto& fs = edge_map[{std::min(a, b), std::max(a, b)}];
        int other = fs[0] == fi ? fs[1] : fs[0];
        bool want_backward = traverses_forward(fi, a, b);  // other must go b->a
        bool other_forward = traverses_forward(other, a, b);
        if (state[other] == 0) {
          if (other_forward == want_backward)
            std::swap(s.faces_[other][1], s.faces_[other][2]);
          state[other] = 1;
          queue.push_back(other);
        } else if (other_forward == want_backward) {
          throw NonManifold("surface is not orientable");
        }
      }
    }
    if (queue.size() != s.faces_.size())
      throw NonManifold("surface is not connected");
  }

  // Rebuild edge incidence against the (possibly reoriented) faces.
  edge_map.clear();
  for (int fi = 0; fi < (int)s.faces_.size(); ++fi) {
    const auto& f = s.faces_[fi];
    for (int c = 0; c < 3; ++c) {
      int a = f[c], b = f[(c + 1) % 3];
      edge_map[{std::min(a, b), std::max(a, b)}].push_back(fi);
    }
  }
  s.edges_.reserve(edge_map.size());
  s.edge_faces_.reserve(edge_map.size());
  for (const auto& [e, fs] : edge_map) {
    s.edge_lookup_[edge_key(e[0], e[1], v_count)] = (int)s.edges_.size();
    s.edges_.push_back(e);
    s.edge_faces_.push_back({fs[0], fs[1]});
  }

  s.vertex_faces_.resize(v_count);
  s.vertex_edges_.resize(v_count);
  for (int fi = 0; fi < (int)s.faces_.size(); ++fi)
    for (int v : s.faces_[fi]) s.vertex_faces_[v].push_back(fi);
  for (int ei = 0; ei < (int)s.edges_.size(); ++ei)
    for (int v : s.edges_[ei]) s.vertex_edges_[v].push_back(ei);

  for (int v = 0; v < v_count; ++v)
    if (s.vertex_faces_[v].empty())
      throw DanglingVertex("vertex " + std::to_string(v) + " is in no face");

  // Vertex links: with consistent orientation, each incident face (v,a,b)
  // contributes the step a->b; the steps must chain into one cycle.
  s.vertex_link_.resize(v_count);
  for (int v = 0; v < v_count; ++v) {
    std::unordered_map<int, int> next;
    for (int fi : s.vertex_faces_[v]) {
      const auto& f = s.faces_[fi];
      int c = 0;
      while (f[c] != v) ++c;
      int a = f[(c + 1) % 3], b = f[(c + 2) % 3];
      if (!next.emplace(a, b).second)
        throw NonManifold("vertex " + std::to_string(v) + " has a non-disk link");
    }
    int start = next.begin()->first;
    int cur = start;
    auto& link = s.vertex_link_[v];
    do {
      link.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end())
        throw NonManifold("vertex " + std::to_string(v) + " has a broken link");
      cur = it->second;
    } while (cur != start && link.size() <= next.size());
    if (link.size() != next.size())
      throw NonManifold("vertex " + std::to_string(v) + " link is not a single cycle");
  }

  return s;
}

int TriangulatedSurface::edge_index(int a, int b) const {
  auto e = find_edge(a, b);
  if (!e)
    throw MissingEdgeLength("no edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
  return *e;
}

std::optional<int> TriangulatedSurface::find_edge(int a, int b) const {
  auto it = edge_lookup_.find(edge_key(a, b, vertex_count_));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<FaceViolation> validate_lengths(const TriangulatedSurface& s,
                                            const LengthAssignment& l,
                                            double eps) {
  if (l.lengths.size() != s.edge_count())
    throw MissingEdgeLength("length assignment covers " + std::to_string(l.lengths.size()) +
                            " of " + std::to_string(s.edge_count()) + " edges");
  for (int e = 0; e < s.edge_count(); ++e)
    if (!(l.lengths[e] > 0.0))
      throw MissingEdgeLength("non-positive length on edge " + std::to_string(e));

  std::vector<FaceViolation> out;
  for (int fi = 0; fi < s.face_count(); ++fi) {
    const auto& f = s.faces()[fi];
    std::array<double, 3> le;
    for (int c = 0; c < 3; ++c)
      le[c] = l.lengths[s.edge_index(f[c], f[(c + 1) % 3])];
    double mx = std::max({le[0], le[1], le[2]});
    double rest = le[0] + le[1] + le[2] - mx;
    if (mx >= rest * (1.0 - eps)) out.push_back({fi, le});
  }
  return out;
}

LengthAssignment lengths_from_embedding(const std::vector<Eigen::Vector3d>& positions,
                                        const TriangulatedSurface& s) {
  if ((int)positions.size() != s.vertex_count())
    throw MissingEdgeLength("need one position per vertex");
  LengthAssignment l;
  l.background = Background::Euclidean;
  l.lengths.resize(s.edge_count());
  for (int e = 0; e < s.edge_count(); ++e) {
    const auto& [a, b] = s.edges()[e];
    double d = (positions[a] - positions[b]).norm();
    if (d == 0.0)
      throw CoincidentVertices("vertices " + std::to_string(a) + " and " +
                               std::to_string(b) + " coincide");
    l.lengths[e] = d;
  }
  return l;
}

}  // namespace crf
