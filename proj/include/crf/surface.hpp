#pragma once

#include <array>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "crf/errors.hpp"

namespace crf {

enum class Background { Euclidean, Hyperbolic };

/// Combinatorics of a closed oriented triangle mesh. Immutable after
/// construction; every edge has exactly two incident faces and every
/// vertex link is a single cycle.
class TriangulatedSurface {
 public:
  /// Builds and validates a surface from a face list over vertex
  /// indices 0..V-1. Face winding is normalized to a consistent
  /// orientation. Throws DegenerateFace, NonManifold, DanglingVertex.
  static TriangulatedSurface build(std::vector<std::array<int, 3>> faces);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  /// Edges canonicalized as (min,max), sorted lexicographically.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

  const std::vector<int>& faces_of_vertex(int v) const { return vertex_faces_[v]; }
  const std::vector<int>& edges_of_vertex(int v) const { return vertex_edges_[v]; }
  const std::array<int, 2>& faces_of_edge(int e) const { return edge_faces_[e]; }

  /// Neighbors of v in link (cyclic) order.
  const std::vector<int>& link(int v) const { return vertex_link_[v]; }

  /// Index of the edge {a,b}; throws MissingEdgeLength if absent.
  int edge_index(int a, int b) const;
  std::optional<int> find_edge(int a, int b) const;

  /// V - E + F.
  int euler_characteristic() const {
    return vertex_count_ - edge_count() + face_count();
  }

 private:
  TriangulatedSurface() = default;

  int vertex_count_ = 0;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::vector<int>> vertex_link_;
  std::unordered_map<std::int64_t, int> edge_lookup_;
};

/// Per-edge lengths, indexed like TriangulatedSurface::edges().
struct LengthAssignment {
  Eigen::VectorXd lengths;
  Background background = Background::Euclidean;
};

struct FaceViolation {
  int face;
  std::array<double, 3> lengths;  // in face-corner order
};

/// Relative strictness for the per-face triangle inequality. A face
/// fails when max >= (sum of others) * (1 - eps).
inline constexpr double kTriangleTolerance = 1e-12;

/// Faces whose three induced lengths break the strict triangle
/// inequality at relative tolerance eps. Empty result <=> valid.
std::vector<FaceViolation> validate_lengths(const TriangulatedSurface& s,
                                            const LengthAssignment& l,
                                            double eps = kTriangleTolerance);

/// Euclidean edge lengths of an embedded mesh; one position per vertex.
LengthAssignment lengths_from_embedding(const std::vector<Eigen::Vector3d>& positions,
                                        const TriangulatedSurface& s);

}  // namespace crf
