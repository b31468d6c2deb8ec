#include "doctest.h"

#include "crf/embeddability.hpp"
#include "crf/shapes.hpp"

using namespace crf;

namespace {

LengthAssignment unit_lengths(const TriangulatedSurface& s) {
  LengthAssignment l;
  l.background = Background::Euclidean;
  l.lengths = Eigen::VectorXd::Ones(s.edge_count());
  return l;
}

}  // namespace

TEST_CASE("convex cones embed") {
  SUBCASE("regular tetrahedron") {
    auto s = TriangulatedSurface::build(shapes::tetrahedron().faces);
    auto reports = check_surface(s, unit_lengths(s));
    for (const auto& rep : reports) {
      CHECK(rep.embeddable);
      CHECK(rep.a0 == doctest::Approx(M_PI));
    }
  }
  SUBCASE("regular icosahedron") {
    auto s = TriangulatedSurface::build(shapes::icosahedron().faces);
    auto reports = check_surface(s, unit_lengths(s));
    for (const auto& rep : reports) {
      CHECK(rep.embeddable);
      CHECK(rep.a0 == doctest::Approx(5 * M_PI / 3));
    }
  }
}

TEST_CASE("flat vertex sits on the boundary and passes") {
  auto mesh = shapes::flat_hexagon_pyramid();
  auto s = TriangulatedSurface::build(mesh.faces);
  auto l = lengths_from_embedding(mesh.positions, s);
  auto rep = check_vertex(s, l, 0);
  CHECK(rep.a0 == doctest::Approx(2 * M_PI));
  CHECK(rep.a0_ok);
  CHECK(rep.embeddable);
}

TEST_CASE("saddle vertex fails with a witness") {
  auto s = shapes::saddle_7();
  auto l = shapes::saddle_lengths(s);
  auto rep = check_vertex(s, l, 0);
  CHECK(rep.a0 == doctest::Approx(7 * M_PI / 3));
  CHECK(!rep.a0_ok);
  CHECK(!rep.embeddable);
  REQUIRE(rep.a0_witness.has_value());
  CHECK(rep.a0_witness->value > 2 * M_PI);
}

TEST_CASE("verdict is scale invariant") {
  auto s = shapes::saddle_7();
  auto l = shapes::saddle_lengths(s);
  auto base = check_vertex(s, l, 0);
  LengthAssignment scaled = l;
  scaled.lengths *= 0.03;
  auto rep = check_vertex(s, scaled, 0);
  CHECK(rep.embeddable == base.embeddable);
  CHECK(rep.a0 == doctest::Approx(base.a0));
}

TEST_CASE("verdict survives relabeling") {
  auto mesh = shapes::tetrahedron();
  auto s1 = TriangulatedSurface::build(mesh.faces);
  // Relabel v -> 3 - v.
  std::vector<std::array<int, 3>> faces;
  for (auto f : mesh.faces) faces.push_back({3 - f[0], 3 - f[1], 3 - f[2]});
  auto s2 = TriangulatedSurface::build(faces);
  auto r1 = check_surface(s1, unit_lengths(s1));
  auto r2 = check_surface(s2, unit_lengths(s2));
  for (int v = 0; v < 4; ++v) {
    CHECK(r1[v].embeddable == r2[3 - v].embeddable);
    CHECK(r1[v].a0 == doctest::Approx(r2[3 - v].a0));
  }
}
