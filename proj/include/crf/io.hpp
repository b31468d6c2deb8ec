#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crf/packing.hpp"
#include "crf/shapes.hpp"
#include "crf/surface.hpp"

namespace crf {
namespace io {

/// Doubles are written with 17 significant digits so outputs are
/// byte-reproducible and round-trip exactly.
std::string format_double(double x);

shapes::EmbeddedMesh read_off(std::istream& in);
shapes::EmbeddedMesh read_obj(std::istream& in);
void write_off(std::ostream& out, const shapes::EmbeddedMesh& mesh);
void write_obj(std::ostream& out, const shapes::EmbeddedMesh& mesh);

/// Circle-packing surface file: combinatorics plus radii and phi.
struct CpsData {
  std::vector<std::array<int, 3>> faces;
  CirclePacking packing;  // phi indexed like the built surface's edges
};

CpsData read_cps(std::istream& in);
void write_cps(std::ostream& out, const TriangulatedSurface& s, const CirclePacking& p);

shapes::EmbeddedMesh read_mesh_file(const std::string& path);  // .off or .obj by extension
CpsData read_cps_file(const std::string& path);

}  // namespace io
}  // namespace crf
