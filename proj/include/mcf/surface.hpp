#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "mcf/geometry.hpp"

namespace mcf {

using Vec3 = Eigen::Vector3d;

// How a copy was produced from the fundamental piece: a sequence of
// reflections (indices into the base mesh's corner_axes), and the resulting
// horizontal transform (x,y) -> sign*(x,y) + offset (z is unchanged by
// rotation about a vertical line).
struct PieceInfo {
  std::vector<int> word;
  int sign = +1;
  Vec2 offset = Vec2::Zero();
};

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;  // indices into vertices
  std::vector<int> vertex_piece;              // provenance per vertex
  std::vector<PieceInfo> pieces;              // pieces[0] = identity
  std::vector<Vec2> corner_axes;  // vertical lines available for reflection
  std::vector<Vec3> periods;      // period vectors (metadata, not applied)
};

// Triangulated graph of u: one vertex per node (row-major), each quad cell
// split along its shorter 3D diagonal.  Corner axes are the domain corners.
SurfaceMesh graph_to_mesh(const ScalarField& u);

// Rotation by pi about the vertical line through axis_point, which must be
// one of the mesh's recorded corner axes (AxisNotOnBoundary otherwise):
// (x,y,z) -> (2x0 - x, 2y0 - y, z).
SurfaceMesh schwarz_reflect(const SurfaceMesh& piece, const Vec2& axis_point);

enum class FamilyKind { Scherk, Scherkenoid, HelicoidLike };

// Orbit of the piece under compositions of reflections about its corner
// axes, deduplicated, out to a generation depth set by (n1, n2); records the
// family's period vectors.  Scherk pieces need 4 recorded axes (cell
// corners); the singly periodic families need exactly 2.
SurfaceMesh assemble_periodic(const SurfaceMesh& piece, FamilyKind family,
                              int n1, int n2);

// Max distance from (translated vertex) to its counterpart, over all piece
// pairs whose transforms differ by the period; throws FamilyMismatch when no
// piece pair realizes the period.
double periodicity_defect(const SurfaceMesh& mesh, const Vec3& period);

// Max z-range among vertices sharing an (x,y) position (1e-9 quantization);
// 0 for a mesh embedded along its seams.
double seam_z_spread(const SurfaceMesh& mesh);

// ASCII OBJ: `v x y z` lines (17 significant digits) then 1-based `f i j k`.
void export_obj(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh import_obj(const std::string& path);

// Binary little-endian PLY with float64 positions.
void export_ply(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh import_ply(const std::string& path);

}  // namespace mcf
