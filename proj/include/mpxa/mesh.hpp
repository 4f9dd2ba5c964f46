#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mpxa/geometry.hpp"

namespace mpxa {

/// Marker for the outer side of a boundary face.
inline constexpr int kBoundary = -1;

enum class BcType { Dirichlet, Neumann };

enum class MeshKind { Cartesian, PerturbedQuad, Triangle, VoronoiPolygon };

struct MeshSpec {
    MeshKind kind = MeshKind::Cartesian;
    int n = 2;                  // resolution (cells per direction on the unit square)
    double perturbation = 0.0;  // interior-vertex displacement as a fraction of h
    std::uint64_t seed = 0;
};

struct Face {
    std::array<int, 2> vertices; // endpoint vertex indices
    int cell_lo;                 // lower-index incident cell
    int cell_hi;                 // higher-index incident cell, or kBoundary
    Vec2 center;
    Vec2 normal;  // unit normal, oriented out of cell_lo
    double area;  // edge length in 2D

    bool is_boundary() const { return cell_hi == kBoundary; }
};

/// 2D polygonal cell-centered grid.
///
/// Cells are counter-clockwise vertex loops; faces are derived from the cell
/// loops with the convention that the face normal points from the lower-index
/// cell toward the higher-index cell (outward on the boundary). Immutable
/// after construction.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::vector<int>> cells;
    std::vector<Face> faces;
    std::vector<Vec2> cell_centers;
    std::vector<double> cell_volumes;
    std::vector<BcType> boundary_tags; // per face; meaningful only for boundary faces

    // connectivity derived at build time
    std::vector<std::vector<int>> cell_faces;   // faces of each cell, in loop order
    std::vector<std::vector<int>> vertex_cells; // cells meeting at each vertex (ascending)
    std::vector<std::vector<int>> vertex_faces; // faces meeting at each vertex (ascending)

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }

    double total_volume() const;
    /// Longest cell diameter; the mesh-size parameter of rate studies.
    double characteristic_size() const;
    /// Faces of cell k with vertex s, in the order (preceding, succeeding) of
    /// the cell's counter-clockwise loop at s.
    std::array<int, 2> faces_at_cell_vertex(int cell, int vertex) const;
};

/// Assemble a Mesh from raw vertex/cell data, deriving faces, geometry and
/// connectivity. Throws InvalidInput for dangling vertex indices, clockwise
/// loops, non-manifold faces, or cells that are not star-shaped with respect
/// to their center.
Mesh build_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells,
                const std::vector<std::pair<std::array<int, 2>, BcType>>& boundary = {});

/// Generate one of the unit-square mesh families.
Mesh generate_mesh(const MeshSpec& spec);

Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

/// JSON round-trip through strings (used by load/save and the CLI).
Mesh mesh_from_json(const std::string& text);
std::string mesh_to_json(const Mesh& mesh);

} // namespace mpxa
