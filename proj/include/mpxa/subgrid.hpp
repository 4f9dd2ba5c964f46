#pragma once

#include <array>
#include <vector>

#include "mpxa/mesh.hpp"

namespace mpxa {

enum class QuadratureRule { SinglePoint, FullQuadratic };

/// Half of a face associated with one of its endpoint vertices.
struct Subface {
    int face;
    int vertex;
    double area;          // |continuity segment| = half the face length
    Vec2 continuity_point; // x at the parameter eta between face center and vertex
    int n_q;
    std::array<Vec2, 2> qpoints;
    std::array<double, 2> qweights; // physical weights, summing to the subface area
};

/// Intersection of a cell with the dual cell of one of its corners.
struct Subcell {
    int cell;
    int vertex;
    double volume;
};

/// Subcells and subfaces gathered around one vertex; the domain of a local
/// condensation problem.
struct DualCell {
    std::vector<int> subcells; // indices into SubGrid::subcells, ascending cell order
    std::vector<int> subfaces; // indices into SubGrid::subfaces, ascending face order
};

/// Interaction-region overlay of a mesh: one subface per (face, endpoint)
/// pair, one subcell per (cell, corner) incidence, and the per-vertex dual
/// cells gathering them. Immutable after construction.
struct SubGrid {
    const Mesh* mesh = nullptr;
    double eta = 0.0;
    QuadratureRule rule = QuadratureRule::SinglePoint;

    std::vector<Subface> subfaces; // 2*f + end, end 0/1 = face vertex slot
    std::vector<Subcell> subcells;
    std::vector<DualCell> dual_cells; // per vertex

    int subface_index(int face, int end) const { return 2 * face + end; }
    int quad_points_per_subface() const { return rule == QuadratureRule::SinglePoint ? 1 : 2; }
};

/// Build the overlay. eta in [0,1) places the continuity point
/// x = x_face + eta * (x_vertex - x_face) on each subface.
SubGrid build_subgrid(const Mesh& mesh, double eta, QuadratureRule rule);

} // namespace mpxa
