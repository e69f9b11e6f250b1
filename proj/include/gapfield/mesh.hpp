#pragma once

#include <array>
#include <string>
#include <vector>

#include "gapfield/geometry.hpp"

namespace gapfield {

enum class BoundaryTag { Outer, Inner };

struct MeshQuality {
    double min_angle_deg = 0.0;
    double max_angle_deg = 0.0;
    double max_aspect = 0.0;
    double min_area = 0.0;
    int gap_layer_count = 0;
    int n_vertices = 0;
    int n_triangles = 0;
};

// Gap-refined triangulation of Omega = D \ closure(D1). One structured
// column/row grid covers the whole annular region: inside |x'| <= R0 the
// columns follow the graph map (x', t) -> (x', h + t*delta), outside they
// blend linearly between matched arc-length samples of the two boundaries.
// The shared columns at |x'| = R0 make the two zones conforming.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> tris;   // CCW
    std::vector<int> tri_region;            // 1 = gap band, 0 = far field
    struct BEdge {
        int a = 0, b = 0;
        BoundaryTag tag = BoundaryTag::Outer;
    };
    std::vector<BEdge> boundary_edges;
    WeightMode weight_mode = WeightMode::Planar;
    double h_target = 0.0;
    int gap_layers = 0;
    int rows = 0;  // element layers per column (same across the mesh)

    std::vector<std::array<int, 3>> neighbors;  // per tri, -1 = no neighbor
    std::vector<bool> vertex_on_outer, vertex_on_inner;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(tris.size()); }
    double tri_area(int t) const;
    double total_area() const;
};

struct MeshParams {
    double h_target = 0.04;
    int gap_layers = 8;
    // band column spacing as a fraction of the gap-doubling length scale
    double band_factor = 0.3;
    int max_rows = 64;
};

Mesh triangulate(const GapDomain& dom, double h_target, int gap_layers);
Mesh triangulate(const GapDomain& dom, const MeshParams& params);

MeshQuality mesh_quality_report(const Mesh& mesh);
// Near-right-angle meshes keep the modest discrete max/min-value overshoot of
// piecewise-linear solves; heavily obtuse ones (the anisotropic gap band with
// sloped graphs) are reported but not asserted against.
bool passes_quality_gate(const MeshQuality& q);

// Point location by neighbor walking with a linear-scan fallback.
// Returns the triangle index, or -1 if the point lies in no element.
int locate(const Mesh& mesh, Vec2 p);

// Plain-text export: "gapfield-mesh v1", vertex count, "x y" lines, triangle
// count, "i j k tag" lines (tag = region), 0-based indices.
void export_mesh(const Mesh& mesh, const std::string& path);

}  // namespace gapfield
