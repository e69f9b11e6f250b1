#include "gapfield/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace gapfield {

double Mesh::tri_area(int t) const {
    const Vec2 a = vertices[tris[t][0]];
    const Vec2 b = vertices[tris[t][1]];
    const Vec2 c = vertices[tris[t][2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
    double s = 0.0;
    for (int t = 0; t < n_triangles(); ++t) s += tri_area(t);
    return s;
}

namespace {

// Gap-doubling length scale: smallest x with h1(x)-h(x) >= eps, by bisection.
double gap_length_scale(const GapDomain& dom) {
    const double xmax = 2.0 * dom.R0;
    auto diff = [&](double x) { return dom.h1(x) - dom.h(x); };
    if (diff(xmax) < dom.eps) return xmax;
    double lo = 0.0, hi = xmax;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) < dom.eps ? lo : hi) = mid;
    }
    return hi;
}

struct ColumnGrid {
    // endpoint pairs per column: outer point (on dD) and inner point (on dD1)
    std::vector<Vec2> outer_pts, inner_pts;
    std::vector<bool> in_band;  // column lies in the chart region
    bool wraps = false;         // planar: last column connects back to first
};

ColumnGrid build_columns(const GapDomain& dom, const MeshParams& prm) {
    ColumnGrid grid;
    const bool axisym = dom.mode == WeightMode::Axisymmetric;
    const double Xb = dom.R0;

    const double xs = gap_length_scale(dom);
    double dx_band = std::min(prm.h_target, std::max(prm.band_factor * xs, Xb / 400.0));
    int n_half = std::max(4, static_cast<int>(std::ceil(Xb / dx_band)));

    std::vector<double> band_x;
    if (axisym) {
        for (int j = 0; j <= n_half; ++j) band_x.push_back(Xb * j / n_half);
    } else {
        for (int j = -n_half; j <= n_half; ++j) band_x.push_back(Xb * j / n_half);
    }

    for (double x : band_x) {
        grid.outer_pts.push_back({x, dom.h(x)});
        grid.inner_pts.push_back({x, dom.eps + dom.h1(x)});
        grid.in_band.push_back(true);
    }

    PiecewiseCurve rem_out = dom.outer.remainder_curve(Xb, axisym);
    PiecewiseCurve rem_in = dom.inner.remainder_curve(Xb, axisym);
    const double L = std::max(rem_out.length(), rem_in.length());
    const int n_far = std::max(8, static_cast<int>(std::ceil(L / prm.h_target)));
    const int last = axisym ? n_far : n_far - 1;
    for (int j = 1; j <= last; ++j) {
        const double f = static_cast<double>(j) / n_far;
        Vec2 po = rem_out.point_at_length(f * rem_out.length());
        Vec2 pi = rem_in.point_at_length(f * rem_in.length());
        if (axisym && j == n_far) {
            // the closing column sits on the symmetry axis
            po.x = 0.0;
            pi.x = 0.0;
        }
        grid.outer_pts.push_back(po);
        grid.inner_pts.push_back(pi);
        grid.in_band.push_back(false);
    }
    grid.wraps = !axisym;
    return grid;
}

int pick_rows(const ColumnGrid& grid, const MeshParams& prm) {
    std::vector<double> thick;
    for (std::size_t c = 0; c < grid.outer_pts.size(); ++c)
        if (!grid.in_band[c]) thick.push_back(norm(grid.inner_pts[c] - grid.outer_pts[c]));
    double t_med = prm.h_target * prm.gap_layers;
    if (!thick.empty()) {
        std::nth_element(thick.begin(), thick.begin() + thick.size() / 2, thick.end());
        t_med = thick[thick.size() / 2];
    }
    const int by_h = static_cast<int>(std::ceil(t_med / prm.h_target));
    return std::clamp(std::max(prm.gap_layers, by_h), prm.gap_layers, prm.max_rows);
}

}  // namespace

Mesh triangulate(const GapDomain& dom, const MeshParams& prm) {
    if (prm.h_target <= 0.0) throw std::invalid_argument("triangulate: h_target must be positive");
    if (prm.gap_layers < 4) throw std::invalid_argument("triangulate: gap_layers must be >= 4");

    const ColumnGrid grid = build_columns(dom, prm);
    const int ncol = static_cast<int>(grid.outer_pts.size());
    const int rows = pick_rows(grid, prm);

    Mesh mesh;
    mesh.weight_mode = dom.mode;
    mesh.h_target = prm.h_target;
    mesh.gap_layers = prm.gap_layers;
    mesh.rows = rows;

    // vertices: column-major, row 0 on the outer boundary
    mesh.vertices.reserve(static_cast<std::size_t>(ncol) * (rows + 1));
    for (int c = 0; c < ncol; ++c) {
        const Vec2 O = grid.outer_pts[c];
        const Vec2 I = grid.inner_pts[c];
        for (int rrow = 0; rrow <= rows; ++rrow) {
            if (rrow == 0) {
                mesh.vertices.push_back(O);
            } else if (rrow == rows) {
                mesh.vertices.push_back(I);
            } else {
                const double t = static_cast<double>(rrow) / rows;
                mesh.vertices.push_back(O + t * (I - O));
            }
        }
    }
    auto vid = [&](int c, int rrow) { return c * (rows + 1) + rrow; };

    const int nstrip = grid.wraps ? ncol : ncol - 1;
    for (int c = 0; c < nstrip; ++c) {
        const int cn = (c + 1) % ncol;
        const int region = (grid.in_band[c] && grid.in_band[cn]) ? 1 : 0;
        for (int rrow = 0; rrow < rows; ++rrow) {
            const int v00 = vid(c, rrow), v10 = vid(cn, rrow);
            const int v11 = vid(cn, rrow + 1), v01 = vid(c, rrow + 1);
            const double d0 = norm(mesh.vertices[v00] - mesh.vertices[v11]);
            const double d1 = norm(mesh.vertices[v10] - mesh.vertices[v01]);
            if (d0 <= d1) {
                mesh.tris.push_back({v00, v10, v11});
                mesh.tris.push_back({v00, v11, v01});
            } else {
                mesh.tris.push_back({v00, v10, v01});
                mesh.tris.push_back({v10, v11, v01});
            }
            mesh.tri_region.push_back(region);
            mesh.tri_region.push_back(region);
        }
        mesh.boundary_edges.push_back({vid(c, 0), vid(cn, 0), BoundaryTag::Outer});
        mesh.boundary_edges.push_back({vid(c, rows), vid(cn, rows), BoundaryTag::Inner});
    }

    // orientation
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        if (mesh.tri_area(t) < 0.0) std::swap(mesh.tris[t][1], mesh.tris[t][2]);
        if (mesh.tri_area(t) <= 0.0)
            throw std::runtime_error("triangulate: degenerate element after snapping");
    }

    // vertex boundary flags
    mesh.vertex_on_outer.assign(mesh.vertices.size(), false);
    mesh.vertex_on_inner.assign(mesh.vertices.size(), false);
    for (const auto& e : mesh.boundary_edges) {
        auto& flags = e.tag == BoundaryTag::Outer ? mesh.vertex_on_outer : mesh.vertex_on_inner;
        flags[e.a] = flags[e.b] = true;
    }

    // neighbor table + conformity check
    std::map<std::pair<int, int>, std::pair<int, int>> edge_use;  // edge -> (tri, count)
    mesh.neighbors.assign(mesh.tris.size(), {-1, -1, -1});
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        for (int e = 0; e < 3; ++e) {
            int u = mesh.tris[t][e], v = mesh.tris[t][(e + 1) % 3];
            if (u > v) std::swap(u, v);
            auto it = edge_use.find({u, v});
            if (it == edge_use.end()) {
                edge_use[{u, v}] = {t * 3 + e, 1};
            } else {
                if (it->second.second != 1)
                    throw std::runtime_error("triangulate: edge shared by more than two triangles");
                const int t0 = it->second.first / 3, e0 = it->second.first % 3;
                mesh.neighbors[t0][e0] = t;
                mesh.neighbors[t][e] = t0;
                it->second.second = 2;
            }
        }
    }
    // every single-use edge must be a tagged boundary edge or lie on the axis
    std::map<std::pair<int, int>, bool> tagged;
    for (const auto& e : mesh.boundary_edges)
        tagged[{std::min(e.a, e.b), std::max(e.a, e.b)}] = true;
    for (const auto& [key, use] : edge_use) {
        if (use.second == 2) continue;
        if (tagged.count(key)) continue;
        const Vec2 pa = mesh.vertices[key.first], pb = mesh.vertices[key.second];
        const bool on_axis = dom.mode == WeightMode::Axisymmetric &&
                             std::abs(pa.x) < 1e-13 && std::abs(pb.x) < 1e-13;
        if (!on_axis) throw std::runtime_error("triangulate: non-conforming interface edge");
    }

    return mesh;
}

Mesh triangulate(const GapDomain& dom, double h_target, int gap_layers) {
    MeshParams prm;
    prm.h_target = h_target;
    prm.gap_layers = gap_layers;
    return triangulate(dom, prm);
}

MeshQuality mesh_quality_report(const Mesh& mesh) {
    MeshQuality q;
    q.n_vertices = mesh.n_vertices();
    q.n_triangles = mesh.n_triangles();
    q.gap_layer_count = mesh.rows;
    q.min_angle_deg = 180.0;
    q.max_angle_deg = 0.0;
    q.min_area = std::numeric_limits<double>::max();
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const Vec2 a = mesh.vertices[mesh.tris[t][0]];
        const Vec2 b = mesh.vertices[mesh.tris[t][1]];
        const Vec2 c = mesh.vertices[mesh.tris[t][2]];
        const double area = mesh.tri_area(t);
        q.min_area = std::min(q.min_area, area);
        const double la = norm(b - c), lb = norm(c - a), lc = norm(a - b);
        const double lmax = std::max({la, lb, lc});
        q.max_aspect = std::max(q.max_aspect, lmax * lmax / (2.0 * area));
        const Vec2 pts[3] = {a, b, c};
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = pts[(i + 1) % 3] - pts[i];
            const Vec2 v = pts[(i + 2) % 3] - pts[i];
            const double ang =
                std::atan2(std::abs(u.x * v.y - u.y * v.x), dot(u, v)) * 180.0 / M_PI;
            q.min_angle_deg = std::min(q.min_angle_deg, ang);
            q.max_angle_deg = std::max(q.max_angle_deg, ang);
        }
    }
    return q;
}

bool passes_quality_gate(const MeshQuality& q) { return q.max_angle_deg <= 93.0; }

namespace {

// signed barycentric slack: >= 0 when p is inside or on tri t
double containment_score(const Mesh& mesh, int t, Vec2 p) {
    const Vec2 a = mesh.vertices[mesh.tris[t][0]];
    const Vec2 b = mesh.vertices[mesh.tris[t][1]];
    const Vec2 c = mesh.vertices[mesh.tris[t][2]];
    const double a2 = 2.0 * mesh.tri_area(t);
    const double w0 = ((b.x - p.x) * (c.y - p.y) - (c.x - p.x) * (b.y - p.y)) / a2;
    const double w1 = ((c.x - p.x) * (a.y - p.y) - (a.x - p.x) * (c.y - p.y)) / a2;
    const double w2 = ((a.x - p.x) * (b.y - p.y) - (b.x - p.x) * (a.y - p.y)) / a2;
    return std::min({w0, w1, w2});
}

int worst_edge(const Mesh& mesh, int t, Vec2 p) {
    const Vec2 a = mesh.vertices[mesh.tris[t][0]];
    const Vec2 b = mesh.vertices[mesh.tris[t][1]];
    const Vec2 c = mesh.vertices[mesh.tris[t][2]];
    const double a2 = 2.0 * mesh.tri_area(t);
    // weight w_i is negative when p is beyond the edge opposite vertex i;
    // edge e connects vertices e and e+1, opposite vertex e+2
    const double w0 = ((b.x - p.x) * (c.y - p.y) - (c.x - p.x) * (b.y - p.y)) / a2;
    const double w1 = ((c.x - p.x) * (a.y - p.y) - (a.x - p.x) * (c.y - p.y)) / a2;
    const double w2 = ((a.x - p.x) * (b.y - p.y) - (b.x - p.x) * (a.y - p.y)) / a2;
    const double w[3] = {w0, w1, w2};
    int opp = 0;
    if (w[1] < w[opp]) opp = 1;
    if (w[2] < w[opp]) opp = 2;
    return (opp + 1) % 3;  // edge opposite that vertex
}

}  // namespace

int locate(const Mesh& mesh, Vec2 p) {
    // seed: coarse scan over a sample of triangles
    int t = 0;
    double best = -std::numeric_limits<double>::max();
    const int stride = std::max(1, mesh.n_triangles() / 128);
    for (int i = 0; i < mesh.n_triangles(); i += stride) {
        const Vec2 g = (1.0 / 3.0) * (mesh.vertices[mesh.tris[i][0]] +
                                      mesh.vertices[mesh.tris[i][1]] +
                                      mesh.vertices[mesh.tris[i][2]]);
        const double d = -dot(g - p, g - p);
        if (d > best) {
            best = d;
            t = i;
        }
    }
    const int max_steps = 4 * (static_cast<int>(std::sqrt(mesh.n_triangles())) + 8);
    for (int step = 0; step < max_steps; ++step) {
        if (containment_score(mesh, t, p) >= -1e-12) return t;
        const int e = worst_edge(mesh, t, p);
        const int nb = mesh.neighbors[t][e];
        if (nb < 0) break;
        t = nb;
    }
    // fallback: full scan, accept boundary-grazing points
    best = -std::numeric_limits<double>::max();
    int best_t = -1;
    for (int i = 0; i < mesh.n_triangles(); ++i) {
        const double s = containment_score(mesh, i, p);
        if (s > best) {
            best = s;
            best_t = i;
        }
    }
    return best >= -1e-9 ? best_t : -1;
}

void export_mesh(const Mesh& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("export_mesh: cannot open " + path);
    std::fprintf(f, "gapfield-mesh v1\n");
    std::fprintf(f, "%d\n", mesh.n_vertices());
    for (const auto& v : mesh.vertices) std::fprintf(f, "%.17g %.17g\n", v.x, v.y);
    std::fprintf(f, "%d\n", mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t)
        std::fprintf(f, "%d %d %d %d\n", mesh.tris[t][0], mesh.tris[t][1], mesh.tris[t][2],
                     mesh.tri_region[t]);
    std::fclose(f);
}

}  // namespace gapfield
