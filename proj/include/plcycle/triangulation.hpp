// Combinatorial 2D triangulations with orientation/incidence, and square
// meshes (lattice cells plus slope -1 diagonals under a rigid motion).
#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <set>

#include "plcycle/geometry.hpp"

namespace plcycle {

struct FatnessStats {
    double theta_min = 0.0;  // smallest corner angle over all faces
    double edge_max = 0.0;
    double edge_min = 0.0;
    int worst_face = -1;     // face attaining theta_min
};

class Triangulation2D {
public:
    struct Edge {
        int a, b;            // a < b
        int left_face = -1;  // face traversing a->b
        int right_face = -1; // face traversing b->a
        bool interior() const { return left_face >= 0 && right_face >= 0; }
    };

    // Faces are CCW vertex-index triples. Validates orientation, positive
    // area, edge-manifoldness, consistent orientation across shared edges,
    // and single-fan vertex stars; throws InvalidInput naming the offender.
    static Triangulation2D build(std::vector<Point2> vertices, std::vector<std::array<int, 3>> faces,
                                 const Tolerances& tol = {});

    int n_vertices() const { return static_cast<int>(vertices_.size()); }
    int n_faces() const { return static_cast<int>(faces_.size()); }
    int n_edges() const { return static_cast<int>(edges_.size()); }

    Point2 vertex(int i) const { return vertices_[i]; }
    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::array<int, 3>& face(int i) const { return faces_[i]; }
    const std::vector<std::array<int, 3>>& faces() const { return faces_; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::optional<int> edge_between(int u, int v) const;

    bool vertex_is_interior(int v) const { return !vertex_boundary_[v]; }
    bool edge_is_interior(int e) const { return edges_[e].interior(); }
    std::vector<int> interior_vertices() const;

    const std::vector<int>& faces_at_vertex(int v) const { return vertex_faces_[v]; }

    double face_area(int f) const;
    Point2 face_centroid(int f) const;
    double total_area() const;
    BBox bbox() const { return BBox::of(vertices_); }

    // The star of an interior vertex in counterclockwise cyclic order.
    // spoke_targets[i] is the far endpoint of the edge between faces[i-1]
    // and faces[i] (cyclically), i.e. the spoke oriented away from v.
    struct VertexStar {
        std::vector<int> faces;
        std::vector<int> spoke_targets;
    };
    VertexStar vertex_star_ccw(int v) const;  // throws InvalidInput on boundary vertex

    void write_off(std::ostream& os) const;

private:
    std::vector<Point2> vertices_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<Edge> edges_;
    std::map<std::pair<int, int>, int> edge_index_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<bool> vertex_boundary_;
};

FatnessStats fatness(const Triangulation2D& tri);

// The four polygonal sets of a square mesh. `interior` equals `support` as a
// polygon; it is the same set read as an open region.
struct SquareMeshRegions {
    PolygonalSet support;
    PolygonalSet interior;
    PolygonalSet core;
    PolygonalSet crust;
};

// A finite subcomplex of the eps-scaled standard lattice triangulation under
// a rigid motion (rotation by axis_angle, then translation by origin). Cells
// are stored combinatorially; the derived triangulation splits each cell by
// its slope -1 diagonal in mesh coordinates.
class SquareMesh {
public:
    SquareMesh(double size, Point2 origin, double axis_angle, std::set<std::pair<int, int>> cells);
    // nx-by-ny block of cells with lower-left lattice corner at (0,0).
    static SquareMesh block(double size, int nx, int ny, Point2 origin = {0, 0}, double axis_angle = 0);

    double size() const { return size_; }
    Point2 origin() const { return origin_; }
    double axis_angle() const { return angle_; }
    const std::set<std::pair<int, int>>& cells() const { return cells_; }
    bool empty() const { return cells_.empty(); }

    Point2 to_world(double mx, double my) const;
    Point2 to_mesh(Point2 world) const;
    Point2 lattice_vertex(int i, int j) const { return to_world(size_ * i, size_ * j); }
    bool cell_present(int i, int j) const { return cells_.count({i, j}) != 0; }
    // World point membership in the support (closed cells), with slack in
    // units of the mesh size.
    bool support_contains(Point2 world, double rel_tol = 1e-9) const;

    // Lattice vertices incident to at least one cell, in deterministic order.
    const std::vector<std::pair<int, int>>& lattice_vertices() const { return lattice_vertices_; }
    // All four incident cells present.
    bool lattice_vertex_interior(int i, int j) const;
    int triangulation_vertex(int i, int j) const;  // index into triangulation()

    const Triangulation2D& triangulation() const;
    std::shared_ptr<const Triangulation2D> triangulation_ptr() const;

    SquareMeshRegions regions() const;

private:
    double size_;
    Point2 origin_;
    double angle_;
    double cos_, sin_;
    std::set<std::pair<int, int>> cells_;
    std::vector<std::pair<int, int>> lattice_vertices_;
    std::map<std::pair<int, int>, int> vertex_index_;
    mutable std::shared_ptr<const Triangulation2D> tri_;
};

SquareMeshRegions square_mesh_regions(const SquareMesh& mesh);

}  // namespace plcycle
