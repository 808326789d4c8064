// Eigen-aligned square meshes inside grid squares, and completion of a
// partial vertex/edge system to a uniform guaranteed-quality triangulation
// (constrained Delaunay + circumcenter refinement to circumradius <= h,
// giving edges in [h,2h] and angles in [pi/6, 2pi/3]).
#pragma once

#include "plcycle/triangulation.hpp"

namespace plcycle {

// A system of vertices and edges inside a closed polygonal region. The
// region boundary must be pre-subdivided at spacing exactly h and included
// among the vertices/edges. Hypotheses: pairwise vertex distance >= h and
// every edge length in [h, h*sqrt(3)].
struct EdgeSystem {
    std::vector<Point2> region;  // closed polygon, CCW
    std::vector<Point2> vertices;
    std::vector<std::pair<int, int>> edges;
    double h = 0.0;
};

struct QualityReport {
    double edge_min = 0.0, edge_max = 0.0;
    double angle_min = 0.0, angle_max = 0.0;
    bool contains_input = false;
    std::vector<std::string> violations;
    bool pass() const { return contains_input && violations.empty(); }
};

struct MeshOptions {
    // Domain membership override (default: winding test against the region
    // polygon). The pipeline passes exact lattice-square membership here.
    std::function<bool(Point2)> inside;
    // Iteration cap multiplier over the expected vertex count.
    double cap_factor = 50.0;
};

// Rotated eps-lattice anchored at the center of the axis-aligned square with
// lower-left `corner` and side `side`, eps = side / j. Keeps the cells whose
// vertices all lie at distance >= eps from the complement of the square,
// restricted to the largest connected component. May be empty.
SquareMesh aligned_square_mesh(Point2 corner, double side, int j, double axis_angle);

// The boundary of one square subdivided into j equal segments per side
// (4j vertices and edges). Callers assembling several squares deduplicate
// shared sides; see the pipeline builder in approx.
EdgeSystem subdivide_square_boundary(Point2 corner, double side, int j);

// Subdivide every side of `region` at spacing h into an EdgeSystem with no
// interior entries; errors if a side length is not a multiple of h.
EdgeSystem boundary_system(std::vector<Point2> region, double h);

// Validates the EdgeSystem hypotheses, then completes it to a triangulation
// of the region containing every input vertex (bit-equal coordinates, input
// indices first) and edge. The report is computed from the output; quality
// misses are reported, not silently accepted.
std::pair<Triangulation2D, QualityReport> complete_triangulation(const EdgeSystem& sys,
                                                                 const MeshOptions& opts = {});

// Exhaustive edge-length/angle scan against [h,2h] and [pi/6, 2pi/3].
QualityReport verify_quality(const Triangulation2D& tri, double h);

}  // namespace plcycle
