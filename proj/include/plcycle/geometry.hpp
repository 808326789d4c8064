// Planar primitives, polyline arrangements and winding-number regions.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plcycle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad caller input (degenerate geometry, malformed arguments, violated preconditions).
struct InvalidInput : Error {
    using Error::Error;
};

// Internal consistency failure (indicates a bug, not bad input).
struct InternalError : Error {
    using Error::Error;
};

// Global tolerance knobs. Length tolerances are relative to the bounding-box
// diameter of whatever object is being processed; `scale` is the CLI's
// --tolerance-scale multiplier.
struct Tolerances {
    double scale = 1.0;
    double len_rel = 1e-12;

    double len_for_diameter(double diam) const { return len_rel * scale * std::max(diam, 1e-300); }
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 perp_left(Point2 a) { return {-a.y, a.x}; }
inline bool finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Twice the signed area of triangle abc; > 0 iff c lies left of a->b.
inline double orient2d(Point2 a, Point2 b, Point2 c) {
    return cross(b - a, c - a);
}

struct BBox {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    static BBox of(std::span<const Point2> pts);
    double diameter() const { return std::hypot(xmax - xmin, ymax - ymin); }
    bool overlaps(const BBox& o) const {
        return xmin <= o.xmax && o.xmin <= xmax && ymin <= o.ymax && o.ymin <= ymax;
    }
    BBox expanded(double r) const { return {xmin - r, ymin - r, xmax + r, ymax + r}; }
};

struct OrientedSegment {
    Point2 start;
    Point2 end;

    Point2 delta() const { return end - start; }
    double length() const { return dist(start, end); }
};

// A cyclically closed polyline with >= 3 vertices after collapsing
// consecutive duplicates. Traversal order carries orientation.
class ClosedPolyline {
public:
    // Collapses consecutive (cyclic) duplicates within `tol`; throws
    // InvalidInput if fewer than 3 vertices survive or inputs are non-finite.
    static ClosedPolyline from_vertices(std::vector<Point2> vertices, const Tolerances& tol = {});

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    Point2 vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
    ClosedPolyline reversed() const;
    BBox bbox() const { return BBox::of(vertices_); }
    std::vector<OrientedSegment> segments() const;

private:
    explicit ClosedPolyline(std::vector<Point2> v) : vertices_(std::move(v)) {}
    std::vector<Point2> vertices_;
};

// Shoelace signed area; counterclockwise simple polygons are positive.
double signed_area(std::span<const Point2> loop);
double signed_area(const ClosedPolyline& poly);

// Winding number of the closed loop about p (ray-crossing form). Points on
// the loop itself give an arbitrary nearby value; callers sample generically.
int winding_number(std::span<const Point2> loop, Point2 p);
int winding_number(const ClosedPolyline& poly, Point2 p);

// One cell of an arrangement decomposition. `polygon` is the face cycle as
// traversed (bridge edges may repeat vertices); `area` is its absolute area.
struct RegionCell {
    std::vector<Point2> polygon;
    int multiplicity = 0;
    double area = 0.0;
};

// A 2-chain in the plane: winding-number multiplicities over the cells of an
// arrangement. Cells are pairwise interior-disjoint; zero cells are omitted.
struct RegionWithMultiplicities {
    std::vector<RegionCell> cells;

    double mass() const;            // sum |multiplicity| * area
    double algebraic_area() const;  // sum multiplicity * area
    bool empty() const { return cells.empty(); }
    // Multiplicity at a generic point (0 if in no cell).
    int multiplicity_at(Point2 p) const;
};

// Planar arrangement of the polyline's segments, each bounded cell labeled
// with the winding number of the polyline about an interior sample point.
RegionWithMultiplicities arrange_and_wind(const ClosedPolyline& poly, const Tolerances& tol = {});

// Generic engine: arrangement of `segments`, multiplicities from `winding`
// evaluated at an interior sample of each bounded cell.
RegionWithMultiplicities arrange_with_winding_oracle(std::span<const OrientedSegment> segments,
                                                     const std::function<int(Point2)>& winding,
                                                     double tol_len);

double mass_of_region(const RegionWithMultiplicities& region);
double algebraic_area_of_region(const RegionWithMultiplicities& region);

// --- convex clipping helpers (used for restricted masses and region areas) ---

double polygon_area(std::span<const Point2> polygon);

// Sutherland-Hodgman clip of `subject` against convex CCW `clip`.
std::vector<Point2> clip_polygon_convex(std::span<const Point2> subject, std::span<const Point2> clip);

// Parameter interval [t0,t1] of segment a+t(b-a) inside convex CCW polygon,
// or nullopt if disjoint.
std::optional<std::pair<double, double>> clip_segment_convex(Point2 a, Point2 b,
                                                             std::span<const Point2> convex);

bool point_in_convex(Point2 p, std::span<const Point2> convex, double tol = 0.0);

// A finite union of convex polygons with pairwise disjoint interiors.
class PolygonalSet {
public:
    PolygonalSet() = default;
    static PolygonalSet from_convex(std::vector<Point2> convex_ccw);
    void add_piece(std::vector<Point2> convex_ccw);
    void add(const PolygonalSet& other);

    const std::vector<std::vector<Point2>>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    double area() const;
    BBox bbox() const;
    bool contains(Point2 p, double tol = 0.0) const;
    // Area of triangle (a,b,c) inside the set.
    double clip_triangle_area(Point2 a, Point2 b, Point2 c) const;
    // Length of segment ab inside the set (interval union across pieces, so
    // segments lying on shared piece boundaries are not double counted).
    double clip_segment_length(Point2 a, Point2 b) const;

private:
    std::vector<std::vector<Point2>> pieces_;
};

}  // namespace plcycle
