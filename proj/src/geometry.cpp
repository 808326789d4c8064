#include "plcycle/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace plcycle {

BBox BBox::of(std::span<const Point2> pts) {
    if (pts.empty()) return {};
    BBox b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const Point2& p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    return b;
}

ClosedPolyline ClosedPolyline::from_vertices(std::vector<Point2> vertices, const Tolerances& tol) {
    for (const Point2& p : vertices) {
        if (!finite(p)) throw InvalidInput("ClosedPolyline: non-finite vertex");
    }
    const double tol_len = tol.len_for_diameter(BBox::of(vertices).diameter());
    std::vector<Point2> out;
    for (const Point2& p : vertices) {
        if (!out.empty() && dist(out.back(), p) <= tol_len) continue;
        out.push_back(p);
    }
    while (out.size() > 1 && dist(out.front(), out.back()) <= tol_len) out.pop_back();
    if (out.size() < 3) throw InvalidInput("ClosedPolyline: fewer than 3 vertices after collapsing duplicates");
    return ClosedPolyline(std::move(out));
}

ClosedPolyline ClosedPolyline::reversed() const {
    std::vector<Point2> v(vertices_.rbegin(), vertices_.rend());
    return ClosedPolyline(std::move(v));
}

std::vector<OrientedSegment> ClosedPolyline::segments() const {
    std::vector<OrientedSegment> segs;
    segs.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        segs.push_back({vertices_[i], vertices_[(i + 1) % vertices_.size()]});
    }
    return segs;
}

double signed_area(std::span<const Point2> loop) {
    double twice = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = loop[i];
        const Point2& b = loop[(i + 1) % n];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

double signed_area(const ClosedPolyline& poly) { return signed_area(poly.vertices()); }

int winding_number(std::span<const Point2> loop, Point2 p) {
    int wn = 0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = loop[i];
        const Point2& b = loop[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && orient2d(a, b, p) > 0) ++wn;
        } else {
            if (b.y <= p.y && orient2d(a, b, p) < 0) --wn;
        }
    }
    return wn;
}

int winding_number(const ClosedPolyline& poly, Point2 p) { return winding_number(poly.vertices(), p); }

double RegionWithMultiplicities::mass() const {
    double m = 0.0;
    for (const RegionCell& c : cells) m += std::abs(c.multiplicity) * c.area;
    return m;
}

double RegionWithMultiplicities::algebraic_area() const {
    double m = 0.0;
    for (const RegionCell& c : cells) m += c.multiplicity * c.area;
    return m;
}

int RegionWithMultiplicities::multiplicity_at(Point2 p) const {
    for (const RegionCell& c : cells) {
        if (winding_number(c.polygon, p) != 0) return c.multiplicity;
    }
    return 0;
}

double mass_of_region(const RegionWithMultiplicities& region) { return region.mass(); }
double algebraic_area_of_region(const RegionWithMultiplicities& region) { return region.algebraic_area(); }

namespace {

// Distance from p to segment ab.
double segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return dist(p, a);
    double t = dot(p - a, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + t * d);
}

struct Arrangement {
    std::vector<Point2> nodes;
    // undirected edges as node index pairs (a < b)
    std::vector<std::pair<int, int>> edges;
};

int snap_node(std::vector<Point2>& nodes, Point2 p, double tol) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i].x - p.x) <= tol && std::abs(nodes[i].y - p.y) <= tol && dist(nodes[i], p) <= tol)
            return static_cast<int>(i);
    }
    nodes.push_back(p);
    return static_cast<int>(nodes.size()) - 1;
}

// All-pairs intersection of the input segments, then subdivision of each
// segment at every node lying on it. Small inputs only; O(E^2) by design.
Arrangement build_arrangement(std::span<const OrientedSegment> segments, double tol) {
    std::vector<Point2> nodes;
    for (const OrientedSegment& s : segments) {
        snap_node(nodes, s.start, tol);
        snap_node(nodes, s.end, tol);
    }

    for (std::size_t i = 0; i < segments.size(); ++i) {
        for (std::size_t j = i + 1; j < segments.size(); ++j) {
            const Point2 a = segments[i].start, b = segments[i].end;
            const Point2 c = segments[j].start, d = segments[j].end;
            const Point2 r = b - a, s = d - c;
            const double denom = cross(r, s);
            const double len_r = norm(r), len_s = norm(s);
            if (std::abs(denom) > tol * (len_r + len_s)) {
                // proper or touching intersection of the supporting lines
                const double t = cross(c - a, s) / denom;
                const double u = cross(c - a, r) / denom;
                const double slack_t = tol / std::max(len_r, tol);
                const double slack_u = tol / std::max(len_s, tol);
                if (t >= -slack_t && t <= 1 + slack_t && u >= -slack_u && u <= 1 + slack_u) {
                    snap_node(nodes, a + t * r, tol);
                }
            } else {
                // parallel: collinear overlap contributes the projected endpoints
                if (segment_distance(c, a, b) <= tol || segment_distance(d, a, b) <= tol ||
                    segment_distance(a, c, d) <= tol || segment_distance(b, c, d) <= tol) {
                    // endpoints already present as nodes; nothing new to add
                }
            }
        }
    }

    std::vector<std::pair<int, int>> edge_set;
    auto add_edge = [&](int u, int v) {
        if (u == v) return;
        auto e = std::minmax(u, v);
        std::pair<int, int> key{e.first, e.second};
        if (std::find(edge_set.begin(), edge_set.end(), key) == edge_set.end()) edge_set.push_back(key);
    };

    for (const OrientedSegment& s : segments) {
        const Point2 a = s.start, b = s.end;
        const double len = dist(a, b);
        if (len <= tol) continue;
        const Point2 d = b - a;
        std::vector<std::pair<double, int>> on_seg;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (segment_distance(nodes[k], a, b) <= tol) {
                const double t = dot(nodes[k] - a, d) / dot(d, d);
                on_seg.emplace_back(t, static_cast<int>(k));
            }
        }
        std::sort(on_seg.begin(), on_seg.end());
        for (std::size_t k = 0; k + 1 < on_seg.size(); ++k) {
            add_edge(on_seg[k].second, on_seg[k + 1].second);
        }
    }

    return {std::move(nodes), std::move(edge_set)};
}

struct HalfEdge {
    int from, to;
    int twin;
    int next = -1;
    int cycle = -1;
};

}  // namespace

RegionWithMultiplicities arrange_with_winding_oracle(std::span<const OrientedSegment> segments,
                                                     const std::function<int(Point2)>& winding,
                                                     double tol_len) {
    RegionWithMultiplicities region;
    if (segments.empty()) return region;

    Arrangement arr = build_arrangement(segments, tol_len);
    const int n_nodes = static_cast<int>(arr.nodes.size());
    if (arr.edges.empty()) return region;

    std::vector<HalfEdge> hes;
    hes.reserve(arr.edges.size() * 2);
    std::vector<std::vector<int>> out(n_nodes);
    for (const auto& [u, v] : arr.edges) {
        const int h0 = static_cast<int>(hes.size());
        hes.push_back({u, v, h0 + 1});
        hes.push_back({v, u, h0});
        out[u].push_back(h0);
        out[v].push_back(h0 + 1);
    }
    for (int v = 0; v < n_nodes; ++v) {
        std::sort(out[v].begin(), out[v].end(), [&](int a, int b) {
            const Point2 da = arr.nodes[hes[a].to] - arr.nodes[v];
            const Point2 db = arr.nodes[hes[b].to] - arr.nodes[v];
            return std::atan2(da.y, da.x) < std::atan2(db.y, db.x);
        });
    }
    // next(u->v) = clockwise neighbor of (v->u) among v's out-edges; this
    // traces each face with its interior on the left.
    for (auto& he : hes) {
        const int v = he.to;
        const int rev = he.twin;
        const auto& ring = out[v];
        const auto it = std::find(ring.begin(), ring.end(), rev);
        const std::size_t k = static_cast<std::size_t>(it - ring.begin());
        he.next = ring[(k + ring.size() - 1) % ring.size()];
    }

    // collect face cycles
    std::vector<std::vector<int>> cycles;
    for (std::size_t h = 0; h < hes.size(); ++h) {
        if (hes[h].cycle >= 0) continue;
        std::vector<int> cyc;
        int cur = static_cast<int>(h);
        while (hes[cur].cycle < 0) {
            hes[cur].cycle = static_cast<int>(cycles.size());
            cyc.push_back(cur);
            cur = hes[cur].next;
        }
        cycles.push_back(std::move(cyc));
    }

    const double area_tol = tol_len * tol_len;
    for (const std::vector<int>& cyc : cycles) {
        std::vector<Point2> poly;
        poly.reserve(cyc.size());
        for (int h : cyc) poly.push_back(arr.nodes[hes[h].from]);
        const double sa = signed_area(poly);
        if (sa <= area_tol) continue;  // outer boundary or degenerate sliver

        // interior sample: offset left from the midpoint of a non-bridge edge
        int mult = 0;
        bool found = false;
        for (int h : cyc) {
            if (hes[hes[h].twin].cycle == hes[h].cycle) continue;  // bridge: same face both sides
            const Point2 a = arr.nodes[hes[h].from], b = arr.nodes[hes[h].to];
            const double len = dist(a, b);
            if (len <= tol_len) continue;
            const Point2 mid = 0.5 * (a + b);
            const Point2 nL = (1.0 / len) * perp_left(b - a);
            double clearance = 0.25 * len;
            for (const auto& [u, v] : arr.edges) {
                if ((u == hes[h].from && v == hes[h].to) || (u == hes[h].to && v == hes[h].from)) continue;
                clearance = std::min(clearance, 0.5 * segment_distance(mid, arr.nodes[u], arr.nodes[v]));
            }
            double delta = std::max(clearance, 4 * tol_len);
            for (int attempt = 0; attempt < 6 && !found; ++attempt, delta *= 0.25) {
                const Point2 sample = mid + delta * nL;
                if (winding_number(poly, sample) != 0) {
                    mult = winding(sample);
                    found = true;
                }
            }
            if (found) break;
        }
        if (!found) continue;  // no usable interior sample: treat as measure zero
        if (mult == 0) continue;

        region.cells.push_back({std::move(poly), mult, sa});
    }
    return region;
}

RegionWithMultiplicities arrange_and_wind(const ClosedPolyline& poly, const Tolerances& tol) {
    const double tol_len = tol.len_for_diameter(poly.bbox().diameter());
    const auto segs = poly.segments();
    const auto& verts = poly.vertices();
    return arrange_with_winding_oracle(
        segs, [&verts](Point2 p) { return winding_number(verts, p); }, tol_len);
}

double polygon_area(std::span<const Point2> polygon) { return std::abs(signed_area(polygon)); }

std::vector<Point2> clip_polygon_convex(std::span<const Point2> subject, std::span<const Point2> clip) {
    std::vector<Point2> poly(subject.begin(), subject.end());
    const std::size_t n = clip.size();
    for (std::size_t i = 0; i < n && !poly.empty(); ++i) {
        const Point2 a = clip[i];
        const Point2 b = clip[(i + 1) % n];
        std::vector<Point2> next;
        next.reserve(poly.size() + 2);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Point2 p = poly[k];
            const Point2 q = poly[(k + 1) % poly.size()];
            const double sp = orient2d(a, b, p);
            const double sq = orient2d(a, b, q);
            if (sp >= 0) next.push_back(p);
            if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
                const double t = sp / (sp - sq);
                next.push_back(p + t * (q - p));
            }
        }
        poly = std::move(next);
    }
    return poly;
}

std::optional<std::pair<double, double>> clip_segment_convex(Point2 a, Point2 b,
                                                             std::span<const Point2> convex) {
    double t0 = 0.0, t1 = 1.0;
    const Point2 d = b - a;
    const std::size_t n = convex.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 p = convex[i];
        const Point2 q = convex[(i + 1) % n];
        const Point2 nrm = perp_left(q - p);  // inward for CCW polygons
        const double denom = dot(nrm, d);
        const double num = dot(nrm, a - p);
        if (std::abs(denom) < 1e-300) {
            if (num < 0) return std::nullopt;
            continue;
        }
        const double t = -num / denom;
        if (denom > 0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

bool point_in_convex(Point2 p, std::span<const Point2> convex, double tol) {
    const std::size_t n = convex.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = convex[i];
        const Point2 b = convex[(i + 1) % n];
        const double len = std::max(dist(a, b), 1e-300);
        if (orient2d(a, b, p) < -tol * len) return false;
    }
    return true;
}

PolygonalSet PolygonalSet::from_convex(std::vector<Point2> convex_ccw) {
    PolygonalSet s;
    s.add_piece(std::move(convex_ccw));
    return s;
}

void PolygonalSet::add_piece(std::vector<Point2> convex_ccw) {
    if (convex_ccw.size() < 3) throw InvalidInput("PolygonalSet: piece with < 3 vertices");
    if (signed_area(convex_ccw) < 0) std::reverse(convex_ccw.begin(), convex_ccw.end());
    pieces_.push_back(std::move(convex_ccw));
}

void PolygonalSet::add(const PolygonalSet& other) {
    for (const auto& p : other.pieces_) pieces_.push_back(p);
}

double PolygonalSet::area() const {
    double a = 0.0;
    for (const auto& p : pieces_) a += polygon_area(p);
    return a;
}

BBox PolygonalSet::bbox() const {
    BBox b;
    bool first = true;
    for (const auto& p : pieces_) {
        const BBox pb = BBox::of(p);
        if (first) {
            b = pb;
            first = false;
        } else {
            b.xmin = std::min(b.xmin, pb.xmin);
            b.ymin = std::min(b.ymin, pb.ymin);
            b.xmax = std::max(b.xmax, pb.xmax);
            b.ymax = std::max(b.ymax, pb.ymax);
        }
    }
    return b;
}

bool PolygonalSet::contains(Point2 p, double tol) const {
    for (const auto& piece : pieces_) {
        if (point_in_convex(p, piece, tol)) return true;
    }
    return false;
}

double PolygonalSet::clip_triangle_area(Point2 a, Point2 b, Point2 c) const {
    std::array<Point2, 3> tri{a, b, c};
    if (signed_area(tri) < 0) std::swap(tri[1], tri[2]);
    const BBox tb = BBox::of(tri);
    double total = 0.0;
    for (const auto& piece : pieces_) {
        if (!tb.overlaps(BBox::of(piece))) continue;
        const auto clipped = clip_polygon_convex(tri, piece);
        if (clipped.size() >= 3) total += polygon_area(clipped);
    }
    return total;
}

double PolygonalSet::clip_segment_length(Point2 a, Point2 b) const {
    std::vector<std::pair<double, double>> spans;
    const BBox sb = BBox::of(std::array<Point2, 2>{a, b});
    for (const auto& piece : pieces_) {
        if (!sb.overlaps(BBox::of(piece))) continue;
        if (auto iv = clip_segment_convex(a, b, piece); iv && iv->second > iv->first) {
            spans.push_back(*iv);
        }
    }
    if (spans.empty()) return 0.0;
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = spans[0].first, hi = spans[0].second;
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i].first > hi) {
            covered += hi - lo;
            lo = spans[i].first;
            hi = spans[i].second;
        } else {
            hi = std::max(hi, spans[i].second);
        }
    }
    covered += hi - lo;
    return covered * dist(a, b);
}

}  // namespace plcycle
