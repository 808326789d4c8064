#include "plcycle/cycle.hpp"

#include <algorithm>
#include <map>

namespace plcycle {

namespace {

// Collapse consecutive (cyclic) duplicates within tol; returns empty if
// fewer than 3 distinct vertices remain.
std::vector<Point2> collapse_loop(std::span<const Point2> pts, double tol) {
    std::vector<Point2> out;
    for (const Point2& p : pts) {
        if (!out.empty() && dist(out.back(), p) <= tol) continue;
        out.push_back(p);
    }
    while (out.size() > 1 && dist(out.front(), out.back()) <= tol) out.pop_back();
    if (out.size() < 3) out.clear();
    return out;
}

}  // namespace

GradientCycle build_cycle_from_gradients(std::shared_ptr<const Triangulation2D> base,
                                         std::vector<Point2> gradients, const CycleOptions& opts) {
    if (static_cast<int>(gradients.size()) != base->n_faces())
        throw InvalidInput("build_cycle: one gradient per face required");

    GradientCycle c;
    c.base = base;
    c.face_gradients = std::move(gradients);

    double gscale = 0.0;
    for (const Point2& g : c.face_gradients) gscale = std::max(gscale, std::max(std::abs(g.x), std::abs(g.y)));
    c.gradient_scale = gscale;
    const double fiber_tol = 1e-12 * std::max(gscale, 1e-300);

    c.d2.reserve(base->n_faces());
    for (int f = 0; f < base->n_faces(); ++f) {
        c.d2.push_back({f, c.face_gradients[f]});
        c.masses.d2 += base->face_area(f);
    }

    for (int e = 0; e < base->n_edges(); ++e) {
        const auto& ed = base->edge(e);
        if (!ed.interior()) continue;
        const Point2 gl = c.face_gradients[ed.left_face];
        const Point2 gr = c.face_gradients[ed.right_face];
        const OrientedSegment fiber{gl, gr};
        const double flen = fiber.length();
        if (flen <= fiber_tol) continue;
        if (opts.enforce_perpendicularity && flen > 1e-7 * std::max(gscale, 1e-300)) {
            const Point2 sd = base->vertex(ed.b) - base->vertex(ed.a);
            const double defect = std::abs(dot(sd, fiber.delta())) / (norm(sd) * flen);
            if (defect > opts.perp_tol)
                throw InternalError("build_cycle: fiber not perpendicular to edge " + std::to_string(e) +
                                    " (defect " + std::to_string(defect) + ")");
        }
        c.d1.push_back({e, fiber});
        c.masses.d1 += dist(base->vertex(ed.a), base->vertex(ed.b)) * flen;
    }

    for (int v : base->interior_vertices()) {
        const auto star = base->vertex_star_ccw(v);
        std::vector<Point2> loop;
        loop.reserve(star.faces.size());
        for (int f : star.faces) loop.push_back(c.face_gradients[f]);
        D0Entry entry;
        entry.vertex = v;
        entry.fiber_polygon = collapse_loop(loop, fiber_tol);
        if (!entry.fiber_polygon.empty()) {
            const double diam = BBox::of(entry.fiber_polygon).diameter();
            const double tol_len = opts.tol.len_for_diameter(diam);
            const auto& ring = entry.fiber_polygon;
            std::vector<OrientedSegment> segs;
            segs.reserve(ring.size());
            for (std::size_t i = 0; i < ring.size(); ++i)
                segs.push_back({ring[i], ring[(i + 1) % ring.size()]});
            entry.region = arrange_with_winding_oracle(
                segs, [&ring](Point2 q) { return winding_number(ring, q); }, tol_len);
            entry.mass = entry.region.mass();
        }
        c.masses.d0 += entry.mass;
        c.d0.push_back(std::move(entry));
    }

    return c;
}

GradientCycle build_cycle(const PLFunction& p, const CycleOptions& opts) {
    return build_cycle_from_gradients(p.base_ptr(), p.face_gradients(), opts);
}

LayerMasses restricted_mass(const GradientCycle& c, const PolygonalSet& region) {
    LayerMasses m;
    const Triangulation2D& tri = *c.base;
    for (const D2Entry& e : c.d2) {
        const auto& fc = tri.face(e.face);
        m.d2 += region.clip_triangle_area(tri.vertex(fc[0]), tri.vertex(fc[1]), tri.vertex(fc[2]));
    }
    for (const D1Entry& e : c.d1) {
        const auto& ed = tri.edge(e.edge);
        m.d1 += region.clip_segment_length(tri.vertex(ed.a), tri.vertex(ed.b)) * e.fiber.length();
    }
    const double tol = 1e-9 * std::max(region.bbox().diameter(), 1e-300);
    for (const D0Entry& e : c.d0) {
        if (region.contains(tri.vertex(e.vertex), tol)) m.d0 += e.mass;
    }
    return m;
}

BoundaryReport boundary_check(const GradientCycle& c) {
    BoundaryReport rep;
    const Triangulation2D& tri = *c.base;

    // Edge level: the D2 boundary coefficient over an interior edge a->b is
    // grad(left) - grad(right); the D1 fiber contributes start - end, which
    // cancels it exactly for fiber = (left -> right). Dropped fibers leave a
    // residual of at most the drop tolerance.
    std::vector<bool> has_fiber(tri.n_edges(), false);
    std::vector<Point2> fiber_delta(tri.n_edges());
    for (const D1Entry& e : c.d1) {
        has_fiber[e.edge] = true;
        fiber_delta[e.edge] = e.fiber.delta();
    }
    for (int e = 0; e < tri.n_edges(); ++e) {
        const auto& ed = tri.edge(e);
        if (!ed.interior()) continue;
        const Point2 d2_part = c.face_gradients[ed.left_face] - c.face_gradients[ed.right_face];
        const Point2 resid = has_fiber[e] ? d2_part + fiber_delta[e] : d2_part;
        rep.edge_residual_max = std::max(rep.edge_residual_max, norm(resid));
    }

    // Vertex level: over an interior vertex the D1 fibers of the star spokes
    // assemble (with the edge orientation signs of the global boundary
    // operator) into the reversed star-gradient chain; the forward chain
    // bounding the fiber polygon must cancel it atom by atom. Cancellation
    // is combinatorial over exact gradient values shared by both layers,
    // with tolerance-dropped fibers admitted up to their drop length.
    std::map<int, const D1Entry*> fiber_by_edge;
    for (const D1Entry& e : c.d1) fiber_by_edge[e.edge] = &e;

    const double drop_tol = 1e-12 * std::max(c.gradient_scale, 1e-300);

    for (const D0Entry& d : c.d0) {
        const auto star = tri.vertex_star_ccw(d.vertex);
        const std::size_t n = star.faces.size();
        // chain as multiset of directed segments between exact gradient values
        std::map<std::pair<std::pair<double, double>, std::pair<double, double>>, int> chain;
        auto add_seg = [&](Point2 from, Point2 to, int coeff) {
            if (from.x == to.x && from.y == to.y) return;
            auto key = std::make_pair(std::make_pair(from.x, from.y), std::make_pair(to.x, to.y));
            auto rkey = std::make_pair(key.second, key.first);
            auto it = chain.find(rkey);
            if (it != chain.end()) {
                it->second -= coeff;
                if (it->second == 0) chain.erase(it);
                return;
            }
            chain[key] += coeff;
            if (chain[key] == 0) chain.erase(key);
        };

        // D1 residual over this vertex: with fibers oriented left->right,
        // spoke i (between star faces i-1 and i) contributes the segment
        // grad_i -> grad_{i-1}, i.e. the backward chain.
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 g_prev = c.face_gradients[star.faces[(i + n - 1) % n]];
            const Point2 g_cur = c.face_gradients[star.faces[i]];
            if (dist(g_prev, g_cur) <= drop_tol) continue;  // dropped fiber, residual below tol
            add_seg(g_cur, g_prev, 1);
        }
        // Boundary of the fiber polygon: the forward chain.
        const auto& ring = d.fiber_polygon;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            add_seg(ring[i], ring[(i + 1) % ring.size()], 1);
        }

        double leftover = 0.0;
        int atoms = 0;
        for (const auto& [key, coeff] : chain) {
            const Point2 a{key.first.first, key.first.second};
            const Point2 b{key.second.first, key.second.second};
            const double len = dist(a, b);
            if (std::abs(coeff) * len <= 4 * drop_tol) continue;  // collapse noise
            atoms += std::abs(coeff);
            leftover += std::abs(coeff) * len;
        }
        rep.vertex_uncancelled += atoms;
        rep.vertex_residual_max = std::max(rep.vertex_residual_max, leftover);
    }
    return rep;
}

LagrangianReport lagrangian_check(const GradientCycle& c) {
    LagrangianReport rep;
    const Triangulation2D& tri = *c.base;
    for (const D1Entry& e : c.d1) {
        const auto& ed = tri.edge(e.edge);
        const Point2 sd = tri.vertex(ed.b) - tri.vertex(ed.a);
        const double defect = std::abs(dot(sd, e.fiber.delta())) / (norm(sd) * e.fiber.length());
        if (defect > rep.d1_defect_max) {
            rep.d1_defect_max = defect;
            rep.worst_edge = e.edge;
        }
    }
    return rep;
}

namespace {

// Adaptive centroid-rule integral over a triangle: uniform 4-way refinement
// until two successive levels agree to rel_tol.
double integrate_triangle(const std::function<double(Point2)>& f, Point2 a, Point2 b, Point2 c,
                          double rel_tol, int max_level = 7) {
    const double area = 0.5 * std::abs(orient2d(a, b, c));
    if (area == 0.0) return 0.0;
    double prev = 0.0;
    for (int level = 0;; ++level) {
        const int n = 1 << level;  // n^2 subtriangles per orientation class
        double sum = 0.0;
        // barycentric subdivision of the triangle into n^2 copies
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n - i; ++j) {
                // upright subtriangle (i,j)
                const double u0 = static_cast<double>(i) / n, v0 = static_cast<double>(j) / n;
                const double u1 = static_cast<double>(i + 1) / n, v1 = static_cast<double>(j + 1) / n;
                {
                    const double uc = (2 * u0 + u1) / 3.0 + 0.0, vc = (2 * v0 + v1) / 3.0;
                    const Point2 p = a + uc * (b - a) + vc * (c - a);
                    sum += f(p);
                }
                if (j < n - i - 1) {
                    // inverted subtriangle
                    const double uc = (2 * u1 + u0) / 3.0, vc = (2 * v1 + v0) / 3.0;
                    const Point2 p = a + uc * (b - a) + vc * (c - a);
                    sum += f(p);
                }
            }
        }
        const double integral = sum * area / (n * static_cast<double>(n));
        if (level > 0) {
            const double denom = std::max({std::abs(integral), std::abs(prev), 1e-12});
            if (std::abs(integral - prev) <= rel_tol * denom || level >= max_level) return integral;
        }
        prev = integral;
    }
}

}  // namespace

SupportIdentityResult support_identity_check(const GradientCycle& c, const PLFunction& p,
                                             const std::function<double(Point2, Point2)>& phi,
                                             double rel_tol) {
    SupportIdentityResult r;
    const Triangulation2D& tri = *c.base;

    for (const D2Entry& e : c.d2) {
        const auto& fc = tri.face(e.face);
        const Point2 g = e.gradient;
        r.lhs += integrate_triangle([&](Point2 x) { return phi(x, g); }, tri.vertex(fc[0]),
                                    tri.vertex(fc[1]), tri.vertex(fc[2]), rel_tol);
    }

    // Independent route: uniform grid over the bounding box with point
    // location; integrand vanishes off the support because phi is compactly
    // supported over the interior.
    FaceLocator locator(c.base);
    const BBox box = tri.bbox();
    double prev = 0.0;
    for (int n = 128;; n *= 2) {
        const double hx = (box.xmax - box.xmin) / n;
        const double hy = (box.ymax - box.ymin) / n;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Point2 x{box.xmin + (i + 0.5) * hx, box.ymin + (j + 0.5) * hy};
                const int f = locator.locate(x);
                if (f < 0) continue;
                sum += phi(x, p.face_gradient(f));
            }
        }
        const double integral = sum * hx * hy;
        if (n > 128) {
            const double denom = std::max({std::abs(integral), std::abs(prev), 1e-12});
            if (std::abs(integral - prev) <= rel_tol * denom || n >= 2048) {
                r.rhs = integral;
                break;
            }
        }
        prev = integral;
    }
    return r;
}

RegionWithMultiplicities join_region(const ClosedPolyline& poly, Point2 anchor, const Tolerances& tol) {
    const auto& verts = poly.vertices();
    const std::size_t n = verts.size();
    const double diam = std::max(poly.bbox().diameter(), dist(anchor, verts[0]));
    const double tol_len = tol.len_for_diameter(diam);
    const double area_tol = tol_len * diam;

    struct Fan {
        Point2 a, b, c;
        int sign;
    };
    std::vector<Fan> fans;
    std::vector<OrientedSegment> segs;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 b = verts[i];
        const Point2 c = verts[(i + 1) % n];
        const double sa = 0.5 * orient2d(anchor, b, c);
        segs.push_back({b, c});
        if (std::abs(sa) <= area_tol) continue;  // degenerate fan triangle dropped
        fans.push_back({anchor, b, c, sa > 0 ? 1 : -1});
        segs.push_back({anchor, b});
        segs.push_back({c, anchor});
    }

    auto winding = [&fans](Point2 q) {
        int w = 0;
        for (const Fan& f : fans) {
            const std::array<Point2, 3> t{f.a, f.b, f.c};
            w += winding_number(t, q);
        }
        return w;
    };
    return arrange_with_winding_oracle(segs, winding, tol_len);
}

}  // namespace plcycle
