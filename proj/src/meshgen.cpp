#include "plcycle/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace plcycle {

namespace {

constexpr double kRelTol = 1e-9;

// ---------------------------------------------------------------------------
// Constrained Delaunay triangulation with Bowyer-Watson insertion and
// Chew-style uniform refinement. Super-box vertices are appended after the
// input vertices and stripped on extraction.
// ---------------------------------------------------------------------------
class DelaunayMesh {
public:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nbr;  // nbr[i] across the edge opposite v[i]
        bool alive = true;
    };

    DelaunayMesh(std::span<const Point2> input, const BBox& box) {
        pts_.assign(input.begin(), input.end());
        n_input_ = static_cast<int>(pts_.size());
        scale_ = std::max(box.diameter(), 1e-12);
        const double m = 8.0 * scale_;
        const Point2 c{0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax)};
        super_ = n_input_;
        pts_.push_back({c.x - m, c.y - m});
        pts_.push_back({c.x + m, c.y - m});
        pts_.push_back({c.x + m, c.y + m});
        pts_.push_back({c.x - m, c.y + m});
        vert_tri_.assign(pts_.size(), -1);
        const int t0 = make_tri(super_, super_ + 1, super_ + 2);
        const int t1 = make_tri(super_, super_ + 2, super_ + 3);
        // shared edge (super, super+2): opposite v[1] in t0, v[2] in t1
        tris_[t0].nbr[1] = t1;
        tris_[t1].nbr[2] = t0;
        for (int i = 0; i < n_input_; ++i) insert_existing(i);
    }

    int n_input() const { return n_input_; }
    int n_points() const { return static_cast<int>(pts_.size()); }
    bool is_super(int v) const { return v >= super_; }
    Point2 point(int v) const { return pts_[v]; }
    const std::vector<Tri>& tris() const { return tris_; }

    // Inserts p; returns false (no change) if p would sit on or nearly on a
    // constrained edge or an existing vertex of its containing triangle.
    bool insert_refinement_point(Point2 p, double h) {
        const int t = locate(p);
        const auto& v = tris_[t].v;
        for (int i = 0; i < 3; ++i) {
            if (dist(pts_[v[i]], p) < 1e-6 * h) return false;
            const int u = v[(i + 1) % 3], w = v[(i + 2) % 3];
            if (!is_constrained(u, w)) continue;
            const Point2 pu = pts_[u], pw = pts_[w];
            const double len = dist(pu, pw);
            if (std::abs(orient2d(pu, pw, p)) < 1e-6 * h * len) return false;
        }
        pts_.push_back(p);
        vert_tri_.push_back(-1);
        insert_existing(static_cast<int>(pts_.size()) - 1);
        return true;
    }

    void constrain(int a, int b) {
        if (!edge_exists(a, b)) insert_segment(a, b);
        constraints_.insert(key(a, b));
    }

    bool is_constrained(int a, int b) const { return constraints_.count(key(a, b)) != 0; }

    double circumradius(int t) const {
        Point2 cc;
        return circum(t, cc);
    }
    Point2 circumcenter(int t) const {
        Point2 cc;
        circum(t, cc);
        return cc;
    }
    Point2 centroid(int t) const {
        const auto& v = tris_[t].v;
        return (1.0 / 3.0) * (pts_[v[0]] + pts_[v[1]] + pts_[v[2]]);
    }
    bool touches_super(int t) const {
        const auto& v = tris_[t].v;
        return is_super(v[0]) || is_super(v[1]) || is_super(v[2]);
    }

    std::vector<int> drain_created() { return std::exchange(created_, {}); }

    // True if the open segment x0->x1 crosses a constrained edge, walking
    // from triangle t0 which contains x0.
    bool segment_crosses_constraint(int t0, Point2 x0, Point2 x1) const;

    int locate(Point2 p) const;

private:
    static std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
    double orient_thr() const { return 1e-13 * scale_ * scale_; }

    bool in_circle(int t, Point2 p) const {
        const auto& v = tris_[t].v;
        const Point2 a = pts_[v[0]] - p, b = pts_[v[1]] - p, c = pts_[v[2]] - p;
        const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
        const double det = a.x * (b.y * c2 - c.y * b2) - a.y * (b.x * c2 - c.x * b2) +
                           a2 * (b.x * c.y - c.x * b.y);
        const double mags = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                                      std::abs(c.x), std::abs(c.y), 1e-30});
        return det > 1e-11 * mags * mags * mags * mags;
    }

    int make_tri(int a, int b, int c) {
        int id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
            tris_[id] = Tri{{a, b, c}, {-1, -1, -1}, true};
        } else {
            id = static_cast<int>(tris_.size());
            tris_.push_back(Tri{{a, b, c}, {-1, -1, -1}, true});
            mark_.push_back(0);
        }
        vert_tri_[a] = vert_tri_[b] = vert_tri_[c] = id;
        created_.push_back(id);
        return id;
    }

    void kill_tri(int t) {
        tris_[t].alive = false;
        free_.push_back(t);
    }

    int tri_at_vertex(int a) const {
        const int t = vert_tri_[a];
        if (t >= 0 && tris_[t].alive) {
            const auto& v = tris_[t].v;
            if (v[0] == a || v[1] == a || v[2] == a) return t;
        }
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            if (!tris_[i].alive) continue;
            const auto& v = tris_[i].v;
            if (v[0] == a || v[1] == a || v[2] == a) return static_cast<int>(i);
        }
        throw InternalError("tri_at_vertex: vertex has no incident triangle");
    }

    bool edge_exists(int a, int b) const {
        const int t0 = tri_at_vertex(a);
        int cur = t0;
        int guard = 0;
        do {
            const auto& v = tris_[cur].v;
            if (v[0] == b || v[1] == b || v[2] == b) return true;
            const int pos = static_cast<int>(std::find(v.begin(), v.end(), a) - v.begin());
            cur = tris_[cur].nbr[(pos + 1) % 3];
            if (cur < 0) return false;
            if (++guard > 1 << 20) throw InternalError("edge_exists: star walk did not close");
        } while (cur != t0);
        return false;
    }

    void insert_existing(int vi);
    void insert_segment(int a, int b);
    void triangulate_pseudo(std::span<const int> poly, int a, int b, std::vector<int>& out);

    double circum(int t, Point2& cc) const {
        const auto& v = tris_[t].v;
        const Point2 a = pts_[v[0]];
        const Point2 b = pts_[v[1]] - a, c = pts_[v[2]] - a;
        const double d = 2.0 * cross(b, c);
        const double b2 = dot(b, b), c2 = dot(c, c);
        const Point2 u{(b2 * c.y - c2 * b.y) / d, (c2 * b.x - b2 * c.x) / d};
        cc = a + u;
        return norm(u);
    }

    std::vector<Point2> pts_;
    std::vector<Tri> tris_;
    std::vector<int> free_;
    std::vector<int> vert_tri_;
    std::set<std::pair<int, int>> constraints_;
    std::vector<int> created_;
    mutable std::vector<int> mark_;
    mutable int epoch_ = 0;
    int n_input_ = 0;
    int super_ = 0;
    double scale_ = 1.0;
    mutable int hint_ = 0;
};

int DelaunayMesh::locate(Point2 p) const {
    int cur = hint_;
    if (cur < 0 || cur >= static_cast<int>(tris_.size()) || !tris_[cur].alive) cur = -1;
    if (cur < 0) {
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (tris_[t].alive) {
                cur = static_cast<int>(t);
                break;
            }
        }
    }
    const int cap = static_cast<int>(tris_.size()) * 2 + 64;
    for (int step = 0; step < cap; ++step) {
        const auto& tr = tris_[cur];
        int next = -1;
        double worst = -orient_thr();
        for (int i = 0; i < 3; ++i) {
            const Point2 a = pts_[tr.v[(i + 1) % 3]];
            const Point2 b = pts_[tr.v[(i + 2) % 3]];
            const double o = orient2d(a, b, p);
            if (o < worst && tr.nbr[i] >= 0) {
                worst = o;
                next = tr.nbr[i];
            }
        }
        if (next < 0) {
            hint_ = cur;
            return cur;
        }
        cur = next;
    }
    for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (!tris_[t].alive) continue;
        const auto& v = tris_[t].v;
        if (orient2d(pts_[v[0]], pts_[v[1]], p) >= -orient_thr() &&
            orient2d(pts_[v[1]], pts_[v[2]], p) >= -orient_thr() &&
            orient2d(pts_[v[2]], pts_[v[0]], p) >= -orient_thr()) {
            hint_ = static_cast<int>(t);
            return static_cast<int>(t);
        }
    }
    throw InternalError("locate: point not found in triangulation");
}

void DelaunayMesh::insert_existing(int vi) {
    const Point2 p = pts_[vi];
    const int t0 = locate(p);

    ++epoch_;
    auto marked = [&](int t) { return mark_[t] == epoch_; };

    std::vector<int> cavity;
    std::vector<int> stack{t0};
    mark_[t0] = epoch_;
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        cavity.push_back(t);
        for (int i = 0; i < 3; ++i) {
            const int nb = tris_[t].nbr[i];
            if (nb < 0 || marked(nb)) continue;
            const int u = tris_[t].v[(i + 1) % 3], w = tris_[t].v[(i + 2) % 3];
            if (is_constrained(u, w)) continue;
            if (in_circle(nb, p)) {
                mark_[nb] = epoch_;
                stack.push_back(nb);
            }
        }
    }

    // Expand across any border edge that p touches (keeps the fan
    // non-degenerate when p lies on an interior edge).
    bool grew = true;
    while (grew) {
        grew = false;
        for (std::size_t ci = 0; ci < cavity.size() && !grew; ++ci) {
            const int t = cavity[ci];
            for (int i = 0; i < 3; ++i) {
                const int nb = tris_[t].nbr[i];
                if (nb < 0 || marked(nb)) continue;
                const int u = tris_[t].v[(i + 1) % 3], w = tris_[t].v[(i + 2) % 3];
                if (orient2d(pts_[u], pts_[w], p) > orient_thr()) continue;
                if (is_constrained(u, w))
                    throw InternalError("insert: point lies on a constrained edge");
                mark_[nb] = epoch_;
                // re-run circumcircle growth from nb
                std::vector<int> st2{nb};
                while (!st2.empty()) {
                    const int t2 = st2.back();
                    st2.pop_back();
                    cavity.push_back(t2);
                    for (int k = 0; k < 3; ++k) {
                        const int nb2 = tris_[t2].nbr[k];
                        if (nb2 < 0 || marked(nb2)) continue;
                        const int u2 = tris_[t2].v[(k + 1) % 3], w2 = tris_[t2].v[(k + 2) % 3];
                        if (is_constrained(u2, w2)) continue;
                        if (in_circle(nb2, p)) {
                            mark_[nb2] = epoch_;
                            st2.push_back(nb2);
                        }
                    }
                }
                grew = true;
                break;
            }
        }
    }

    struct Border {
        int u, w, outside;
    };
    std::vector<Border> border;
    for (int t : cavity) {
        for (int i = 0; i < 3; ++i) {
            const int nb = tris_[t].nbr[i];
            if (nb >= 0 && marked(nb)) continue;
            border.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
        }
    }
    for (int t : cavity) kill_tri(t);

    std::map<int, int> tri_by_first;
    std::vector<int> new_tris;
    new_tris.reserve(border.size());
    for (const Border& b : border) {
        const int nt = make_tri(vi, b.u, b.w);
        new_tris.push_back(nt);
        tri_by_first[b.u] = nt;
        tris_[nt].nbr[0] = b.outside;  // across (u,w), opposite vi
        if (b.outside >= 0) {
            const auto& v = tris_[b.outside].v;
            for (int i = 0; i < 3; ++i) {
                if (v[(i + 1) % 3] == b.w && v[(i + 2) % 3] == b.u) tris_[b.outside].nbr[i] = nt;
            }
        }
    }
    for (int nt : new_tris) {
        const int w = tris_[nt].v[2];
        auto it = tri_by_first.find(w);
        if (it == tri_by_first.end()) throw InternalError("insert: open cavity fan");
        tris_[nt].nbr[1] = it->second;  // across (w, vi)
        tris_[it->second].nbr[2] = nt;  // back across (vi, w)
    }
    if (!new_tris.empty()) hint_ = new_tris.front();
}

void DelaunayMesh::insert_segment(int a, int b) {
    const Point2 pa = pts_[a], pb = pts_[b];

    int start = -1;
    {
        const int t0 = tri_at_vertex(a);
        int cur = t0;
        int guard = 0;
        do {
            const auto& v = tris_[cur].v;
            const int pos = static_cast<int>(std::find(v.begin(), v.end(), a) - v.begin());
            const int u = v[(pos + 1) % 3], w = v[(pos + 2) % 3];
            if (orient2d(pa, pb, pts_[u]) < -orient_thr() && orient2d(pa, pb, pts_[w]) > orient_thr() &&
                orient2d(pts_[u], pts_[w], pb) < -orient_thr()) {
                start = cur;
                break;
            }
            cur = tris_[cur].nbr[(pos + 1) % 3];
            if (cur < 0) break;
            if (++guard > 1 << 20) break;
        } while (cur != t0);
    }
    if (start < 0) throw InternalError("insert_segment: no crossing triangle at segment start");

    const int apos = static_cast<int>(std::find(tris_[start].v.begin(), tris_[start].v.end(), a) -
                                      tris_[start].v.begin());
    std::vector<int> crossed{start};
    std::vector<int> left{tris_[start].v[(apos + 2) % 3]};
    std::vector<int> right{tris_[start].v[(apos + 1) % 3]};

    int cur = start;
    int e_u = right.back(), e_w = left.back();  // crossed edge, u right of a->b, w left
    int guard = 0;
    while (true) {
        if (++guard > static_cast<int>(tris_.size()) + 16)
            throw InternalError("insert_segment: crossing walk did not terminate");
        if (is_constrained(e_u, e_w))
            throw InternalError("insert_segment: constraint crosses an existing constraint");
        // cur traverses the crossed edge as (e_u -> e_w); the neighbor is
        // across the slot whose opposite directed edge matches.
        int nxt = -1;
        {
            const auto& v = tris_[cur].v;
            for (int i = 0; i < 3; ++i) {
                if (v[(i + 1) % 3] == e_u && v[(i + 2) % 3] == e_w) nxt = tris_[cur].nbr[i];
            }
        }
        if (nxt < 0) throw InternalError("insert_segment: crossing walk left the mesh");
        crossed.push_back(nxt);
        const auto& nv = tris_[nxt].v;
        int apex = -1;
        for (int i = 0; i < 3; ++i) {
            if (nv[i] != e_u && nv[i] != e_w) apex = nv[i];
        }
        if (apex == b) break;
        const double o = orient2d(pa, pb, pts_[apex]);
        if (o > orient_thr()) {
            left.push_back(apex);
            e_w = apex;
        } else if (o < -orient_thr()) {
            right.push_back(apex);
            e_u = apex;
        } else {
            throw InternalError("insert_segment: vertex lies on a constrained segment");
        }
        cur = nxt;
    }

    std::map<std::pair<int, int>, int> outside;  // directed (u,w) -> outside neighbor
    ++epoch_;
    for (int t : crossed) mark_[t] = epoch_;
    for (int t : crossed) {
        for (int i = 0; i < 3; ++i) {
            const int nb = tris_[t].nbr[i];
            if (nb >= 0 && mark_[nb] == epoch_) continue;
            outside[{tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3]}] = nb;
        }
    }
    for (int t : crossed) kill_tri(t);

    std::vector<int> fresh;
    triangulate_pseudo(left, a, b, fresh);
    std::reverse(right.begin(), right.end());
    triangulate_pseudo(right, b, a, fresh);

    std::map<std::pair<int, int>, std::pair<int, int>> dir_edge;  // (u,w) -> (tri, slot)
    for (int t : fresh) {
        for (int i = 0; i < 3; ++i) {
            dir_edge[{tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3]}] = {t, i};
        }
    }
    for (const auto& [edge, ts] : dir_edge) {
        const auto rev = dir_edge.find({edge.second, edge.first});
        if (rev != dir_edge.end()) {
            tris_[ts.first].nbr[ts.second] = rev->second.first;
            continue;
        }
        const auto out = outside.find(edge);
        if (out == outside.end()) throw InternalError("insert_segment: unmatched corridor edge");
        tris_[ts.first].nbr[ts.second] = out->second;
        if (out->second >= 0) {
            const auto& v = tris_[out->second].v;
            for (int i = 0; i < 3; ++i) {
                if (v[(i + 1) % 3] == edge.second && v[(i + 2) % 3] == edge.first)
                    tris_[out->second].nbr[i] = ts.first;
            }
        }
    }
}

void DelaunayMesh::triangulate_pseudo(std::span<const int> poly, int a, int b, std::vector<int>& out) {
    if (poly.empty()) return;
    std::size_t ci = 0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const Point2 pi = pts_[poly[i]];
        const Point2 aa = pts_[a] - pi, bb = pts_[b] - pi, cc = pts_[poly[ci]] - pi;
        const double a2 = dot(aa, aa), b2 = dot(bb, bb), c2 = dot(cc, cc);
        const double det = aa.x * (bb.y * c2 - cc.y * b2) - aa.y * (bb.x * c2 - cc.x * b2) +
                           a2 * (bb.x * cc.y - cc.x * bb.y);
        if (det > 0) ci = i;
    }
    out.push_back(make_tri(a, b, poly[ci]));
    triangulate_pseudo(poly.subspan(0, ci), a, poly[ci], out);
    triangulate_pseudo(poly.subspan(ci + 1), poly[ci], b, out);
}

bool DelaunayMesh::segment_crosses_constraint(int t0, Point2 x0, Point2 x1) const {
    int cur = t0;
    int guard = 0;
    while (true) {
        if (++guard > 4096) return true;  // stuck: refuse conservatively
        const auto& v = tris_[cur].v;
        if (orient2d(pts_[v[0]], pts_[v[1]], x1) >= -orient_thr() &&
            orient2d(pts_[v[1]], pts_[v[2]], x1) >= -orient_thr() &&
            orient2d(pts_[v[2]], pts_[v[0]], x1) >= -orient_thr())
            return false;
        int exit_nbr = -2;
        int bu = -1, bw = -1;
        for (int i = 0; i < 3; ++i) {
            const int u = v[(i + 1) % 3], w = v[(i + 2) % 3];
            const double o1 = orient2d(x0, x1, pts_[u]);
            const double o2 = orient2d(x0, x1, pts_[w]);
            if (o1 >= -orient_thr() || o2 <= orient_thr()) continue;  // need u right, w left
            if (orient2d(pts_[u], pts_[w], x1) >= -orient_thr()) continue;
            exit_nbr = tris_[cur].nbr[i];
            bu = u;
            bw = w;
            break;
        }
        if (exit_nbr == -2) return false;  // x1 effectively reached
        if (exit_nbr < 0) return true;
        if (is_constrained(bu, bw)) return true;
        cur = exit_nbr;
    }
}

bool default_inside(const std::vector<Point2>& region, Point2 p) {
    return winding_number(region, p) != 0;
}

void validate_system(const EdgeSystem& sys) {
    if (!(sys.h > 0)) throw InvalidInput("EdgeSystem: h must be positive");
    if (sys.region.size() < 3) throw InvalidInput("EdgeSystem: region polygon needs >= 3 vertices");
    const double h = sys.h;

    const BBox box = BBox::of(sys.vertices);
    std::map<std::pair<int, int>, std::vector<int>> grid;
    auto cell_of = [&](Point2 p) {
        return std::make_pair(static_cast<int>(std::floor((p.x - box.xmin) / h)),
                              static_cast<int>(std::floor((p.y - box.ymin) / h)));
    };
    for (std::size_t i = 0; i < sys.vertices.size(); ++i) {
        if (!finite(sys.vertices[i])) throw InvalidInput("EdgeSystem: non-finite vertex");
        const auto [ci, cj] = cell_of(sys.vertices[i]);
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                const auto it = grid.find({ci + di, cj + dj});
                if (it == grid.end()) continue;
                for (int j : it->second) {
                    const double d = dist(sys.vertices[i], sys.vertices[j]);
                    if (d < h * (1 - kRelTol)) {
                        std::ostringstream os;
                        os << "EdgeSystem hypothesis violation: vertices " << j << " and " << i
                           << " at distance " << d << " < h = " << h;
                        throw InvalidInput(os.str());
                    }
                }
            }
        }
        grid[{ci, cj}].push_back(static_cast<int>(i));
    }

    const int nv = static_cast<int>(sys.vertices.size());
    for (const auto& [a, b] : sys.edges) {
        if (a < 0 || b < 0 || a >= nv || b >= nv || a == b)
            throw InvalidInput("EdgeSystem: edge index out of range");
        const double len = dist(sys.vertices[a], sys.vertices[b]);
        if (len < h * (1 - kRelTol) || len > h * std::sqrt(3.0) * (1 + kRelTol)) {
            std::ostringstream os;
            os << "EdgeSystem hypothesis violation: edge (" << a << "," << b << ") length " << len
               << " outside [h, h*sqrt(3)] for h = " << h;
            throw InvalidInput(os.str());
        }
    }

    // region boundary must arrive subdivided at spacing exactly h
    std::set<std::pair<int, int>> edge_set;
    for (const auto& [a, b] : sys.edges) edge_set.insert({std::min(a, b), std::max(a, b)});
    const std::size_t n = sys.region.size();
    for (std::size_t s = 0; s < n; ++s) {
        const Point2 p = sys.region[s], q = sys.region[(s + 1) % n];
        const double len = dist(p, q);
        const Point2 d = q - p;
        std::vector<std::pair<double, int>> on_side;
        for (int i = 0; i < nv; ++i) {
            const Point2 v = sys.vertices[i];
            const double t = dot(v - p, d) / dot(d, d);
            if (t < -kRelTol || t > 1 + kRelTol) continue;
            if (dist(p + t * d, v) <= kRelTol * std::max(len, 1.0)) on_side.emplace_back(t, i);
        }
        std::sort(on_side.begin(), on_side.end());
        const long expect = std::lround(len / h);
        if (on_side.size() != static_cast<std::size_t>(expect) + 1 ||
            std::abs(len - expect * h) > kRelTol * std::max(len, 1.0))
            throw InvalidInput("EdgeSystem: region side " + std::to_string(s) +
                               " is not subdivided at spacing h");
        for (std::size_t k = 0; k + 1 < on_side.size(); ++k) {
            const auto [lo, hi] = std::minmax(on_side[k].second, on_side[k + 1].second);
            if (!edge_set.count({lo, hi}))
                throw InvalidInput("EdgeSystem: missing boundary edge on region side " + std::to_string(s));
        }
    }
}

}  // namespace

SquareMesh aligned_square_mesh(Point2 corner, double side, int j, double axis_angle) {
    if (j < 1 || !(side > 0)) throw InvalidInput("aligned_square_mesh: need side > 0 and j >= 1");
    const double eps = side / j;
    const Point2 center = corner + Point2{0.5 * side, 0.5 * side};

    const double c = std::cos(axis_angle), s = std::sin(axis_angle);
    auto clearance_ok = [&](int i, int jj) {
        const Point2 w{center.x + c * (eps * i) - s * (eps * jj), center.y + s * (eps * i) + c * (eps * jj)};
        const double cl = std::min(std::min(w.x - corner.x, corner.x + side - w.x),
                                   std::min(w.y - corner.y, corner.y + side - w.y));
        return cl >= eps * (1 - kRelTol);
    };

    std::set<std::pair<int, int>> cells;
    for (int i = -j; i < j; ++i) {
        for (int jj = -j; jj < j; ++jj) {
            if (clearance_ok(i, jj) && clearance_ok(i + 1, jj) && clearance_ok(i + 1, jj + 1) &&
                clearance_ok(i, jj + 1))
                cells.insert({i, jj});
        }
    }

    // keep the largest 4-connected component (first such component on ties)
    std::set<std::pair<int, int>> best;
    std::set<std::pair<int, int>> unseen = cells;
    while (!unseen.empty()) {
        std::vector<std::pair<int, int>> stack{*unseen.begin()};
        std::set<std::pair<int, int>> comp;
        unseen.erase(unseen.begin());
        while (!stack.empty()) {
            const auto [ci, cj] = stack.back();
            stack.pop_back();
            comp.insert({ci, cj});
            const std::pair<int, int> nbrs[4] = {{ci + 1, cj}, {ci - 1, cj}, {ci, cj + 1}, {ci, cj - 1}};
            for (const auto& nb : nbrs) {
                const auto it = unseen.find(nb);
                if (it != unseen.end()) {
                    unseen.erase(it);
                    stack.push_back(nb);
                }
            }
        }
        if (comp.size() > best.size()) best = std::move(comp);
    }

    return SquareMesh(eps, center, axis_angle, std::move(best));
}

EdgeSystem subdivide_square_boundary(Point2 corner, double side, int j) {
    if (j < 1 || !(side > 0)) throw InvalidInput("subdivide_square_boundary: need side > 0 and j >= 1");
    EdgeSystem sys;
    sys.h = side / j;
    sys.region = {corner, corner + Point2{side, 0}, corner + Point2{side, side}, corner + Point2{0, side}};
    const Point2 dirs[4] = {{side, 0}, {0, side}, {-side, 0}, {0, -side}};
    Point2 p = corner;
    for (int sidx = 0; sidx < 4; ++sidx) {
        for (int k = 0; k < j; ++k) {
            sys.vertices.push_back(p + (static_cast<double>(k) / j) * dirs[sidx]);
        }
        p = p + dirs[sidx];
    }
    const int n = 4 * j;
    for (int i = 0; i < n; ++i) sys.edges.push_back({i, (i + 1) % n});
    return sys;
}

EdgeSystem boundary_system(std::vector<Point2> region, double h) {
    if (signed_area(region) < 0) std::reverse(region.begin(), region.end());
    EdgeSystem sys;
    sys.h = h;
    sys.region = region;
    const std::size_t n = region.size();
    for (std::size_t s = 0; s < n; ++s) {
        const Point2 p = region[s], q = region[(s + 1) % n];
        const double len = dist(p, q);
        const long m = std::lround(len / h);
        if (m < 1 || std::abs(len - m * h) > kRelTol * std::max(len, 1.0))
            throw InvalidInput("boundary_system: region side length is not a multiple of h");
        for (long k = 0; k < m; ++k) {
            sys.vertices.push_back(p + (static_cast<double>(k) / m) * (q - p));
        }
    }
    const int nv = static_cast<int>(sys.vertices.size());
    for (int i = 0; i < nv; ++i) sys.edges.push_back({i, (i + 1) % nv});
    return sys;
}

std::pair<Triangulation2D, QualityReport> complete_triangulation(const EdgeSystem& sys,
                                                                 const MeshOptions& opts) {
    validate_system(sys);
    const double h = sys.h;
    const auto inside = opts.inside
                            ? opts.inside
                            : std::function<bool(Point2)>(
                                  [&sys](Point2 p) { return default_inside(sys.region, p); });

    DelaunayMesh dm(sys.vertices, BBox::of(sys.region));
    for (const auto& [a, b] : sys.edges) dm.constrain(a, b);

    const double area = polygon_area(sys.region);
    const long cap = static_cast<long>(opts.cap_factor * (area / (0.4 * h * h) + 64));
    dm.drain_created();
    std::vector<int> work;
    for (std::size_t t = 0; t < dm.tris().size(); ++t) {
        if (dm.tris()[t].alive) work.push_back(static_cast<int>(t));
    }
    // unrefinable triangles keyed by id + vertices (ids are recycled)
    std::map<int, std::array<int, 3>> unrefinable;
    long inserted = 0;
    const double r_limit = h * (1 + 1e-12);
    while (!work.empty()) {
        const int t = work.back();
        work.pop_back();
        if (t >= static_cast<int>(dm.tris().size()) || !dm.tris()[t].alive) continue;
        if (dm.touches_super(t)) continue;
        if (const auto it = unrefinable.find(t); it != unrefinable.end() && it->second == dm.tris()[t].v)
            continue;
        if (!inside(dm.centroid(t))) continue;
        if (dm.circumradius(t) <= r_limit) continue;
        const Point2 cc = dm.circumcenter(t);
        if (!inside(cc) || dm.segment_crosses_constraint(t, dm.centroid(t), cc) ||
            !dm.insert_refinement_point(cc, h)) {
            unrefinable[t] = dm.tris()[t].v;
            continue;
        }
        if (++inserted > cap)
            throw Error("complete_triangulation: refinement iteration cap exceeded");
        for (int nt : dm.drain_created()) work.push_back(nt);
    }

    std::vector<Point2> verts;
    std::vector<int> remap(dm.n_points(), -1);
    for (int i = 0; i < dm.n_input(); ++i) {
        remap[i] = static_cast<int>(verts.size());
        verts.push_back(sys.vertices[i]);
    }
    std::vector<std::array<int, 3>> faces;
    for (const auto& tr : dm.tris()) {
        if (!tr.alive) continue;
        if (dm.is_super(tr.v[0]) || dm.is_super(tr.v[1]) || dm.is_super(tr.v[2])) continue;
        const Point2 cen = (1.0 / 3.0) * (dm.point(tr.v[0]) + dm.point(tr.v[1]) + dm.point(tr.v[2]));
        if (!inside(cen)) continue;
        std::array<int, 3> f;
        for (int i = 0; i < 3; ++i) {
            int& m = remap[tr.v[i]];
            if (m < 0) {
                m = static_cast<int>(verts.size());
                verts.push_back(dm.point(tr.v[i]));
            }
            f[i] = m;
        }
        faces.push_back(f);
    }

    Triangulation2D tri = Triangulation2D::build(std::move(verts), std::move(faces));

    QualityReport rep = verify_quality(tri, h);
    rep.contains_input = true;
    for (std::size_t i = 0; i < sys.vertices.size(); ++i) {
        if (!(tri.vertex(static_cast<int>(i)) == sys.vertices[i])) {
            rep.contains_input = false;
            rep.violations.push_back("input vertex " + std::to_string(i) + " not preserved");
        }
    }
    for (const auto& [a, b] : sys.edges) {
        if (!tri.edge_between(a, b)) {
            rep.contains_input = false;
            rep.violations.push_back("input edge (" + std::to_string(a) + "," + std::to_string(b) +
                                     ") missing from output");
        }
    }
    return {std::move(tri), std::move(rep)};
}

QualityReport verify_quality(const Triangulation2D& tri, double h) {
    QualityReport rep;
    rep.contains_input = true;
    rep.edge_min = tri.n_edges() ? std::numeric_limits<double>::infinity() : 0.0;
    rep.angle_min = tri.n_faces() ? std::numeric_limits<double>::infinity() : 0.0;
    const double pi = 2 * std::asin(1.0);
    for (int e = 0; e < tri.n_edges(); ++e) {
        const auto& ed = tri.edge(e);
        const double len = dist(tri.vertex(ed.a), tri.vertex(ed.b));
        rep.edge_min = std::min(rep.edge_min, len);
        rep.edge_max = std::max(rep.edge_max, len);
        if (len < h * (1 - kRelTol) || len > 2 * h * (1 + kRelTol)) {
            rep.violations.push_back("edge (" + std::to_string(ed.a) + "," + std::to_string(ed.b) +
                                     ") length " + std::to_string(len) + " outside [h, 2h]");
        }
    }
    for (int f = 0; f < tri.n_faces(); ++f) {
        const auto& fc = tri.face(f);
        for (int c = 0; c < 3; ++c) {
            const Point2 p = tri.vertex(fc[c]);
            const Point2 u = tri.vertex(fc[(c + 1) % 3]) - p;
            const Point2 w = tri.vertex(fc[(c + 2) % 3]) - p;
            const double ang = std::atan2(std::abs(cross(u, w)), dot(u, w));
            rep.angle_min = std::min(rep.angle_min, ang);
            rep.angle_max = std::max(rep.angle_max, ang);
            if (ang < pi / 6 * (1 - kRelTol) || ang > 2 * pi / 3 * (1 + kRelTol)) {
                rep.violations.push_back("face " + std::to_string(f) + " angle " + std::to_string(ang) +
                                         " outside [pi/6, 2pi/3]");
            }
        }
    }
    return rep;
}

}  // namespace plcycle
