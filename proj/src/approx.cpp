#include "plcycle/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace plcycle {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kPi = 2 * std::asin(1.0);
}  // namespace

double mass_integrand(const SmoothFunction& f, Point2 p) {
    const SymMatrix2 h = f.hessian(p);
    return 1.0 + 2.0 * kSqrt2 * hessian_norm(h) + std::abs(hessian_det(h));
}

double integrate_over_convex_polygon(const std::function<double(Point2)>& g,
                                     std::span<const Point2> polygon, double rel_tol) {
    if (polygon.size() < 3) return 0.0;
    Point2 c{0, 0};
    for (const Point2& p : polygon) c = c + p;
    c = (1.0 / static_cast<double>(polygon.size())) * c;

    double prev = 0.0;
    for (int level = 0;; ++level) {
        const int nsub = 1 << level;
        double total = 0.0;
        for (std::size_t s = 0; s < polygon.size(); ++s) {
            const Point2 a = c;
            const Point2 b = polygon[s];
            const Point2 d = polygon[(s + 1) % polygon.size()];
            const double area = 0.5 * orient2d(a, b, d);
            if (area == 0.0) continue;
            double sum = 0.0;
            for (int i = 0; i < nsub; ++i) {
                for (int jj = 0; jj < nsub - i; ++jj) {
                    const double u0 = static_cast<double>(i) / nsub, v0 = static_cast<double>(jj) / nsub;
                    const double u1 = static_cast<double>(i + 1) / nsub, v1 = static_cast<double>(jj + 1) / nsub;
                    sum += g(a + ((2 * u0 + u1) / 3.0) * (b - a) + ((2 * v0 + v1) / 3.0) * (d - a));
                    if (jj < nsub - i - 1)
                        sum += g(a + ((2 * u1 + u0) / 3.0) * (b - a) + ((2 * v1 + v0) / 3.0) * (d - a));
                }
            }
            total += sum * area / (static_cast<double>(nsub) * nsub);
        }
        if (level > 0) {
            const double denom = std::max({std::abs(total), std::abs(prev), 1e-12});
            if (std::abs(total - prev) <= rel_tol * denom || level >= 9) return total;
        }
        prev = total;
    }
}

std::vector<std::pair<int, int>> build_wn(const std::vector<Point2>& V, int n) {
    std::vector<std::pair<int, int>> squares;
    if (V.size() < 3) return squares;
    const BBox box = BBox::of(V);
    const double L = 1.0 / n;
    const int a0 = static_cast<int>(std::floor(box.xmin * n)) - 1;
    const int a1 = static_cast<int>(std::ceil(box.xmax * n)) + 1;
    const int b0 = static_cast<int>(std::floor(box.ymin * n)) - 1;
    const int b1 = static_cast<int>(std::ceil(box.ymax * n)) + 1;
    const double area_tol = 1e-12 * L * L;
    for (int a = a0; a <= a1; ++a) {
        for (int b = b0; b <= b1; ++b) {
            const std::array<Point2, 4> sq{Point2{a * L, b * L}, Point2{(a + 1) * L, b * L},
                                           Point2{(a + 1) * L, (b + 1) * L}, Point2{a * L, (b + 1) * L}};
            const auto clipped = clip_polygon_convex(sq, V);
            if (clipped.size() >= 3 && polygon_area(clipped) > area_tol) squares.emplace_back(a, b);
        }
    }
    return squares;
}

namespace {

// Exact-keyed builder for the grid part of the edge system: every vertex of
// the subdivided square grid lies on the 1/(n j) lattice.
struct SystemBuilder {
    int n, j;
    std::map<std::pair<long, long>, int> grid_vertex;  // lattice key -> index
    std::vector<Point2> vertices;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> edge_set;

    int grid_point(long gx, long gy) {
        const auto key = std::make_pair(gx, gy);
        auto it = grid_vertex.find(key);
        if (it != grid_vertex.end()) return it->second;
        const int idx = static_cast<int>(vertices.size());
        vertices.push_back({static_cast<double>(gx) / (static_cast<double>(n) * j),
                            static_cast<double>(gy) / (static_cast<double>(n) * j)});
        grid_vertex.emplace(key, idx);
        return idx;
    }

    int free_point(Point2 p) {
        vertices.push_back(p);
        return static_cast<int>(vertices.size()) - 1;
    }

    void add_edge(int u, int v) {
        const auto key = std::minmax(u, v);
        if (edge_set.insert({key.first, key.second}).second) edges.push_back({u, v});
    }

    // subdivided edge between lattice points (j steps)
    void add_grid_side(long ax, long ay, long bx, long by) {
        const long dx = (bx - ax) / j, dy = (by - ay) / j;
        for (int k = 0; k < j; ++k) {
            add_edge(grid_point(ax + k * dx, ay + k * dy), grid_point(ax + (k + 1) * dx, ay + (k + 1) * dy));
        }
    }
};

// Union boundary polygon of a set of lattice squares (single loop; the
// square sets we build are simply connected). Vertices in CCW order.
std::vector<Point2> squares_outline(const std::vector<std::pair<int, int>>& squares, int n) {
    std::set<std::pair<int, int>> cells(squares.begin(), squares.end());
    // boundary directed edges: cell edges without a neighbor, oriented CCW
    std::map<std::pair<int, int>, std::pair<int, int>> next;  // corner -> corner (lattice coords)
    for (const auto& [a, b] : cells) {
        if (!cells.count({a, b - 1})) next[{a, b}] = {a + 1, b};          // bottom, rightward
        if (!cells.count({a + 1, b})) next[{a + 1, b}] = {a + 1, b + 1};  // right, upward
        if (!cells.count({a, b + 1})) next[{a + 1, b + 1}] = {a, b + 1};  // top, leftward
        if (!cells.count({a - 1, b})) next[{a, b + 1}] = {a, b};          // left, downward
    }
    std::vector<Point2> poly;
    if (next.empty()) return poly;
    const auto start = next.begin()->first;
    auto cur = start;
    const double L = 1.0 / n;
    std::size_t guard = 0;
    do {
        poly.push_back({cur.first * L, cur.second * L});
        const auto it = next.find(cur);
        if (it == next.end()) throw InternalError("squares_outline: open boundary chain");
        cur = it->second;
        if (++guard > next.size() + 4) throw InternalError("squares_outline: boundary is not a single loop");
    } while (cur != start);
    // merge collinear runs
    std::vector<Point2> merged;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2 prev = poly[(i + m - 1) % m], here = poly[i], nxt = poly[(i + 1) % m];
        if (std::abs(orient2d(prev, here, nxt)) > 1e-15) merged.push_back(here);
    }
    return merged;
}

double taylor_bracket(double eps, double r0, double omega, double hnorm_x0) {
    const double e2 = omega * r0 * r0 / (eps * eps);
    return 12 * kSqrt2 * e2 + 24 * hnorm_x0 * e2 + 24 * e2 * e2 + 2 * omega * kSqrt2 +
           4 * hnorm_x0 * omega + 2 * omega * omega;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    if (cfg.n < 2 || cfg.j < 2) throw InvalidInput("pipeline: need n >= 2 and j >= 2");
    if (cfg.V.size() < 3) throw InvalidInput("pipeline: V polygon needs >= 3 vertices");

    PipelineResult res;
    res.n = cfg.n;
    res.j = cfg.j;
    const int n = cfg.n, j = cfg.j;
    const double L = 1.0 / n;
    const double eps = L / j;

    res.wn_squares = build_wn(cfg.V, n);
    if (res.wn_squares.empty()) throw InvalidInput("pipeline: W_n is empty");
    std::set<std::pair<int, int>> wn_set(res.wn_squares.begin(), res.wn_squares.end());

    // per-square aligned meshes
    std::vector<SquareMesh> meshes;
    meshes.reserve(res.wn_squares.size());
    for (const auto& [a, b] : res.wn_squares) {
        const Point2 corner{a * L, b * L};
        const Point2 center = corner + Point2{0.5 * L, 0.5 * L};
        const double angle = cfg.forced_axis_angle ? *cfg.forced_axis_angle
                                                   : hessian_eigen_angle(cfg.f.hessian(center));
        meshes.push_back(aligned_square_mesh(corner, L, j, angle));
    }

    // edge system: full subdivided grid + every mesh vertex/edge
    SystemBuilder sb{n, j, {}, {}, {}, {}};
    for (const auto& [a, b] : res.wn_squares) {
        const long gx = static_cast<long>(a) * j, gy = static_cast<long>(b) * j;
        sb.add_grid_side(gx, gy, gx + j, gy);
        sb.add_grid_side(gx + j, gy, gx + j, gy + j);
        sb.add_grid_side(gx + j, gy + j, gx, gy + j);
        sb.add_grid_side(gx, gy + j, gx, gy);
    }
    for (const SquareMesh& mesh : meshes) {
        if (mesh.empty()) continue;
        std::map<std::pair<int, int>, int> local;
        for (const auto& [vi, vj] : mesh.lattice_vertices()) {
            local[{vi, vj}] = sb.free_point(mesh.lattice_vertex(vi, vj));
        }
        for (const auto& [ci, cj] : mesh.cells()) {
            const int v00 = local[{ci, cj}], v10 = local[{ci + 1, cj}];
            const int v11 = local[{ci + 1, cj + 1}], v01 = local[{ci, cj + 1}];
            sb.add_edge(v00, v10);
            sb.add_edge(v10, v11);
            sb.add_edge(v11, v01);
            sb.add_edge(v01, v00);
            sb.add_edge(v01, v10);  // slope -1 diagonal in mesh frame
        }
    }

    EdgeSystem sys;
    sys.h = eps;
    sys.region = squares_outline(res.wn_squares, n);
    sys.vertices = std::move(sb.vertices);
    sys.edges = std::move(sb.edges);

    MeshOptions mopts;
    mopts.inside = [n, wn_set](Point2 p) {
        const int a = static_cast<int>(std::floor(p.x * n));
        const int b = static_cast<int>(std::floor(p.y * n));
        return wn_set.count({a, b}) != 0;
    };
    auto [tri, report] = complete_triangulation(sys, mopts);
    res.mesh_report = std::move(report);
    res.tri = std::make_shared<Triangulation2D>(std::move(tri));

    res.pl = PLFunction::interpolate(cfg.f, res.tri);
    CycleOptions copts;
    copts.tol = cfg.tol;
    res.cycle = build_cycle(*res.pl, copts);

    // regions
    for (const auto& [a, b] : res.wn_squares) {
        res.Wn.add_piece({{a * L, b * L}, {(a + 1) * L, b * L}, {(a + 1) * L, (b + 1) * L}, {a * L, (b + 1) * L}});
    }
    res.area_wn = static_cast<double>(res.wn_squares.size()) * L * L;

    for (const SquareMesh& mesh : meshes) {
        if (mesh.empty()) continue;
        const double e = mesh.size();
        for (const auto& [vi, vj] : mesh.lattice_vertices()) {
            if (mesh.lattice_vertex_interior(vi, vj)) {
                res.Vnj.add_piece({mesh.to_world(e * vi - 0.5 * e, e * vj - 0.5 * e),
                                   mesh.to_world(e * vi + 0.5 * e, e * vj - 0.5 * e),
                                   mesh.to_world(e * vi + 0.5 * e, e * vj + 0.5 * e),
                                   mesh.to_world(e * vi - 0.5 * e, e * vj + 0.5 * e)});
            } else {
                // crust square clipped to the support: quadrants toward the
                // present cells (keeps Z pieces interior-disjoint)
                const std::pair<int, int> quads[4] = {{vi, vj}, {vi - 1, vj}, {vi - 1, vj - 1}, {vi, vj - 1}};
                for (const auto& [qi, qj] : quads) {
                    if (!mesh.cell_present(qi, qj)) continue;
                    const double x0 = e * vi + (qi == vi ? 0.0 : -0.5 * e);
                    const double y0 = e * vj + (qj == vj ? 0.0 : -0.5 * e);
                    res.Znj.add_piece({mesh.to_world(x0, y0), mesh.to_world(x0 + 0.5 * e, y0),
                                       mesh.to_world(x0 + 0.5 * e, y0 + 0.5 * e), mesh.to_world(x0, y0 + 0.5 * e)});
                }
            }
        }
    }
    // plus every completed-triangulation face outside all mesh supports
    {
        std::map<std::pair<int, int>, const SquareMesh*> mesh_of;
        for (std::size_t i = 0; i < meshes.size(); ++i) mesh_of[res.wn_squares[i]] = &meshes[i];
        for (int f = 0; f < res.tri->n_faces(); ++f) {
            const Point2 cen = res.tri->face_centroid(f);
            const int a = static_cast<int>(std::floor(cen.x * n));
            const int b = static_cast<int>(std::floor(cen.y * n));
            const auto it = mesh_of.find({a, b});
            const SquareMesh* mesh = it == mesh_of.end() ? nullptr : it->second;
            if (mesh && !mesh->empty() && mesh->support_contains(cen)) continue;
            const auto& fc = res.tri->face(f);
            res.Znj.add_piece({res.tri->vertex(fc[0]), res.tri->vertex(fc[1]), res.tri->vertex(fc[2])});
        }
    }
    res.area_vnj = res.Vnj.area();
    res.area_znj = res.Znj.area();

    PolygonalSet vset = PolygonalSet::from_convex(cfg.V);
    res.mass_V = restricted_mass(res.cycle, vset);
    res.mass_Vnj = restricted_mass(res.cycle, res.Vnj);
    res.mass_Znj = restricted_mass(res.cycle, res.Znj);

    res.rhs_integral =
        integrate_over_convex_polygon([&](Point2 p) { return mass_integrand(cfg.f, p); }, cfg.V, 1e-6);

    // sup |H| over U' (bbox of V expanded by the margin), sampled densely
    {
        const BBox ub = BBox::of(cfg.V).expanded(cfg.margin);
        const double spacing = std::min(1e-2, eps / 4);
        const int sx = std::max(2, static_cast<int>((ub.xmax - ub.xmin) / spacing));
        const int sy = std::max(2, static_cast<int>((ub.ymax - ub.ymin) / spacing));
        double sup = 0.0;
        for (int i = 0; i <= sx; ++i) {
            for (int k = 0; k <= sy; ++k) {
                const Point2 p{ub.xmin + (ub.xmax - ub.xmin) * i / sx, ub.ymin + (ub.ymax - ub.ymin) * k / sy};
                sup = std::max(sup, hessian_norm(cfg.f.hessian(p)));
            }
        }
        res.sup_hessian_norm = sup * 1.01;
    }
    {
        const double Theta = kPi / 6, k = 0.5;
        const double C = 48 * kPi * kPi / (k * k * Theta * std::sin(Theta));
        res.crude_bound_Z =
            C * res.area_znj * (1 + res.sup_hessian_norm + res.sup_hessian_norm * res.sup_hessian_norm);
    }

    // Taylor slack: per square, with x0 = center, r0 = half-diagonal,
    // omega sampled over the square (x 1.05)
    {
        const double r0 = L / kSqrt2;
        double slack = 0.0;
        for (std::size_t i = 0; i < meshes.size(); ++i) {
            const SquareMesh& mesh = meshes[i];
            if (mesh.empty()) continue;
            const auto& [a, b] = res.wn_squares[i];
            const Point2 corner{a * L, b * L};
            const Point2 center = corner + Point2{0.5 * L, 0.5 * L};
            const SymMatrix2 h0 = cfg.f.hessian(center);
            double omega = 0.0;
            const int ns = 12;
            for (int ii = 0; ii <= ns; ++ii) {
                for (int kk = 0; kk <= ns; ++kk) {
                    const Point2 p{corner.x + L * ii / ns, corner.y + L * kk / ns};
                    const SymMatrix2 hp = cfg.f.hessian(p);
                    omega = std::max(omega, hessian_norm({hp.xx - h0.xx, hp.xy - h0.xy, hp.yy - h0.yy}));
                }
            }
            omega *= 1.05;
            double core_area = 0.0;
            for (const auto& [vi, vj] : mesh.lattice_vertices()) {
                if (mesh.lattice_vertex_interior(vi, vj)) core_area += eps * eps;
            }
            slack += core_area * taylor_bracket(eps, r0, omega, hessian_norm(h0));
        }
        res.taylor_slack = slack;
    }

    res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

PerturbationReport perturbation_bounds(const std::function<double(Point2)>& f,
                                       const std::function<double(Point2)>& g, const SquareMesh& mesh) {
    PerturbationReport rep;
    if (mesh.empty()) return rep;
    const double eps = mesh.size();
    auto tri = mesh.triangulation_ptr();

    std::vector<double> fv(tri->n_vertices()), gv(tri->n_vertices());
    double sup = 0.0;
    for (int v = 0; v < tri->n_vertices(); ++v) {
        fv[v] = f(tri->vertex(v));
        gv[v] = g(tri->vertex(v));
        sup = std::max(sup, std::abs(fv[v] - gv[v]));
    }
    // sample inside faces as well: the bounds use sup over the support
    for (int fi = 0; fi < tri->n_faces(); ++fi) {
        const auto& fc = tri->face(fi);
        const Point2 a = tri->vertex(fc[0]), b = tri->vertex(fc[1]), c = tri->vertex(fc[2]);
        for (int s = 0; s < 6; ++s) {
            const double u = (s % 3 + 1) / 4.0, w = (s / 3 + 1) / 4.0;
            if (u + w >= 1) continue;
            const Point2 p = a + u * (b - a) + w * (c - a);
            sup = std::max(sup, std::abs(f(p) - g(p)));
        }
    }
    rep.sup_diff = sup;
    if (sup == 0.0) return rep;

    const PLFunction pf = PLFunction::from_values(tri, fv);
    const PLFunction pg = PLFunction::from_values(tri, gv);

    for (int fi = 0; fi < tri->n_faces(); ++fi) {
        const double lhs = dist(pf.face_gradient(fi), pg.face_gradient(fi));
        rep.ratio_gradient = std::max(rep.ratio_gradient, lhs / (4.0 / eps * sup));
    }

    for (int e = 0; e < tri->n_edges(); ++e) {
        const auto& ed = tri->edge(e);
        if (!ed.interior()) continue;
        const double len = dist(tri->vertex(ed.a), tri->vertex(ed.b));
        const double mf = len * dist(pf.face_gradient(ed.left_face), pf.face_gradient(ed.right_face));
        const double mg = len * dist(pg.face_gradient(ed.left_face), pg.face_gradient(ed.right_face));
        rep.ratio_d1 = std::max(rep.ratio_d1, std::abs(mf - mg) / (8.0 * kSqrt2 * sup));
    }

    for (int v : tri->interior_vertices()) {
        const auto star = tri->vertex_star_ccw(v);
        std::vector<Point2> loop_f, loop_g;
        for (int fc : star.faces) {
            loop_f.push_back(pf.face_gradient(fc));
            loop_g.push_back(pg.face_gradient(fc));
        }
        double delta0_g = 0.0;
        for (std::size_t i = 0; i < loop_g.size(); ++i)
            for (std::size_t k = i + 1; k < loop_g.size(); ++k)
                delta0_g = std::max(delta0_g, dist(loop_g[i], loop_g[k]));

        // difference current: forward f-loop concatenated with reversed
        // g-loop (connectors cancel)
        std::vector<Point2> concat = loop_f;
        concat.push_back(loop_f.front());
        concat.push_back(loop_g.back());
        for (std::size_t i = loop_g.size(); i-- > 0;) concat.push_back(loop_g[i]);
        // closing segment returns to loop_f.front() through loop_g.back()
        concat.push_back(loop_g.back());

        std::vector<OrientedSegment> segs;
        for (std::size_t i = 0; i < concat.size(); ++i) {
            const Point2 a = concat[i], b = concat[(i + 1) % concat.size()];
            if (dist(a, b) > 0) segs.push_back({a, b});
        }
        const double tol_len = 1e-12 * std::max(BBox::of(concat).diameter(), 1e-300);
        const auto region = arrange_with_winding_oracle(
            segs,
            [&](Point2 q) { return winding_number(loop_f, q) - winding_number(loop_g, q); }, tol_len);
        const double lhs = region.mass();
        const double rhs = 48.0 / eps * sup * delta0_g + 96.0 / (eps * eps) * sup * sup;
        if (rhs > 0) rep.ratio_d0 = std::max(rep.ratio_d0, lhs / rhs);
    }
    return rep;
}

std::pair<double, double> triangle_symm_diff_bound(Point2 P, Point2 Q, Point2 R, Point2 Rp) {
    const std::array<Point2, 3> t1{P, Q, R}, t2{P, Q, Rp};
    std::vector<OrientedSegment> segs;
    for (int i = 0; i < 3; ++i) {
        segs.push_back({t1[i], t1[(i + 1) % 3]});
        segs.push_back({t2[i], t2[(i + 1) % 3]});
    }
    std::vector<Point2> all{P, Q, R, Rp};
    const double tol_len = 1e-12 * std::max(BBox::of(all).diameter(), 1e-300);
    const auto region = arrange_with_winding_oracle(
        segs, [&](Point2 q) { return winding_number(t1, q) - winding_number(t2, q); }, tol_len);
    const double diam = std::max({dist(P, Q), dist(Q, R), dist(P, R)});
    return {region.mass(), dist(R, Rp) * diam};
}

TaylorBoundResult taylor_core_bound(const SmoothFunction& f, const SquareMesh& mesh, Point2 x0, double r0,
                                    double omega) {
    if (mesh.empty()) throw InvalidInput("taylor_core_bound: empty mesh");
    const double eps = mesh.size();
    const SymMatrix2 h0 = f.hessian(x0);
    const double hn0 = hessian_norm(h0);

    // preconditions: support within B(x0, r0); axes aligned with the
    // eigenvectors of H_f(x0); sampled oscillation below omega
    auto tri = mesh.triangulation_ptr();
    for (const Point2& v : tri->vertices()) {
        if (dist(v, x0) > r0 * (1 + 1e-9))
            throw InvalidInput("taylor_core_bound: mesh support not inside B(x0, r0)");
    }
    {
        const double scale = std::max({std::abs(h0.xx), std::abs(h0.yy), std::abs(h0.xy), 1e-300});
        const bool isotropic = std::abs(h0.xy) <= 1e-10 * scale && std::abs(h0.xx - h0.yy) <= 1e-10 * scale;
        if (!isotropic) {
            const double want = hessian_eigen_angle(h0);
            const double have = std::fmod(std::fmod(mesh.axis_angle(), kPi / 2) + kPi / 2, kPi / 2);
            const double diff = std::min(std::abs(want - have), kPi / 2 - std::abs(want - have));
            if (diff > 1e-8) throw InvalidInput("taylor_core_bound: mesh axes not eigen-aligned");
        }
    }
    for (const Point2& v : tri->vertices()) {
        for (int s = 0; s < 4; ++s) {
            const Point2 p = v + 0.23 * eps * Point2{std::cos(s * 1.7), std::sin(s * 1.7)};
            if (dist(p, x0) > r0) continue;
            const SymMatrix2 hp = f.hessian(p);
            const SymMatrix2 d{hp.xx - h0.xx, hp.xy - h0.xy, hp.yy - h0.yy};
            if (hessian_norm(d) >= omega)
                throw InvalidInput("taylor_core_bound: sampled Hessian oscillation exceeds omega");
        }
    }

    const PLFunction p = PLFunction::interpolate(f, tri);
    const GradientCycle c = build_cycle(p);
    const SquareMeshRegions regions = square_mesh_regions(mesh);

    TaylorBoundResult out;
    out.lhs = restricted_mass(c, regions.core).total();
    double integral = 0.0;
    for (const auto& piece : regions.core.pieces()) {
        integral += integrate_over_convex_polygon([&](Point2 q) { return mass_integrand(f, q); }, piece, 1e-7);
    }
    out.integral_term = integral;
    out.slack_term = regions.core.area() * taylor_bracket(eps, r0, omega, hn0);
    out.rhs = out.integral_term + out.slack_term;
    return out;
}

CrudeBoundResult crude_bound(const SmoothFunction& f, std::shared_ptr<const Triangulation2D> tri,
                             double Theta, double k, double sample_spacing) {
    CrudeBoundResult out;
    out.stats = fatness(*tri);
    if (out.stats.theta_min < Theta * (1 - 1e-9))
        throw InvalidInput("crude_bound: fatness precondition violated by face " +
                           std::to_string(out.stats.worst_face) + " (min angle " +
                           std::to_string(out.stats.theta_min) + " < Theta)");
    if (out.stats.edge_min / out.stats.edge_max < k * (1 - 1e-9))
        throw InvalidInput("crude_bound: edge-ratio precondition violated (m/M = " +
                           std::to_string(out.stats.edge_min / out.stats.edge_max) + " < k)");

    const double spacing = sample_spacing > 0 ? sample_spacing : std::min(1e-2, out.stats.edge_min / 4);
    const BBox box = tri->bbox();
    const int sx = std::max(2, static_cast<int>((box.xmax - box.xmin) / spacing));
    const int sy = std::max(2, static_cast<int>((box.ymax - box.ymin) / spacing));
    double sup = 0.0;
    for (int i = 0; i <= sx; ++i) {
        for (int j = 0; j <= sy; ++j) {
            const Point2 p{box.xmin + (box.xmax - box.xmin) * i / sx, box.ymin + (box.ymax - box.ymin) * j / sy};
            sup = std::max(sup, hessian_norm(f.hessian(p)));
        }
    }
    out.sup_norm = sup * 1.01;

    const PLFunction p = PLFunction::interpolate(f, tri);
    out.mass = build_cycle(p).masses.total();
    out.C = 48 * kPi * kPi / (k * k * Theta * std::sin(Theta));
    out.bound = out.C * tri->total_area() * (1 + out.sup_norm + out.sup_norm * out.sup_norm);
    return out;
}

}  // namespace plcycle
