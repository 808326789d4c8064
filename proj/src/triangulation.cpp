#include "plcycle/triangulation.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace plcycle {

namespace {
std::string simplex_name(const char* kind, int i) {
    std::ostringstream os;
    os << kind << ' ' << i;
    return os.str();
}
}  // namespace

Triangulation2D Triangulation2D::build(std::vector<Point2> vertices,
                                       std::vector<std::array<int, 3>> faces, const Tolerances& tol) {
    Triangulation2D t;
    for (const Point2& p : vertices) {
        if (!finite(p)) throw InvalidInput("triangulation: non-finite vertex coordinate");
    }
    t.vertices_ = std::move(vertices);
    t.faces_ = std::move(faces);

    const int nv = t.n_vertices();
    const double diam = BBox::of(t.vertices_).diameter();
    const double tol_area = tol.len_for_diameter(diam) * std::max(diam, 1e-300);

    t.vertex_faces_.assign(nv, {});
    for (int f = 0; f < t.n_faces(); ++f) {
        const auto& [i, j, k] = t.faces_[f];
        if (i < 0 || j < 0 || k < 0 || i >= nv || j >= nv || k >= nv)
            throw InvalidInput("triangulation: vertex index out of range in " + simplex_name("face", f));
        if (i == j || j == k || i == k)
            throw InvalidInput("triangulation: repeated vertex in " + simplex_name("face", f));
        const double a2 = orient2d(t.vertices_[i], t.vertices_[j], t.vertices_[k]);
        if (a2 <= 2 * tol_area)
            throw InvalidInput("triangulation: face orientation (clockwise or degenerate) in " +
                               simplex_name("face", f));
        t.vertex_faces_[i].push_back(f);
        t.vertex_faces_[j].push_back(f);
        t.vertex_faces_[k].push_back(f);
    }

    // Edge table; each directed edge u->v may appear in at most one face.
    for (int f = 0; f < t.n_faces(); ++f) {
        for (int c = 0; c < 3; ++c) {
            const int u = t.faces_[f][c];
            const int v = t.faces_[f][(c + 1) % 3];
            const std::pair<int, int> key{std::min(u, v), std::max(u, v)};
            auto it = t.edge_index_.find(key);
            if (it == t.edge_index_.end()) {
                Edge e{key.first, key.second, -1, -1};
                it = t.edge_index_.emplace(key, static_cast<int>(t.edges_.size())).first;
                t.edges_.push_back(e);
            }
            Edge& e = t.edges_[it->second];
            int& slot = (u == e.a) ? e.left_face : e.right_face;
            if (slot >= 0)
                throw InvalidInput("triangulation: non-manifold or inconsistently oriented " +
                                   simplex_name("edge", it->second) + " (" + std::to_string(e.a) + "," +
                                   std::to_string(e.b) + ")");
            slot = f;
        }
    }

    t.vertex_boundary_.assign(nv, false);
    for (const Edge& e : t.edges_) {
        if (!e.interior()) {
            t.vertex_boundary_[e.a] = true;
            t.vertex_boundary_[e.b] = true;
        }
    }

    // Each vertex star must be a single fan (no pinch points).
    for (int v = 0; v < nv; ++v) {
        const auto& inc = t.vertex_faces_[v];
        if (inc.empty()) continue;
        std::map<int, int> next_by_target;  // CCW-outgoing spoke -> face
        for (int f : inc) {
            const auto& fc = t.faces_[f];
            const int pos = static_cast<int>(std::find(fc.begin(), fc.end(), v) - fc.begin());
            next_by_target[fc[(pos + 1) % 3]] = f;
        }
        // walk the fan from an arbitrary face
        std::set<int> seen;
        int cur = inc[0];
        // rewind to the clockwise-most face for boundary vertices
        for (std::size_t steps = 0; steps <= inc.size(); ++steps) {
            const auto& fc = t.faces_[cur];
            const int pos = static_cast<int>(std::find(fc.begin(), fc.end(), v) - fc.begin());
            const int cw_spoke = fc[(pos + 1) % 3];
            bool moved = false;
            for (int f : inc) {
                if (f == cur) continue;
                const auto& gc = t.faces_[f];
                const int gpos = static_cast<int>(std::find(gc.begin(), gc.end(), v) - gc.begin());
                if (gc[(gpos + 2) % 3] == cw_spoke) {
                    cur = f;
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            if (cur == inc[0]) break;  // closed fan
        }
        std::size_t count = 0;
        int walk = cur;
        while (true) {
            if (seen.count(walk)) break;
            seen.insert(walk);
            ++count;
            const auto& fc = t.faces_[walk];
            const int pos = static_cast<int>(std::find(fc.begin(), fc.end(), v) - fc.begin());
            const int ccw_spoke = fc[(pos + 2) % 3];
            auto it = next_by_target.find(ccw_spoke);
            if (it == next_by_target.end()) break;
            walk = it->second;
        }
        if (count != inc.size())
            throw InvalidInput("triangulation: pinched star at " + simplex_name("vertex", v));
    }

    return t;
}

std::optional<int> Triangulation2D::edge_between(int u, int v) const {
    auto it = edge_index_.find({std::min(u, v), std::max(u, v)});
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> Triangulation2D::interior_vertices() const {
    std::vector<int> out;
    for (int v = 0; v < n_vertices(); ++v) {
        if (!vertex_boundary_[v] && !vertex_faces_[v].empty()) out.push_back(v);
    }
    return out;
}

double Triangulation2D::face_area(int f) const {
    const auto& [i, j, k] = faces_[f];
    return 0.5 * orient2d(vertices_[i], vertices_[j], vertices_[k]);
}

Point2 Triangulation2D::face_centroid(int f) const {
    const auto& [i, j, k] = faces_[f];
    return (1.0 / 3.0) * (vertices_[i] + vertices_[j] + vertices_[k]);
}

double Triangulation2D::total_area() const {
    double a = 0.0;
    for (int f = 0; f < n_faces(); ++f) a += face_area(f);
    return a;
}

Triangulation2D::VertexStar Triangulation2D::vertex_star_ccw(int v) const {
    if (v < 0 || v >= n_vertices()) throw InvalidInput("vertex_star_ccw: index out of range");
    if (vertex_boundary_[v] || vertex_faces_[v].empty())
        throw InvalidInput("vertex_star_ccw: vertex " + std::to_string(v) + " is not interior");

    const auto& inc = vertex_faces_[v];
    // In a CCW face (v, u, w) the star continues CCW across the spoke v->w;
    // the next face is the one whose CW spoke is w.
    std::map<int, int> face_by_cw_spoke;
    for (int f : inc) {
        const auto& fc = faces_[f];
        const int pos = static_cast<int>(std::find(fc.begin(), fc.end(), v) - fc.begin());
        face_by_cw_spoke[fc[(pos + 1) % 3]] = f;
    }
    VertexStar star;
    int cur = *std::min_element(inc.begin(), inc.end());
    for (std::size_t i = 0; i < inc.size(); ++i) {
        star.faces.push_back(cur);
        const auto& fc = faces_[cur];
        const int pos = static_cast<int>(std::find(fc.begin(), fc.end(), v) - fc.begin());
        const int ccw_spoke = fc[(pos + 2) % 3];
        auto it = face_by_cw_spoke.find(ccw_spoke);
        if (it == face_by_cw_spoke.end())
            throw InternalError("vertex_star_ccw: broken fan at vertex " + std::to_string(v));
        star.spoke_targets.push_back(ccw_spoke);
        cur = it->second;
    }
    if (cur != star.faces.front())
        throw InternalError("vertex_star_ccw: fan does not close at vertex " + std::to_string(v));
    // spoke i sits between faces[i-1] and faces[i] (cyclically)
    std::rotate(star.spoke_targets.rbegin(), star.spoke_targets.rbegin() + 1, star.spoke_targets.rend());
    return star;
}

void Triangulation2D::write_off(std::ostream& os) const {
    os << "OFF\n" << n_vertices() << ' ' << n_faces() << ' ' << n_edges() << '\n';
    for (const Point2& p : vertices_) os << p.x << ' ' << p.y << " 0\n";
    for (const auto& f : faces_) os << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

FatnessStats fatness(const Triangulation2D& tri) {
    FatnessStats s;
    s.theta_min = 4.0;  // > pi
    s.edge_min = std::numeric_limits<double>::infinity();
    s.edge_max = 0.0;
    for (const auto& e : tri.edges()) {
        const double len = dist(tri.vertex(e.a), tri.vertex(e.b));
        s.edge_min = std::min(s.edge_min, len);
        s.edge_max = std::max(s.edge_max, len);
    }
    for (int f = 0; f < tri.n_faces(); ++f) {
        const auto& fc = tri.face(f);
        for (int c = 0; c < 3; ++c) {
            const Point2 p = tri.vertex(fc[c]);
            const Point2 u = tri.vertex(fc[(c + 1) % 3]) - p;
            const Point2 w = tri.vertex(fc[(c + 2) % 3]) - p;
            const double ang = std::atan2(std::abs(cross(u, w)), dot(u, w));
            if (ang < s.theta_min) {
                s.theta_min = ang;
                s.worst_face = f;
            }
        }
    }
    return s;
}

SquareMesh::SquareMesh(double size, Point2 origin, double axis_angle, std::set<std::pair<int, int>> cells)
    : size_(size), origin_(origin), angle_(axis_angle), cos_(std::cos(axis_angle)),
      sin_(std::sin(axis_angle)), cells_(std::move(cells)) {
    if (!(size_ > 0)) throw InvalidInput("SquareMesh: size must be positive");
    std::set<std::pair<int, int>> vset;
    for (const auto& [i, j] : cells_) {
        vset.insert({i, j});
        vset.insert({i + 1, j});
        vset.insert({i + 1, j + 1});
        vset.insert({i, j + 1});
    }
    lattice_vertices_.assign(vset.begin(), vset.end());
    for (std::size_t k = 0; k < lattice_vertices_.size(); ++k) {
        vertex_index_[lattice_vertices_[k]] = static_cast<int>(k);
    }
}

SquareMesh SquareMesh::block(double size, int nx, int ny, Point2 origin, double axis_angle) {
    std::set<std::pair<int, int>> cells;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) cells.insert({i, j});
    return SquareMesh(size, origin, axis_angle, std::move(cells));
}

Point2 SquareMesh::to_world(double mx, double my) const {
    return {origin_.x + cos_ * mx - sin_ * my, origin_.y + sin_ * mx + cos_ * my};
}

Point2 SquareMesh::to_mesh(Point2 world) const {
    const Point2 d = world - origin_;
    return {cos_ * d.x + sin_ * d.y, -sin_ * d.x + cos_ * d.y};
}

bool SquareMesh::support_contains(Point2 world, double rel_tol) const {
    const Point2 m = to_mesh(world);
    const double tol = rel_tol * size_;
    const double fx = m.x / size_, fy = m.y / size_;
    const int i0 = static_cast<int>(std::floor(fx - rel_tol)), i1 = static_cast<int>(std::floor(fx + rel_tol));
    const int j0 = static_cast<int>(std::floor(fy - rel_tol)), j1 = static_cast<int>(std::floor(fy + rel_tol));
    for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
            if (!cell_present(i, j)) continue;
            if (m.x >= size_ * i - tol && m.x <= size_ * (i + 1) + tol && m.y >= size_ * j - tol &&
                m.y <= size_ * (j + 1) + tol)
                return true;
        }
    }
    return false;
}

bool SquareMesh::lattice_vertex_interior(int i, int j) const {
    return cell_present(i, j) && cell_present(i - 1, j) && cell_present(i, j - 1) &&
           cell_present(i - 1, j - 1);
}

int SquareMesh::triangulation_vertex(int i, int j) const {
    auto it = vertex_index_.find({i, j});
    return it == vertex_index_.end() ? -1 : it->second;
}

const Triangulation2D& SquareMesh::triangulation() const { return *triangulation_ptr(); }

std::shared_ptr<const Triangulation2D> SquareMesh::triangulation_ptr() const {
    if (!tri_) {
        std::vector<Point2> verts;
        verts.reserve(lattice_vertices_.size());
        for (const auto& [i, j] : lattice_vertices_) verts.push_back(lattice_vertex(i, j));
        std::vector<std::array<int, 3>> faces;
        faces.reserve(2 * cells_.size());
        for (const auto& [i, j] : cells_) {
            const int v00 = triangulation_vertex(i, j);
            const int v10 = triangulation_vertex(i + 1, j);
            const int v11 = triangulation_vertex(i + 1, j + 1);
            const int v01 = triangulation_vertex(i, j + 1);
            // slope -1 diagonal in mesh coordinates: (i,j+1)-(i+1,j)
            faces.push_back({v00, v10, v01});
            faces.push_back({v10, v11, v01});
        }
        tri_ = std::make_shared<Triangulation2D>(Triangulation2D::build(std::move(verts), std::move(faces)));
    }
    return tri_;
}

SquareMeshRegions SquareMesh::regions() const { return square_mesh_regions(*this); }

SquareMeshRegions square_mesh_regions(const SquareMesh& mesh) {
    SquareMeshRegions out;
    const double e = mesh.size();
    auto square_piece = [&](double cx, double cy, double half) {
        std::vector<Point2> p{mesh.to_world(cx - half, cy - half), mesh.to_world(cx + half, cy - half),
                              mesh.to_world(cx + half, cy + half), mesh.to_world(cx - half, cy + half)};
        return p;
    };

    for (const auto& [i, j] : mesh.cells()) {
        out.support.add_piece(square_piece(e * (i + 0.5), e * (j + 0.5), 0.5 * e));
        out.interior.add_piece(square_piece(e * (i + 0.5), e * (j + 0.5), 0.5 * e));
    }

    // Core: eps-squares centered at interior vertices. Crust: eps-squares
    // centered at vertices whose square meets the support boundary, i.e. at
    // non-interior vertices (interior vertices sit at distance >= eps from
    // the boundary, so their squares never reach it).
    for (const auto& [i, j] : mesh.lattice_vertices()) {
        if (mesh.lattice_vertex_interior(i, j)) {
            out.core.add_piece(square_piece(e * i, e * j, 0.5 * e));
        } else {
            out.crust.add_piece(square_piece(e * i, e * j, 0.5 * e));
        }
    }
    return out;
}

}  // namespace plcycle
