#include "doctest.h"

#include <sstream>

#include "plcycle/triangulation.hpp"
#include "support.hpp"

using namespace plcycle;

namespace {
// two CCW triangles forming the unit square, diagonal (1,0)-(0,1)
Triangulation2D unit_square_pair() {
    return Triangulation2D::build({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 3}, {1, 2, 3}});
}
}  // namespace

TEST_CASE("build_triangulation: two triangles sharing an edge") {
    const auto t = unit_square_pair();
    CHECK(t.n_vertices() == 4);
    CHECK(t.n_faces() == 2);
    CHECK(t.n_edges() == 5);
    int interior = 0;
    for (int e = 0; e < t.n_edges(); ++e) interior += t.edge_is_interior(e);
    CHECK(interior == 1);
    CHECK(t.interior_vertices().empty());
}

TEST_CASE("build_triangulation rejects bad input") {
    CHECK_THROWS_WITH_AS(Triangulation2D::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}),
                         doctest::Contains("face orientation"), InvalidInput);
    CHECK_THROWS_AS(Triangulation2D::build({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 5}}), InvalidInput);
    // non-manifold: three faces on one edge
    CHECK_THROWS_AS(Triangulation2D::build({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {-1, 0}},
                                           {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                    InvalidInput);
    // same orientation on both sides of a shared edge
    CHECK_THROWS_AS(Triangulation2D::build({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 1, 2}, {1, 0, 3}}),
                    InvalidInput);
}

TEST_CASE("3x3 lattice block counts and Euler relation") {
    const auto mesh = SquareMesh::block(0.5, 3, 3);
    const auto& t = mesh.triangulation();
    CHECK(t.n_vertices() == 16);
    CHECK(t.n_faces() == 18);
    CHECK(t.n_edges() == 33);
    CHECK(t.n_vertices() - t.n_edges() + t.n_faces() == 1);  // triangulated disk
    CHECK(t.interior_vertices().size() == 4);
    CHECK(t.total_area() == doctest::Approx(9 * 0.25));
}

TEST_CASE("fatness of lattice and equilateral meshes") {
    const auto mesh = SquareMesh::block(1.0, 3, 3);
    const auto s = fatness(mesh.triangulation());
    CHECK(s.theta_min == doctest::Approx(std::asin(1.0) / 2));  // pi/4
    CHECK(s.edge_max / s.edge_min == doctest::Approx(std::sqrt(2.0)));

    const double h = std::sqrt(3.0) / 2;
    const auto eq = Triangulation2D::build({{0, 0}, {1, 0}, {0.5, h}, {1.5, h}}, {{0, 1, 2}, {1, 3, 2}});
    CHECK(fatness(eq).theta_min == doctest::Approx(2 * std::asin(1.0) / 3));  // pi/3
}

TEST_CASE("rotated lattice meshes keep theta_min = pi/4") {
    for (double angle : {0.3, 0.7, 1.2}) {
        const auto mesh = SquareMesh::block(0.25, 4, 3, {0.2, -0.1}, angle);
        CHECK(fatness(mesh.triangulation()).theta_min == doctest::Approx(std::asin(1.0) / 2));
    }
}

TEST_CASE("vertex_star_ccw on the lattice matches the six-triangle neighborhood") {
    const auto mesh = SquareMesh::block(1.0, 2, 2);
    const auto& t = mesh.triangulation();
    const int center = mesh.triangulation_vertex(1, 1);
    REQUIRE(center >= 0);
    const auto star = t.vertex_star_ccw(center);
    CHECK(star.faces.size() == 6);
    // consecutive faces share the spoke edge, each face appears once
    std::set<int> uniq(star.faces.begin(), star.faces.end());
    CHECK(uniq.size() == 6);
    for (std::size_t i = 0; i < star.faces.size(); ++i) {
        const int spoke = star.spoke_targets[i];
        const auto& prev = t.face(star.faces[(i + star.faces.size() - 1) % star.faces.size()]);
        const auto& cur = t.face(star.faces[i]);
        CHECK(std::count(prev.begin(), prev.end(), spoke) == 1);
        CHECK(std::count(cur.begin(), cur.end(), spoke) == 1);
    }
    // CCW order: spoke directions rotate monotonically counterclockwise
    double prev_angle = 0;
    for (std::size_t i = 0; i < star.spoke_targets.size(); ++i) {
        const Point2 d = t.vertex(star.spoke_targets[i]) - t.vertex(center);
        const double ang = std::atan2(d.y, d.x);
        if (i > 0) {
            double delta = ang - prev_angle;
            while (delta <= 0) delta += 4 * std::asin(1.0);
            CHECK(delta < 4 * std::asin(1.0));
            CHECK(delta > 0);
        }
        prev_angle = ang;
    }
}

TEST_CASE("vertex_star_ccw: four-triangle fan and boundary error") {
    const auto t = Triangulation2D::build({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}},
                                          {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
    CHECK(t.vertex_star_ccw(0).faces.size() == 4);
    CHECK_THROWS_AS(t.vertex_star_ccw(1), InvalidInput);
}

TEST_CASE("square mesh regions: single cell") {
    const auto mesh = SquareMesh::block(1.0, 1, 1);
    const auto regs = square_mesh_regions(mesh);
    CHECK(regs.core.empty());
    CHECK(regs.crust.pieces().size() == 4);  // one centered square per corner vertex
    CHECK(regs.crust.area() == doctest::Approx(4 * 1.0));
    CHECK(regs.support.area() == doctest::Approx(1.0));
}

TEST_CASE("square mesh regions: 5x5 block") {
    const double e = 0.5;
    const auto mesh = SquareMesh::block(e, 5, 5);
    const auto regs = square_mesh_regions(mesh);
    // 16 interior vertices -> 16 centered squares
    CHECK(regs.core.pieces().size() == 16);
    CHECK(regs.core.area() == doctest::Approx(16 * e * e));
    CHECK(regs.core.area() <= regs.support.area());
    // direct enumeration oracle: core = [1.5e, 3.5e]^2
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5 * e, 5.5 * e);
    for (int i = 0; i < 2000; ++i) {
        const Point2 p{u(rng), u(rng)};
        const bool in_core_expected = p.x > 0.5 * e && p.x < 4.5 * e && p.y > 0.5 * e && p.y < 4.5 * e;
        if (std::abs(p.x - 0.5 * e) < 1e-9 || std::abs(p.x - 4.5 * e) < 1e-9 ||
            std::abs(p.y - 0.5 * e) < 1e-9 || std::abs(p.y - 4.5 * e) < 1e-9)
            continue;
        CHECK(regs.core.contains(p) == in_core_expected);
        // disjointness of core and crust
        if (in_core_expected) CHECK_FALSE(regs.crust.contains(p, -1e-12));
    }
    // coverage: support is inside core U crust
    for (int i = 0; i < 2000; ++i) {
        const Point2 p{u(rng), u(rng)};
        if (!regs.support.contains(p, -1e-9)) continue;
        CHECK((regs.core.contains(p, 1e-12) || regs.crust.contains(p, 1e-12)));
    }
}

TEST_CASE("square mesh support membership in world coordinates") {
    const auto mesh = SquareMesh::block(0.25, 3, 2, {1.0, 2.0}, 0.6);
    for (const auto& [i, j] : mesh.cells()) {
        const Point2 c = mesh.to_world(0.25 * (i + 0.5), 0.25 * (j + 0.5));
        CHECK(mesh.support_contains(c));
    }
    CHECK_FALSE(mesh.support_contains(mesh.to_world(-0.5, -0.5)));
}

TEST_CASE("triangulation OFF export shape") {
    std::ostringstream os;
    unit_square_pair().write_off(os);
    const std::string s = os.str();
    CHECK(s.substr(0, 3) == "OFF");
    CHECK(s.find("4 2 5") != std::string::npos);
}
