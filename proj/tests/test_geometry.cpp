#include "doctest.h"

#include "plcycle/geometry.hpp"
#include "support.hpp"

using namespace plcycle;
using namespace plcycle::testsupport;

namespace {
ClosedPolyline poly(std::initializer_list<Point2> pts) {
    return ClosedPolyline::from_vertices(std::vector<Point2>(pts));
}
}  // namespace

TEST_CASE("signed_area basics") {
    CHECK(signed_area(poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(1.0));
    CHECK(signed_area(poly({{0, 1}, {1, 1}, {1, 0}, {0, 0}})) == doctest::Approx(-1.0));

    // forward-then-backward traversal cancels
    const auto fb = poly({{0, 0}, {2, 0}, {1, 2}, {2, 0}});
    CHECK(signed_area(fb) == doctest::Approx(0.0));

    // the degenerate-quadratic hexagon has zero algebraic area
    const auto hex = poly({{1, 1}, {-3, 1}, {-1, 3}, {-1, -1}, {3, -1}, {1, -3}});
    CHECK(signed_area(hex) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("polyline validation") {
    CHECK_THROWS_AS(poly({{0, 0}, {1, 1}}), InvalidInput);
    CHECK_THROWS_AS(poly({{0, 0}, {0, 0}, {0, 0}, {0, 0}}), InvalidInput);
    CHECK_THROWS_AS(poly({{0, 0}, {1, std::nan("")}, {1, 1}}), InvalidInput);
    // consecutive duplicates collapse
    const auto p = poly({{0, 0}, {0, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 1}, {0, 0}});
    CHECK(p.size() == 4);
}

TEST_CASE("winding numbers by ray crossing") {
    const auto sq = poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(winding_number(sq, {0.5, 0.5}) == 1);
    CHECK(winding_number(sq, {1.5, 0.5}) == 0);
    CHECK(winding_number(sq.reversed(), {0.5, 0.5}) == -1);

    // doubly wound square
    const auto twice = poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(winding_number(twice, {0.5, 0.5}) == 2);
}

TEST_CASE("arrange_and_wind: unit square") {
    const auto r = arrange_and_wind(poly({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].multiplicity == 1);
    CHECK(r.cells[0].area == doctest::Approx(1.0));
    CHECK(r.mass() == doctest::Approx(1.0));
    CHECK(r.algebraic_area() == doctest::Approx(1.0));
}

TEST_CASE("arrange_and_wind: bowtie splits into opposite cells") {
    const auto r = arrange_and_wind(poly({{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
    REQUIRE(r.cells.size() == 2);
    int plus = 0, minus = 0;
    for (const auto& c : r.cells) {
        CHECK(c.area == doctest::Approx(1.0));
        if (c.multiplicity == 1) ++plus;
        if (c.multiplicity == -1) ++minus;
    }
    CHECK(plus == 1);
    CHECK(minus == 1);
    CHECK(r.mass() == doctest::Approx(2.0));
    CHECK(r.algebraic_area() == doctest::Approx(0.0));
    // independent oracle at sample points
    CHECK(r.multiplicity_at({0.5, 1.0}) == winding_number(poly({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), {0.5, 1.0}));
}

TEST_CASE("arrange_and_wind: badly aligned quadratic hexagon has mass 8") {
    const auto hex = poly({{1, 1}, {-3, 1}, {-1, 3}, {-1, -1}, {3, -1}, {1, -3}});
    const auto r = arrange_and_wind(hex);
    CHECK(r.mass() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.algebraic_area() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("degenerate rectangle from axis-aligned quadratic") {
    // b = 0 star polyline collapses to a rectangle; orientation carries sign
    const double a = 1.5, c = 0.5;
    auto g = hexagon_gradients(a, 0, c);
    const auto r = arrange_and_wind(ClosedPolyline::from_vertices(g));
    CHECK(r.mass() == doctest::Approx(4 * a * c));
    CHECK(r.algebraic_area() == doctest::Approx(4 * a * c));

    auto g2 = hexagon_gradients(a, 0, -c);
    const auto r2 = arrange_and_wind(ClosedPolyline::from_vertices(g2));
    CHECK(r2.mass() == doctest::Approx(4 * a * c));
    CHECK(r2.algebraic_area() == doctest::Approx(-4 * a * c));
}

TEST_CASE("collinear polylines give empty regions") {
    const auto r = arrange_and_wind(poly({{0, 0}, {1, 0}, {2, 0}, {1, 0}}));
    CHECK(r.empty());
    CHECK(r.mass() == 0.0);
}

TEST_CASE("algebraic area of the arrangement equals the shoelace area") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> nd(3, 9);
        const int n = nd(rng);
        std::vector<Point2> pts;
        for (int i = 0; i < n; ++i) pts.push_back(random_point(rng, -2, 2));
        ClosedPolyline p = ClosedPolyline::from_vertices(pts);
        const auto r = arrange_and_wind(p);
        CHECK(r.algebraic_area() == doctest::Approx(signed_area(p)).epsilon(1e-9));
        CHECK(r.mass() >= std::abs(r.algebraic_area()) - 1e-12);
    }
}

TEST_CASE("arrangement multiplicities agree with the winding oracle at random points") {
    std::mt19937_64 rng(11);
    const auto hexv = hexagon_gradients(2, 1, 3);
    ClosedPolyline hex = ClosedPolyline::from_vertices(hexv);
    const auto r = arrange_and_wind(hex);
    int tested = 0;
    while (tested < 150) {
        const Point2 p = random_point(rng, -4, 4);
        // skip points too close to any segment of the polyline
        bool near = false;
        for (const auto& s : hex.segments()) {
            const Point2 d = s.end - s.start;
            const double t = std::clamp(dot(p - s.start, d) / dot(d, d), 0.0, 1.0);
            if (dist(p, s.start + t * d) < 1e-6) near = true;
        }
        if (near) continue;
        ++tested;
        CHECK(r.multiplicity_at(p) == winding_number(hex, p));
    }
}

TEST_CASE("reversal negates multiplicities and algebraic area, preserves mass") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point2> pts;
        for (int i = 0; i < 7; ++i) pts.push_back(random_point(rng, -1, 1));
        ClosedPolyline p = ClosedPolyline::from_vertices(pts);
        const auto r = arrange_and_wind(p);
        const auto rr = arrange_and_wind(p.reversed());
        CHECK(rr.mass() == doctest::Approx(r.mass()).epsilon(1e-9));
        CHECK(rr.algebraic_area() == doctest::Approx(-r.algebraic_area()).epsilon(1e-9));
        for (int s = 0; s < 25; ++s) {
            const Point2 q = random_point(rng, -1.2, 1.2);
            CHECK(rr.multiplicity_at(q) == -r.multiplicity_at(q));
        }
    }
}

TEST_CASE("convex clipping utilities") {
    const std::vector<Point2> unit{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    SUBCASE("polygon clip") {
        const std::vector<Point2> tri{{-1, -1}, {2, -1}, {0.5, 2}};
        const auto clipped = clip_polygon_convex(tri, unit);
        CHECK(polygon_area(clipped) > 0.5);
        CHECK(polygon_area(clipped) <= 1.0 + 1e-12);
    }
    SUBCASE("segment clip") {
        const auto iv = clip_segment_convex({-1, 0.5}, {2, 0.5}, unit);
        REQUIRE(iv.has_value());
        CHECK((iv->second - iv->first) * 3.0 == doctest::Approx(1.0));
        CHECK_FALSE(clip_segment_convex({-1, 2}, {2, 2}, unit).has_value());
    }
}

TEST_CASE("PolygonalSet area, membership and interval-union segment clipping") {
    PolygonalSet s;
    s.add_piece({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    s.add_piece({{1, 0}, {2, 0}, {2, 1}, {1, 1}});  // shares the edge x=1
    CHECK(s.area() == doctest::Approx(2.0));
    CHECK(s.contains({0.5, 0.5}));
    CHECK(s.contains({1.0, 0.5}));
    CHECK_FALSE(s.contains({2.5, 0.5}));
    // a segment lying on the shared boundary must be counted once
    CHECK(s.clip_segment_length({1, 0}, {1, 1}) == doctest::Approx(1.0));
    CHECK(s.clip_segment_length({-1, 0.5}, {3, 0.5}) == doctest::Approx(2.0));
    CHECK(s.clip_triangle_area({0, 0}, {2, 0}, {0, 2}) == doctest::Approx(1.5));
}
