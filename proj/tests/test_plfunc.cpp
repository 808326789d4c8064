#include "doctest.h"

#include "plcycle/plfunc.hpp"
#include "support.hpp"

using namespace plcycle;
using namespace plcycle::testsupport;

TEST_CASE("hessian invariants") {
    CHECK(hessian_norm({2, 0, -1}) == doctest::Approx(std::sqrt(5.0)));
    CHECK(hessian_det({2, 0, -1}) == doctest::Approx(-2.0));
    CHECK(hessian_eigen_angle({2, 0, -1}) == doctest::Approx(0.0));

    // q = x^2 - 2xy + y^2: eigenvector at pi/4, zero determinant
    CHECK(hessian_det({1, -1, 1}) == doctest::Approx(0.0));
    CHECK(hessian_eigen_angle({1, -1, 1}) == doctest::Approx(std::asin(1.0) / 2));

    // multiples of the identity: angle 0 by convention
    CHECK(hessian_eigen_angle({3, 0, 3}) == 0.0);
}

TEST_CASE("rotating a quadratic by its eigenvector angle diagonalizes it") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const SymMatrix2 H{2 * a, 2 * b, 2 * c};
        const double t = hessian_eigen_angle(H);
        // off-diagonal entry of R^T H R for rotation by t
        const double b_rot = 0.5 * (H.yy - H.xx) * std::sin(2 * t) + H.xy * std::cos(2 * t);
        const double scale = std::max({std::abs(H.xx), std::abs(H.xy), std::abs(H.yy), 1.0});
        CHECK(std::abs(b_rot) <= 1e-10 * scale);
    }
}

TEST_CASE("interpolation reproduces affine functions exactly") {
    SmoothFunction aff;
    aff.value = [](Point2 p) { return 3 * p.x - 2 * p.y + 0.5; };
    aff.gradient = [](Point2) { return Point2{3, -2}; };
    aff.hessian = [](Point2) { return SymMatrix2{}; };
    const auto mesh = SquareMesh::block(0.5, 3, 3, {0.1, 0.2}, 0.4);
    const auto p = PLFunction::interpolate(aff, mesh.triangulation_ptr());
    for (int f = 0; f < p.base().n_faces(); ++f) {
        CHECK(dist(p.face_gradient(f), {3, -2}) < 1e-12);
    }
}

TEST_CASE("interpolating x^2 on the unit lattice hits m^2 at lattice points") {
    const SmoothFunction q = make_function("quadratic", std::array<double, 3>{1, 0, 0});
    const auto mesh = SquareMesh::block(1.0, 3, 3, {-1, -1});
    const auto p = PLFunction::interpolate(q, mesh.triangulation_ptr());
    for (const auto& [i, j] : mesh.lattice_vertices()) {
        const Point2 v = mesh.lattice_vertex(i, j);
        CHECK(p.value(mesh.triangulation_vertex(i, j)) == doctest::Approx(v.x * v.x));
    }
}

TEST_CASE("face gradients of a quadratic around a lattice vertex follow the six-term formula") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const SmoothFunction q = make_function("quadratic", std::array<double, 3>{a, b, c});
        const auto mesh = SquareMesh::block(1.0, 2, 2, {-1, -1});
        const auto& t = mesh.triangulation();
        const auto p = PLFunction::interpolate(q, mesh.triangulation_ptr());
        const int center = mesh.triangulation_vertex(1, 1);  // world origin
        REQUIRE(t.vertex(center) == Point2{0, 0});
        const auto star = t.vertex_star_ccw(center);
        std::vector<Point2> got;
        for (int f : star.faces) got.push_back(p.face_gradient(f));
        CHECK(cyclically_equal(got, hexagon_gradients(a, b, c), 1e-10));
    }
}

TEST_CASE("constant and linear functions have the expected gradients") {
    const auto mesh = SquareMesh::block(1.0, 2, 2);
    auto tri = mesh.triangulation_ptr();
    const auto c0 = PLFunction::from_values(tri, std::vector<double>(tri->n_vertices(), 7.0));
    for (int f = 0; f < tri->n_faces(); ++f) CHECK(norm(c0.face_gradient(f)) < 1e-15);
}

TEST_CASE("face gradient sits in the sampled gradient hull, within the edge-average tolerance") {
    // The edge-direction averages pin the interpolant gradient to the hull of
    // the smooth gradients only up to 0.5 * sup|H| * diam(tau) (exactly zero
    // for diagonal quadratics on lattice triangles); near-singular Hessians
    // genuinely attain a first-order offset.
    const SmoothFunction g = make_function("gauss-bump", std::array<double, 2>{2.0, 0.8});
    const auto mesh = SquareMesh::block(0.125, 8, 8, {-0.5, -0.5});
    auto tri = mesh.triangulation_ptr();
    const auto p = PLFunction::interpolate(g, tri);
    for (int f = 0; f < tri->n_faces(); ++f) {
        const auto& fc = tri->face(f);
        const Point2 A = tri->vertex(fc[0]), B = tri->vertex(fc[1]), C = tri->vertex(fc[2]);
        std::vector<Point2> samples;
        double sup_h = 0;
        for (int i = 0; i <= 12; ++i) {
            for (int j = 0; j + i <= 12; ++j) {
                const Point2 x = A + (i / 12.0) * (B - A) + (j / 12.0) * (C - A);
                samples.push_back(g.gradient(x));
                sup_h = std::max(sup_h, hessian_norm(g.hessian(x)));
            }
        }
        const double diam = std::max({dist(A, B), dist(B, C), dist(A, C)});
        const double tol = 0.5 * sup_h * diam + 1e-9;
        const Point2 grad = p.face_gradient(f);
        for (int d = 0; d < 32; ++d) {
            const double ang = d * std::asin(1.0) / 8;
            const Point2 dir{std::cos(ang), std::sin(ang)};
            double best = -1e300;
            for (const Point2& s : samples) best = std::max(best, dot(dir, s));
            CHECK(dot(dir, grad) <= best + tol);
        }
    }
}

TEST_CASE("face gradient of a diagonal quadratic is exactly in the gradient hull") {
    const SmoothFunction q = make_function("quadratic", std::array<double, 3>{2.0, 0.0, -0.7});
    const auto mesh = SquareMesh::block(0.5, 3, 3);
    auto tri = mesh.triangulation_ptr();
    const auto p = PLFunction::interpolate(q, tri);
    for (int f = 0; f < tri->n_faces(); ++f) {
        const auto& fc = tri->face(f);
        // the gradient map is affine; for diagonal H the interpolant gradient
        // equals the smooth gradient at the hypotenuse midpoint
        const Point2 A = tri->vertex(fc[0]), B = tri->vertex(fc[1]), C = tri->vertex(fc[2]);
        bool matches = false;
        for (const Point2 m : {0.5 * (A + B), 0.5 * (B + C), 0.5 * (A + C)}) {
            if (dist(q.gradient(m), p.face_gradient(f)) < 1e-10) matches = true;
        }
        CHECK(matches);
    }
}

TEST_CASE("finite-difference hessian fallback approximates the analytic one") {
    const SmoothFunction g = make_function("gauss-bump", std::array<double, 2>{1.0, 0.6});
    const SmoothFunction fd = SmoothFunction::with_fd_hessian(g.value, g.gradient);
    CHECK_FALSE(fd.analytic_hessian);
    for (const Point2 p : {Point2{0.1, 0.2}, Point2{-0.4, 0.3}, Point2{0.5, -0.5}}) {
        const SymMatrix2 ha = g.hessian(p), hf = fd.hessian(p);
        CHECK(ha.xx == doctest::Approx(hf.xx).epsilon(1e-6));
        CHECK(ha.xy == doctest::Approx(hf.xy).epsilon(1e-6));
        CHECK(ha.yy == doctest::Approx(hf.yy).epsilon(1e-6));
    }
}

TEST_CASE("registry rejects unknown families and bad arity") {
    CHECK_THROWS_AS(make_function("nope", std::array<double, 1>{1}), InvalidInput);
    CHECK_THROWS_AS(make_function("quadratic", std::array<double, 2>{1, 2}), InvalidInput);
}

TEST_CASE("registry families have consistent analytic derivatives") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const std::vector<std::pair<std::string, std::vector<double>>> fams{
        {"quadratic", {1.5, -0.7, 0.9}},
        {"rotated-quadratic", {5.0, 0.1, 0.4487989505128276}},
        {"gauss-bump", {2.0, 0.7}},
        {"anisotropic-wave", {20.0}},
    };
    for (const auto& [name, params] : fams) {
        const SmoothFunction f = make_function(name, params);
        for (int trial = 0; trial < 40; ++trial) {
            const Point2 p{u(rng), u(rng)};
            const double h = 1e-6;
            // gradient vs central differences of value
            const Point2 g = f.gradient(p);
            const double gx = (f.value({p.x + h, p.y}) - f.value({p.x - h, p.y})) / (2 * h);
            const double gy = (f.value({p.x, p.y + h}) - f.value({p.x, p.y - h})) / (2 * h);
            CHECK(g.x == doctest::Approx(gx).epsilon(1e-5));
            CHECK(g.y == doctest::Approx(gy).epsilon(1e-5));
            // hessian vs central differences of gradient
            const SymMatrix2 H = f.hessian(p);
            const double hxx = (f.gradient({p.x + h, p.y}).x - f.gradient({p.x - h, p.y}).x) / (2 * h);
            const double hyy = (f.gradient({p.x, p.y + h}).y - f.gradient({p.x, p.y - h}).y) / (2 * h);
            const double hxy = (f.gradient({p.x, p.y + h}).x - f.gradient({p.x, p.y - h}).x) / (2 * h);
            CHECK(H.xx == doctest::Approx(hxx).epsilon(1e-4));
            CHECK(H.yy == doctest::Approx(hyy).epsilon(1e-4));
            CHECK(H.xy == doctest::Approx(hxy).epsilon(1e-4));
        }
    }
}

TEST_CASE("FaceLocator finds containing faces") {
    const auto mesh = SquareMesh::block(0.5, 4, 4);
    auto tri = mesh.triangulation_ptr();
    FaceLocator loc(tri);
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.01, 1.99);
    for (int i = 0; i < 500; ++i) {
        const Point2 p{u(rng), u(rng)};
        const int f = loc.locate(p);
        REQUIRE(f >= 0);
        const auto& fc = tri->face(f);
        CHECK(orient2d(tri->vertex(fc[0]), tri->vertex(fc[1]), p) >= -1e-12);
        CHECK(orient2d(tri->vertex(fc[1]), tri->vertex(fc[2]), p) >= -1e-12);
        CHECK(orient2d(tri->vertex(fc[2]), tri->vertex(fc[0]), p) >= -1e-12);
    }
    CHECK(loc.locate({5, 5}) == -1);
}
