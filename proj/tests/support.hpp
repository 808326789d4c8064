// Shared helpers for the test suites.
#pragma once

#include <random>

#include "plcycle/geometry.hpp"
#include "plcycle/triangulation.hpp"

namespace plcycle::testsupport {

inline std::vector<Point2> hexagon_gradients(double a, double b, double c) {
    return {{a, c}, {-a + 2 * b, c}, {-a, -2 * b + c}, {-a, -c}, {a - 2 * b, -c}, {a, 2 * b - c}};
}

// cyclic equality of vertex sequences (same orientation), within tol
inline bool cyclically_equal(std::span<const Point2> got, std::span<const Point2> want, double tol) {
    if (got.size() != want.size()) return false;
    const std::size_t n = got.size();
    for (std::size_t off = 0; off < n; ++off) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            ok = dist(got[(i + off) % n], want[i]) <= tol;
        }
        if (ok) return true;
    }
    return false;
}

inline Point2 random_point(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng)};
}

}  // namespace plcycle::testsupport
