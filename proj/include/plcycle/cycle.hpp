// Construction of the gradient cycle D0 + D1 + D2 of a PL function, layer
// masses (also restricted to regions), and the current-theoretic oracles:
// boundary cancellation, Lagrangian defect, and the support identity.
#pragma once

#include "plcycle/plfunc.hpp"

namespace plcycle {

struct D2Entry {
    int face;
    Point2 gradient;
};

// Fiber segment over an interior edge, oriented from the left-face gradient
// to the right-face gradient (left/right w.r.t. the edge directed a->b).
// Zero-length fibers are dropped.
struct D1Entry {
    int edge;
    OrientedSegment fiber;
};

// Fiber region over an interior vertex. The fiber polygon lists the star
// gradients in counterclockwise star order; the region is its
// winding-number decomposition.
struct D0Entry {
    int vertex;
    std::vector<Point2> fiber_polygon;  // empty if the star gradients are degenerate
    RegionWithMultiplicities region;
    double mass = 0.0;
};

struct LayerMasses {
    double d2 = 0, d1 = 0, d0 = 0;
    double total() const { return d2 + d1 + d0; }
};

struct CycleOptions {
    Tolerances tol;
    // Verify |<sigma_hat, s_hat>| <= perp_tol for every retained fiber; a
    // violation means an orientation or gradient bug for genuine PL input.
    bool enforce_perpendicularity = true;
    double perp_tol = 1e-8;
};

struct GradientCycle {
    std::shared_ptr<const Triangulation2D> base;
    std::vector<Point2> face_gradients;
    std::vector<D2Entry> d2;
    std::vector<D1Entry> d1;
    std::vector<D0Entry> d0;
    LayerMasses masses;
    double gradient_scale = 0.0;  // max |gradient|, used for fiber tolerances
};

GradientCycle build_cycle(const PLFunction& p, const CycleOptions& opts = {});

// Same construction from raw per-face gradients; used by tests (negative
// controls need data that is not continuous across edges) and by the
// perturbation machinery.
GradientCycle build_cycle_from_gradients(std::shared_ptr<const Triangulation2D> base,
                                         std::vector<Point2> gradients, const CycleOptions& opts = {});

// Mass of the cycle restricted to pi^{-1}(region):
//   D2: sum area(face ∩ region); D1: sum length(edge ∩ region) * |fiber|;
//   D0: sum of P_k masses over vertices in the (closed) region.
LayerMasses restricted_mass(const GradientCycle& c, const PolygonalSet& region);

// Boundary cancellation over the interior skeleton. Edge level: the D2
// boundary contribution (grad_left - grad_right) against the fiber segment;
// vertex level: the residual 1-chain of D1 fibers against the boundary of
// the fiber polygon, cancelled combinatorially over exact gradient values.
struct BoundaryReport {
    double edge_residual_max = 0.0;   // |(gL - gR) - fiber_delta|, max over interior edges
    int vertex_uncancelled = 0;       // directed fiber segments left after cancellation
    double vertex_residual_max = 0.0; // total |coefficient| * length of leftover chain, max over vertices
    bool clean(double tol) const { return vertex_uncancelled == 0 && edge_residual_max <= tol; }
};
BoundaryReport boundary_check(const GradientCycle& c);

// Pairing with the symplectic form: D2 and D0 vanish structurally (constant
// fiber / point base); for D1 the defect is |<dir(sigma), dir(s)>|.
struct LagrangianReport {
    double d1_defect_max = 0.0;
    int worst_edge = -1;
};
LagrangianReport lagrangian_check(const GradientCycle& c);

// Both sides of D(p)(phi pi^*(dx ^ dy)) = integral of phi(x, grad p(x)) dx.
// The left side pairs the D2 layer with per-face quadrature; the right side
// is grid quadrature with point location, an independent evaluation route.
struct SupportIdentityResult {
    double lhs = 0.0;
    double rhs = 0.0;
};
SupportIdentityResult support_identity_check(const GradientCycle& c, const PLFunction& p,
                                             const std::function<double(Point2, Point2)>& phi,
                                             double rel_tol = 1e-6);

// Region bounded by the polyline, built as the signed fan of triangles
// (anchor, v_i, v_{i+1}) resolved to winding-number form. Agrees with
// arrange_and_wind for every anchor.
RegionWithMultiplicities join_region(const ClosedPolyline& poly, Point2 anchor, const Tolerances& tol = {});

}  // namespace plcycle
