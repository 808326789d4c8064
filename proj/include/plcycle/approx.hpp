// The approximation pipeline: lattice cover W_n of a target region, per-square
// eigen-aligned meshes, completion to a quality triangulation, interpolation,
// and the mass budget of the interpolant's gradient cycle against
// int_V 1 + 2*sqrt(2) |H_f| + |det H_f| dA. Also the perturbation-lemma and
// crude-bound evaluators.
#pragma once

#include "plcycle/cycle.hpp"
#include "plcycle/meshgen.hpp"

namespace plcycle {

struct PipelineConfig {
    SmoothFunction f;
    std::vector<Point2> V;  // convex polygon, CCW; read as an open region
    double margin = 0.25;   // U' = bbox(V) expanded by this much, for sup |H|
    int n = 4;              // grid density: squares of side 1/n
    int j = 8;              // mesh subdivision: eps = 1/(n j)
    std::optional<double> forced_axis_angle;  // alignment override (misalignment studies)
    Tolerances tol;
};

struct PipelineResult {
    int n = 0, j = 0;
    std::vector<std::pair<int, int>> wn_squares;
    std::shared_ptr<const Triangulation2D> tri;
    std::optional<PLFunction> pl;
    GradientCycle cycle;
    QualityReport mesh_report;

    PolygonalSet Wn, Vnj, Znj;
    double area_wn = 0, area_vnj = 0, area_znj = 0;
    LayerMasses mass_V, mass_Vnj, mass_Znj;
    double rhs_integral = 0;       // over V
    double crude_bound_Z = 0;      // C(pi/6, 1/2) * area(Z) * (1 + sup + sup^2) over U'
    double sup_hessian_norm = 0;   // over U'
    double taylor_slack = 0;       // sum over squares of area(core) * bracket
    double elapsed_seconds = 0;
};

// Lattice squares of side 1/n with positive-area overlap with the open
// region bounded by the polygon V.
std::vector<std::pair<int, int>> build_wn(const std::vector<Point2>& V, int n);

PipelineResult run_pipeline(const PipelineConfig& cfg);

// Both sides of the square-mesh perturbation inequalities, evaluated for
// every face / interior edge / interior vertex; worst ratios must be <= 1.
//  (1) |grad_tau f - grad_tau g|              <= 4/eps * sup|f-g|
//  (2) |mass D1(f,sigma) - mass D1(g,sigma)|  <= 8*sqrt(2) * sup|f-g|
//  (3) mass(D0(f,rho) - D0(g,rho))            <= 48/eps * sup|f-g| * diam P_g(rho)
//                                                + 96/eps^2 * sup|f-g|^2
struct PerturbationReport {
    double ratio_gradient = 0;
    double ratio_d1 = 0;
    double ratio_d0 = 0;
    double sup_diff = 0;
    double worst() const { return std::max({ratio_gradient, ratio_d1, ratio_d0}); }
};
PerturbationReport perturbation_bounds(const std::function<double(Point2)>& f,
                                       const std::function<double(Point2)>& g, const SquareMesh& mesh);

// Mass of the difference of oriented triangles PQR and PQR', and the bound
// |R - R'| * diam(PQR).
std::pair<double, double> triangle_symm_diff_bound(Point2 P, Point2 Q, Point2 R, Point2 Rp);

// Both sides of the Taylor-based core bound for f interpolated on an
// eigen-aligned square mesh inside B(x0, r0), with Hessian oscillation
// bound omega (verified by sampling; violations are errors).
struct TaylorBoundResult {
    double lhs = 0;
    double rhs = 0;
    double integral_term = 0;
    double slack_term = 0;
};
TaylorBoundResult taylor_core_bound(const SmoothFunction& f, const SquareMesh& mesh, Point2 x0,
                                    double r0, double omega);

// mass D(f_T) <= C(Theta,k) * area(W) * (1 + sup|H| + sup|H|^2), with
// C = 48 pi^2 / (k^2 Theta sin Theta). Errors if the declared fatness is
// not met, naming the offending triangle.
struct CrudeBoundResult {
    double mass = 0;
    double bound = 0;
    double C = 0;
    double sup_norm = 0;
    FatnessStats stats;
};
CrudeBoundResult crude_bound(const SmoothFunction& f, std::shared_ptr<const Triangulation2D> tri,
                             double Theta, double k, double sample_spacing = 0.0);

// Adaptive quadrature of `g` over a convex polygon (centroid-fan, uniform
// refinement until successive levels agree to rel_tol).
double integrate_over_convex_polygon(const std::function<double(Point2)>& g,
                                     std::span<const Point2> polygon, double rel_tol = 1e-6);

double mass_integrand(const SmoothFunction& f, Point2 p);  // 1 + 2*sqrt(2)|H| + |det H|

}  // namespace plcycle
