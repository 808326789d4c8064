// PL functions over triangulations, smooth test functions with Hessians,
// and per-face gradients.
#pragma once

#include <functional>
#include <memory>

#include "plcycle/triangulation.hpp"

namespace plcycle {

// Symmetric 2x2 matrix (Hessian entries f_xx, f_xy, f_yy).
struct SymMatrix2 {
    double xx = 0, xy = 0, yy = 0;
};

// Hilbert-Schmidt norm sqrt(f_xx^2 + f_yy^2 + 2 f_xy^2).
double hessian_norm(const SymMatrix2& h);
double hessian_det(const SymMatrix2& h);
// Angle in [0, pi/2) of an eigenvector; 0 by convention for multiples of I.
double hessian_eigen_angle(const SymMatrix2& h);

struct SmoothFunction {
    std::function<double(Point2)> value;
    std::function<Point2(Point2)> gradient;
    std::function<SymMatrix2(Point2)> hessian;
    bool analytic_hessian = true;

    // Central finite-difference Hessian (step max(1e-5, 1e-5|x|)); flagged
    // non-analytic because the Taylor error budgets assume true Hessians.
    static SmoothFunction with_fd_hessian(std::function<double(Point2)> value,
                                          std::function<Point2(Point2)> gradient);
};

class PLFunction {
public:
    static PLFunction interpolate(const SmoothFunction& f, std::shared_ptr<const Triangulation2D> base);
    static PLFunction from_values(std::shared_ptr<const Triangulation2D> base, std::vector<double> values);

    const Triangulation2D& base() const { return *base_; }
    const std::shared_ptr<const Triangulation2D>& base_ptr() const { return base_; }
    double value(int vertex) const { return values_[vertex]; }
    const std::vector<double>& values() const { return values_; }

    Point2 face_gradient(int face) const { return gradients_[face]; }
    const std::vector<Point2>& face_gradients() const { return gradients_; }

    // Evaluate at p inside face f (affine extension of that face's values).
    double evaluate_in_face(Point2 p, int f) const;

private:
    PLFunction(std::shared_ptr<const Triangulation2D> base, std::vector<double> values);
    std::shared_ptr<const Triangulation2D> base_;
    std::vector<double> values_;
    std::vector<Point2> gradients_;
};

// Uniform-bucket point locator over the faces of a triangulation.
class FaceLocator {
public:
    explicit FaceLocator(std::shared_ptr<const Triangulation2D> tri);
    // Face containing p (ties arbitrary), or -1 if outside the support.
    int locate(Point2 p) const;

private:
    std::shared_ptr<const Triangulation2D> tri_;
    BBox box_;
    int nx_ = 1, ny_ = 1;
    double hx_ = 1, hy_ = 1;
    std::vector<std::vector<int>> buckets_;
};

// Named function families for the CLI:
//   quadratic(a,b,c)            a x^2 + 2 b x y + c y^2
//   rotated-quadratic(a,c,t)    a X^2 + c Y^2 in axes rotated by t
//   gauss-bump(A,s)             A exp(-(x^2+y^2)/(2 s^2))
//   anisotropic-wave(K)         sin(K (x + 0.3 y^2)) / K
SmoothFunction make_function(const std::string& family, std::span<const double> params);

}  // namespace plcycle
