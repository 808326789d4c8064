#include "plcycle/plfunc.hpp"

#include <algorithm>
#include <cmath>

namespace plcycle {

double hessian_norm(const SymMatrix2& h) {
    return std::sqrt(h.xx * h.xx + h.yy * h.yy + 2.0 * h.xy * h.xy);
}

double hessian_det(const SymMatrix2& h) { return h.xx * h.yy - h.xy * h.xy; }

double hessian_eigen_angle(const SymMatrix2& h) {
    const double scale = std::max({std::abs(h.xx), std::abs(h.xy), std::abs(h.yy), 1e-300});
    if (std::abs(h.xy) <= 1e-14 * scale && std::abs(h.xx - h.yy) <= 1e-14 * scale) return 0.0;
    double theta = 0.5 * std::atan2(2.0 * h.xy, h.xx - h.yy);
    const double half_pi = std::asin(1.0);
    while (theta < 0) theta += half_pi;
    while (theta >= half_pi) theta -= half_pi;
    return theta;
}

SmoothFunction SmoothFunction::with_fd_hessian(std::function<double(Point2)> value,
                                               std::function<Point2(Point2)> gradient) {
    SmoothFunction f;
    f.value = std::move(value);
    f.gradient = std::move(gradient);
    auto grad = f.gradient;
    f.hessian = [grad](Point2 p) {
        const double hx = std::max(1e-5, 1e-5 * std::abs(p.x));
        const double hy = std::max(1e-5, 1e-5 * std::abs(p.y));
        const Point2 gxp = grad({p.x + hx, p.y}), gxm = grad({p.x - hx, p.y});
        const Point2 gyp = grad({p.x, p.y + hy}), gym = grad({p.x, p.y - hy});
        SymMatrix2 h;
        h.xx = (gxp.x - gxm.x) / (2 * hx);
        h.yy = (gyp.y - gym.y) / (2 * hy);
        h.xy = 0.5 * ((gxp.y - gxm.y) / (2 * hx) + (gyp.x - gym.x) / (2 * hy));
        return h;
    };
    f.analytic_hessian = false;
    return f;
}

PLFunction::PLFunction(std::shared_ptr<const Triangulation2D> base, std::vector<double> values)
    : base_(std::move(base)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != base_->n_vertices())
        throw InvalidInput("PLFunction: one value per vertex required");
    for (double v : values_) {
        if (!std::isfinite(v)) throw InvalidInput("PLFunction: non-finite vertex value");
    }
    gradients_.resize(base_->n_faces());
    for (int f = 0; f < base_->n_faces(); ++f) {
        const auto& [i, j, k] = base_->face(f);
        const Point2 a = base_->vertex(i);
        const Point2 u = base_->vertex(j) - a;
        const Point2 w = base_->vertex(k) - a;
        const double du = values_[j] - values_[i];
        const double dw = values_[k] - values_[i];
        const double det = cross(u, w);  // > 0 (validated CCW)
        gradients_[f] = {(du * w.y - dw * u.y) / det, (dw * u.x - du * w.x) / det};
    }
}

PLFunction PLFunction::interpolate(const SmoothFunction& f, std::shared_ptr<const Triangulation2D> base) {
    std::vector<double> vals(base->n_vertices());
    for (int v = 0; v < base->n_vertices(); ++v) vals[v] = f.value(base->vertex(v));
    return PLFunction(std::move(base), std::move(vals));
}

PLFunction PLFunction::from_values(std::shared_ptr<const Triangulation2D> base, std::vector<double> values) {
    return PLFunction(std::move(base), std::move(values));
}

double PLFunction::evaluate_in_face(Point2 p, int f) const {
    const auto& [i, j, k] = base_->face(f);
    const Point2 a = base_->vertex(i);
    return values_[i] + dot(gradients_[f], p - a);
}

FaceLocator::FaceLocator(std::shared_ptr<const Triangulation2D> tri) : tri_(std::move(tri)) {
    box_ = tri_->bbox();
    const int n = std::max(tri_->n_faces(), 1);
    const int grid = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    nx_ = ny_ = grid;
    hx_ = std::max((box_.xmax - box_.xmin) / nx_, 1e-300);
    hy_ = std::max((box_.ymax - box_.ymin) / ny_, 1e-300);
    buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (int f = 0; f < tri_->n_faces(); ++f) {
        const auto& fc = tri_->face(f);
        const BBox fb = BBox::of(std::array<Point2, 3>{tri_->vertex(fc[0]), tri_->vertex(fc[1]), tri_->vertex(fc[2])});
        const int i0 = std::clamp(static_cast<int>((fb.xmin - box_.xmin) / hx_), 0, nx_ - 1);
        const int i1 = std::clamp(static_cast<int>((fb.xmax - box_.xmin) / hx_), 0, nx_ - 1);
        const int j0 = std::clamp(static_cast<int>((fb.ymin - box_.ymin) / hy_), 0, ny_ - 1);
        const int j1 = std::clamp(static_cast<int>((fb.ymax - box_.ymin) / hy_), 0, ny_ - 1);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(f);
    }
}

int FaceLocator::locate(Point2 p) const {
    if (p.x < box_.xmin || p.x > box_.xmax || p.y < box_.ymin || p.y > box_.ymax) return -1;
    const int i = std::clamp(static_cast<int>((p.x - box_.xmin) / hx_), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>((p.y - box_.ymin) / hy_), 0, ny_ - 1);
    for (int f : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
        const auto& fc = tri_->face(f);
        const Point2 a = tri_->vertex(fc[0]), b = tri_->vertex(fc[1]), c = tri_->vertex(fc[2]);
        if (orient2d(a, b, p) >= 0 && orient2d(b, c, p) >= 0 && orient2d(c, a, p) >= 0) return f;
    }
    return -1;
}

SmoothFunction make_function(const std::string& family, std::span<const double> params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw InvalidInput("function family '" + family + "' expects " + std::to_string(n) +
                               " parameter(s)");
    };
    SmoothFunction f;
    if (family == "quadratic") {
        need(3);
        const double a = params[0], b = params[1], c = params[2];
        f.value = [=](Point2 p) { return a * p.x * p.x + 2 * b * p.x * p.y + c * p.y * p.y; };
        f.gradient = [=](Point2 p) { return Point2{2 * a * p.x + 2 * b * p.y, 2 * b * p.x + 2 * c * p.y}; };
        f.hessian = [=](Point2) { return SymMatrix2{2 * a, 2 * b, 2 * c}; };
    } else if (family == "rotated-quadratic") {
        need(3);
        const double a = params[0], c = params[1], t = params[2];
        const double ct = std::cos(t), st = std::sin(t);
        f.value = [=](Point2 p) {
            const double X = ct * p.x + st * p.y;
            const double Y = -st * p.x + ct * p.y;
            return a * X * X + c * Y * Y;
        };
        f.gradient = [=](Point2 p) {
            const double X = ct * p.x + st * p.y;
            const double Y = -st * p.x + ct * p.y;
            return Point2{2 * a * X * ct - 2 * c * Y * st, 2 * a * X * st + 2 * c * Y * ct};
        };
        f.hessian = [=](Point2) {
            SymMatrix2 h;
            h.xx = 2 * a * ct * ct + 2 * c * st * st;
            h.yy = 2 * a * st * st + 2 * c * ct * ct;
            h.xy = 2 * (a - c) * ct * st;
            return h;
        };
    } else if (family == "gauss-bump") {
        need(2);
        const double A = params[0], s = params[1];
        if (!(s > 0)) throw InvalidInput("gauss-bump: width must be positive");
        const double is2 = 1.0 / (s * s);
        f.value = [=](Point2 p) { return A * std::exp(-0.5 * (p.x * p.x + p.y * p.y) * is2); };
        f.gradient = [=](Point2 p) {
            const double v = A * std::exp(-0.5 * (p.x * p.x + p.y * p.y) * is2);
            return Point2{-p.x * is2 * v, -p.y * is2 * v};
        };
        f.hessian = [=](Point2 p) {
            const double v = A * std::exp(-0.5 * (p.x * p.x + p.y * p.y) * is2);
            SymMatrix2 h;
            h.xx = v * (p.x * p.x * is2 - 1.0) * is2;
            h.yy = v * (p.y * p.y * is2 - 1.0) * is2;
            h.xy = v * p.x * p.y * is2 * is2;
            return h;
        };
    } else if (family == "anisotropic-wave") {
        need(1);
        const double K = params[0];
        if (!(K > 0)) throw InvalidInput("anisotropic-wave: K must be positive");
        f.value = [=](Point2 p) { return std::sin(K * (p.x + 0.3 * p.y * p.y)) / K; };
        f.gradient = [=](Point2 p) {
            const double c = std::cos(K * (p.x + 0.3 * p.y * p.y));
            return Point2{c, 0.6 * p.y * c};
        };
        f.hessian = [=](Point2 p) {
            const double u = p.x + 0.3 * p.y * p.y;
            const double s = std::sin(K * u), c = std::cos(K * u);
            SymMatrix2 h;
            h.xx = -K * s;
            h.xy = -0.6 * K * p.y * s;
            h.yy = 0.6 * c - 0.36 * K * p.y * p.y * s;
            return h;
        };
    } else {
        throw InvalidInput("unknown function family '" + family + "'");
    }
    return f;
}

}  // namespace plcycle
