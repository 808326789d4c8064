#include "plcycle/svg.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace plcycle {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}
}  // namespace

void SvgWriter::grow(std::span<const Point2> pts) {
    const BBox b = BBox::of(pts);
    if (!has_box_) {
        box_ = b;
        has_box_ = true;
    } else {
        box_.xmin = std::min(box_.xmin, b.xmin);
        box_.ymin = std::min(box_.ymin, b.ymin);
        box_.xmax = std::max(box_.xmax, b.xmax);
        box_.ymax = std::max(box_.ymax, b.ymax);
    }
}

std::string SvgWriter::path_of(std::span<const Point2> pts, bool closed) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        os << (i == 0 ? "M " : "L ") << fmt(pts[i].x) << ' ' << fmt(-pts[i].y) << ' ';
    }
    if (closed) os << 'Z';
    return os.str();
}

void SvgWriter::add_polyline(std::span<const Point2> pts, bool closed, const std::string& stroke,
                             double width_frac) {
    if (pts.empty()) return;
    grow(pts);
    std::ostringstream os;
    os << "<path d=\"" << path_of(pts, closed) << "\" fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"" << fmt(width_frac) << "\" vector-effect=\"non-scaling-stroke\"/>";
    items_.push_back({os.str()});
}

void SvgWriter::add_filled_polygon(std::span<const Point2> pts, const std::string& fill, double opacity) {
    if (pts.size() < 3) return;
    grow(pts);
    std::ostringstream os;
    os << "<path d=\"" << path_of(pts, true) << "\" fill=\"" << fill << "\" fill-opacity=\""
       << fmt(opacity) << "\" fill-rule=\"nonzero\" stroke=\"none\"/>";
    items_.push_back({os.str()});
}

void SvgWriter::add_region(const RegionWithMultiplicities& region) {
    for (const RegionCell& c : region.cells) {
        const char* base = c.multiplicity > 0 ? "#3b6fc4" : "#c44f3b";
        const double opacity = std::min(0.25 * std::abs(c.multiplicity) + 0.15, 0.9);
        add_filled_polygon(c.polygon, base, opacity);
        add_polyline(c.polygon, true, "#555555", 0.002);
    }
}

void SvgWriter::add_point(Point2 p, const std::string& fill, double radius_frac) {
    grow(std::array<Point2, 1>{p});
    std::ostringstream os;
    os << "<circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(-p.y) << "\" r=\"" << fmt(radius_frac)
       << "\" fill=\"" << fill << "\"/>";
    items_.push_back({os.str()});
}

std::string SvgWriter::str() const {
    BBox b = box_;
    const double pad = 0.05 * std::max(b.diameter(), 1e-9);
    b = b.expanded(pad);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(b.xmin) << ' ' << fmt(-b.ymax)
       << ' ' << fmt(b.xmax - b.xmin) << ' ' << fmt(b.ymax - b.ymin) << "\" width=\"640\" height=\""
       << fmt(640.0 * (b.ymax - b.ymin) / std::max(b.xmax - b.xmin, 1e-12)) << "\">\n";
    for (const Item& it : items_) os << "  " << it.body << '\n';
    os << "</svg>\n";
    return os.str();
}

void SvgWriter::write_file(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error("SvgWriter: cannot open " + path);
    f << str();
}

}  // namespace plcycle
