// Minimal SVG writer for planar debugging figures.
#pragma once

#include <string>
#include <vector>

#include "plcycle/geometry.hpp"

namespace plcycle {

class SvgWriter {
public:
    void add_polyline(std::span<const Point2> pts, bool closed, const std::string& stroke = "#1a1a1a",
                      double width_frac = 0.004);
    void add_filled_polygon(std::span<const Point2> pts, const std::string& fill, double opacity = 0.6);
    // Multiplicity-shaded cells: positive blue, negative red, darker for |m| > 1.
    void add_region(const RegionWithMultiplicities& region);
    void add_point(Point2 p, const std::string& fill = "#000000", double radius_frac = 0.008);

    std::string str() const;
    void write_file(const std::string& path) const;

private:
    struct Item {
        std::string body;
    };
    void grow(std::span<const Point2> pts);
    std::string path_of(std::span<const Point2> pts, bool closed) const;

    std::vector<Item> items_;
    BBox box_{0, 0, 1, 1};
    bool has_box_ = false;
};

}  // namespace plcycle
