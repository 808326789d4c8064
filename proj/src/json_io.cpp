#include "plcycle/json_io.hpp"

namespace plcycle {

json triangulation_to_json(const Triangulation2D& tri) {
    json j;
    json verts = json::array();
    for (const Point2& p : tri.vertices()) verts.push_back({p.x, p.y});
    json faces = json::array();
    for (const auto& f : tri.faces()) faces.push_back({f[0], f[1], f[2]});
    j["vertices"] = std::move(verts);
    j["faces"] = std::move(faces);
    return j;
}

Triangulation2D triangulation_from_json(const json& j) {
    std::vector<Point2> verts;
    for (const auto& v : j.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<std::array<int, 3>> faces;
    for (const auto& f : j.at("faces"))
        faces.push_back({f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()});
    return Triangulation2D::build(std::move(verts), std::move(faces));
}

json region_to_json(const RegionWithMultiplicities& region) {
    json cells = json::array();
    for (const RegionCell& c : region.cells) {
        json poly = json::array();
        for (const Point2& p : c.polygon) poly.push_back({p.x, p.y});
        cells.push_back({{"polygon", std::move(poly)}, {"multiplicity", c.multiplicity}, {"area", c.area}});
    }
    return json{{"cells", std::move(cells)},
                {"mass", region.mass()},
                {"algebraic_area", region.algebraic_area()}};
}

json cycle_to_json(const GradientCycle& c) {
    json j;
    json d2 = json::array();
    for (const D2Entry& e : c.d2) d2.push_back({{"face", e.face}, {"gradient", {e.gradient.x, e.gradient.y}}});
    json d1 = json::array();
    for (const D1Entry& e : c.d1) {
        const auto& ed = c.base->edge(e.edge);
        d1.push_back({{"edge", {ed.a, ed.b}},
                      {"fiber", {{e.fiber.start.x, e.fiber.start.y}, {e.fiber.end.x, e.fiber.end.y}}}});
    }
    json d0 = json::array();
    for (const D0Entry& e : c.d0) {
        json poly = json::array();
        for (const Point2& p : e.fiber_polygon) poly.push_back({p.x, p.y});
        d0.push_back({{"vertex", e.vertex},
                      {"fiber_polygon", std::move(poly)},
                      {"region", region_to_json(e.region)},
                      {"mass", e.mass}});
    }
    j["d2"] = std::move(d2);
    j["d1"] = std::move(d1);
    j["d0"] = std::move(d0);
    j["masses"] = {{"d2", c.masses.d2}, {"d1", c.masses.d1}, {"d0", c.masses.d0}, {"total", c.masses.total()}};
    return j;
}

}  // namespace plcycle
