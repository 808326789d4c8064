// plcycle command-line driver: golden quadratic analysis, the approximation
// pipeline with invariant verdicts, mesh completion, and cycle dumps.
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "plcycle/approx.hpp"
#include "plcycle/json_io.hpp"
#include "plcycle/svg.hpp"

namespace {

using namespace plcycle;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

// "quadratic(1,-1,1)" -> family + params
std::pair<std::string, std::vector<double>> parse_function_spec(const std::string& spec) {
    const auto lp = spec.find('(');
    if (lp == std::string::npos || spec.back() != ')')
        throw InvalidInput("function spec must look like family(p1,p2,...)");
    std::string family = spec.substr(0, lp);
    std::vector<double> params;
    std::string body = spec.substr(lp + 1, spec.size() - lp - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t next = body.find(',', pos);
        if (next == std::string::npos) next = body.size();
        params.push_back(std::stod(body.substr(pos, next - pos)));
        pos = next + 1;
    }
    return {family, params};
}

void write_output(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream f(path);
        if (!f) throw Error("cannot open output file " + path);
        f << j.dump(2) << '\n';
    }
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

// --- quadratic ---------------------------------------------------------

int cmd_quadratic(double a, double b, double c, double eps, double angle, const std::string& out,
                  const std::string& svg_path) {
    const SmoothFunction q = make_function("quadratic", std::array<double, 3>{a, b, c});
    const SquareMesh mesh = SquareMesh::block(eps, 2, 2, {-eps, -eps}, angle);
    const PLFunction p = PLFunction::interpolate(q, mesh.triangulation_ptr());
    const GradientCycle cyc = build_cycle(p);

    const int center = mesh.triangulation_vertex(1, 1);
    const D0Entry* entry = nullptr;
    for (const D0Entry& e : cyc.d0) {
        if (e.vertex == center) entry = &e;
    }
    if (!entry) throw InternalError("quadratic: missing interior vertex entry");

    const auto star = mesh.triangulation().vertex_star_ccw(center);
    json gradients = json::array();
    for (int f : star.faces) gradients.push_back(point_json(p.face_gradient(f)));

    // fiber lengths by edge class in mesh coordinates
    std::map<int, std::pair<int, int>> lattice_of;
    for (const auto& ij : mesh.lattice_vertices()) lattice_of[mesh.triangulation_vertex(ij.first, ij.second)] = ij;
    auto lattice = [&](int v) { return lattice_of.at(v); };
    double len_v = 0, len_h = 0, len_d = 0;
    for (const D1Entry& e : cyc.d1) {
        const auto& ed = mesh.triangulation().edge(e.edge);
        const auto [ai, aj] = lattice(ed.a);
        const auto [bi, bj] = lattice(ed.b);
        const int di = bi - ai, dj = bj - aj;
        const double flen = e.fiber.length();
        if (di == 0) len_v = std::max(len_v, flen);
        else if (dj == 0) len_h = std::max(len_h, flen);
        else len_d = std::max(len_d, flen);
    }

    const SymMatrix2 H{2 * a, 2 * b, 2 * c};
    json j;
    j["quadratic"] = {{"a", a}, {"b", b}, {"c", c}};
    j["epsilon"] = eps;
    j["axis_angle"] = angle;
    j["hessian"] = {{"norm", hessian_norm(H)}, {"det", hessian_det(H)}, {"eigen_angle", hessian_eigen_angle(H)}};
    j["gradients"] = std::move(gradients);
    json poly = json::array();
    for (const Point2& v : entry->fiber_polygon) poly.push_back(point_json(v));
    j["fiber_polygon"] = std::move(poly);
    j["mass"] = entry->mass;
    j["algebraic_area"] = entry->region.algebraic_area();
    j["d1_fiber_lengths"] = {{"vertical", len_v}, {"horizontal", len_h}, {"diagonal", len_d}};
    write_output(j, out);

    if (!svg_path.empty()) {
        SvgWriter svg;
        svg.add_region(entry->region);
        if (!entry->fiber_polygon.empty()) svg.add_polyline(entry->fiber_polygon, true, "#111111", 0.006);
        for (const Point2& v : entry->fiber_polygon) svg.add_point(v, "#111111", 0.012);
        svg.write_file(svg_path);
    }
    return kExitOk;
}

// --- pipeline ----------------------------------------------------------

std::vector<Point2> region_from_json(const json& v) {
    const std::string type = v.at("type").get<std::string>();
    if (type == "rect") {
        const double x0 = v.at("min").at(0), y0 = v.at("min").at(1);
        const double x1 = v.at("max").at(0), y1 = v.at("max").at(1);
        return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    }
    if (type == "disk") {
        const double cx = v.at("center").at(0), cy = v.at("center").at(1);
        const double r = v.at("radius").get<double>();
        const int segs = v.value("segments", 64);
        std::vector<Point2> poly;
        for (int i = 0; i < segs; ++i) {
            const double t = 2 * 3.14159265358979323846 * i / segs;
            poly.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
        }
        return poly;
    }
    if (type == "polygon") {
        std::vector<Point2> poly;
        for (const auto& p : v.at("vertices")) poly.push_back({p.at(0), p.at(1)});
        return poly;
    }
    throw InvalidInput("unknown region type '" + type + "'");
}

json result_to_json(const PipelineResult& r) {
    json j;
    j["n"] = r.n;
    j["j"] = r.j;
    j["mass_V"] = r.mass_V.total();
    j["mass_core"] = r.mass_Vnj.total();
    j["mass_Z"] = r.mass_Znj.total();
    j["rhs"] = r.rhs_integral;
    j["crude_bound"] = r.crude_bound_Z;
    j["taylor_slack"] = r.taylor_slack;
    j["areas"] = {{"W", r.area_wn}, {"V_core", r.area_vnj}, {"Z", r.area_znj}};
    j["layers_V"] = {{"d2", r.mass_V.d2}, {"d1", r.mass_V.d1}, {"d0", r.mass_V.d0}};
    j["mesh"] = {{"edge_min", r.mesh_report.edge_min},
                 {"edge_max", r.mesh_report.edge_max},
                 {"angle_min", r.mesh_report.angle_min},
                 {"angle_max", r.mesh_report.angle_max},
                 {"pass", r.mesh_report.pass()}};
    return j;
}

struct Verdict {
    std::string name;
    bool pass;
    std::string detail;
};

int cmd_pipeline(const std::string& spec_path, const std::string& out, int threads, double tol_scale,
                 std::uint64_t seed_override, bool have_seed) {
    json spec;
    {
        std::ifstream f(spec_path);
        if (!f) {
            std::cerr << "pipeline: cannot open spec " << spec_path << '\n';
            return kExitUsage;
        }
        try {
            f >> spec;
        } catch (const std::exception& e) {
            std::cerr << "pipeline: malformed spec: " << e.what() << '\n';
            return kExitUsage;
        }
    }

    try {
        const auto& fn = spec.at("function");
        const std::string family = fn.at("family").get<std::string>();
        std::vector<double> params;
        for (const auto& p : fn.at("params")) params.push_back(p.get<double>());
        const SmoothFunction f = make_function(family, params);
        const std::vector<Point2> V = region_from_json(spec.at("V"));
        const double margin = spec.value("margin", 0.25);
        std::uint64_t seed = spec.value("seed", 1);
        if (have_seed) seed = seed_override;

        struct RunSpec {
            int n, j;
            std::optional<double> forced;
        };
        std::vector<RunSpec> runs;
        for (const auto& r : spec.at("runs")) runs.push_back({r.at("n").get<int>(), r.at("j").get<int>(), {}});
        std::optional<std::pair<int, int>> mis;
        if (spec.contains("misaligned_comparison") && !spec["misaligned_comparison"].is_null()) {
            mis = {spec["misaligned_comparison"].at("n").get<int>(), spec["misaligned_comparison"].at("j").get<int>()};
            runs.push_back({mis->first, mis->second, 0.0});
        }

        auto run_one = [&](const RunSpec& rs) {
            PipelineConfig cfg;
            cfg.f = f;
            cfg.V = V;
            cfg.margin = margin;
            cfg.n = rs.n;
            cfg.j = rs.j;
            cfg.forced_axis_angle = rs.forced;
            cfg.tol.scale = tol_scale;
            return run_pipeline(cfg);
        };

        std::vector<PipelineResult> results(runs.size());
        if (threads > 1) {
            std::vector<std::future<PipelineResult>> futs;
            for (const auto& rs : runs) futs.push_back(std::async(std::launch::async, run_one, rs));
            for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
        } else {
            for (std::size_t i = 0; i < runs.size(); ++i) results[i] = run_one(runs[i]);
        }

        std::vector<Verdict> verdicts;
        auto check = [&](const std::string& name, bool ok, const std::string& detail) {
            verdicts.push_back({name, ok, detail});
        };

        const std::size_t n_aligned = runs.size() - (mis ? 1 : 0);
        const double sqrt2 = std::sqrt(2.0);
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < results.size(); ++i) {
            const PipelineResult& r = results[i];
            const std::string tag = "[n=" + std::to_string(r.n) + ",j=" + std::to_string(r.j) +
                                    (i >= n_aligned ? ",misaligned" : "") + "]";
            check("z_area_bound" + tag, r.area_znj <= 8 * sqrt2 / r.j * r.area_wn + 1e-12,
                  "area(Z)=" + std::to_string(r.area_znj) + " vs " +
                      std::to_string(8 * sqrt2 / r.j * r.area_wn));
            check("mesh_quality" + tag, r.mesh_report.pass(),
                  r.mesh_report.violations.empty() ? "ok" : r.mesh_report.violations.front());
            // coverage of V by V_nj U Z_nj at sampled points
            {
                std::uniform_real_distribution<double> ux(0, 1);
                const BBox vb = BBox::of(V);
                int misses = 0, tested = 0;
                while (tested < 10000) {
                    const Point2 p{vb.xmin + (vb.xmax - vb.xmin) * ux(rng),
                                   vb.ymin + (vb.ymax - vb.ymin) * ux(rng)};
                    if (!point_in_convex(p, V, 0.0)) continue;
                    ++tested;
                    const double tol = 1e-9;
                    if (!r.Vnj.contains(p, tol) && !r.Znj.contains(p, tol)) ++misses;
                }
                check("coverage" + tag, misses == 0, std::to_string(misses) + " of 10000 samples uncovered");
            }
            check("subadditivity" + tag,
                  r.mass_V.total() <= r.mass_Vnj.total() + r.mass_Znj.total() + 1e-9,
                  std::to_string(r.mass_V.total()) + " vs " +
                      std::to_string(r.mass_Vnj.total() + r.mass_Znj.total()));
            check("crude_z_bound" + tag, r.mass_Znj.total() <= r.crude_bound_Z + 1e-9,
                  std::to_string(r.mass_Znj.total()) + " vs " + std::to_string(r.crude_bound_Z));
        }
        // monotone trend over the aligned runs (same j, increasing n)
        {
            bool trend = true;
            std::string detail;
            for (std::size_t i = 0; i + 1 < n_aligned; ++i) {
                if (results[i + 1].j != results[i].j || results[i + 1].n <= results[i].n) continue;
                if (results[i + 1].mass_V.total() > results[i].mass_V.total() * 1.02) {
                    trend = false;
                    detail = "mass rose from " + std::to_string(results[i].mass_V.total()) + " to " +
                             std::to_string(results[i + 1].mass_V.total());
                }
            }
            check("monotone_trend", trend, detail.empty() ? "ok" : detail);
        }
        if (n_aligned > 0) {
            const PipelineResult& last = results[n_aligned - 1];
            const double budget = last.rhs_integral + last.taylor_slack + last.crude_bound_Z;
            check("final_bound", last.mass_V.total() <= budget + 1e-9,
                  std::to_string(last.mass_V.total()) + " vs " + std::to_string(budget));
        }
        if (mis) {
            // compare against the aligned run at the same (n, j)
            const PipelineResult& m = results.back();
            const PipelineResult* aligned = nullptr;
            for (std::size_t i = 0; i < n_aligned; ++i) {
                if (results[i].n == m.n && results[i].j == m.j) aligned = &results[i];
            }
            check("aligned_below_misaligned",
                  aligned != nullptr && aligned->mass_V.total() < m.mass_V.total(),
                  aligned ? std::to_string(aligned->mass_V.total()) + " vs " + std::to_string(m.mass_V.total())
                          : "no aligned run at comparison (n, j)");
        }

        json out_json;
        out_json["spec"] = spec;
        json results_json = json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            json rj = result_to_json(results[i]);
            rj["misaligned"] = i >= n_aligned;
            results_json.push_back(std::move(rj));
        }
        out_json["results"] = std::move(results_json);
        json verdicts_json = json::array();
        bool all_pass = true;
        for (const Verdict& v : verdicts) {
            verdicts_json.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
            all_pass = all_pass && v.pass;
        }
        out_json["verdicts"] = std::move(verdicts_json);
        out_json["all_pass"] = all_pass;
        json timings = json::array();
        for (const PipelineResult& r : results) timings.push_back(r.elapsed_seconds);
        out_json["timings"] = std::move(timings);
        write_output(out_json, out);
        return all_pass ? kExitOk : kExitInvariant;
    } catch (const InvalidInput& e) {
        std::cerr << "pipeline: " << e.what() << '\n';
        return kExitUsage;
    }
}

// --- mesh --------------------------------------------------------------

int cmd_mesh(const std::string& region_path, double side, double h, const std::string& system_path,
             const std::string& out, const std::string& report_path) {
    std::vector<Point2> region;
    if (!region_path.empty()) {
        std::ifstream f(region_path);
        if (!f) {
            std::cerr << "mesh: cannot open region file " << region_path << '\n';
            return kExitUsage;
        }
        json j;
        f >> j;
        region = region_from_json(j);
    } else {
        region = {{0, 0}, {side, 0}, {side, side}, {0, side}};
    }

    EdgeSystem sys = boundary_system(region, h);
    if (!system_path.empty()) {
        std::ifstream f(system_path);
        if (!f) {
            std::cerr << "mesh: cannot open system file " << system_path << '\n';
            return kExitUsage;
        }
        json j;
        f >> j;
        const int base = static_cast<int>(sys.vertices.size());
        for (const auto& v : j.at("vertices")) sys.vertices.push_back({v.at(0), v.at(1)});
        for (const auto& e : j.at("edges"))
            sys.edges.push_back({base + e.at(0).get<int>(), base + e.at(1).get<int>()});
    }

    auto [tri, report] = complete_triangulation(sys);
    json j;
    j["triangulation"] = triangulation_to_json(tri);
    j["report"] = {{"edge_min", report.edge_min},
                   {"edge_max", report.edge_max},
                   {"angle_min", report.angle_min},
                   {"angle_max", report.angle_max},
                   {"contains_input", report.contains_input},
                   {"violations", report.violations},
                   {"pass", report.pass()}};
    write_output(j, out);
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        f << j["report"].dump(2) << '\n';
    }
    return report.pass() ? kExitOk : kExitInvariant;
}

// --- cycle-dump --------------------------------------------------------

int cmd_cycle_dump(const std::string& fn_spec, double eps, int nx, int ny, double angle,
                   const std::string& tri_path, const std::string& values_path, const std::string& out,
                   const std::string& svg_path, int svg_vertex) {
    std::shared_ptr<const Triangulation2D> tri;
    std::optional<PLFunction> p;
    if (!tri_path.empty()) {
        std::ifstream f(tri_path);
        if (!f) {
            std::cerr << "cycle-dump: cannot open " << tri_path << '\n';
            return kExitUsage;
        }
        json j;
        f >> j;
        tri = std::make_shared<Triangulation2D>(triangulation_from_json(j));
        if (!values_path.empty()) {
            std::ifstream vf(values_path);
            json vj;
            vf >> vj;
            std::vector<double> vals;
            for (const auto& v : vj) vals.push_back(v.get<double>());
            p = PLFunction::from_values(tri, std::move(vals));
        }
    } else {
        const SquareMesh mesh = SquareMesh::block(eps, nx, ny, {0, 0}, angle);
        tri = mesh.triangulation_ptr();
    }
    if (!p) {
        const auto [family, params] = parse_function_spec(fn_spec);
        const SmoothFunction f = make_function(family, params);
        p = PLFunction::interpolate(f, tri);
    }
    const GradientCycle cyc = build_cycle(*p);
    write_output(cycle_to_json(cyc), out);

    if (!svg_path.empty()) {
        const D0Entry* entry = nullptr;
        for (const D0Entry& e : cyc.d0) {
            if (svg_vertex < 0 || e.vertex == svg_vertex) {
                entry = &e;
                if (svg_vertex >= 0) break;
            }
        }
        if (!entry) {
            std::cerr << "cycle-dump: no interior vertex for SVG\n";
            return kExitUsage;
        }
        SvgWriter svg;
        svg.add_region(entry->region);
        if (!entry->fiber_polygon.empty()) svg.add_polyline(entry->fiber_polygon, true, "#111111", 0.006);
        svg.write_file(svg_path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient cycles of piecewise-linear interpolants: construction, mass bounds, meshing"};
    app.require_subcommand(1);

    std::string out, svg_path, report_path;
    int threads = 1;
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
    bool have_seed = false;
    app.add_option("--threads", threads, "parallel pipeline runs")->capture_default_str();
    app.add_option("--tolerance-scale", tol_scale, "scale factor on geometric tolerances")
        ->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "override the runspec seed");

    auto* quad = app.add_subcommand("quadratic", "analyze the fiber polygon of a quadratic on the lattice mesh");
    double qa = 1, qb = -1, qc = 1, qeps = 1, qangle = 0;
    quad->add_option("a", qa, "x^2 coefficient")->required();
    quad->add_option("b", qb, "mixed coefficient (q = a x^2 + 2 b x y + c y^2)")->required();
    quad->add_option("c", qc, "y^2 coefficient")->required();
    quad->add_option("--epsilon", qeps, "mesh size")->capture_default_str();
    quad->add_option("--axis-angle", qangle, "mesh axis angle (radians)")->capture_default_str();
    quad->add_option("--out", out, "output JSON path (default stdout)");
    quad->add_option("--svg", svg_path, "fiber polygon SVG path");

    auto* pipe = app.add_subcommand("pipeline", "run the approximation pipeline from a runspec JSON");
    std::string spec_path;
    pipe->add_option("spec", spec_path, "runspec JSON path")->required();
    pipe->add_option("--out", out, "output JSON path (default stdout)");

    auto* mesh = app.add_subcommand("mesh", "complete an edge system to a quality triangulation");
    std::string region_path, system_path;
    double side = 1.0, h = 0.1;
    mesh->add_option("--region", region_path, "region polygon JSON ({type,...})");
    mesh->add_option("--square", side, "use a side-length square region at the origin");
    mesh->add_option("--h", h, "target edge scale")->required();
    mesh->add_option("--system", system_path, "seed system JSON {vertices, edges}");
    mesh->add_option("--out", out, "output JSON path (default stdout)");
    mesh->add_option("--report", report_path, "write the quality report separately");

    auto* dump = app.add_subcommand("cycle-dump", "dump the gradient cycle of an interpolant");
    std::string fn_spec = "quadratic(1,-1,1)", tri_path, values_path;
    double deps = 1;
    int dnx = 4, dny = 4, svg_vertex = -1;
    double dangle = 0;
    dump->add_option("--fn", fn_spec, "function spec, e.g. quadratic(1,-1,1)")->capture_default_str();
    dump->add_option("--epsilon", deps, "lattice mesh size")->capture_default_str();
    dump->add_option("--block", dnx, "lattice block width (cells)")->capture_default_str();
    dump->add_option("--block-y", dny, "lattice block height (cells)")->capture_default_str();
    dump->add_option("--angle", dangle, "lattice mesh angle")->capture_default_str();
    dump->add_option("--tri", tri_path, "triangulation JSON instead of a lattice block");
    dump->add_option("--values", values_path, "vertex values JSON (with --tri)");
    dump->add_option("--out", out, "output JSON path (default stdout)");
    dump->add_option("--svg", svg_path, "emit a fiber region SVG");
    dump->add_option("--svg-vertex", svg_vertex, "vertex index for --svg (default: first interior)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    have_seed = seed_opt->count() > 0;

    try {
        if (*quad) return cmd_quadratic(qa, qb, qc, qeps, qangle, out, svg_path);
        if (*pipe) return cmd_pipeline(spec_path, out, threads, tol_scale, seed, have_seed);
        if (*mesh) return cmd_mesh(region_path, side, h, system_path, out, report_path);
        if (*dump) return cmd_cycle_dump(fn_spec, deps, dnx, dny, dangle, tri_path, values_path, out,
                                         svg_path, svg_vertex);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return kExitUsage;
}
