// Text-in, text-out bindings. Every document crosses the boundary in its file format.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cnsg/bounds.hpp"
#include "cnsg/digest.hpp"
#include "cnsg/errors.hpp"
#include "cnsg/movegraph.hpp"
#include "cnsg/oracle.hpp"

namespace py = pybind11;
using namespace cnsg;

namespace {

py::dict triangulation_info(const std::string& text) {
    const Triangulation tri = parse_triangulation(text);
    py::list degrees;
    for (int e = 0; e < tri.num_edges(); ++e) degrees.append(tri.edge_degree(e));
    py::dict d;
    d["tetrahedra"] = tri.size();
    d["vertices"] = tri.num_vertices();
    d["edges"] = tri.num_edges();
    d["faces"] = tri.num_faces();
    d["euler"] = tri.euler_characteristic();
    d["edge_degrees"] = degrees;
    return d;
}

py::dict check_surface(const std::string& tri_text, const std::string& surface_text) {
    const Triangulation tri = parse_triangulation(tri_text);
    const SurfaceEncoding s = parse_surface(surface_text);
    const Validation v = validate(tri, s);
    py::dict d;
    d["classification"] = classification_name(v.kind);
    d["reason"] = v.reason;
    d["weight"] = weight(s);
    if (v.valid()) {
        const Topology t = topology(tri, s);
        d["points"] = t.points;
        d["arcs"] = t.arcs;
        d["disks"] = t.disks;
        d["annuli"] = t.annuli;
        d["euler"] = t.euler;
        d["genus"] = t.genus;
        d["components"] = t.components;
    }
    return d;
}

std::vector<std::pair<std::string, std::string>> list_neighbors(const std::string& tri_text,
                                                                const std::string& surface_text, int budget,
                                                                const std::string& moves) {
    const Triangulation tri = parse_triangulation(tri_text);
    const SurfaceEncoding s = parse_surface(surface_text);
    std::vector<std::pair<std::string, std::string>> out;
    for (const Neighbor& n : neighbors(tri, s, budget, parse_move_set(moves), default_catalog(tri)))
        out.emplace_back(to_text(n.move), to_text(n.result));
    return out;
}

MoveGraph build_graph(const Triangulation& tri, const SurfaceEncoding& seed, int budget, const std::string& moves,
                      std::size_t max_vertices, int workers, bool* partial) {
    BuildOptions o;
    o.budget = budget;
    o.move_set = parse_move_set(moves);
    o.catalog = default_catalog(tri);
    o.limits.max_vertices = max_vertices;
    o.workers = workers;
    py::gil_scoped_release release;
    try {
        return build(tri, seed, o);
    } catch (const PartialGraph& p) {
        *partial = true;
        return p.graph();
    }
}

std::string graph_json(const std::string& tri_text, const std::string& seed_text, int budget,
                       const std::string& moves, std::size_t max_vertices, int workers) {
    const Triangulation tri = parse_triangulation(tri_text);
    const SurfaceEncoding seed = parse_surface(seed_text);
    bool partial = false;
    const MoveGraph g = build_graph(tri, seed, budget, moves, max_vertices, workers, &partial);
    Provenance prov;
    prov.triangulation_sha256 = sha256_hex(tri_text);
    prov.seed_sha256 = sha256_hex(seed_text);
    for (const CatalogSphere& s : default_catalog(tri)) prov.catalog_sha256.push_back(sha256_hex(to_text(s.surface)));
    prov.limits.max_vertices = max_vertices;
    return export_json(g, prov);
}

std::vector<std::vector<std::string>> generator_loops(const std::string& tri_text, const std::string& seed_text,
                                                      int budget, const std::string& moves) {
    const Triangulation tri = parse_triangulation(tri_text);
    const SurfaceEncoding seed = parse_surface(seed_text);
    bool partial = false;
    const MoveGraph g = build_graph(tri, seed, budget, moves, 0, 1, &partial);
    std::vector<std::vector<std::string>> out;
    for (const auto& loop : generators(g).loops) {
        std::vector<std::string> texts;
        for (const Move& m : loop) texts.push_back(to_text(m));
        out.push_back(std::move(texts));
    }
    return out;
}

py::tuple replay_loop(const std::string& tri_text, const std::string& seed_text, const std::vector<std::string>& loop) {
    const Triangulation tri = parse_triangulation(tri_text);
    const SurfaceEncoding seed = parse_surface(seed_text);
    std::vector<Move> moves;
    for (const std::string& m : loop) moves.push_back(parse_move(m));
    const ReplayResult r = replay(tri, seed, moves, default_catalog(tri));
    return py::make_tuple(r.ok, r.failed_step, r.message);
}

py::dict bounds(int genus, double sweepout_area, double K, double delta0, double delta1, double margin) {
    const Bounds b = compute_bounds({genus, sweepout_area, K, delta0, delta1, margin});
    py::dict d;
    d["C"] = b.C;
    d["delta"] = b.delta;
    d["W"] = b.W;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crudely normal surfaces and their move graphs";
    m.attr("__version__") = CNSG_VERSION;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<MoveNotApplicable>(m, "MoveNotApplicable", PyExc_ValueError);

    m.def("triangulation_info", &triangulation_info, py::arg("triangulation"));
    m.def("subdivide", [](const std::string& t) { return barycentric_subdivide(parse_triangulation(t)).to_text(); },
          py::arg("triangulation"));
    m.def("vertex_link", [](const std::string& t, int v) { return to_text(vertex_link(parse_triangulation(t), v)); },
          py::arg("triangulation"), py::arg("vertex") = 0);
    m.def("validate", &check_surface, py::arg("triangulation"), py::arg("surface"));
    m.def("apply", [](const std::string& t, const std::string& s, const std::string& mv) { return apply_text(t, s, mv); },
          py::arg("triangulation"), py::arg("surface"), py::arg("move"));
    m.def("neighbors", &list_neighbors, py::arg("triangulation"), py::arg("surface"), py::arg("budget"),
          py::arg("moves") = "V0,E1,F2',PINCH,UNPINCH");
    m.def("build_graph", &graph_json, "Move graph as JSON; \"status\" is PARTIAL when max_vertices stopped it",
          py::arg("triangulation"), py::arg("seed"), py::arg("budget"), py::arg("moves") = "V0,E1,F2',PINCH,UNPINCH",
          py::arg("max_vertices") = 0, py::arg("workers") = 1);
    m.def("generators", &generator_loops, py::arg("triangulation"), py::arg("seed"), py::arg("budget"),
          py::arg("moves") = "V0,E1,F2',PINCH,UNPINCH");
    m.def("replay", &replay_loop, "(ok, failed_step, message)", py::arg("triangulation"), py::arg("seed"),
          py::arg("loop"));
    m.def("bounds", &bounds, py::arg("genus") = 2, py::arg("sweepout_area") = 1.0, py::arg("K") = 2.0,
          py::arg("delta0") = 8.0, py::arg("delta1") = 2.0, py::arg("margin") = 0.99);
    m.def("oracle_matchings", [](int a, int b, int c) { return oracle::oracle_matchings({a, b, c}).count; },
          py::arg("a"), py::arg("b"), py::arg("c"));
}
