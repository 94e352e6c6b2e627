// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "cnsg/bounds.hpp"
#include "cnsg/movegraph.hpp"
#include "cnsg/oracle.hpp"
#include "support.hpp"

using namespace cnsg;

namespace {

struct Check {
    std::ostringstream notes;
    bool ok = true;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [" << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<void(Check&)>& body) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << dt;
    c.expect(dt < limit_seconds, "took " + t.str() + " s, limit " + std::to_string(static_cast<int>(limit_seconds)) + " s");
    if (!c.ok) ++failures;
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << t.str() << " s)" << c.notes.str()
              << std::endl;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = cli::run(std::move(args), o, e);
    if (out) *out = o.str();
    return code;
}

struct Build {
    std::string moves;
    int budget;
    std::size_t max_vertices;
};

// Graphs built for the move-algebra and generator criteria. The last one is capped: the
// full default closure at W = 12 is far larger, and its edges are checked all the same.
const std::vector<Build> kBuilds{{"E1", 8, 0}, {"E1,F2", 8, 0}, {"V0,E1,F2,F2',PINCH,UNPINCH", 12, 1500}};

MoveGraph build_graph(const Triangulation& tri, const SurfaceEncoding& seed, const Build& b) {
    BuildOptions o;
    o.budget = b.budget;
    o.move_set = parse_move_set(b.moves);
    o.catalog = default_catalog(tri);
    o.limits.max_vertices = b.max_vertices;
    try {
        return build(tri, seed, o);
    } catch (const PartialGraph& p) {
        return p.graph();
    }
}

}  // namespace

int main() {
    const std::string tri_path = testing::data("s3_2tet.tri");
    const std::string seed_path = testing::data("s3_vertex_link.surf");
    const std::string tri_text = testing::slurp(tri_path);
    const std::string seed_text = testing::slurp(seed_path);

    criterion(1, "reference triangulation and subdivision counts", 1, [&](Check& c) {
        const Triangulation tri = load_triangulation(tri_path);
        c.expect(tri.num_vertices() == 1, "|V| = 1");
        c.expect(tri.num_edges() == 3, "|E| = 3");
        c.expect(tri.num_faces() == 4, "|F| = 4");
        c.expect(tri.euler_characteristic() == 0, "χ = 0");
        const Triangulation sub = barycentric_subdivide(tri);
        c.expect(sub.size() == 48, "48 tetrahedra");
        c.expect(sub.euler_characteristic() == 0, "subdivision χ = 0");
    });

    criterion(2, "vertex-link certificate", 1, [&](Check& c) {
        const Triangulation tri = load_triangulation(tri_path);
        const SurfaceEncoding s = load_surface(seed_path);
        c.expect(validate(tri, s).kind == Classification::crudely_normal, "crudely_normal");
        const Topology t = topology(tri, s);
        c.expect(weight(s) == 6, "weight 6");
        c.expect(t.points == 6 && t.arcs == 12 && t.disks == 8, "6 - 12 + 8");
        c.expect(t.euler == 2, "χ = 2");
        c.expect(t.genus == 0, "genus 0");
        c.expect(t.components == 1, "connected");
    });

    const Triangulation tri = load_triangulation(tri_path);
    const SurfaceEncoding seed = load_surface(seed_path);
    std::vector<MoveGraph> graphs;

    criterion(3, "move algebra over every built edge", 120, [&](Check& c) {
        const SphereCatalog cat = default_catalog(tri);
        long edges = 0;
        std::set<MoveKind> kinds;
        for (const Build& b : kBuilds) {
            graphs.push_back(build_graph(tri, seed, b));
            const MoveGraph& g = graphs.back();
            for (const GraphEdge& e : g.edges) {
                ++edges;
                kinds.insert(e.move.kind());
                const SurfaceEncoding& u = g.vertices[e.u].surface;
                const SurfaceEncoding& v = g.vertices[e.v].surface;
                const std::string text = to_text(e.move);
                c.expect(canonical_key(apply(tri, u, e.move, cat)) == g.vertices[e.v].key, "forward " + text);
                c.expect(canonical_key(apply(tri, v, e.inverse, cat)) == g.vertices[e.u].key, "inverse " + text);
                const Topology a = topology(tri, u), z = topology(tri, v);
                c.expect(a.euler == z.euler && a.genus == z.genus && a.components == z.components, "topology " + text);
                int table = 0;
                switch (e.move.type) {
                    case MoveType::V0_plus: table = tri.vertex_degree(e.move.where); break;
                    case MoveType::V0_minus: table = -tri.vertex_degree(e.move.where); break;
                    case MoveType::E1_plus: table = 2; break;
                    case MoveType::E1_minus: table = -2; break;
                    case MoveType::F2:
                    case MoveType::F2p: table = 0; break;
                    case MoveType::pinch: table = weight(cat.at(e.move.args[2]).surface); break;
                    case MoveType::unpinch: table = -weight(cat.at(e.move.args[1]).surface); break;
                }
                c.expect(weight(v) - weight(u) == table, "weight delta " + text);
            }
        }
        for (MoveKind k : {MoveKind::V0, MoveKind::E1, MoveKind::F2, MoveKind::F2p, MoveKind::PINCH})
            c.expect(kinds.count(k) > 0, "no " + kind_name(k) + " edge exercised");
        c.expect(edges > 0, "no edges");
    });

    criterion(4, "oracle equivalence", 300, [&](Check& c) {
        for (int W = 0; W <= 4; ++W) {
            std::set<std::string> main;
            for (const SurfaceEncoding& s : enumerate_surfaces(tri, W)) main.insert(to_text(s));
            c.expect(oracle::oracle_surfaces(tri_text, W) == main, "surfaces W = " + std::to_string(W));
        }
        // below weight 6 the seed itself is over budget
        for (int W = 6; W <= 8; ++W) {
            BuildOptions o;
            o.budget = W;
            o.move_set = {MoveKind::E1};
            o.catalog = default_catalog(tri);
            std::set<std::string> built;
            for (const GraphVertex& v : build(tri, seed, o).vertices) built.insert(to_text(v.surface));
            c.expect(oracle::oracle_closure(tri_text, seed_text, W, "E1") == built, "closure W = " + std::to_string(W));
        }
    });

    criterion(5, "generator count and replay", 60, [&](Check& c) {
        testing::ScratchDir dir;
        int replayed = 0;
        for (std::size_t k = 0; k < graphs.size(); ++k) {
            const MoveGraph& g = graphs[k];
            // a capped build is not the whole component, so it has no generating set
            if (!g.complete) continue;
            const GeneratorSet gs = generators(g);
            c.expect(static_cast<long>(gs.loops.size()) ==
                         static_cast<long>(g.edges.size()) - static_cast<long>(g.vertices.size()) + 1,
                     "|generators| for " + kBuilds[k].moves);
            std::string text;
            for (const auto& loop : gs.loops) {
                for (std::size_t i = 0; i < loop.size(); ++i) text += (i ? " " : "") + to_text(loop[i]);
                text += "\n";
                ++replayed;
            }
            const std::string path = dir / ("loops" + std::to_string(k) + ".txt");
            testing::spit(path, text);
            std::string out;
            c.expect(run_cli({"replay", tri_path, seed_path, path}, &out) == 0, "replay " + kBuilds[k].moves);
        }
        c.expect(replayed > 0, "no loops replayed");
    });

    criterion(6, "determinism across worker counts", 120, [&](Check& c) {
        testing::ScratchDir dir;
        const std::vector<std::string> base{"graph", tri_path, seed_path, "--budget", "8", "--moves", "E1,F2"};
        auto args = [&](const std::string& workers, const std::string& out) {
            std::vector<std::string> a = base;
            a.insert(a.end(), {"--workers", workers, "--json", out});
            return a;
        };
        c.expect(run_cli(args("1", dir / "one.json")) == 0, "1 worker");
        c.expect(run_cli(args("8", dir / "eight.json")) == 0, "8 workers");
        const std::string one = testing::slurp(dir / "one.json");
        c.expect(!one.empty() && one == testing::slurp(dir / "eight.json"), "byte-identical exports");
    });

    criterion(7, "bounds formulas", 1, [&](Check& c) {
        const double four_pi = 4 * std::numbers::pi;
        const double C = area_constant(2, 1);
        c.expect(C > four_pi + 1e-9, "C > 4π");
        c.expect(C <= four_pi * 1.02 + 1e-9, "C within 2% of 4π");
        c.expect(std::abs(delta_constant(8, 2) - 0.99) <= 1e-9, "δ(8, 2) = 0.99");
        c.expect(weight_budget(2, C) == 27, "W = 27");
    });

    criterion(8, "Catalan cross-check", 10, [&](Check& c) {
        const auto m = oracle::oracle_matchings({2, 2, 2});
        c.expect(m.count == 5 && m.partners.size() == 5, "(2,2,2) has 5 matchings");
        for (int a = 0; a <= 8; ++a)
            for (int b = 0; a + b <= 8; ++b)
                for (int d = 0; a + b + d <= 8; ++d) {
                    if ((a + b + d) % 2) continue;
                    c.expect(oracle::oracle_matchings({a, b, d}).partners == arc_systems({a, b, d}),
                             "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d) + ")");
                }
    });

    return failures == 0 ? 0 : 1;
}
