#include "cnsg/movegraph.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "cnsg/digest.hpp"
#include "json.hpp"

namespace cnsg {

int MoveGraph::find(const std::string& key) const {
    for (std::size_t k = 0; k < vertices.size(); ++k)
        if (vertices[k].key == key) return static_cast<int>(k);
    return -1;
}

namespace {

struct Step {
    Move move;
    Move inverse;
    std::string key;
    SurfaceEncoding result;
};

struct Expansion {
    std::vector<Step> steps;
    NeighborStats stats;
    bool done = false;
};

Expansion expand(const Triangulation& tri, const SurfaceEncoding& enc, const BuildOptions& opt) {
    Expansion x;
    for (Neighbor& n : neighbors(tri, enc, opt.budget, opt.move_set, opt.catalog, &x.stats)) {
        Move inv = inverse(tri, enc, n.move, opt.catalog);
        x.steps.push_back({std::move(n.move), std::move(inv), std::move(n.key), std::move(n.result)});
    }
    x.done = true;
    return x;
}

void finalize(MoveGraph& g, const std::map<std::pair<int, std::string>, GraphEdge>& edges) {
    g.edges.clear();
    std::vector<std::tuple<int, int, std::string, const GraphEdge*>> sorted;
    for (const auto& [id, e] : edges) sorted.emplace_back(e.u, e.v, to_text(e.move), &e);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) < std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
    });
    for (const auto& item : sorted) g.edges.push_back(*std::get<3>(item));
    std::fill(g.stats.pinch_edges_per_sphere.begin(), g.stats.pinch_edges_per_sphere.end(), 0);
    for (const GraphEdge& e : g.edges) {
        if (e.move.type == MoveType::pinch) ++g.stats.pinch_edges_per_sphere.at(e.move.args[2]);
        if (e.move.type == MoveType::unpinch) ++g.stats.pinch_edges_per_sphere.at(e.move.args[1]);
    }
}

}  // namespace

MoveGraph build(const Triangulation& tri, const SurfaceEncoding& seed, const BuildOptions& opt) {
    const Validation v = validate(tri, seed);
    if (!v.valid()) throw InvalidInput("seed is invalid: " + v.reason);
    if (v.kind != Classification::crudely_normal) throw InvalidInput("seed must be crudely normal");
    if (weight(seed) > opt.budget)
        throw InvalidInput("seed weight " + std::to_string(weight(seed)) + " exceeds budget " + std::to_string(opt.budget));

    const auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        if (opt.limits.max_seconds <= 0) return false;
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
        return dt.count() > opt.limits.max_seconds;
    };

    MoveGraph g;
    g.budget = opt.budget;
    g.move_set = opt.move_set;
    for (const auto& s : opt.catalog) g.catalog.push_back(s.name);
    g.stats.pinch_edges_per_sphere.assign(opt.catalog.size(), 0);
    std::unordered_map<std::string, int> index;
    g.vertices.push_back({canonical_key(seed), seed, weight(seed), 0});
    index.emplace(g.vertices[0].key, 0);

    std::map<std::pair<int, std::string>, GraphEdge> edges;
    std::vector<int> frontier{0};
    const int workers = std::max(1, opt.workers);

    auto partial = [&](const std::string& why) {
        g.complete = false;
        finalize(g, edges);
        throw PartialGraph(why, std::move(g));
    };

    while (!frontier.empty()) {
        std::vector<Expansion> results(frontier.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        auto work = [&] {
            for (std::size_t k; (k = next.fetch_add(1)) < frontier.size();) {
                if (stop.load()) return;
                results[k] = expand(tri, g.vertices[frontier[k]].surface, opt);
                if (out_of_time()) stop.store(true);
            }
        };
        if (workers == 1 || frontier.size() == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            const int n = static_cast<int>(std::min<std::size_t>(workers, frontier.size()));
            for (int w = 0; w < n; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }

        std::vector<int> next_frontier;
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            if (!results[k].done) partial("time limit of " + std::to_string(opt.limits.max_seconds) + " s exceeded");
            const int u = frontier[k];
            g.stats.candidates += results[k].stats.candidates;
            g.stats.rejected_by_budget += results[k].stats.rejected_by_budget;
            for (Step& s : results[k].steps) {
                auto it = index.find(s.key);
                int w;
                if (it == index.end()) {
                    w = static_cast<int>(g.vertices.size());
                    index.emplace(s.key, w);
                    g.vertices.push_back({s.key, std::move(s.result), 0, g.vertices[u].depth + 1});
                    g.vertices.back().weight = weight(g.vertices.back().surface);
                    next_frontier.push_back(w);
                } else {
                    w = it->second;
                }
                std::string fwd = to_text(s.move);
                std::string back = to_text(s.inverse);
                GraphEdge e{u, w, s.move, s.inverse};
                std::pair<int, std::string> id{u, fwd};
                if (std::make_pair(w, back) < id) {
                    e = GraphEdge{w, u, s.inverse, s.move};
                    id = {w, back};
                }
                edges.emplace(std::move(id), std::move(e));
            }
            if (opt.limits.max_vertices > 0 && g.vertices.size() > opt.limits.max_vertices)
                partial("vertex limit of " + std::to_string(opt.limits.max_vertices) + " exceeded");
        }
        ++g.stats.levels;
        frontier = std::move(next_frontier);
        if (!frontier.empty() && out_of_time())
            partial("time limit of " + std::to_string(opt.limits.max_seconds) + " s exceeded");
    }
    finalize(g, edges);
    g.complete = true;
    return g;
}

GeneratorSet generators(const MoveGraph& g) {
    if (!g.complete) throw InvalidInput("generators need a complete graph");
    const int n = static_cast<int>(g.vertices.size());
    std::vector<std::vector<int>> incident(n);
    for (int k = 0; k < static_cast<int>(g.edges.size()); ++k) {
        incident[g.edges[k].u].push_back(k);
        if (g.edges[k].v != g.edges[k].u) incident[g.edges[k].v].push_back(k);
    }
    std::vector<int> parent_edge(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<bool> tree(g.edges.size(), false);
    std::vector<int> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int x = queue[head];
        for (int k : incident[x]) {
            const int y = g.edges[k].u == x ? g.edges[k].v : g.edges[k].u;
            if (seen[y]) continue;
            seen[y] = true;
            parent_edge[y] = k;
            tree[k] = true;
            queue.push_back(y);
        }
    }
    // moves from the seed down to x
    auto path = [&](int x) {
        std::vector<Move> out;
        while (x != 0) {
            const GraphEdge& e = g.edges[parent_edge[x]];
            if (e.v == x) {
                out.push_back(e.move);
                x = e.u;
            } else {
                out.push_back(e.inverse);
                x = e.v;
            }
        }
        std::reverse(out.begin(), out.end());
        return out;
    };
    auto path_back = [&](int x) {
        std::vector<Move> out;
        while (x != 0) {
            const GraphEdge& e = g.edges[parent_edge[x]];
            if (e.v == x) {
                out.push_back(e.inverse);
                x = e.u;
            } else {
                out.push_back(e.move);
                x = e.v;
            }
        }
        return out;
    };
    GeneratorSet gs;
    gs.rank = g.rank();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        if (tree[k]) continue;
        std::vector<Move> loop = path(g.edges[k].u);
        loop.push_back(g.edges[k].move);
        for (Move& m : path_back(g.edges[k].v)) loop.push_back(std::move(m));
        gs.loops.push_back(std::move(loop));
    }
    return gs;
}

ReplayResult replay(const Triangulation& tri, const SurfaceEncoding& seed, const std::vector<Move>& loop,
                    const SphereCatalog& catalog) {
    SurfaceEncoding cur = seed;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        try {
            cur = apply(tri, cur, loop[k], catalog);
        } catch (const MoveNotApplicable& e) {
            return {false, static_cast<int>(k), "step " + std::to_string(k) + " (" + to_text(loop[k]) + "): " + e.what()};
        }
    }
    if (canonical_key(cur) != canonical_key(seed))
        return {false, -1, "loop ends at " + short_hash(canonical_key(cur)) + ", not at the seed " +
                               short_hash(canonical_key(seed))};
    return {true, -1, "ok"};
}

std::string export_json(const MoveGraph& g, const Provenance& p) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["schema"] = "cnsg-movegraph/1";
    doc["complete"] = g.complete;
    doc["status"] = g.complete ? "complete" : "PARTIAL";
    ordered_json params;
    params["budget"] = g.budget;
    params["move_set"] = move_set_string(g.move_set);
    params["catalog"] = g.catalog;
    params["max_vertices"] = p.limits.max_vertices;
    params["max_seconds"] = p.limits.max_seconds;
    doc["provenance"] = {{"tool", "cnsg"},
                         {"version", CNSG_VERSION},
                         {"triangulation_sha256", p.triangulation_sha256},
                         {"seed_sha256", p.seed_sha256},
                         {"catalog_sha256", p.catalog_sha256},
                         {"parameters", params}};
    doc["budget"] = g.budget;
    doc["move_set"] = move_set_string(g.move_set);
    doc["seed"] = 0;
    doc["rank"] = g.rank();
    doc["statistics"] = {{"vertices", g.vertices.size()},
                         {"edges", g.edges.size()},
                         {"rank", g.rank()},
                         {"levels", g.stats.levels},
                         {"candidates", g.stats.candidates},
                         {"rejected_by_budget", g.stats.rejected_by_budget},
                         {"pinch_edges_per_sphere", g.stats.pinch_edges_per_sphere}};
    ordered_json vs = ordered_json::array();
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
        const GraphVertex& v = g.vertices[k];
        vs.push_back({{"id", k},
                      {"hash", short_hash(v.key)},
                      {"weight", v.weight},
                      {"depth", v.depth},
                      {"annuli", v.surface.annuli.size()},
                      {"surface", to_text(v.surface)}});
    }
    doc["vertices"] = std::move(vs);
    ordered_json es = ordered_json::array();
    for (const GraphEdge& e : g.edges)
        es.push_back({{"u", e.u}, {"v", e.v}, {"move", to_text(e.move)}, {"inverse", to_text(e.inverse)}});
    doc["edges"] = std::move(es);
    return doc.dump(1) + "\n";
}

std::string export_dot(const MoveGraph& g) {
    std::ostringstream out;
    out << "graph movegraph {\n";
    out << "  // budget " << g.budget << ", moves " << move_set_string(g.move_set)
        << (g.complete ? "" : ", PARTIAL") << "\n";
    for (const GraphVertex& v : g.vertices)
        out << "  \"" << short_hash(v.key) << "\" [label=\"" << short_hash(v.key) << "\\nw=" << v.weight << "\"];\n";
    for (const GraphEdge& e : g.edges)
        out << "  \"" << short_hash(g.vertices[e.u].key) << "\" -- \"" << short_hash(g.vertices[e.v].key)
            << "\" [label=\"" << to_text(e.move) << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string export_graph(const MoveGraph& g, const Provenance& p, std::string_view format) {
    if (format == "json") return export_json(g, p);
    if (format == "dot") return export_dot(g);
    throw InvalidInput("unknown export format '" + std::string(format) + "'");
}

MoveGraph import_json(const Triangulation& tri, std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what(), 0, 0);
    }
    try {
        if (doc.at("schema") != "cnsg-movegraph/1") throw InvalidInput("unsupported graph schema");
        MoveGraph g;
        g.complete = doc.at("complete").get<bool>();
        g.budget = doc.at("budget").get<int>();
        g.move_set = parse_move_set(doc.at("move_set").get<std::string>());
        g.catalog = doc.at("provenance").at("parameters").at("catalog").get<std::vector<std::string>>();
        const auto& st = doc.at("statistics");
        g.stats.levels = st.at("levels").get<int>();
        g.stats.candidates = st.at("candidates").get<std::int64_t>();
        g.stats.rejected_by_budget = st.at("rejected_by_budget").get<std::int64_t>();
        g.stats.pinch_edges_per_sphere = st.at("pinch_edges_per_sphere").get<std::vector<int>>();
        for (const auto& v : doc.at("vertices")) {
            SurfaceEncoding s = parse_surface(v.at("surface").get<std::string>());
            normalize_annuli(tri, s);
            GraphVertex gv{canonical_key(s), s, weight(s), v.at("depth").get<int>()};
            g.vertices.push_back(std::move(gv));
        }
        for (const auto& e : doc.at("edges"))
            g.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), parse_move(e.at("move").get<std::string>()),
                               parse_move(e.at("inverse").get<std::string>())});
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what(), 0, 0);
    }
}

}  // namespace cnsg
