#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cnsg/moves.hpp"

namespace cnsg {

struct BuildLimits {
    std::size_t max_vertices = 0;  // 0: unlimited
    double max_seconds = 0;        // 0: unlimited
};

struct BuildOptions {
    int budget = 0;
    MoveSet move_set = default_move_set();
    SphereCatalog catalog;
    BuildLimits limits;
    int workers = 1;
};

struct GraphVertex {
    std::string key;
    SurfaceEncoding surface;
    int weight = 0;
    int depth = 0;
};

// `move` applies at u and yields v; `inverse` applies at v and yields u.
struct GraphEdge {
    int u = 0;
    int v = 0;
    Move move;
    Move inverse;
};

struct GraphStats {
    std::int64_t candidates = 0;
    std::int64_t rejected_by_budget = 0;
    int levels = 0;
    std::vector<int> pinch_edges_per_sphere;  // catalog coverage
};

struct MoveGraph {
    std::vector<GraphVertex> vertices;  // discovery order; vertices[0] is the seed
    std::vector<GraphEdge> edges;       // sorted by (u, v, move text)
    int budget = 0;
    MoveSet move_set;
    std::vector<std::string> catalog;
    bool complete = false;
    GraphStats stats;

    long rank() const { return static_cast<long>(edges.size()) - static_cast<long>(vertices.size()) + 1; }
    int find(const std::string& key) const;  // -1 when absent
};

// A build stopped by a limit. The partial graph is never marked complete.
class PartialGraph : public std::runtime_error {
public:
    PartialGraph(const std::string& what, MoveGraph graph) : std::runtime_error(what), graph_(std::move(graph)) {}
    const MoveGraph& graph() const { return graph_; }

private:
    MoveGraph graph_;
};

// Breadth-first closure of the seed. Throws InvalidInput for a bad seed or budget and
// PartialGraph when a limit is hit.
MoveGraph build(const Triangulation& tri, const SurfaceEncoding& seed, const BuildOptions& options);

struct GeneratorSet {
    std::vector<std::vector<Move>> loops;
    long rank = 0;
};

// One loop per non-tree edge of the breadth-first spanning tree, in edge order.
GeneratorSet generators(const MoveGraph& g);

struct ReplayResult {
    bool ok = false;
    int failed_step = -1;  // index of the inapplicable move, or -1
    std::string message;
};

ReplayResult replay(const Triangulation& tri, const SurfaceEncoding& seed, const std::vector<Move>& loop,
                    const SphereCatalog& catalog);

struct Provenance {
    std::string triangulation_sha256;
    std::string seed_sha256;
    std::vector<std::string> catalog_sha256;
    BuildLimits limits;
};

std::string export_json(const MoveGraph& g, const Provenance& provenance);
std::string export_dot(const MoveGraph& g);
// format is "json" or "dot"; anything else throws InvalidInput.
std::string export_graph(const MoveGraph& g, const Provenance& provenance, std::string_view format);
MoveGraph import_json(const Triangulation& tri, std::string_view json);

}  // namespace cnsg
