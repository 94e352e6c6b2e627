#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cnsg/bounds.hpp"
#include "cnsg/digest.hpp"
#include "cnsg/movegraph.hpp"
#include "cnsg/oracle.hpp"
#include "json.hpp"

namespace cnsg::cli {

namespace {

using nlohmann::ordered_json;

// Raised for unreadable files and failed replays; both are semantic errors.
struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

// Parse errors keep their line/column and gain the file name.
template <class F>
auto with_file(const std::string& path, F&& parse) {
    try {
        return parse(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), 0, 0);
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

Triangulation load_tri(const std::string& path) {
    return with_file(path, [](const std::string& text) { return parse_triangulation(text); });
}

SurfaceEncoding load_surf(const Triangulation& tri, const std::string& path) {
    return with_file(path, [&](const std::string& text) {
        SurfaceEncoding s = parse_surface(text);
        normalize_annuli(tri, s);
        return s;
    });
}

int default_workers() {
    if (const char* env = std::getenv("CNSG_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

std::string fixed(double x) {
    std::ostringstream ss;
    ss << std::setprecision(12) << x;
    return ss.str();
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string tri;
    std::string surface;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
    const Triangulation tri = load_tri(a.tri);
    out << "triangulation: " << tri.size() << " tetrahedra, " << tri.num_vertices() << " vertices, "
        << tri.num_edges() << " edges, " << tri.num_faces() << " faces, χ " << tri.euler_characteristic() << "\n";
    out << "edge degrees:";
    for (int e = 0; e < tri.num_edges(); ++e) out << ' ' << tri.edge_degree(e);
    out << "\n";
    if (a.surface.empty()) return kOk;

    const SurfaceEncoding s = load_surf(tri, a.surface);
    const Validation v = validate(tri, s);
    if (!v.valid()) throw InvalidInput(a.surface + ": " + v.reason);
    const Topology t = topology(tri, s);
    out << "surface: " << t.points << " points, " << t.arcs << " arcs, " << t.disks << " disks, " << t.annuli
        << " annuli, " << t.components << (t.components == 1 ? " component" : " components") << "\n";
    out << classification_name(v.kind) << ", weight " << weight(s) << ", χ " << t.euler << ", genus " << t.genus << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
    std::string config;
    bool json = false;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    const BoundsConfig c = with_file(a.config, [](const std::string& text) { return parse_bounds_config(text); });
    const Bounds b = compute_bounds(c);
    if (a.json) {
        ordered_json j{{"genus", c.genus}, {"sweepout_area", c.sweepout_area}, {"K", c.K},
                       {"delta0", c.delta0}, {"delta1", c.delta1}, {"margin", c.margin},
                       {"C", b.C}, {"delta", b.delta}, {"W", b.W}};
        out << j.dump() << "\n";
    } else {
        out << "C = " << fixed(b.C) << "\n";
        out << "δ = " << fixed(b.delta) << "\n";
        out << "W = " << b.W << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct GraphArgs {
    std::string tri;
    std::string seed;
    std::optional<int> budget;
    std::string bounds;
    std::string moves = move_set_string(default_move_set());
    std::vector<std::string> spheres;  // NAME=FILE
    std::size_t max_vertices = 0;
    double max_seconds = 0;
    int workers = 1;
    std::string json_out;
    std::string dot_out;
    std::string manifest_out;
    std::string loops_out;
    bool emit_loops = false;
};

SphereCatalog make_catalog(const Triangulation& tri, const std::vector<std::string>& entries) {
    SphereCatalog cat = default_catalog(tri);
    for (const std::string& entry : entries) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) throw InvalidInput("--sphere expects NAME=FILE, got '" + entry + "'");
        const std::string name = entry.substr(0, eq);
        for (const auto& s : cat)
            if (s.name == name) throw InvalidInput("duplicate catalog sphere " + name);
        add_custom_sphere(tri, cat, name, load_surf(tri, entry.substr(eq + 1)));
    }
    return cat;
}

std::string loops_text(const GeneratorSet& gs) {
    std::string text;
    for (const auto& loop : gs.loops) {
        for (std::size_t k = 0; k < loop.size(); ++k) text += (k ? " " : "") + to_text(loop[k]);
        text += "\n";
    }
    return text;
}

int cmd_graph(const GraphArgs& a, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const Triangulation tri = load_tri(a.tri);
    const SurfaceEncoding seed = load_surf(tri, a.seed);

    std::optional<BoundsConfig> config;
    std::optional<Bounds> bounds;
    if (!a.bounds.empty()) {
        config = with_file(a.bounds, [](const std::string& text) { return parse_bounds_config(text); });
        bounds = compute_bounds(*config);
    }
    if (a.budget.has_value() == bounds.has_value())
        throw InvalidInput("give exactly one of --budget and --bounds");

    BuildOptions opt;
    opt.budget = a.budget ? *a.budget : bounds->W;
    opt.move_set = parse_move_set(a.moves);
    opt.catalog = make_catalog(tri, a.spheres);
    opt.limits.max_vertices = a.max_vertices;
    opt.limits.max_seconds = a.max_seconds;
    opt.workers = a.workers;

    MoveGraph g;
    std::string partial_reason;
    try {
        g = build(tri, seed, opt);
    } catch (const PartialGraph& p) {
        g = p.graph();
        partial_reason = p.what();
    }

    Provenance prov;
    prov.triangulation_sha256 = file_sha256(a.tri);
    prov.seed_sha256 = file_sha256(a.seed);
    for (const auto& s : opt.catalog) prov.catalog_sha256.push_back(sha256_hex(to_text(s.surface)));
    prov.limits = opt.limits;
    const std::string json = export_json(g, prov);
    const std::string dot = export_dot(g);
    if (!a.json_out.empty()) write_file(a.json_out, json);
    if (!a.dot_out.empty()) write_file(a.dot_out, dot);

    out << "status " << (g.complete ? "complete" : "PARTIAL") << "\n";
    out << "vertices " << g.vertices.size() << ", edges " << g.edges.size() << ", rank " << g.rank() << ", levels "
        << g.stats.levels << "\n";
    out << "candidates " << g.stats.candidates << ", rejected by budget " << g.stats.rejected_by_budget << "\n";
    out << "pinch edges per sphere:";
    for (std::size_t k = 0; k < opt.catalog.size(); ++k)
        out << ' ' << opt.catalog[k].name << '=' << g.stats.pinch_edges_per_sphere.at(k);
    out << "\n";

    std::string loops_sha;
    if (a.emit_loops && g.complete) {
        const GeneratorSet gs = generators(g);
        const std::string text = loops_text(gs);
        loops_sha = sha256_hex(text);
        out << "generators " << gs.loops.size() << "\n";
        if (a.loops_out.empty())
            out << text;
        else
            write_file(a.loops_out, text);
    }
    const std::string digest = sha256_hex(json);
    out << "digest " << digest << "\n";

    if (!a.manifest_out.empty()) {
        ordered_json m;
        m["tool"] = "cnsg";
        m["version"] = CNSG_VERSION;
        m["command"] = a.emit_loops ? "generators" : "graph";
        ordered_json inputs;
        inputs["triangulation"] = {{"path", a.tri}, {"sha256", prov.triangulation_sha256}};
        inputs["seed"] = {{"path", a.seed}, {"sha256", prov.seed_sha256}};
        if (config) inputs["bounds"] = {{"path", a.bounds}, {"sha256", file_sha256(a.bounds)}};
        m["inputs"] = inputs;
        ordered_json params;
        params["W"] = opt.budget;
        params["K"] = config ? ordered_json(config->K) : ordered_json(nullptr);
        params["C"] = bounds ? ordered_json(bounds->C) : ordered_json(nullptr);
        params["delta"] = bounds ? ordered_json(bounds->delta) : ordered_json(nullptr);
        params["margin"] = config ? ordered_json(config->margin) : ordered_json(nullptr);
        params["move_set"] = move_set_string(opt.move_set);
        ordered_json cat = ordered_json::array();
        for (std::size_t k = 0; k < opt.catalog.size(); ++k)
            cat.push_back({{"name", opt.catalog[k].name}, {"sha256", prov.catalog_sha256[k]}});
        params["catalog"] = cat;
        params["limits"] = {{"max_vertices", opt.limits.max_vertices}, {"max_seconds", opt.limits.max_seconds}};
        params["workers"] = opt.workers;
        m["parameters"] = params;
        m["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        ordered_json result{{"status", g.complete ? "complete" : "PARTIAL"},
                            {"vertices", g.vertices.size()},
                            {"edges", g.edges.size()},
                            {"rank", g.rank()},
                            {"json_sha256", digest},
                            {"dot_sha256", sha256_hex(dot)}};
        if (!loops_sha.empty()) result["loops_sha256"] = loops_sha;
        m["result"] = result;
        write_file(a.manifest_out, m.dump(1) + "\n");
    }

    if (!g.complete) {
        err << "partial graph: " << partial_reason << "\n";
        return kPartial;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct ReplayArgs {
    std::string tri;
    std::string seed;
    std::string loops;
    std::vector<std::string> spheres;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out) {
    const Triangulation tri = load_tri(a.tri);
    const SurfaceEncoding seed = load_surf(tri, a.seed);
    const SphereCatalog cat = make_catalog(tri, a.spheres);
    // one loop per non-blank line; a file without loops holds the empty loop
    std::vector<std::vector<Move>> loops;
    std::istringstream in(read_file(a.loops));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = line.substr(0, line.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            loops.push_back(parse_move_list(line));
        } catch (const ParseError& e) {
            throw ParseError(a.loops + ": line " + std::to_string(line_no) + ": " + e.what(), 0, 0);
        }
    }
    if (loops.empty()) loops.emplace_back();
    int failed = 0;
    for (std::size_t k = 0; k < loops.size(); ++k) {
        const ReplayResult r = replay(tri, seed, loops[k], cat);
        out << "loop " << k + 1 << ": " << (r.ok ? "ok" : "fail: " + r.message) << "\n";
        failed += !r.ok;
    }
    out << (failed ? "fail" : "ok") << "\n";
    if (failed) throw Failure(std::to_string(failed) + " of " + std::to_string(loops.size()) + " loops failed");
    return kOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    std::string mode;
    std::vector<std::string> operands;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
    const auto& ops = a.operands;
    auto need = [&](std::size_t n) {
        if (ops.size() != n) throw InvalidInput("oracle " + a.mode + " expects " + std::to_string(n) + " operands");
    };
    if (a.mode == "matchings") {
        need(3);
        const auto m = oracle::oracle_matchings({std::stoi(ops[0]), std::stoi(ops[1]), std::stoi(ops[2])});
        out << m.count << "\n";
        for (const auto& pm : m.partners) {
            for (std::size_t p = 0; p < pm.size(); ++p)
                if (pm[p] > static_cast<int>(p)) out << ' ' << p << '-' << pm[p];
            out << "\n";
        }
    } else if (a.mode == "surfaces") {
        need(2);
        out << oracle::oracle_surfaces(read_file(ops[0]), std::stoi(ops[1])).size() << "\n";
    } else if (a.mode == "closure") {
        need(4);
        out << oracle::oracle_closure(read_file(ops[0]), read_file(ops[1]), std::stoi(ops[2]), ops[3]).size() << "\n";
    } else {
        throw InvalidInput("unknown oracle mode '" + a.mode + "'");
    }
    return kOk;
}

void add_graph_options(CLI::App* sub, GraphArgs& g) {
    sub->add_option("triangulation", g.tri, "Gluing table")->required();
    sub->add_option("seed", g.seed, "Crudely normal seed surface")->required();
    sub->add_option("--budget,-W", g.budget, "Weight budget W");
    sub->add_option("--bounds", g.bounds, "Bounds config; W = floor(K(C+1))");
    sub->add_option("--moves", g.moves, "Comma-separated move kinds (V0,E1,F2,F2',PINCH,UNPINCH)");
    sub->add_option("--sphere", g.spheres, "Extra catalog sphere NAME=FILE");
    sub->add_option("--max-vertices", g.max_vertices, "Stop after this many vertices (0: none)");
    sub->add_option("--max-seconds", g.max_seconds, "Stop after this many seconds (0: none)");
    sub->add_option("--workers", g.workers, "Worker threads (default: $CNSG_WORKERS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--json", g.json_out, "Write the canonical JSON export");
    sub->add_option("--dot", g.dot_out, "Write the DOT export");
    sub->add_option("--manifest", g.manifest_out, "Write the run manifest");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Move graphs of crudely almost normal surfaces"};
    app.name("cnsg");
    app.set_version_flag("--version", std::string(CNSG_VERSION));
    app.require_subcommand(1);

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "Check a triangulation and optionally a surface");
    validate_cmd->add_option("triangulation", va.tri, "Gluing table")->required();
    validate_cmd->add_option("surface", va.surface, "Surface encoding");

    BoundsArgs ba;
    auto* bounds_cmd = app.add_subcommand("bounds", "Compute C, δ and the weight budget W");
    bounds_cmd->add_option("config", ba.config, "key = value config")->required();
    bounds_cmd->add_flag("--json", ba.json, "Print JSON");

    GraphArgs ga;
    ga.workers = default_workers();
    auto* graph_cmd = app.add_subcommand("graph", "Build the move graph from a seed");
    add_graph_options(graph_cmd, ga);

    GraphArgs gen;
    gen.workers = default_workers();
    gen.emit_loops = true;
    auto* gen_cmd = app.add_subcommand("generators", "Build the move graph and emit spanning-tree loops");
    add_graph_options(gen_cmd, gen);
    gen_cmd->add_option("--loops", gen.loops_out, "Write loops here instead of stdout");

    ReplayArgs ra;
    auto* replay_cmd = app.add_subcommand("replay", "Replay loops from the seed");
    replay_cmd->add_option("triangulation", ra.tri, "Gluing table")->required();
    replay_cmd->add_option("seed", ra.seed, "Seed surface")->required();
    replay_cmd->add_option("loops", ra.loops, "One loop of moves per line")->required();
    replay_cmd->add_option("--sphere", ra.spheres, "Extra catalog sphere NAME=FILE");

    OracleArgs oa;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force reference queries");
    oracle_cmd->group("");
    oracle_cmd->add_option("mode", oa.mode, "matchings | surfaces | closure")->required();
    oracle_cmd->add_option("operands", oa.operands, "Mode operands");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    try {
        if (*validate_cmd) return cmd_validate(va, out);
        if (*bounds_cmd) return cmd_bounds(ba, out);
        if (*graph_cmd) return cmd_graph(ga, out, err);
        if (*gen_cmd) return cmd_graph(gen, out, err);
        if (*replay_cmd) return cmd_replay(ra, out);
        if (*oracle_cmd) return cmd_oracle(oa, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSemanticError;
    }
    return kSemanticError;
}

}  // namespace cnsg::cli
