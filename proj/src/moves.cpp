#include "cnsg/moves.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "draft.hpp"

namespace cnsg {

using detail::Draft;
using detail::End;
using detail::Rep;

// ---------------------------------------------------------------------------
// names and text

std::string kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::V0: return "V0";
        case MoveKind::E1: return "E1";
        case MoveKind::F2: return "F2";
        case MoveKind::F2p: return "F2'";
        case MoveKind::PINCH: return "PINCH";
        case MoveKind::UNPINCH: return "UNPINCH";
    }
    return "?";
}

MoveKind parse_kind(std::string_view s) {
    for (MoveKind k : {MoveKind::V0, MoveKind::E1, MoveKind::F2, MoveKind::F2p, MoveKind::PINCH, MoveKind::UNPINCH})
        if (s == kind_name(k)) return k;
    if (s == "F2p") return MoveKind::F2p;
    throw ParseError("unknown move kind '" + std::string(s) + "'", 0, 0);
}

MoveSet parse_move_set(std::string_view s) {
    MoveSet out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string_view::npos) comma = s.size();
        std::string_view item = s.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.insert(parse_kind(item));
        pos = comma + 1;
    }
    return out;
}

std::string move_set_string(const MoveSet& set) {
    std::string out;
    for (MoveKind k : set) {
        if (!out.empty()) out += ',';
        out += kind_name(k);
    }
    return out;
}

MoveSet default_move_set() { return {MoveKind::V0, MoveKind::E1, MoveKind::F2p, MoveKind::PINCH, MoveKind::UNPINCH}; }

namespace {

struct TypeInfo {
    MoveType type;
    const char* name;
    char location;
    std::vector<const char*> args;
};

const std::vector<TypeInfo>& type_table() {
    static const std::vector<TypeInfo> table{
        {MoveType::V0_plus, "V0+", 'v', {"f", "c", "a"}},
        {MoveType::V0_minus, "V0-", 'v', {"f", "c"}},
        {MoveType::E1_plus, "E1+", 'e', {"i", "f", "s", "a"}},
        {MoveType::E1_minus, "E1-", 'e', {"i"}},
        {MoveType::F2, "F2", 'f', {"a", "b", "g", "k"}},
        {MoveType::F2p, "F2'", 'f', {"a", "b", "g", "k"}},
        {MoveType::pinch, "PINCH", 't', {"c", "s", "d"}},
        {MoveType::unpinch, "UNPINCH", 't', {"d", "s"}},
    };
    return table;
}

const TypeInfo& info(MoveType t) {
    for (const auto& i : type_table())
        if (i.type == t) return i;
    throw std::logic_error("unknown move type");
}

std::size_t arg_width(MoveType t) { return t == MoveType::pinch ? 5 : info(t).args.size(); }

}  // namespace

MoveKind Move::kind() const {
    switch (type) {
        case MoveType::V0_plus:
        case MoveType::V0_minus: return MoveKind::V0;
        case MoveType::E1_plus:
        case MoveType::E1_minus: return MoveKind::E1;
        case MoveType::F2: return MoveKind::F2;
        case MoveType::F2p: return MoveKind::F2p;
        case MoveType::pinch: return MoveKind::PINCH;
        case MoveType::unpinch: return MoveKind::UNPINCH;
    }
    return MoveKind::E1;
}

std::string to_text(const Move& m) {
    const TypeInfo& ti = info(m.type);
    if (m.args.size() != arg_width(m.type)) throw std::logic_error("move has the wrong number of arguments");
    std::ostringstream out;
    out << ti.name << '@' << ti.location << m.where << '[';
    if (m.type == MoveType::pinch) {
        out << "c=" << m.args[0] << '.' << m.args[1] << ",s=" << m.args[2] << ",d=" << m.args[3] << '.' << m.args[4];
    } else {
        for (std::size_t k = 0; k < ti.args.size(); ++k) out << (k ? "," : "") << ti.args[k] << '=' << m.args[k];
    }
    out << ']';
    return out.str();
}

Move parse_move(std::string_view text) {
    auto bad = [&](const std::string& why) -> ParseError {
        return ParseError("move '" + std::string(text) + "': " + why, 0, 0);
    };
    const auto at = text.find('@');
    if (at == std::string_view::npos) throw bad("missing '@'");
    const TypeInfo* ti = nullptr;
    for (const auto& i : type_table())
        if (text.substr(0, at) == i.name) ti = &i;
    if (!ti) throw bad("unknown move type '" + std::string(text.substr(0, at)) + "'");
    std::size_t pos = at + 1;
    if (pos >= text.size() || text[pos] != ti->location)
        throw bad(std::string("expected location '") + ti->location + "<id>'");
    ++pos;
    const auto open = text.find('[', pos);
    if (open == std::string_view::npos || text.back() != ']') throw bad("expected '[...]'");
    Move m;
    m.type = ti->type;
    auto to_int = [&](std::string_view s) {
        if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw bad("expected a nonnegative integer, got '" + std::string(s) + "'");
        return std::stoi(std::string(s));
    };
    m.where = to_int(text.substr(pos, open - pos));
    std::string_view body = text.substr(open + 1, text.size() - open - 2);
    std::vector<std::string_view> items;
    while (!body.empty()) {
        auto comma = body.find(',');
        items.push_back(body.substr(0, comma));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    if (items.size() != ti->args.size()) throw bad("expected " + std::to_string(ti->args.size()) + " arguments");
    for (std::size_t k = 0; k < items.size(); ++k) {
        auto eq = items[k].find('=');
        if (eq == std::string_view::npos || items[k].substr(0, eq) != ti->args[k])
            throw bad(std::string("expected argument '") + ti->args[k] + "='");
        std::string_view value = items[k].substr(eq + 1);
        if (m.type == MoveType::pinch && k != 1) {
            TetPoint p;
            try {
                p = parse_tet_point(value);
            } catch (const ParseError& e) {
                throw bad(e.what());
            }
            m.args.push_back(p.edge);
            m.args.push_back(p.index);
        } else {
            m.args.push_back(to_int(value));
        }
    }
    return m;
}

std::vector<Move> parse_move_list(std::string_view text) {
    std::vector<Move> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.push_back(parse_move(tok));
    return out;
}

// ---------------------------------------------------------------------------
// catalog

SphereCatalog default_catalog(const Triangulation& tri) {
    SphereCatalog cat;
    for (int v = 0; v < tri.num_vertices(); ++v) cat.push_back({"link" + std::to_string(v), vertex_link(tri, v), v});
    return cat;
}

void add_custom_sphere(const Triangulation& tri, SphereCatalog& catalog, std::string name, SurfaceEncoding sphere) {
    check_shape(tri, sphere);
    normalize_annuli(tri, sphere);
    const Validation v = validate(tri, sphere);
    if (v.kind != Classification::crudely_normal)
        throw InvalidInput("catalog sphere " + name + " is not crudely normal" + (v.reason.empty() ? "" : ": " + v.reason));
    const Topology top = topology(tri, sphere);
    if (top.components != 1 || top.euler != 2) throw InvalidInput("catalog sphere " + name + " is not a connected sphere");
    catalog.push_back({std::move(name), std::move(sphere), -1});
}

// ---------------------------------------------------------------------------
// shared helpers

namespace {

[[noreturn]] void fail(const std::string& why) { throw MoveNotApplicable(why); }

TetPoint face_point(const Triangulation& tri, const std::vector<int>& weights, int f, int copy, int pos) {
    const FaceClass& fc = tri.face(f);
    const FaceLayout l = face_layout(tri, weights, f);
    int s = 2;
    while (s > 0 && pos < l.offset[s]) --s;
    const int j = pos - l.offset[s];
    const int a = fc.corner[copy][s];
    const int b = fc.corner[copy][(s + 1) % 3];
    return TetPoint{local_edge(a, b), a < b ? j : l.count[s] - 1 - j};
}

// The other non-crossing pairing of the endpoints of two disjoint arcs.
std::array<std::pair<int, int>, 2> other_pairing(std::pair<int, int> x, std::pair<int, int> y) {
    std::array<int, 4> s{x.first, x.second, y.first, y.second};
    std::sort(s.begin(), s.end());
    auto paired = [&](int a, int b) {
        auto same = [&](std::pair<int, int> p) { return (p.first == a && p.second == b) || (p.first == b && p.second == a); };
        return same(x) || same(y);
    };
    if (paired(s[0], s[1]) && paired(s[2], s[3])) return {{{s[0], s[3]}, {s[1], s[2]}}};
    if (paired(s[0], s[3]) && paired(s[1], s[2])) return {{{s[0], s[1]}, {s[2], s[3]}}};
    throw std::logic_error("other_pairing: crossing arcs");
}

bool borders(const std::vector<int>& region, int lower, int r) {
    const int n = static_cast<int>(region.size());
    return region[lower] == r || region[(lower - 1 + n) % n] == r;
}

void require_lower_endpoint(const SurfaceEncoding& enc, int f, int a, const char* name) {
    const auto& pm = enc.partner[f];
    if (a < 0 || a >= static_cast<int>(pm.size()) || pm[a] < a)
        fail(std::string("face ") + std::to_string(f) + " has no arc with lower endpoint " + name + "=" + std::to_string(a));
}

void require_range(int value, int limit, const char* what) {
    if (value < 0 || value >= limit) fail(std::string("unknown ") + what + " " + std::to_string(value));
}

SurfaceEncoding finish(const Triangulation& tri, const SurfaceEncoding& source, SurfaceEncoding out) {
    try {
        normalize_annuli(tri, out);
    } catch (const InvalidInput& e) {
        fail(e.what());
    }
    const Validation v = validate(tri, out);
    if (!v.valid()) fail("result is invalid: " + v.reason);
    Topology before;
    Topology after;
    try {
        before = topology(tri, source);
        after = topology(tri, out);
    } catch (const InvalidInput& e) {
        fail(e.what());
    }
    if (before.euler != after.euler || before.components != after.components || before.genus != after.genus)
        fail("the rewrite would change the topology of the surface");
    return out;
}

int annulus_in(const std::vector<Annulus>& annuli, int tet) {
    for (std::size_t k = 0; k < annuli.size(); ++k)
        if (annuli[k].tet == tet) return static_cast<int>(k);
    return -1;
}

// Curves of the tetrahedron holding copy `copy` of face f while the face's matching is
// being replaced copy by copy.
struct Reconnection {
    const Triangulation& tri;
    const SurfaceEncoding& base;
    int face;
    std::vector<int> fresh;
    std::array<bool, 2> done{};

    TetCurves curves(int copy) const {
        const FaceClass& fc = tri.face(face);
        std::array<const std::vector<int>*, 4> overrides{};
        for (int c = 0; c < 2; ++c)
            if (done[c] && fc.tet[c] == fc.tet[copy]) overrides[fc.face[c]] = &fresh;
        return tet_curves(tri, base.weights, base.partner, fc.tet[copy], overrides);
    }
    TetPoint point(int copy, int pos) const { return face_point(tri, base.weights, face, copy, pos); }
};

std::vector<int> reconnected(const std::vector<int>& pm, int a, int b, std::array<int, 2>* lower) {
    auto pairs = other_pairing({a, pm[a]}, {b, pm[b]});
    std::vector<int> out = pm;
    for (auto [p, q] : pairs) {
        out[p] = q;
        out[q] = p;
    }
    if (lower) {
        (*lower)[0] = std::min(pairs[0].first, pairs[0].second);
        (*lower)[1] = std::min(pairs[1].first, pairs[1].second);
        std::sort(lower->begin(), lower->end());
    }
    return out;
}

// Points at the v-ends of every edge, inserted innermost, with a corner arc at every face
// corner at v. Returns the ids at the tail and head ends of each edge class (-1 if none).
std::pair<std::vector<int>, std::vector<int>> place_bubble(Draft& d, int v) {
    const Triangulation& tri = d.tri();
    std::vector<int> tail(tri.num_edges(), -1);
    std::vector<int> head(tri.num_edges(), -1);
    for (int e = 0; e < tri.num_edges(); ++e) {
        if (tri.edge(e).tail == v) tail[e] = d.insert(e, 0, 1)[0];
        if (tri.edge(e).head == v) head[e] = d.insert(e, d.weight(e), 1)[0];
    }
    for (int f = 0; f < tri.num_faces(); ++f) {
        const FaceLayout l = d.layout(f);
        for (int k = 0; k < 3; ++k) {
            if (tri.face(f).vertex[k] != v) continue;
            const int prev = (k + 2) % 3;
            d.add_arc(f, d.end_at(f, l.offset[k]), d.end_at(f, l.offset[prev] + l.count[prev] - 1));
        }
    }
    return {tail, head};
}

// Positions of the two points nearest corner k of a face: first of side k, last of side k-1.
std::pair<int, int> corner_positions(const FaceLayout& l, int k) {
    const int prev = (k + 2) % 3;
    return {l.offset[k], l.offset[prev] + l.count[prev] - 1};
}

// Annulus markers whose curve runs through doomed points may belong to either piece once
// those points go, so every surviving point of the curve is offered. Returns the product
// of choices over all annulus sides.
std::vector<std::vector<std::array<Rep, 2>>> rep_choices(const Triangulation& tri, const SurfaceEncoding& enc,
                                                         const Draft& d, const std::set<int>& doomed) {
    std::vector<std::vector<std::array<Rep, 2>>> out{d.annuli()};
    for (std::size_t k = 0; k < d.annuli().size(); ++k) {
        for (int side = 0; side < 2; ++side) {
            const Rep r = d.annuli()[k][side];
            const TetCurves tc = tet_curves(tri, enc.weights, enc.partner, r.tet);
            const TetPoint p = class_to_tet_point(tri, enc.weights, r.tet, r.local_edge, d.locate(r.id).second);
            std::vector<Rep> alts;
            bool touched = false;
            for (int pid : tc.curves[tc.curve_at(p)]) {
                const Rep alt = d.rep(r.tet, tc.point(pid));
                if (doomed.count(alt.id))
                    touched = true;
                else
                    alts.push_back(alt);
            }
            if (!touched) continue;
            if (alts.empty()) fail("annulus boundary would be removed");
            std::vector<std::vector<std::array<Rep, 2>>> next;
            for (const auto& base : out)
                for (const Rep& alt : alts) {
                    next.push_back(base);
                    next.back()[k][side] = alt;
                }
            out = std::move(next);
        }
    }
    return out;
}

bool same_key(const SurfaceEncoding& a, const SurfaceEncoding& b) { return canonical_key(a) == canonical_key(b); }

// A move that only adds points must not let an annulus boundary absorb a second source
// curve: the inverse could not tell which of the two carried the annulus.
void require_unmerged_annuli(const Triangulation& tri, const SurfaceEncoding& enc, const Draft& before,
                             const Draft& after, const SurfaceEncoding& out) {
    for (const Annulus& a : out.annuli) {
        const TetCurves now = tet_curves(tri, out.weights, out.partner, a.tet);
        const TetCurves then = tet_curves(tri, enc.weights, enc.partner, a.tet);
        for (const TetPoint& end : {a.a, a.b}) {
            std::set<int> sources;
            for (int pid : now.curves[now.curve_at(end)]) {
                const TetPoint p = now.point(pid);
                const int id = after.rep(a.tet, p).id;
                if (!before.alive(id)) continue;
                const int idx = before.locate(id).second;
                sources.insert(then.curve_at(class_to_tet_point(tri, enc.weights, a.tet, p.edge, idx)));
            }
            if (sources.size() > 1) fail("an annulus boundary would merge with another curve");
        }
    }
}

// Builds the draft under each annulus choice and keeps the first result that `forward`
// carries back to enc.
SurfaceEncoding settle(const Triangulation& tri, const SurfaceEncoding& enc, Draft& d,
                       const std::vector<std::vector<std::array<Rep, 2>>>& choices, const Move& forward,
                       const SphereCatalog& catalog, const std::string& what) {
    std::set<std::string> tried;
    for (const auto& choice : choices) {
        d.annuli() = choice;
        SurfaceEncoding candidate;
        try {
            candidate = d.build();
        } catch (const MoveNotApplicable&) {
            continue;
        }
        if (!tried.insert(canonical_key(candidate)).second) continue;
        try {
            if (same_key(apply(tri, candidate, forward, catalog), enc)) return candidate;
        } catch (const MoveNotApplicable&) {
        }
    }
    fail("not the inverse of " + what);
}

void require_args(const Move& m) {
    if (m.args.size() != arg_width(m.type)) fail("wrong number of move arguments");
}

// ---------------------------------------------------------------------------
// vertex moves

SurfaceEncoding apply_v0_plus(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m) {
    const int v = m.where, f = m.args[0], c = m.args[1], a = m.args[2];
    require_range(v, tri.num_vertices(), "vertex class");
    require_range(f, tri.num_faces(), "face class");
    require_range(c, 3, "face corner");
    if (tri.face(f).vertex[c] != v) fail("corner " + std::to_string(c) + " of face " + std::to_string(f) + " is not at vertex " + std::to_string(v));
    require_lower_endpoint(enc, f, a, "a");

    Draft d(tri, enc);
    const Draft before = d;
    const End ea = d.end_at(f, a);
    const End eb = d.end_at(f, enc.partner[f][a]);
    place_bubble(d, v);
    const SurfaceEncoding mid = d.build();

    const FaceLayout l = face_layout(tri, mid.weights, f);
    const int n = l.size;
    auto [x, y] = corner_positions(l, c);
    const std::vector<int> region = face_regions(mid.partner[f]);
    const int inner = region[y];
    const int lb = std::min(x, y);
    const int outer = region[lb] != inner ? region[lb] : region[(lb - 1 + n) % n];
    const int pa = d.position(f, ea);
    const int qa = d.position(f, eb);
    const int la = std::min(pa, qa);
    if (!borders(region, la, outer)) fail("arc a does not border the region outside the bubble corner");

    Reconnection rc{tri, mid, f, reconnected(mid.partner[f], lb, la, nullptr), {}};
    for (int copy = 0; copy < 2; ++copy) {
        const TetCurves tc = rc.curves(copy);
        const int ca = tc.curve_at(rc.point(copy, la));
        const int cb = tc.curve_at(rc.point(copy, lb));
        if (ca == cb) fail("bubble and arc already share a curve");
        const int k = annulus_in(mid.annuli, tri.face(f).tet[copy]);
        if (k >= 0) {
            const int A = tc.curve_at(mid.annuli[k].a);
            const int B = tc.curve_at(mid.annuli[k].b);
            if ((A == ca && B == cb) || (A == cb && B == ca)) fail("fusion would join the two boundary curves of an annulus");
        }
        rc.done[copy] = true;
    }
    SurfaceEncoding out = mid;
    out.partner[f] = rc.fresh;
    return finish(tri, enc, std::move(out));
}

SurfaceEncoding apply_v0_minus(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m,
                               const SphereCatalog& catalog) {
    const int v = m.where, f = m.args[0], c = m.args[1];
    require_range(v, tri.num_vertices(), "vertex class");
    require_range(f, tri.num_faces(), "face class");
    require_range(c, 3, "face corner");
    if (tri.face(f).vertex[c] != v) fail("corner " + std::to_string(c) + " of face " + std::to_string(f) + " is not at vertex " + std::to_string(v));

    Draft d(tri, enc);
    std::set<int> bubble;
    for (int e = 0; e < tri.num_edges(); ++e) {
        const int ends = (tri.edge(e).tail == v) + (tri.edge(e).head == v);
        if (ends == 0) continue;
        if (enc.weights[e] < ends) fail("edge " + std::to_string(e) + " has no innermost point at vertex " + std::to_string(v));
        if (tri.edge(e).tail == v) bubble.insert(d.id(e, 0));
        if (tri.edge(e).head == v) bubble.insert(d.id(e, enc.weights[e] - 1));
    }
    const auto& pm = enc.partner[f];
    auto [x, y] = corner_positions(face_layout(tri, enc.weights, f), c);
    if (pm[x] == y) fail("the corner arc at face " + std::to_string(f) + " corner " + std::to_string(c) + " is not fused");
    auto pairs = other_pairing({x, pm[x]}, {y, pm[y]});
    const bool splits_off_corner = (std::min(pairs[0].first, pairs[0].second) == std::min(x, y) &&
                                    std::max(pairs[0].first, pairs[0].second) == std::max(x, y)) ||
                                   (std::min(pairs[1].first, pairs[1].second) == std::min(x, y) &&
                                    std::max(pairs[1].first, pairs[1].second) == std::max(x, y));
    if (!splits_off_corner) fail("reconnection does not restore the corner arc");
    const End ex = d.end_at(f, x), ey = d.end_at(f, y);
    const End ox = d.end_at(f, pm[x]), oy = d.end_at(f, pm[y]);

    const auto choices = rep_choices(tri, enc, d, bubble);
    auto& arcs = d.arcs(f);
    arcs.erase(arcs.begin() + d.arc_with(f, ex));
    arcs.erase(arcs.begin() + d.arc_with(f, ey));
    d.add_arc(f, ex, ey);
    d.add_arc(f, ox, oy);

    for (int g = 0; g < tri.num_faces(); ++g) {
        const FaceLayout l = d.layout(g);
        for (int k = 0; k < 3; ++k) {
            if (tri.face(g).vertex[k] != v) continue;
            auto [p, q] = corner_positions(l, k);
            const End ep = d.end_at(g, p), eq = d.end_at(g, q);
            const int arc = d.arc_with(g, ep);
            if (arc < 0 || !(d.arcs(g)[arc].a == eq || d.arcs(g)[arc].b == eq))
                fail("bubble is not innermost at face " + std::to_string(g) + " corner " + std::to_string(k));
        }
    }
    d.erase_arcs_touching(bubble);
    d.erase(bubble);
    const int a = std::min(d.position(f, ox), d.position(f, oy));
    return settle(tri, enc, d, choices, Move{MoveType::V0_plus, v, {f, c, a}}, catalog, "a vertex move");
}

// ---------------------------------------------------------------------------
// edge moves

SurfaceEncoding apply_e1_plus(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m) {
    const int e = m.where, i = m.args[0], f = m.args[1], s = m.args[2], a = m.args[3];
    require_range(e, tri.num_edges(), "edge class");
    require_range(f, tri.num_faces(), "face class");
    require_range(s, 3, "face side");
    if (tri.face(f).edge[s] != e) fail("side " + std::to_string(s) + " of face " + std::to_string(f) + " is not on edge " + std::to_string(e));
    const int w = enc.weights[e];
    if (i < 0 || i > w) fail("insertion index out of range");
    require_lower_endpoint(enc, f, a, "a");

    const FaceLayout l = face_layout(tri, enc.weights, f);
    const int n = l.size;
    const int j = tri.face(f).forward[s] ? i : w - i;
    const int gap = j >= 1 ? l.offset[s] + j - 1 : (l.offset[s] - 1 + n) % n;
    const std::vector<int> region = face_regions(enc.partner[f]);
    if (!borders(region, a, region[gap])) fail("arc a does not border the insertion point");

    Draft d(tri, enc);
    const Draft before = d;
    const End ea = d.end_at(f, a);
    const End eb = d.end_at(f, enc.partner[f][a]);
    const auto ids = d.insert(e, i, 2);
    for (int g = 0; g < tri.num_faces(); ++g)
        for (int t = 0; t < 3; ++t)
            if (tri.face(g).edge[t] == e && !(g == f && t == s)) d.add_arc(g, End{t, ids[0]}, End{t, ids[1]});
    auto& arcs = d.arcs(f);
    arcs.erase(arcs.begin() + d.arc_with(f, ea));
    const int size = d.layout(f).size;
    const int P = d.position(f, ea), Q = d.position(f, eb);
    const int N1 = d.position(f, End{s, ids[0]}), N2 = d.position(f, End{s, ids[1]});
    const int lo = std::min(N1, N2), hi = std::max(N1, N2);
    auto dist = [&](int x) { return (x - hi + size) % size; };
    const int X = dist(P) < dist(Q) ? P : Q;
    const int Y = X == P ? Q : P;
    d.add_arc(f, d.end_at(f, hi), d.end_at(f, X));
    d.add_arc(f, d.end_at(f, lo), d.end_at(f, Y));
    SurfaceEncoding out = d.build();
    require_unmerged_annuli(tri, enc, before, d, out);
    return finish(tri, enc, std::move(out));
}

SurfaceEncoding apply_e1_minus(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m,
                               const SphereCatalog& catalog) {
    const int e = m.where, i = m.args[0];
    require_range(e, tri.num_edges(), "edge class");
    if (i < 0 || i + 1 >= enc.weights[e]) fail("edge " + std::to_string(e) + " has no points " + std::to_string(i) + ", " + std::to_string(i + 1));

    Draft d(tri, enc);
    const int n1 = d.id(e, i), n2 = d.id(e, i + 1);
    int f = -1, s = -1, open = 0;
    for (int g = 0; g < tri.num_faces(); ++g)
        for (int t = 0; t < 3; ++t) {
            if (tri.face(g).edge[t] != e) continue;
            const auto& arc = d.arcs(g)[d.arc_with(g, End{t, n1})];
            const bool returning = (arc.a == End{t, n2} || arc.b == End{t, n2});
            if (!returning) {
                ++open;
                f = g;
                s = t;
            }
        }
    if (open != 1) fail("points " + std::to_string(i) + ", " + std::to_string(i + 1) + " are not joined by returning arcs on all but one face side");
    auto other_end = [&](const End& x) {
        const auto& arc = d.arcs(f)[d.arc_with(f, x)];
        return arc.a == x ? arc.b : arc.a;
    };
    const End X = other_end(End{s, n1});
    const End Y = other_end(End{s, n2});
    if (X.id == n1 || X.id == n2 || Y.id == n1 || Y.id == n2) fail("the rerouted arcs meet each other");

    const std::set<int> doomed{n1, n2};
    const auto choices = rep_choices(tri, enc, d, doomed);
    d.erase_arcs_touching(doomed);
    d.add_arc(f, X, Y);
    d.erase(doomed);
    const int a = std::min(d.position(f, X), d.position(f, Y));
    return settle(tri, enc, d, choices, Move{MoveType::E1_plus, e, {i, f, s, a}}, catalog, "an edge move");
}

// ---------------------------------------------------------------------------
// face moves

SurfaceEncoding apply_f2(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m) {
    const int f = m.where, a = m.args[0], b = m.args[1], g = m.args[2], k = m.args[3];
    require_range(f, tri.num_faces(), "face class");
    if (g != 0 && g != 1) fail("g must be 0 or 1");
    if (k != 0 && k != 1) fail("k must be 0 or 1");
    if (a >= b) fail("arguments must satisfy a < b");
    require_lower_endpoint(enc, f, a, "a");
    require_lower_endpoint(enc, f, b, "b");
    const std::vector<int> region = face_regions(enc.partner[f]);
    const int n = static_cast<int>(region.size());
    const std::array<int, 2> ra{region[a], region[(a - 1 + n) % n]};
    if (!borders(region, b, ra[0]) && !borders(region, b, ra[1])) fail("arcs a and b do not border a common region");

    std::array<int, 2> lower{};
    Reconnection rc{tri, enc, f, reconnected(enc.partner[f], a, b, &lower), {}};
    std::vector<Annulus> annuli = enc.annuli;
    const FaceClass& fc = tri.face(f);

    // losing side: one more disk
    const int cl = 1 - g;
    {
        const TetCurves tc = rc.curves(cl);
        const int ca = tc.curve_at(rc.point(cl, a));
        const int cb = tc.curve_at(rc.point(cl, b));
        const int x = annulus_in(annuli, fc.tet[cl]);
        const int A = x >= 0 ? tc.curve_at(annuli[x].a) : -1;
        const int B = x >= 0 ? tc.curve_at(annuli[x].b) : -1;
        if (ca == cb) {
            if (x >= 0 && (A == ca || B == ca)) {
                (A == ca ? annuli[x].a : annuli[x].b) = rc.point(cl, lower[k]);
            } else if (k != 0) {
                fail("k only applies when an annulus boundary curve splits");
            }
        } else if (x >= 0 && ((A == ca && B == cb) || (A == cb && B == ca))) {
            if (k != 0) fail("k only applies when an annulus boundary curve splits");
            annuli.erase(annuli.begin() + x);
        } else {
            fail("on the losing side the arcs lie on different curves that do not bound the annulus");
        }
        rc.done[cl] = true;
    }
    // gaining side: one fewer disk
    {
        const TetCurves tc = rc.curves(g);
        const int ca = tc.curve_at(rc.point(g, a));
        const int cb = tc.curve_at(rc.point(g, b));
        const int x = annulus_in(annuli, fc.tet[g]);
        if (ca != cb) {
            if (x >= 0) {
                const int A = tc.curve_at(annuli[x].a);
                const int B = tc.curve_at(annuli[x].b);
                if ((A == ca && B == cb) || (A == cb && B == ca)) fail("would join the two boundary curves of an annulus");
            }
        } else {
            if (x >= 0) fail("on the gaining side the tetrahedron already holds an annulus");
            annuli.push_back(Annulus{fc.tet[g], rc.point(g, lower[0]), rc.point(g, lower[1])});
        }
        rc.done[g] = true;
    }
    const MoveType actual = annuli.size() != enc.annuli.size() ? MoveType::F2 : MoveType::F2p;
    if (actual != m.type) fail(std::string("this reconnection is a ") + info(actual).name + " move");
    SurfaceEncoding out = enc;
    out.partner[f] = rc.fresh;
    out.annuli = annuli;
    return finish(tri, enc, std::move(out));
}

// ---------------------------------------------------------------------------
// pinches

SurfaceEncoding apply_unpinch(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m,
                              const SphereCatalog& catalog) {
    const int t = m.where, which = m.args[0], s = m.args[1];
    require_range(t, tri.size(), "tetrahedron");
    require_range(s, static_cast<int>(catalog.size()), "catalog sphere");
    if (which != 0 && which != 1) fail("d must be 0 or 1");
    const int x = annulus_in(enc.annuli, t);
    if (x < 0) fail("tet " + std::to_string(t) + " holds no annulus");
    const TetPoint mine = which == 0 ? enc.annuli[x].a : enc.annuli[x].b;
    const TetPoint other = which == 0 ? enc.annuli[x].b : enc.annuli[x].a;

    SurfaceEncoding split = enc;
    split.annuli.erase(split.annuli.begin() + x);
    const auto comps = components(tri, split);
    auto class_point = [&](const TetPoint& p) {
        return std::make_pair(tri.edge_of(t, p.edge), tet_to_class_index(tri, split.weights, t, p));
    };
    const auto target = class_point(mine);
    const auto keep = class_point(other);
    const std::vector<std::pair<int, int>>* comp = nullptr;
    for (const auto& c : comps)
        if (std::find(c.begin(), c.end(), target) != c.end()) comp = &c;
    if (std::find(comp->begin(), comp->end(), keep) != comp->end()) fail("the annulus does not join two components");

    Draft d(tri, split);
    const Rep kept = d.rep(t, other);
    std::set<int> ids;
    for (auto [e, idx] : *comp) ids.insert(d.id(e, idx));
    d.erase_arcs_touching(ids);
    d.erase(ids);
    SurfaceEncoding rest = d.build();

    const TetPoint kp = class_to_tet_point(tri, rest.weights, t, kept.local_edge, d.locate(kept.id).second);
    const TetCurves tr = tet_curves(tri, rest.weights, rest.partner, t);
    const TetPoint c = tr.point(tr.least[tr.curve_at(kp)]);
    const SurfaceEncoding& sphere = catalog[s].surface;
    const TetCurves ts = tet_curves(tri, sphere.weights, sphere.partner, t);
    const std::string key = canonical_key(enc);
    for (int curve = 0; curve < ts.curve_count(); ++curve) {
        try {
            if (canonical_key(pinch(tri, rest, t, c, catalog, s, ts.point(ts.least[curve]))) == key) return rest;
        } catch (const MoveNotApplicable&) {
        }
    }
    fail("the detached component is not catalog sphere " + std::to_string(s) + " in its placed position");
}

}  // namespace

SurfaceEncoding pinch(const Triangulation& tri, const SurfaceEncoding& enc, int tet, const TetPoint& curve,
                      const SphereCatalog& catalog, int s, const TetPoint& sphere_curve, int budget) {
    require_range(tet, tri.size(), "tetrahedron");
    require_range(s, static_cast<int>(catalog.size()), "catalog sphere");
    if (annulus_in(enc.annuli, tet) >= 0) fail("annulus slot occupied");
    const CatalogSphere& cs = catalog[s];
    if (weight(enc) + weight(cs.surface) > budget) fail("budget exceeded");

    auto least_check = [&](const SurfaceEncoding& surf, const TetPoint& p, const char* what) {
        if (p.edge < 0 || p.edge > 5 || p.index < 0 || p.index >= surf.weights[tri.edge_of(tet, p.edge)])
            fail(std::string(what) + " names a missing point");
        const TetCurves tc = tet_curves(tri, surf.weights, surf.partner, tet);
        if (tc.point(tc.least[tc.curve_at(p)]) != p) fail(std::string(what) + " must name the least point of its curve");
    };
    least_check(enc, curve, "c");
    least_check(cs.surface, sphere_curve, "d");

    Draft d(tri, enc);
    const Rep rc = d.rep(tet, curve);
    const int se = tri.edge_of(tet, sphere_curve.edge);
    const int sidx = tet_to_class_index(tri, cs.surface.weights, tet, sphere_curve);
    int sid = -1;
    if (cs.vertex >= 0) {
        auto [tail, head] = place_bubble(d, cs.vertex);
        sid = (tri.edge(se).tail == cs.vertex && sidx == 0) ? tail[se] : head[se];
    } else {
        std::vector<std::vector<int>> ids(tri.num_edges());
        for (int e = 0; e < tri.num_edges(); ++e) {
            if (cs.surface.weights[e] == 0) continue;
            if (enc.weights[e] > 0) fail("sphere support meets the surface on edge " + std::to_string(e));
            ids[e] = d.insert(e, 0, cs.surface.weights[e]);
        }
        for (int f = 0; f < tri.num_faces(); ++f) {
            const FaceLayout l = face_layout(tri, cs.surface.weights, f);
            auto end = [&](int pos) {
                int side = 2;
                while (side > 0 && pos < l.offset[side]) --side;
                const int idx = class_index(tri, cs.surface.weights, f, side, pos - l.offset[side]);
                return End{side, ids[tri.face(f).edge[side]][idx]};
            };
            const auto& pm = cs.surface.partner[f];
            for (int p = 0; p < l.size; ++p)
                if (pm[p] > p) d.add_arc(f, end(p), end(pm[p]));
        }
        sid = ids[se][sidx];
    }
    d.annuli().push_back({rc, Rep{tet, sphere_curve.edge, sid}});
    SurfaceEncoding out;
    try {
        out = d.build();
    } catch (const std::logic_error&) {
        fail("sphere arcs cross the surface");
    }
    const Validation v = validate(tri, out);
    if (!v.valid()) {
        if (v.reason.rfind("annulus separation", 0) == 0) fail("separation violated");
        fail("result is invalid: " + v.reason);
    }
    return finish(tri, enc, std::move(out));
}

SurfaceEncoding apply(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m, const SphereCatalog& catalog) {
    require_args(m);
    switch (m.type) {
        case MoveType::V0_plus: return apply_v0_plus(tri, enc, m);
        case MoveType::V0_minus: return apply_v0_minus(tri, enc, m, catalog);
        case MoveType::E1_plus: return apply_e1_plus(tri, enc, m);
        case MoveType::E1_minus: return apply_e1_minus(tri, enc, m, catalog);
        case MoveType::F2:
        case MoveType::F2p: return apply_f2(tri, enc, m);
        case MoveType::pinch:
            return pinch(tri, enc, m.where, TetPoint{m.args[0], m.args[1]}, catalog, m.args[2], TetPoint{m.args[3], m.args[4]});
        case MoveType::unpinch: return apply_unpinch(tri, enc, m, catalog);
    }
    fail("unknown move type");
}

int weight_delta(const Triangulation& tri, const Move& m, const SphereCatalog& catalog) {
    switch (m.type) {
        case MoveType::V0_plus: return tri.vertex_degree(m.where);
        case MoveType::V0_minus: return -tri.vertex_degree(m.where);
        case MoveType::E1_plus: return 2;
        case MoveType::E1_minus: return -2;
        case MoveType::F2:
        case MoveType::F2p: return 0;
        case MoveType::pinch: return weight(catalog.at(m.args.at(2)).surface);
        case MoveType::unpinch: return -weight(catalog.at(m.args.at(1)).surface);
    }
    return 0;
}

namespace {

std::vector<int> lower_endpoints(const std::vector<int>& pm) {
    std::vector<int> out;
    for (int p = 0; p < static_cast<int>(pm.size()); ++p)
        if (pm[p] > p) out.push_back(p);
    return out;
}

std::vector<TetPoint> curve_names(const Triangulation& tri, const SurfaceEncoding& enc, int tet) {
    const TetCurves tc = tet_curves(tri, enc.weights, enc.partner, tet);
    std::vector<TetPoint> out;
    for (int c = 0; c < tc.curve_count(); ++c) out.push_back(tc.point(tc.least[c]));
    return out;
}

std::vector<Move> inverse_candidates(const Triangulation& tri, const SurfaceEncoding& enc, const SurfaceEncoding& target,
                                     const Move& m, const SphereCatalog& catalog) {
    std::vector<Move> out;
    switch (m.type) {
        case MoveType::V0_plus: out.push_back({MoveType::V0_minus, m.where, {m.args[0], m.args[1]}}); break;
        case MoveType::V0_minus:
            for (int a : lower_endpoints(target.partner[m.args[0]]))
                out.push_back({MoveType::V0_plus, m.where, {m.args[0], m.args[1], a}});
            break;
        case MoveType::E1_plus: out.push_back({MoveType::E1_minus, m.where, {m.args[0]}}); break;
        case MoveType::E1_minus:
            for (int f = 0; f < tri.num_faces(); ++f)
                for (int s = 0; s < 3; ++s)
                    if (tri.face(f).edge[s] == m.where)
                        for (int a : lower_endpoints(target.partner[f]))
                            out.push_back({MoveType::E1_plus, m.where, {m.args[0], f, s, a}});
            break;
        case MoveType::F2:
        case MoveType::F2p: {
            std::array<int, 2> lower{};
            reconnected(enc.partner[m.where], m.args[0], m.args[1], &lower);
            for (int k = 0; k < 2; ++k) out.push_back({m.type, m.where, {lower[0], lower[1], 1 - m.args[2], k}});
            break;
        }
        case MoveType::pinch:
            for (int d = 0; d < 2; ++d) out.push_back({MoveType::unpinch, m.where, {d, m.args[2]}});
            break;
        case MoveType::unpinch: {
            const SurfaceEncoding& sphere = catalog.at(m.args[1]).surface;
            for (const TetPoint& c : curve_names(tri, target, m.where))
                for (const TetPoint& d : curve_names(tri, sphere, m.where))
                    out.push_back({MoveType::pinch, m.where, {c.edge, c.index, m.args[1], d.edge, d.index}});
            break;
        }
    }
    return out;
}

}  // namespace

Move inverse(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m, const SphereCatalog& catalog) {
    const SurfaceEncoding target = apply(tri, enc, m, catalog);
    const std::string key = canonical_key(enc);
    for (const Move& cand : inverse_candidates(tri, enc, target, m, catalog)) {
        try {
            if (canonical_key(apply(tri, target, cand, catalog)) == key) return cand;
        } catch (const MoveNotApplicable&) {
        }
    }
    throw std::logic_error("no inverse found for " + to_text(m));
}

std::vector<Neighbor> neighbors(const Triangulation& tri, const SurfaceEncoding& enc, int budget,
                                const MoveSet& move_set, const SphereCatalog& catalog, NeighborStats* stats) {
    NeighborStats local;
    NeighborStats& st = stats ? *stats : local;
    std::vector<Neighbor> out;
    auto attempt = [&](Move m) {
        ++st.candidates;
        try {
            SurfaceEncoding r = apply(tri, enc, m, catalog);
            if (weight(r) > budget) {
                ++st.rejected_by_budget;
                return;
            }
            std::string key = canonical_key(r);
            out.push_back({std::move(m), std::move(key), std::move(r)});
        } catch (const MoveNotApplicable&) {
        }
    };

    if (move_set.count(MoveKind::V0)) {
        for (int v = 0; v < tri.num_vertices(); ++v)
            for (int f = 0; f < tri.num_faces(); ++f)
                for (int c = 0; c < 3; ++c) {
                    if (tri.face(f).vertex[c] != v) continue;
                    for (int a : lower_endpoints(enc.partner[f])) attempt({MoveType::V0_plus, v, {f, c, a}});
                    attempt({MoveType::V0_minus, v, {f, c}});
                }
    }
    if (move_set.count(MoveKind::E1)) {
        for (int e = 0; e < tri.num_edges(); ++e) {
            for (int i = 0; i <= enc.weights[e]; ++i)
                for (int f = 0; f < tri.num_faces(); ++f)
                    for (int s = 0; s < 3; ++s)
                        if (tri.face(f).edge[s] == e)
                            for (int a : lower_endpoints(enc.partner[f])) attempt({MoveType::E1_plus, e, {i, f, s, a}});
            for (int i = 0; i + 1 < enc.weights[e]; ++i) attempt({MoveType::E1_minus, e, {i}});
        }
    }
    if (move_set.count(MoveKind::F2) || move_set.count(MoveKind::F2p)) {
        for (int f = 0; f < tri.num_faces(); ++f) {
            const auto lows = lower_endpoints(enc.partner[f]);
            const std::vector<int> region = face_regions(enc.partner[f]);
            const int n = static_cast<int>(region.size());
            for (std::size_t x = 0; x < lows.size(); ++x)
                for (std::size_t y = x + 1; y < lows.size(); ++y) {
                    const int a = lows[x], b = lows[y];
                    if (!borders(region, b, region[a]) && !borders(region, b, region[(a - 1 + n) % n])) continue;
                    for (int g = 0; g < 2; ++g)
                        for (int k = 0; k < 2; ++k) {
                            if (move_set.count(MoveKind::F2)) attempt({MoveType::F2, f, {a, b, g, k}});
                            if (move_set.count(MoveKind::F2p)) attempt({MoveType::F2p, f, {a, b, g, k}});
                        }
                }
        }
    }
    if (move_set.count(MoveKind::PINCH)) {
        for (int t = 0; t < tri.size(); ++t) {
            if (annulus_in(enc.annuli, t) >= 0) continue;
            const auto mine = curve_names(tri, enc, t);
            for (int s = 0; s < static_cast<int>(catalog.size()); ++s) {
                const auto theirs = curve_names(tri, catalog[s].surface, t);
                for (const TetPoint& c : mine)
                    for (const TetPoint& d : theirs)
                        attempt({MoveType::pinch, t, {c.edge, c.index, s, d.edge, d.index}});
            }
        }
    }
    if (move_set.count(MoveKind::UNPINCH)) {
        for (const Annulus& a : enc.annuli)
            for (int d = 0; d < 2; ++d)
                for (int s = 0; s < static_cast<int>(catalog.size()); ++s) attempt({MoveType::unpinch, a.tet, {d, s}});
    }

    std::vector<std::pair<std::string, std::size_t>> order;
    for (std::size_t k = 0; k < out.size(); ++k) order.emplace_back(to_text(out[k].move), k);
    std::sort(order.begin(), order.end(), [&](const auto& x, const auto& y) {
        const std::string& kx = out[x.second].key;
        const std::string& ky = out[y.second].key;
        return kx != ky ? kx < ky : x.first < y.first;
    });
    std::vector<Neighbor> sorted;
    sorted.reserve(out.size());
    for (const auto& [text, k] : order) sorted.push_back(std::move(out[k]));
    return sorted;
}

std::string apply_text(std::string_view triangulation, std::string_view surface, std::string_view move) {
    const Triangulation tri = parse_triangulation(triangulation);
    SurfaceEncoding enc = parse_surface(surface);
    normalize_annuli(tri, enc);
    return to_text(apply(tri, enc, parse_move(move), default_catalog(tri)));
}

}  // namespace cnsg
