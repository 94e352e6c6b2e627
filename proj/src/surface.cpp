#include "cnsg/surface.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "cnsg/digest.hpp"

namespace cnsg {

namespace {

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::vector<int> parent_;
};

}  // namespace

SurfaceEncoding empty_surface(const Triangulation& tri) {
    SurfaceEncoding enc;
    enc.weights.assign(tri.num_edges(), 0);
    enc.partner.assign(tri.num_faces(), {});
    return enc;
}

FaceLayout face_layout(const Triangulation& tri, const std::vector<int>& weights, int face) {
    const FaceClass& fc = tri.face(face);
    FaceLayout l;
    for (int s = 0; s < 3; ++s) {
        l.count[s] = weights.at(fc.edge[s]);
        l.offset[s] = l.size;
        l.size += l.count[s];
    }
    return l;
}

int class_index(const Triangulation& tri, const std::vector<int>& weights, int face, int side, int j) {
    const FaceClass& fc = tri.face(face);
    const int w = weights.at(fc.edge[side]);
    return fc.forward[side] ? j : w - 1 - j;
}

int side_position(const Triangulation& tri, const std::vector<int>& weights, int face, int side, int i) {
    return class_index(tri, weights, face, side, i);
}

int tet_to_class_index(const Triangulation& tri, const std::vector<int>& weights, int tet, const TetPoint& p) {
    const int w = weights.at(tri.edge_of(tet, p.edge));
    return tri.edge_forward(tet, p.edge) ? p.index : w - 1 - p.index;
}

TetPoint class_to_tet_point(const Triangulation& tri, const std::vector<int>& weights, int tet, int le, int index) {
    const int w = weights.at(tri.edge_of(tet, le));
    return TetPoint{le, tri.edge_forward(tet, le) ? index : w - 1 - index};
}

SurfaceEncoding vertex_link(const Triangulation& tri, int v) {
    tri.vertex(v);
    SurfaceEncoding enc = empty_surface(tri);
    for (int e = 0; e < tri.num_edges(); ++e) enc.weights[e] = (tri.edge(e).tail == v) + (tri.edge(e).head == v);
    for (int f = 0; f < tri.num_faces(); ++f) {
        const FaceLayout l = face_layout(tri, enc.weights, f);
        enc.partner[f].assign(l.size, -1);
        for (int k = 0; k < 3; ++k) {
            if (tri.face(f).vertex[k] != v) continue;
            const int prev = (k + 2) % 3;
            const int p = l.offset[k];
            const int q = l.offset[prev] + l.count[prev] - 1;
            enc.partner[f][p] = q;
            enc.partner[f][q] = p;
        }
    }
    return enc;
}

void check_shape(const Triangulation& tri, const SurfaceEncoding& enc) {
    if (static_cast<int>(enc.weights.size()) != tri.num_edges())
        throw InvalidInput("surface lists " + std::to_string(enc.weights.size()) + " edge classes, triangulation has " +
                           std::to_string(tri.num_edges()));
    for (int e = 0; e < tri.num_edges(); ++e)
        if (enc.weights[e] < 0) throw InvalidInput("negative weight on edge class " + std::to_string(e));
    if (static_cast<int>(enc.partner.size()) > tri.num_faces())
        throw InvalidInput("surface references face class " + std::to_string(enc.partner.size() - 1) +
                           ", triangulation has " + std::to_string(tri.num_faces()));
    if (static_cast<int>(enc.partner.size()) != tri.num_faces())
        throw InvalidInput("surface lists " + std::to_string(enc.partner.size()) + " face classes, triangulation has " +
                           std::to_string(tri.num_faces()));
    for (int f = 0; f < tri.num_faces(); ++f) {
        const int n = face_layout(tri, enc.weights, f).size;
        if (static_cast<int>(enc.partner[f].size()) != n)
            throw InvalidInput("face " + std::to_string(f) + ": " + std::to_string(enc.partner[f].size()) +
                               " arc endpoints, edge weights require " + std::to_string(n));
    }
    for (const Annulus& a : enc.annuli) {
        if (a.tet < 0 || a.tet >= tri.size()) throw InvalidInput("annulus in unknown tetrahedron " + std::to_string(a.tet));
        for (const TetPoint& p : {a.a, a.b}) {
            if (p.edge < 0 || p.edge >= 6 || p.index < 0 || p.index >= enc.weights[tri.edge_of(a.tet, p.edge)])
                throw InvalidInput("annulus in tet " + std::to_string(a.tet) + " names missing point " + tet_point_string(p));
        }
    }
}

std::vector<int> face_regions(const std::vector<int>& partner, int* region_count) {
    const int n = static_cast<int>(partner.size());
    std::vector<int> region(n, -1);
    int count = 0;
    for (int g = 0; g < n; ++g) {
        if (region[g] >= 0) continue;
        int cur = g;
        while (region[cur] < 0) {
            region[cur] = count;
            cur = partner[(cur + 1) % n];
        }
        ++count;
    }
    if (region_count) *region_count = n == 0 ? 1 : count;
    return region;
}

TetPoint TetCurves::point(int id) const {
    int e = 0;
    while (e < 5 && base[e + 1] <= id) ++e;
    return TetPoint{e, id - base[e]};
}

bool TetCurves::adjacent(int c1, int c2) const {
    for (int r : sides.at(c1))
        if (r == sides.at(c2)[0] || r == sides.at(c2)[1]) return true;
    return false;
}

TetCurves tet_curves(const Triangulation& tri, const std::vector<int>& weights,
                     const std::vector<std::vector<int>>& partner, int tet,
                     const std::array<const std::vector<int>*, 4>& overrides) {
    TetCurves tc;
    std::array<int, 6> w{};
    tc.base[0] = 0;
    for (int e = 0; e < 6; ++e) {
        w[e] = weights.at(tri.edge_of(tet, e));
        tc.base[e + 1] = tc.base[e] + w[e];
    }
    const int npoints = tc.base[6];
    // link[id][slot] = (neighbour id, neighbour slot); slot 0 is the lower local face
    std::vector<std::array<std::pair<int, int>, 2>> link(npoints, {{{-1, -1}, {-1, -1}}});
    auto slot_of = [](int le, int lf) {
        int lo = -1;
        for (int v = 0; v < 4; ++v)
            if (v != kEdgeVertices[le][0] && v != kEdgeVertices[le][1]) {
                lo = v;
                break;
            }
        return lf == lo ? 0 : 1;
    };

    // segment s of local edge e has id base[e] + e + s
    UnionFind seg(npoints + 6);
    for (int lf = 0; lf < 4; ++lf) {
        const int f = tri.face_of(tet, lf);
        const int c = tri.face_copy(tet, lf);
        const FaceClass& fc = tri.face(f);
        const std::vector<int>& pm = overrides[lf] ? *overrides[lf] : partner.at(f);
        const FaceLayout l = face_layout(tri, weights, f);
        std::vector<int> pos_point(l.size);
        std::vector<int> pos_edge(l.size);
        for (int s = 0; s < 3; ++s) {
            const int a = fc.corner[c][s];
            const int b = fc.corner[c][(s + 1) % 3];
            const int le = local_edge(a, b);
            for (int j = 0; j < l.count[s]; ++j) {
                const int q = a < b ? j : l.count[s] - 1 - j;
                pos_point[l.offset[s] + j] = tc.base[le] + q;
                pos_edge[l.offset[s] + j] = le;
            }
        }
        for (int p = 0; p < l.size; ++p) {
            const int r = pm[p];
            link[pos_point[p]][slot_of(pos_edge[p], lf)] = {pos_point[r], slot_of(pos_edge[r], lf)};
        }
        int nregions = 0;
        const std::vector<int> region = face_regions(pm, &nregions);
        std::vector<int> first_seg(nregions, -1);
        for (int s = 0; s < 3; ++s) {
            const int a = fc.corner[c][s];
            const int b = fc.corner[c][(s + 1) % 3];
            const int le = local_edge(a, b);
            for (int m = 0; m <= w[le]; ++m) {
                const int j = a < b ? m : w[le] - m;
                int r = 0;
                if (l.size > 0) {
                    const int gap = j >= 1 ? l.offset[s] + j - 1 : (l.offset[s] - 1 + l.size) % l.size;
                    r = region[gap];
                }
                const int sid = tc.base[le] + le + m;
                if (first_seg[r] < 0)
                    first_seg[r] = sid;
                else
                    seg.unite(sid, first_seg[r]);
            }
        }
    }

    tc.curve_of.assign(npoints, -1);
    for (int start = 0; start < npoints; ++start) {
        if (tc.curve_of[start] >= 0) continue;
        const int id = static_cast<int>(tc.curves.size());
        tc.curves.emplace_back();
        tc.least.push_back(start);
        int cur = start;
        int slot = 0;
        while (tc.curve_of[cur] < 0) {
            tc.curve_of[cur] = id;
            tc.curves.back().push_back(cur);
            auto [next, arrive] = link[cur][slot];
            cur = next;
            slot = 1 - arrive;
        }
    }

    std::map<int, int> region_id;
    for (const auto& curve : tc.curves) {
        const TetPoint p = tc.point(curve.front());
        std::array<int, 2> side{};
        for (int k = 0; k < 2; ++k) {
            const int root = seg.find(tc.base[p.edge] + p.edge + p.index + k);
            side[k] = region_id.emplace(root, static_cast<int>(region_id.size())).first->second;
        }
        tc.sides.push_back(side);
    }
    return tc;
}

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::crudely_normal: return "crudely_normal";
        case Classification::crudely_almost_normal: return "crudely_almost_normal";
        case Classification::invalid: break;
    }
    return "invalid";
}

namespace {

Validation invalid(std::string reason) { return Validation{Classification::invalid, std::move(reason)}; }

// Empty string when the matching is a non-crossing perfect matching.
std::string matching_problem(const std::vector<int>& pm) {
    const int n = static_cast<int>(pm.size());
    for (int p = 0; p < n; ++p)
        if (pm[p] < 0 || pm[p] >= n || pm[p] == p || pm[pm[p]] != p) return "not a perfect matching";
    std::vector<int> open;
    for (int p = 0; p < n; ++p) {
        if (pm[p] > p) {
            open.push_back(p);
        } else {
            if (open.empty() || open.back() != pm[p]) return "crossing arcs";
            open.pop_back();
        }
    }
    return {};
}

}  // namespace

Validation validate(const Triangulation& tri, const SurfaceEncoding& enc) {
    try {
        check_shape(tri, enc);
    } catch (const InvalidInput& e) {
        return invalid(std::string("shape: ") + e.what());
    }
    for (int f = 0; f < tri.num_faces(); ++f) {
        std::string problem = matching_problem(enc.partner[f]);
        if (!problem.empty()) return invalid("face " + std::to_string(f) + ": " + problem);
    }
    std::vector<int> per_tet(tri.size(), 0);
    for (const Annulus& a : enc.annuli)
        if (++per_tet[a.tet] > 1) return invalid("multiple annuli in tet " + std::to_string(a.tet));
    for (const Annulus& a : enc.annuli) {
        const TetCurves tc = tet_curves(tri, enc.weights, enc.partner, a.tet);
        const int c1 = tc.curve_at(a.a);
        const int c2 = tc.curve_at(a.b);
        const std::string where = "tet " + std::to_string(a.tet) + " curves " + tet_point_string(a.a) + " and " +
                                  tet_point_string(a.b);
        if (c1 == c2) return invalid("annulus on a single curve: " + where);
        if (!tc.adjacent(c1, c2)) return invalid("annulus separation: " + where);
    }
    return Validation{enc.annuli.empty() ? Classification::crudely_normal : Classification::crudely_almost_normal, {}};
}

int weight(const SurfaceEncoding& enc) { return std::accumulate(enc.weights.begin(), enc.weights.end(), 0); }

int arc_count(const SurfaceEncoding& enc) {
    int n = 0;
    for (const auto& pm : enc.partner) n += static_cast<int>(pm.size()) / 2;
    return n;
}

namespace {

struct PointIndex {
    std::vector<int> base;
    explicit PointIndex(const std::vector<int>& weights) : base(weights.size() + 1, 0) {
        for (std::size_t e = 0; e < weights.size(); ++e) base[e + 1] = base[e] + weights[e];
    }
    int id(int e, int i) const { return base[e] + i; }
    int total() const { return base.back(); }
};

struct ComponentData {
    PointIndex index;
    UnionFind uf;
    std::vector<TetCurves> curves;
};

ComponentData build_components(const Triangulation& tri, const SurfaceEncoding& enc) {
    ComponentData d{PointIndex(enc.weights), UnionFind(weight(enc)), {}};
    for (int f = 0; f < tri.num_faces(); ++f) {
        const FaceLayout l = face_layout(tri, enc.weights, f);
        const FaceClass& fc = tri.face(f);
        auto global = [&](int p) {
            int s = 2;
            while (s > 0 && p < l.offset[s]) --s;
            return d.index.id(fc.edge[s], class_index(tri, enc.weights, f, s, p - l.offset[s]));
        };
        for (int p = 0; p < l.size; ++p)
            if (enc.partner[f][p] > p) d.uf.unite(global(p), global(enc.partner[f][p]));
    }
    for (const Annulus& a : enc.annuli) {
        const int ia = tet_to_class_index(tri, enc.weights, a.tet, a.a);
        const int ib = tet_to_class_index(tri, enc.weights, a.tet, a.b);
        d.uf.unite(d.index.id(tri.edge_of(a.tet, a.a.edge), ia), d.index.id(tri.edge_of(a.tet, a.b.edge), ib));
    }
    for (int t = 0; t < tri.size(); ++t) d.curves.push_back(tet_curves(tri, enc.weights, enc.partner, t));
    return d;
}

}  // namespace

Topology topology(const Triangulation& tri, const SurfaceEncoding& enc) {
    ComponentData d = build_components(tri, enc);
    Topology top;
    top.points = weight(enc);
    top.arcs = arc_count(enc);
    top.annuli = static_cast<int>(enc.annuli.size());

    std::map<int, int> comp;
    for (int p = 0; p < d.index.total(); ++p) comp.emplace(d.uf.find(p), static_cast<int>(comp.size()));
    top.components = static_cast<int>(comp.size());
    top.component_euler.assign(top.components, 0);
    for (int p = 0; p < d.index.total(); ++p) top.component_euler[comp[d.uf.find(p)]] += 1;
    for (int f = 0; f < tri.num_faces(); ++f) {
        const FaceLayout l = face_layout(tri, enc.weights, f);
        const FaceClass& fc = tri.face(f);
        for (int p = 0; p < l.size; ++p) {
            if (enc.partner[f][p] < p) continue;
            int s = 2;
            while (s > 0 && p < l.offset[s]) --s;
            const int g = d.index.id(fc.edge[s], class_index(tri, enc.weights, f, s, p - l.offset[s]));
            top.component_euler[comp[d.uf.find(g)]] -= 1;
        }
    }
    for (int t = 0; t < tri.size(); ++t) {
        const TetCurves& tc = d.curves[t];
        std::vector<bool> in_annulus(tc.curve_count(), false);
        for (const Annulus& a : enc.annuli)
            if (a.tet == t) in_annulus[tc.curve_at(a.a)] = in_annulus[tc.curve_at(a.b)] = true;
        for (int c = 0; c < tc.curve_count(); ++c) {
            if (in_annulus[c]) continue;
            ++top.disks;
            const TetPoint p = tc.point(tc.least[c]);
            const int g = d.index.id(tri.edge_of(t, p.edge), tet_to_class_index(tri, enc.weights, t, p));
            top.component_euler[comp[d.uf.find(g)]] += 1;
        }
    }
    top.euler = top.points - top.arcs + top.disks;
    for (int chi : top.component_euler) {
        if (chi > 2 || (chi % 2) != 0)
            throw InvalidInput("component with Euler characteristic " + std::to_string(chi) +
                               " is not a closed orientable surface");
        top.genus += (2 - chi) / 2;
    }
    return top;
}

int euler_characteristic(const Triangulation& tri, const SurfaceEncoding& enc) { return topology(tri, enc).euler; }
int genus(const Triangulation& tri, const SurfaceEncoding& enc) { return topology(tri, enc).genus; }

std::vector<std::vector<std::pair<int, int>>> components(const Triangulation& tri, const SurfaceEncoding& enc) {
    ComponentData d = build_components(tri, enc);
    std::map<int, int> comp;
    std::vector<std::vector<std::pair<int, int>>> out;
    for (int e = 0; e < tri.num_edges(); ++e)
        for (int i = 0; i < enc.weights[e]; ++i) {
            auto [it, fresh] = comp.emplace(d.uf.find(d.index.id(e, i)), static_cast<int>(out.size()));
            if (fresh) out.emplace_back();
            out[it->second].emplace_back(e, i);
        }
    return out;
}

void normalize_annuli(const Triangulation& tri, SurfaceEncoding& enc) {
    check_shape(tri, enc);
    std::map<int, TetCurves> cache;
    for (Annulus& a : enc.annuli) {
        auto it = cache.find(a.tet);
        if (it == cache.end()) it = cache.emplace(a.tet, tet_curves(tri, enc.weights, enc.partner, a.tet)).first;
        const TetCurves& tc = it->second;
        const int c1 = tc.curve_at(a.a);
        const int c2 = tc.curve_at(a.b);
        if (c1 == c2)
            throw InvalidInput("annulus in tet " + std::to_string(a.tet) + " names a single curve twice");
        a.a = tc.point(tc.least[c1]);
        a.b = tc.point(tc.least[c2]);
        if (a.b < a.a) std::swap(a.a, a.b);
    }
    std::sort(enc.annuli.begin(), enc.annuli.end());
}

namespace {

void put_varint(std::string& out, unsigned v) {
    while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    out.push_back(static_cast<char>(v));
}

}  // namespace

std::string canonical_key(const SurfaceEncoding& enc) {
    std::string key;
    for (int w : enc.weights) put_varint(key, static_cast<unsigned>(w));
    for (const auto& pm : enc.partner)
        for (int p : pm) put_varint(key, static_cast<unsigned>(p));
    put_varint(key, static_cast<unsigned>(enc.annuli.size()));
    for (const Annulus& a : enc.annuli)
        for (int v : {a.tet, a.a.edge, a.a.index, a.b.edge, a.b.index}) put_varint(key, static_cast<unsigned>(v));
    return key;
}

std::string short_hash(const std::string& key) { return sha256_hex(key).substr(0, 12); }

std::string tet_point_string(const TetPoint& p) { return std::to_string(p.edge) + "." + std::to_string(p.index); }

TetPoint parse_tet_point(std::string_view s) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == s.size())
        throw ParseError("expected <local edge>.<index>, got '" + std::string(s) + "'", 0, 0);
    TetPoint p;
    try {
        std::size_t used = 0;
        p.edge = std::stoi(std::string(s.substr(0, dot)), &used);
        if (used != dot) throw std::invalid_argument("");
        std::string rest(s.substr(dot + 1));
        p.index = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
        throw ParseError("expected <local edge>.<index>, got '" + std::string(s) + "'", 0, 0);
    }
    if (p.edge < 0 || p.edge > 5 || p.index < 0)
        throw ParseError("point out of range: '" + std::string(s) + "'", 0, 0);
    return p;
}

std::string to_text(const SurfaceEncoding& enc) {
    std::ostringstream out;
    out << "weights";
    for (int w : enc.weights) out << ' ' << w;
    out << '\n';
    for (std::size_t f = 0; f < enc.partner.size(); ++f) {
        out << "face " << f << ':';
        for (std::size_t p = 0; p < enc.partner[f].size(); ++p)
            if (enc.partner[f][p] > static_cast<int>(p)) out << ' ' << p << '-' << enc.partner[f][p];
        out << '\n';
    }
    for (const Annulus& a : enc.annuli)
        out << "annulus " << a.tet << ": " << tet_point_string(a.a) << ' ' << tet_point_string(a.b) << '\n';
    return out.str();
}

namespace {

struct Tok {
    std::string text;
    int column;
};

std::vector<Tok> tokens_of(std::string_view line) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

int parse_nonneg(const std::string& s, int line, int column) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("expected a nonnegative integer, got '" + s + "'", line, column);
    return std::stoi(s);
}

// "<n>:" as one or two tokens; returns index of the next token.
std::size_t parse_label(const std::vector<Tok>& toks, int line, int* value) {
    if (toks.size() < 2) throw ParseError("expected an index after '" + toks[0].text + "'", line, toks[0].column);
    std::string s = toks[1].text;
    std::size_t next = 2;
    if (!s.empty() && s.back() == ':')
        s.pop_back();
    else if (toks.size() > 2 && toks[2].text == ":")
        next = 3;
    else
        throw ParseError("expected ':' after index", line, toks[1].column + static_cast<int>(s.size()));
    *value = parse_nonneg(s, line, toks[1].column);
    return next;
}

}  // namespace

SurfaceEncoding parse_surface(std::string_view text) {
    SurfaceEncoding enc;
    bool have_weights = false;
    std::vector<bool> face_seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& head = toks[0].text;
        if (head == "weights") {
            if (have_weights) throw ParseError("duplicate 'weights' line", line_no, toks[0].column);
            have_weights = true;
            for (std::size_t i = 1; i < toks.size(); ++i)
                enc.weights.push_back(parse_nonneg(toks[i].text, line_no, toks[i].column));
        } else if (head == "face") {
            if (!have_weights) throw ParseError("'weights' must come first", line_no, toks[0].column);
            int f = 0;
            std::size_t i = parse_label(toks, line_no, &f);
            if (f >= static_cast<int>(enc.partner.size())) {
                enc.partner.resize(f + 1);
                face_seen.resize(f + 1, false);
            }
            if (face_seen[f]) throw ParseError("duplicate face " + std::to_string(f), line_no, toks[1].column);
            face_seen[f] = true;
            std::vector<std::pair<int, int>> arcs;
            for (; i < toks.size(); ++i) {
                const auto dash = toks[i].text.find('-');
                if (dash == std::string::npos) throw ParseError("expected '<p>-<q>'", line_no, toks[i].column);
                const int p = parse_nonneg(toks[i].text.substr(0, dash), line_no, toks[i].column);
                const int q = parse_nonneg(toks[i].text.substr(dash + 1), line_no, toks[i].column + static_cast<int>(dash) + 1);
                arcs.emplace_back(p, q);
            }
            auto& pm = enc.partner[f];
            pm.assign(2 * arcs.size(), -1);
            for (std::size_t k = 0; k < arcs.size(); ++k) {
                auto [p, q] = arcs[k];
                const int col = toks[toks.size() - arcs.size() + k].column;
                if (p == q || p >= static_cast<int>(pm.size()) || q >= static_cast<int>(pm.size()) || pm[p] >= 0 || pm[q] >= 0)
                    throw ParseError("arc endpoints must cover positions 0.." + std::to_string(pm.size()) +
                                         "-1 exactly once",
                                     line_no, col);
                pm[p] = q;
                pm[q] = p;
            }
        } else if (head == "annulus") {
            if (!have_weights) throw ParseError("'weights' must come first", line_no, toks[0].column);
            Annulus a;
            std::size_t i = parse_label(toks, line_no, &a.tet);
            if (toks.size() - i != 2) throw ParseError("expected two curve points", line_no, toks[0].column);
            try {
                a.a = parse_tet_point(toks[i].text);
                a.b = parse_tet_point(toks[i + 1].text);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line_no, toks[i].column);
            }
            enc.annuli.push_back(a);
        } else {
            throw ParseError("unknown record '" + head + "'", line_no, toks[0].column);
        }
    }
    if (!have_weights) throw ParseError("missing 'weights' line", line_no == 0 ? 1 : line_no, 1);
    return enc;
}

SurfaceEncoding load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_surface(ss.str());
}

std::vector<std::vector<int>> arc_systems(const std::array<int, 3>& per_side) {
    for (int c : per_side)
        if (c < 0) throw InvalidInput("negative point count");
    const int n = per_side[0] + per_side[1] + per_side[2];
    std::vector<std::vector<int>> out;
    if (n % 2 != 0) return out;
    std::vector<int> pm(n, -1);
    // fill the first unmatched position in [lo, hi), recursing left to right
    std::function<void()> rec = [&]() {
        int p = 0;
        while (p < n && pm[p] >= 0) ++p;
        if (p == n) {
            out.push_back(pm);
            return;
        }
        for (int q = p + 1; q < n; ++q) {
            if (pm[q] >= 0) break;  // q would enclose an already matched block
            if ((q - p) % 2 == 0) continue;
            pm[p] = q;
            pm[q] = p;
            rec();
            pm[p] = pm[q] = -1;
        }
    };
    rec();
    return out;
}

std::vector<SurfaceEncoding> enumerate_surfaces(const Triangulation& tri, int max_weight) {
    std::vector<SurfaceEncoding> out;
    if (max_weight < 0) return out;
    const int E = tri.num_edges();
    const int F = tri.num_faces();
    std::vector<int> w(E, 0);

    std::function<void(int, int)> weights_rec = [&](int e, int left) {
        if (e == E) {
            std::vector<std::vector<std::vector<int>>> options(F);
            for (int f = 0; f < F; ++f) {
                options[f] = arc_systems(face_layout(tri, w, f).count);
                if (options[f].empty()) return;
            }
            SurfaceEncoding enc;
            enc.weights = w;
            enc.partner.assign(F, {});
            std::function<void(int)> faces_rec = [&](int f) {
                if (f == F) {
                    std::vector<std::vector<Annulus>> choices(tri.size());
                    for (int t = 0; t < tri.size(); ++t) {
                        const TetCurves tc = tet_curves(tri, enc.weights, enc.partner, t);
                        for (int a = 0; a < tc.curve_count(); ++a)
                            for (int b = a + 1; b < tc.curve_count(); ++b)
                                if (tc.adjacent(a, b))
                                    choices[t].push_back(Annulus{t, tc.point(tc.least[a]), tc.point(tc.least[b])});
                    }
                    std::function<void(int)> annuli_rec = [&](int t) {
                        if (t == tri.size()) {
                            out.push_back(enc);
                            return;
                        }
                        annuli_rec(t + 1);
                        for (const Annulus& a : choices[t]) {
                            enc.annuli.push_back(a);
                            annuli_rec(t + 1);
                            enc.annuli.pop_back();
                        }
                    };
                    annuli_rec(0);
                    return;
                }
                for (const auto& pm : options[f]) {
                    enc.partner[f] = pm;
                    faces_rec(f + 1);
                }
            };
            faces_rec(0);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            w[e] = x;
            weights_rec(e + 1, left - x);
        }
        w[e] = 0;
    };
    weights_rec(0, max_weight);
    std::sort(out.begin(), out.end(), [](const SurfaceEncoding& a, const SurfaceEncoding& b) {
        return canonical_key(a) < canonical_key(b);
    });
    return out;
}

}  // namespace cnsg
