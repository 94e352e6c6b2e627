#include "cnsg/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cnsg/moves.hpp"  // apply_text only

namespace cnsg::oracle {

namespace {

// --- triangulation, re-derived from the table text -------------------------------

struct Tri {
    int n = 0;
    std::vector<std::array<int, 4>> nbr;
    std::vector<std::array<std::array<int, 4>, 4>> perm;

    std::vector<std::array<int, 6>> edge;   // class of each local edge
    std::vector<std::array<int, 4>> vert;   // class of each local vertex
    std::vector<std::array<int, 2>> ends;   // vertex classes at tail/head of each edge class
    int num_vertices = 0;

    struct Face {
        int tet[2];
        int lf[2];
        int corner[2][3];
    };
    std::vector<Face> faces;
    std::vector<std::array<std::pair<int, int>, 4>> face_of;  // (class, copy)
};

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    static const int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[a][b];
}

const int kEnds[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Tri read_tri(std::string_view text) {
    Tri t;
    std::istringstream in{std::string(text)};
    std::string line;
    std::map<int, std::pair<std::array<int, 4>, std::array<std::array<int, 4>, 4>>> rows;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find('#'));
        std::istringstream ls(line);
        std::string word, idx;
        if (!(ls >> word)) continue;
        if (word != "tet" || !(ls >> idx) || idx.back() != ':') throw std::invalid_argument("oracle: bad table line");
        const int id = std::stoi(idx.substr(0, idx.size() - 1));
        auto& row = rows[id];
        for (int f = 0; f < 4; ++f) {
            std::string entry;
            if (!(ls >> entry)) throw std::invalid_argument("oracle: short table line");
            const auto slash = entry.find('/');
            if (slash == std::string::npos || entry.size() != slash + 5) throw std::invalid_argument("oracle: bad entry");
            row.first[f] = std::stoi(entry.substr(0, slash));
            for (int i = 0; i < 4; ++i) row.second[f][i] = entry[slash + 1 + i] - '0';
        }
    }
    t.n = static_cast<int>(rows.size());
    for (auto& [id, row] : rows) {
        if (id != static_cast<int>(t.nbr.size())) throw std::invalid_argument("oracle: tetrahedra not numbered 0..n-1");
        t.nbr.push_back(row.first);
        t.perm.push_back(row.second);
    }

    // vertex classes by flood fill in scan order
    t.vert.assign(t.n, {-1, -1, -1, -1});
    for (int s = 0; s < t.n; ++s)
        for (int v = 0; v < 4; ++v) {
            if (t.vert[s][v] >= 0) continue;
            const int id = t.num_vertices++;
            std::deque<std::pair<int, int>> q{{s, v}};
            t.vert[s][v] = id;
            while (!q.empty()) {
                auto [a, x] = q.front();
                q.pop_front();
                for (int f = 0; f < 4; ++f) {
                    if (f == x) continue;
                    const int b = t.nbr[a][f], y = t.perm[a][f][x];
                    if (t.vert[b][y] < 0) {
                        t.vert[b][y] = id;
                        q.push_back({b, y});
                    }
                }
            }
        }

    // edge classes by flood fill; `dir` records agreement with the class representative
    t.edge.assign(t.n, {-1, -1, -1, -1, -1, -1});
    for (int s = 0; s < t.n; ++s)
        for (int le = 0; le < 6; ++le) {
            if (t.edge[s][le] >= 0) continue;
            const int id = static_cast<int>(t.ends.size());
            t.ends.push_back({t.vert[s][kEnds[le][0]], t.vert[s][kEnds[le][1]]});
            std::deque<std::pair<int, int>> q{{s, le}};
            t.edge[s][le] = id;
            while (!q.empty()) {
                auto [a, e] = q.front();
                q.pop_front();
                for (int f = 0; f < 4; ++f) {
                    if (f == kEnds[e][0] || f == kEnds[e][1]) continue;
                    const int b = t.nbr[a][f];
                    const int e2 = edge_index(t.perm[a][f][kEnds[e][0]], t.perm[a][f][kEnds[e][1]]);
                    if (t.edge[b][e2] < 0) {
                        t.edge[b][e2] = id;
                        q.push_back({b, e2});
                    }
                }
            }
        }

    // face classes in scan order
    t.face_of.assign(t.n, {});
    for (auto& row : t.face_of) row.fill({-1, -1});
    for (int s = 0; s < t.n; ++s)
        for (int f = 0; f < 4; ++f) {
            if (t.face_of[s][f].first >= 0) continue;
            Tri::Face fc{};
            fc.tet[0] = s;
            fc.lf[0] = f;
            fc.tet[1] = t.nbr[s][f];
            fc.lf[1] = t.perm[s][f][f];
            int k = 0;
            for (int v = 0; v < 4; ++v)
                if (v != f) fc.corner[0][k++] = v;
            for (k = 0; k < 3; ++k) fc.corner[1][k] = t.perm[s][f][fc.corner[0][k]];
            const int id = static_cast<int>(t.faces.size());
            t.faces.push_back(fc);
            t.face_of[s][f] = {id, 0};
            t.face_of[fc.tet[1]][fc.lf[1]] = {id, 1};
        }
    return t;
}

// --- matchings -------------------------------------------------------------------

bool crosses(int a, int b, int c, int d) {
    // chords (a,b) and (c,d) with a<b, c<d on a circle
    return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

void all_matchings(std::vector<int>& pm, std::vector<std::vector<int>>& out) {
    const auto it = std::find(pm.begin(), pm.end(), -1);
    if (it == pm.end()) {
        const int n = static_cast<int>(pm.size());
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a < pm[a] && c < pm[c] && crosses(a, pm[a], c, pm[c])) return;
        out.push_back(pm);
        return;
    }
    const int p = static_cast<int>(it - pm.begin());
    for (int q = p + 1; q < static_cast<int>(pm.size()); ++q) {
        if (pm[q] >= 0) continue;
        pm[p] = q;
        pm[q] = p;
        all_matchings(pm, out);
        pm[p] = pm[q] = -1;
    }
}

// --- per-tetrahedron analysis ----------------------------------------------------

struct Surface {
    std::vector<int> weights;
    std::vector<std::vector<int>> partner;
};

using AnnulusList = std::vector<std::pair<int, std::array<std::pair<int, int>, 2>>>;

// Boundary of one tet face as seen from the tet: the points in face order, each as
// (local edge, index from the lower local vertex), and between them the edge segments.
struct FaceView {
    std::vector<std::pair<int, int>> points;
    // seq interleaves segments and points: segment entries are (local edge, segment m)
    // with m counted from the lower vertex; point entries carry -1 - position
    std::vector<std::pair<int, int>> seq;
};

FaceView view_face(const Tri& tri, const Surface& s, int tet, int lf) {
    FaceView fv;
    auto [fid, copy] = tri.face_of[tet][lf];
    const Tri::Face& fc = tri.faces[fid];
    for (int k = 0; k < 3; ++k) {
        const int a = fc.corner[copy][k], b = fc.corner[copy][(k + 1) % 3];
        const int le = edge_index(a, b);
        const int w = s.weights[tri.edge[tet][le]];
        for (int j = 0; j <= w; ++j) {
            fv.seq.push_back({le, a < b ? j : w - j});
            if (j < w) {
                fv.seq.push_back({-1, static_cast<int>(fv.points.size())});
                fv.points.push_back({le, a < b ? j : w - 1 - j});
            }
        }
    }
    return fv;
}

struct TetAnalysis {
    std::vector<std::pair<int, int>> points;  // sorted (local edge, index)
    std::vector<int> curve;                   // curve of each point
    std::vector<std::pair<int, int>> least;   // least point of each curve
    std::vector<std::set<int>> sides;         // complementary regions bordering each curve
};

TetAnalysis analyse(const Tri& tri, const Surface& s, int tet) {
    TetAnalysis ta;
    std::map<std::pair<int, int>, int> pid;
    for (int le = 0; le < 6; ++le)
        for (int q = 0; q < s.weights[tri.edge[tet][le]]; ++q) {
            pid[{le, q}] = static_cast<int>(ta.points.size());
            ta.points.push_back({le, q});
        }
    const int np = static_cast<int>(ta.points.size());
    std::vector<std::vector<int>> nbrs(np);  // arc neighbours, one per face containing the point

    // segment node ids
    std::map<std::pair<int, int>, int> seg;
    for (int le = 0; le < 6; ++le)
        for (int m = 0; m <= s.weights[tri.edge[tet][le]]; ++m) seg.emplace(std::make_pair(le, m), static_cast<int>(seg.size()));
    std::vector<std::vector<int>> seg_adj(seg.size());
    struct ArcSides {
        int a, b;
        int inner, outer;  // segment nodes just inside and just outside the arc
    };
    std::vector<ArcSides> arcs;

    for (int lf = 0; lf < 4; ++lf) {
        const FaceView fv = view_face(tri, s, tet, lf);
        const std::vector<int>& pm = s.partner[tri.face_of[tet][lf].first];
        const int len = static_cast<int>(fv.seq.size());
        std::vector<int> at(fv.points.size());
        for (int i = 0; i < len; ++i)
            if (fv.seq[i].first < 0) at[fv.seq[i].second] = i;
        // segments in the same face region share the inside/outside pattern of every arc
        std::map<std::vector<bool>, int> region_first;
        for (int i = 0; i < len; ++i) {
            if (fv.seq[i].first < 0) continue;
            std::vector<bool> sig;
            for (std::size_t p = 0; p < pm.size(); ++p)
                if (pm[p] > static_cast<int>(p)) sig.push_back(at[p] < i && i < at[pm[p]]);
            const int node = seg.at(fv.seq[i]);
            auto [it, fresh] = region_first.emplace(sig, node);
            if (!fresh) {
                seg_adj[node].push_back(it->second);
                seg_adj[it->second].push_back(node);
            }
        }
        for (std::size_t p = 0; p < pm.size(); ++p) {
            const int a = pid.at(fv.points[p]), b = pid.at(fv.points[pm[p]]);
            nbrs[a].push_back(b);
            if (pm[p] > static_cast<int>(p)) {
                // the sequence is cyclic and starts with a segment, so at[p] +- 1 are segments
                const int in = seg.at(fv.seq[at[p] + 1]);
                const int out = seg.at(fv.seq[(at[p] - 1 + len) % len]);
                arcs.push_back({a, b, in, out});
            }
        }
    }

    // complementary regions of the tet boundary
    std::vector<int> region(seg.size(), -1);
    int nregions = 0;
    for (std::size_t start = 0; start < seg.size(); ++start) {
        if (region[start] >= 0) continue;
        std::deque<int> q{static_cast<int>(start)};
        region[start] = nregions;
        while (!q.empty()) {
            const int x = q.front();
            q.pop_front();
            for (int y : seg_adj[x])
                if (region[y] < 0) {
                    region[y] = nregions;
                    q.push_back(y);
                }
        }
        ++nregions;
    }

    // curves: walk the 2-regular arc graph
    ta.curve.assign(np, -1);
    int ncurves = 0;
    for (int start = 0; start < np; ++start) {
        if (ta.curve[start] >= 0) continue;
        std::deque<int> q{start};
        ta.curve[start] = ncurves;
        while (!q.empty()) {
            const int x = q.front();
            q.pop_front();
            for (int y : nbrs[x])
                if (ta.curve[y] < 0) {
                    ta.curve[y] = ncurves;
                    q.push_back(y);
                }
        }
        ta.least.push_back(ta.points[start]);
        ++ncurves;
    }
    ta.sides.assign(ncurves, {});
    for (const ArcSides& arc : arcs) {
        ta.sides[ta.curve[arc.a]].insert(region[arc.inner]);
        ta.sides[ta.curve[arc.a]].insert(region[arc.outer]);
    }
    return ta;
}

std::string point_text(const std::pair<int, int>& p) { return std::to_string(p.first) + "." + std::to_string(p.second); }

std::string serialize(const Surface& s, const AnnulusList& annuli) {
    std::string out = "weights";
    for (int w : s.weights) out += " " + std::to_string(w);
    out += "\n";
    for (std::size_t f = 0; f < s.partner.size(); ++f) {
        out += "face " + std::to_string(f) + ":";
        for (std::size_t p = 0; p < s.partner[f].size(); ++p)
            if (s.partner[f][p] > static_cast<int>(p)) out += " " + std::to_string(p) + "-" + std::to_string(s.partner[f][p]);
        out += "\n";
    }
    for (const auto& [tet, ends] : annuli)
        out += "annulus " + std::to_string(tet) + ": " + point_text(ends[0]) + " " + point_text(ends[1]) + "\n";
    return out;
}

int face_points(const Tri& tri, const std::vector<int>& w, int f) {
    const Tri::Face& fc = tri.faces[f];
    int n = 0;
    for (int k = 0; k < 3; ++k)
        n += w[tri.edge[fc.tet[0]][edge_index(fc.corner[0][k], fc.corner[0][(k + 1) % 3])]];
    return n;
}

std::array<int, 3> face_triple(const Tri& tri, const std::vector<int>& w, int f) {
    const Tri::Face& fc = tri.faces[f];
    std::array<int, 3> out{};
    for (int k = 0; k < 3; ++k) out[k] = w[tri.edge[fc.tet[0]][edge_index(fc.corner[0][k], fc.corner[0][(k + 1) % 3])]];
    return out;
}

// --- text helpers for the closure ------------------------------------------------

std::pair<int, int> read_point(const std::string& text) {
    const auto dot = text.find('.');
    return {std::stoi(text.substr(0, dot)), std::stoi(text.substr(dot + 1))};
}

Surface read_surface(const std::string& text, AnnulusList* annuli = nullptr) {
    Surface s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "weights") {
            for (int w; ls >> w;) s.weights.push_back(w);
        } else if (word == "face") {
            std::string tag, pair;
            ls >> tag;
            std::vector<std::pair<int, int>> arcs;
            int n = 0;
            while (ls >> pair) {
                const auto dash = pair.find('-');
                arcs.push_back({std::stoi(pair.substr(0, dash)), std::stoi(pair.substr(dash + 1))});
                n += 2;
            }
            std::vector<int> pm(n, -1);
            for (auto [p, q] : arcs) {
                pm[p] = q;
                pm[q] = p;
            }
            s.partner.push_back(pm);
        } else if (word == "annulus" && annuli) {
            std::string tag, a, b;
            ls >> tag >> a >> b;
            annuli->push_back({std::stoi(tag.substr(0, tag.size() - 1)), {read_point(a), read_point(b)}});
        }
    }
    return s;
}

int total(const std::vector<int>& w) { return std::accumulate(w.begin(), w.end(), 0); }

std::set<std::string> split_set(std::string_view list) {
    std::set<std::string> out;
    std::string cur;
    for (char c : list) {
        if (c == ',') {
            if (!cur.empty()) out.insert(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.insert(cur);
    for (const auto& k : out)
        if (k != "V0" && k != "E1" && k != "F2" && k != "F2'" && k != "PINCH" && k != "UNPINCH")
            throw std::invalid_argument("oracle: unknown move kind " + k);
    return out;
}

}  // namespace

Matchings oracle_matchings(const std::array<int, 3>& points_per_side) {
    for (int c : points_per_side)
        if (c < 0) throw std::invalid_argument("oracle: negative point count");
    const int n = points_per_side[0] + points_per_side[1] + points_per_side[2];
    if (n % 2) throw std::invalid_argument("oracle: odd number of points");
    Matchings m;
    std::vector<int> pm(n, -1);
    all_matchings(pm, m.partners);
    std::sort(m.partners.begin(), m.partners.end());
    m.count = m.partners.size();
    return m;
}

void oracle_surfaces(std::string_view triangulation, int W, const std::function<bool(const std::string&)>& visit,
                     const std::function<bool(const std::vector<int>&)>& weights) {
    if (W < 0 || W > kMaxWeight) throw std::invalid_argument("oracle: W must lie in [0, " + std::to_string(kMaxWeight) + "]");
    const Tri tri = read_tri(triangulation);
    const int E = static_cast<int>(tri.ends.size());
    const int F = static_cast<int>(tri.faces.size());
    std::map<std::array<int, 3>, std::vector<std::vector<int>>> cache;
    bool stop = false;

    Surface s;
    s.weights.assign(E, 0);
    s.partner.assign(F, {});
    AnnulusList annuli;

    std::function<void(int)> annuli_step = [&](int t) {
        if (stop) return;
        if (t == tri.n) {
            if (!visit(serialize(s, annuli))) stop = true;
            return;
        }
        annuli_step(t + 1);
        const TetAnalysis ta = analyse(tri, s, t);
        const int nc = static_cast<int>(ta.least.size());
        for (int a = 0; a < nc && !stop; ++a)
            for (int b = a + 1; b < nc && !stop; ++b) {
                bool shared = false;
                for (int r : ta.sides[a]) shared = shared || ta.sides[b].count(r);
                if (!shared) continue;
                annuli.push_back({t, {ta.least[a], ta.least[b]}});
                annuli_step(t + 1);
                annuli.pop_back();
            }
    };
    std::function<void(int)> face_step = [&](int f) {
        if (stop) return;
        if (f == F) {
            annuli_step(0);
            return;
        }
        const auto triple = face_triple(tri, s.weights, f);
        auto it = cache.find(triple);
        if (it == cache.end()) it = cache.emplace(triple, oracle_matchings(triple).partners).first;
        for (const auto& pm : it->second) {
            s.partner[f] = pm;
            face_step(f + 1);
        }
    };
    std::function<void(int, int)> weight_step = [&](int e, int left) {
        if (stop) return;
        if (e == E) {
            if (weights && !weights(s.weights)) return;
            for (int f = 0; f < F; ++f)
                if (face_points(tri, s.weights, f) % 2) return;
            face_step(0);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            s.weights[e] = x;
            weight_step(e + 1, left - x);
        }
        s.weights[e] = 0;
    };
    weight_step(0, W);
}

std::set<std::string> oracle_surfaces(std::string_view triangulation, int W) {
    std::set<std::string> out;
    oracle_surfaces(triangulation, W, [&](const std::string& s) {
        out.insert(s);
        return true;
    });
    return out;
}

std::set<std::string> oracle_closure(std::string_view triangulation, std::string_view seed, int W,
                                     std::string_view move_set) {
    if (W < 0 || W > kMaxWeight) throw std::invalid_argument("oracle: W must lie in [0, " + std::to_string(kMaxWeight) + "]");
    const std::set<std::string> kinds = split_set(move_set);
    const Tri tri = read_tri(triangulation);
    const int E = static_cast<int>(tri.ends.size());
    const int F = static_cast<int>(tri.faces.size());
    const std::string tri_text(triangulation);

    // candidate texts are enumerated from syntax alone; apply_text decides applicability
    auto candidates = [&](const Surface& s) {
        std::vector<std::string> out;
        auto args = [](std::initializer_list<std::pair<const char*, std::string>> kv) {
            std::string r = "[";
            bool first = true;
            for (const auto& [k, v] : kv) {
                r += (first ? "" : ",") + std::string(k) + "=" + v;
                first = false;
            }
            return r + "]";
        };
        auto str = [](int x) { return std::to_string(x); };
        if (kinds.count("V0"))
            for (int v = 0; v < tri.num_vertices; ++v)
                for (int f = 0; f < F; ++f)
                    for (int c = 0; c < 3; ++c) {
                        out.push_back("V0-@v" + str(v) + args({{"f", str(f)}, {"c", str(c)}}));
                        for (int a = 0; a < static_cast<int>(s.partner[f].size()); ++a)
                            out.push_back("V0+@v" + str(v) + args({{"f", str(f)}, {"c", str(c)}, {"a", str(a)}}));
                    }
        if (kinds.count("E1"))
            for (int e = 0; e < E; ++e)
                for (int i = 0; i <= s.weights[e]; ++i) {
                    out.push_back("E1-@e" + str(e) + args({{"i", str(i)}}));
                    for (int f = 0; f < F; ++f)
                        for (int side = 0; side < 3; ++side)
                            for (int a = 0; a < static_cast<int>(s.partner[f].size()); ++a)
                                out.push_back("E1+@e" + str(e) +
                                              args({{"i", str(i)}, {"f", str(f)}, {"s", str(side)}, {"a", str(a)}}));
                }
        for (const char* kind : {"F2", "F2'"}) {
            if (!kinds.count(kind)) continue;
            for (int f = 0; f < F; ++f)
                for (int a = 0; a < static_cast<int>(s.partner[f].size()); ++a)
                    for (int b = a + 1; b < static_cast<int>(s.partner[f].size()); ++b)
                        for (int g = 0; g < 2; ++g)
                            for (int k = 0; k < 2; ++k)
                                out.push_back(std::string(kind) + "@f" + str(f) +
                                              args({{"a", str(a)}, {"b", str(b)}, {"g", str(g)}, {"k", str(k)}}));
        }
        // default catalog: one vertex link per vertex class
        if (kinds.count("PINCH"))
            for (int t = 0; t < tri.n; ++t)
                for (int sphere = 0; sphere < tri.num_vertices; ++sphere)
                    for (int le = 0; le < 6; ++le)
                        for (int q = 0; q < s.weights[tri.edge[t][le]]; ++q)
                            for (int dle = 0; dle < 6; ++dle) {
                                const auto& ends = tri.ends[tri.edge[t][dle]];
                                const int dw = (ends[0] == sphere) + (ends[1] == sphere);
                                for (int dq = 0; dq < dw; ++dq)
                                    out.push_back("PINCH@t" + str(t) +
                                                  args({{"c", str(le) + "." + str(q)}, {"s", str(sphere)},
                                                        {"d", str(dle) + "." + str(dq)}}));
                            }
        if (kinds.count("UNPINCH"))
            for (int t = 0; t < tri.n; ++t)
                for (int sphere = 0; sphere < tri.num_vertices; ++sphere)
                    for (int d = 0; d < 2; ++d) out.push_back("UNPINCH@t" + str(t) + args({{"d", str(d)}, {"s", str(sphere)}}));
        return out;
    };

    // the seed is expected in normal form; this only strips comments and spacing
    AnnulusList seed_annuli;
    const Surface seed_surface = read_surface(std::string(seed), &seed_annuli);
    const std::string start = serialize(seed_surface, seed_annuli);
    std::set<std::string> seen{start};
    std::deque<std::string> queue{start};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        const Surface s = read_surface(cur);
        for (const std::string& move : candidates(s)) {
            std::string next;
            try {
                next = apply_text(tri_text, cur, move);
            } catch (const std::runtime_error&) {
                continue;
            }
            if (total(read_surface(next).weights) > W) continue;
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    return seen;
}

}  // namespace cnsg::oracle
