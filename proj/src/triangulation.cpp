#include "cnsg/triangulation.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

namespace cnsg {

Perm compose(const Perm& outer, const Perm& inner) {
    Perm r{};
    for (int i = 0; i < 4; ++i) r[i] = outer[inner[i]];
    return r;
}

Perm inverse(const Perm& p) {
    Perm r{};
    for (int i = 0; i < 4; ++i) r[p[i]] = i;
    return r;
}

int parity(const Perm& p) {
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

std::string perm_string(const Perm& p) {
    std::string s;
    for (int x : p) s.push_back(static_cast<char>('0' + x));
    return s;
}

int local_edge(int u, int v) {
    if (u > v) std::swap(u, v);
    for (int e = 0; e < 6; ++e)
        if (kEdgeVertices[e][0] == u && kEdgeVertices[e][1] == v) return e;
    throw std::invalid_argument("local_edge: not an edge");
}

namespace {

std::string where(int tet, int face) {
    return "tet " + std::to_string(tet) + " face " + std::to_string(face);
}

// Union-find carrying a relative orientation bit per node.
class ParityUnionFind {
public:
    explicit ParityUnionFind(int n) : parent_(n), flip_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::pair<int, int> find(int x) {
        int bit = 0;
        int root = x;
        while (parent_[root] != root) {
            bit ^= flip_[root];
            root = parent_[root];
        }
        // path compression, keeping bits relative to the root
        int cur = x;
        int cur_bit = bit;
        while (parent_[cur] != cur) {
            int next = parent_[cur];
            int next_bit = cur_bit ^ flip_[cur];
            parent_[cur] = root;
            flip_[cur] = cur_bit;
            cur = next;
            cur_bit = next_bit;
        }
        return {root, bit};
    }

    // Returns false when the requested relation contradicts an existing one.
    bool unite(int a, int b, int relative) {
        auto [ra, ba] = find(a);
        auto [rb, bb] = find(b);
        if (ra == rb) return (ba ^ bb) == relative;
        parent_[ra] = rb;
        flip_[ra] = ba ^ bb ^ relative;
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> flip_;
};

}  // namespace

Triangulation::Triangulation(std::vector<std::array<Gluing, 4>> gluings) : gluings_(std::move(gluings)) {
    if (gluings_.empty()) throw InvalidInput("no tetrahedra");
    const int n = size();
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            if (g.tet < 0) throw InvalidInput(where(t, f) + ": unglued face (boundary)");
            if (g.tet >= n) throw InvalidInput(where(t, f) + ": neighbour tetrahedron " + std::to_string(g.tet) + " does not exist");
            Perm sorted = g.perm;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != Perm{0, 1, 2, 3}) throw InvalidInput(where(t, f) + ": invalid permutation");
        }
    }
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            const int back_face = g.perm[f];
            const Gluing& back = gluings_[g.tet][back_face];
            if ((g.tet == t && back_face == f) || back.tet != t || back.perm != inverse(g.perm))
                throw InvalidInput(where(t, f) + ": non-involutive or fixed-point gluing");
        }
    }
    // orientation: o(n) = -o(t) * parity(p) across every gluing
    orientation_.assign(n, 0);
    for (int root = 0; root < n; ++root) {
        if (orientation_[root] != 0) continue;
        orientation_[root] = 1;
        std::queue<int> queue;
        queue.push(root);
        while (!queue.empty()) {
            int t = queue.front();
            queue.pop();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = gluings_[t][f];
                const int want = -orientation_[t] * parity(g.perm);
                if (orientation_[g.tet] == 0) {
                    orientation_[g.tet] = want;
                    queue.push(g.tet);
                } else if (orientation_[g.tet] != want) {
                    throw InvalidInput(where(t, f) + ": non-orientable gluing");
                }
            }
        }
    }
    derive();
    if (euler_characteristic() != 0)
        throw InvalidInput("Euler characteristic " + std::to_string(euler_characteristic()) +
                           " is not 0 (some vertex link is not a sphere)");
}

void Triangulation::derive() {
    const int n = size();

    // vertex classes
    ParityUnionFind vuf(4 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            for (int v = 0; v < 4; ++v)
                if (v != f) vuf.unite(4 * t + v, 4 * g.tet + g.perm[v], 0);
        }
    tet_vertex_.assign(n, {});
    std::vector<int> vid(4 * n, -1);
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            int r = vuf.find(4 * t + v).first;
            if (vid[r] < 0) {
                vid[r] = static_cast<int>(vertices_.size());
                vertices_.emplace_back();
            }
            tet_vertex_[t][v] = vid[r];
            vertices_[vid[r]].corners.emplace_back(t, v);
        }

    // edge classes with relative orientation
    ParityUnionFind euf(6 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = gluings_[t][f];
            for (int le = 0; le < 6; ++le) {
                const int u = kEdgeVertices[le][0];
                const int v = kEdgeVertices[le][1];
                if (u == f || v == f) continue;
                const int pu = g.perm[u];
                const int pv = g.perm[v];
                if (!euf.unite(6 * t + le, 6 * g.tet + local_edge(pu, pv), pu > pv ? 1 : 0))
                    throw InvalidInput(where(t, f) + ": edge identified with itself in reverse");
            }
        }
    tet_edge_.assign(n, {});
    tet_edge_forward_.assign(n, {});
    std::vector<int> eid(6 * n, -1);
    std::vector<int> rep_bit;
    for (int t = 0; t < n; ++t)
        for (int le = 0; le < 6; ++le) {
            auto [r, bit] = euf.find(6 * t + le);
            if (eid[r] < 0) {
                eid[r] = static_cast<int>(edges_.size());
                EdgeClass ec;
                ec.tail = tet_vertex_[t][kEdgeVertices[le][0]];
                ec.head = tet_vertex_[t][kEdgeVertices[le][1]];
                edges_.push_back(ec);
                rep_bit.push_back(bit);
            }
            const int e = eid[r];
            tet_edge_[t][le] = e;
            tet_edge_forward_[t][le] = (bit == rep_bit[e]);
            edges_[e].corners.emplace_back(t, le);
        }

    // face classes
    tet_face_.assign(n, {-1, -1, -1, -1});
    tet_face_copy_.assign(n, {-1, -1, -1, -1});
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (tet_face_[t][f] >= 0) continue;
            const Gluing& g = gluings_[t][f];
            FaceClass fc;
            fc.tet = {t, g.tet};
            fc.face = {f, g.perm[f]};
            int k = 0;
            for (int v = 0; v < 4; ++v)
                if (v != f) fc.corner[0][k++] = v;
            for (k = 0; k < 3; ++k) fc.corner[1][k] = g.perm[fc.corner[0][k]];
            for (k = 0; k < 3; ++k) {
                const int a = fc.corner[0][k];
                const int b = fc.corner[0][(k + 1) % 3];
                const int le = local_edge(a, b);
                fc.edge[k] = tet_edge_[t][le];
                fc.forward[k] = ((a < b) == tet_edge_forward_[t][le]);
                fc.vertex[k] = tet_vertex_[t][a];
            }
            const int id = static_cast<int>(faces_.size());
            faces_.push_back(fc);
            tet_face_[t][f] = id;
            tet_face_copy_[t][f] = 0;
            tet_face_[g.tet][g.perm[f]] = id;
            tet_face_copy_[g.tet][g.perm[f]] = 1;
        }
}

const EdgeClass& Triangulation::edge(int e) const {
    if (e < 0 || e >= num_edges()) throw InvalidInput("unknown edge class " + std::to_string(e));
    return edges_[e];
}

const FaceClass& Triangulation::face(int f) const {
    if (f < 0 || f >= num_faces()) throw InvalidInput("unknown face class " + std::to_string(f));
    return faces_[f];
}

const VertexClass& Triangulation::vertex(int v) const {
    if (v < 0 || v >= num_vertices()) throw InvalidInput("unknown vertex class " + std::to_string(v));
    return vertices_[v];
}

int Triangulation::vertex_degree(int v) const {
    vertex(v);
    int d = 0;
    for (const auto& e : edges_) d += (e.tail == v) + (e.head == v);
    return d;
}

std::string Triangulation::to_text() const {
    std::ostringstream out;
    for (int t = 0; t < size(); ++t) {
        out << "tet " << t << ":";
        for (int f = 0; f < 4; ++f) out << ' ' << gluings_[t][f].tet << '/' << perm_string(gluings_[t][f].perm);
        out << '\n';
    }
    return out.str();
}

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
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

std::optional<int> to_int(std::string_view s) {
    if (s.empty() || s.size() > 9) return std::nullopt;
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

Triangulation parse_triangulation(std::string_view text) {
    std::vector<std::optional<std::array<Gluing, 4>>> rows;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_tokens(line);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (tokens[0].text != "tet") throw ParseError("expected 'tet'", line_no, tokens[0].column);
        if (tokens.size() < 2) throw ParseError("expected tetrahedron index", line_no, static_cast<int>(line.size()) + 1);
        std::string idx = tokens[1].text;
        std::size_t first_entry = 2;
        if (!idx.empty() && idx.back() == ':') {
            idx.pop_back();
        } else if (tokens.size() > 2 && tokens[2].text == ":") {
            first_entry = 3;
        } else {
            throw ParseError("expected ':' after tetrahedron index", line_no, tokens[1].column + static_cast<int>(idx.size()));
        }
        auto t = to_int(idx);
        if (!t) throw ParseError("invalid tetrahedron index '" + idx + "'", line_no, tokens[1].column);
        if (tokens.size() - first_entry != 4)
            throw ParseError("expected 4 face entries, found " + std::to_string(tokens.size() - first_entry), line_no,
                             tokens.size() > first_entry ? tokens[first_entry].column : tokens.back().column);
        std::array<Gluing, 4> row{};
        for (int f = 0; f < 4; ++f) {
            const Token& tok = tokens[first_entry + f];
            if (tok.text == "-") continue;  // unglued; rejected by validation
            auto slash = tok.text.find('/');
            if (slash == std::string::npos) throw ParseError("expected '<tet>/<perm>'", line_no, tok.column);
            auto n = to_int(std::string_view(tok.text).substr(0, slash));
            if (!n) throw ParseError("invalid neighbour index", line_no, tok.column);
            std::string_view p = std::string_view(tok.text).substr(slash + 1);
            if (p.size() != 4) throw ParseError("permutation must have 4 digits", line_no, tok.column + static_cast<int>(slash) + 1);
            Perm perm{};
            for (int i = 0; i < 4; ++i) {
                if (p[i] < '0' || p[i] > '3')
                    throw ParseError("permutation digit out of range", line_no, tok.column + static_cast<int>(slash) + 1 + i);
                perm[i] = p[i] - '0';
            }
            row[f] = Gluing{*n, perm};
        }
        if (*t >= static_cast<int>(rows.size())) rows.resize(*t + 1);
        if (rows[*t]) throw ParseError("duplicate tetrahedron " + std::to_string(*t), line_no, tokens[1].column);
        rows[*t] = row;
        if (end == text.size()) break;
    }
    if (rows.empty()) throw InvalidInput("no tetrahedra");
    std::vector<std::array<Gluing, 4>> gluings;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (!rows[t]) throw InvalidInput("tet " + std::to_string(t) + " missing from table");
        gluings.push_back(*rows[t]);
    }
    return Triangulation(std::move(gluings));
}

Triangulation load_triangulation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_triangulation(ss.str());
}

namespace {

const std::vector<Perm>& all_perms() {
    static const std::vector<Perm> perms = [] {
        std::vector<Perm> out;
        Perm p{0, 1, 2, 3};
        do out.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

int perm_index(const Perm& p) {
    const auto& perms = all_perms();
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
}

}  // namespace

Triangulation barycentric_subdivide(const Triangulation& tri) {
    const auto& perms = all_perms();
    const Perm identity{0, 1, 2, 3};
    std::vector<std::array<Gluing, 4>> out(24 * tri.size());
    for (int t = 0; t < tri.size(); ++t) {
        for (int k = 0; k < 24; ++k) {
            const Perm& flag = perms[k];
            auto& row = out[24 * t + k];
            // new local vertex i is the barycentre of old vertices flag[0..i]
            for (int i = 0; i < 3; ++i) {
                Perm swapped = flag;
                std::swap(swapped[i], swapped[i + 1]);
                row[i] = Gluing{24 * t + perm_index(swapped), identity};
            }
            const Gluing& g = tri.gluing(t, flag[3]);
            Perm image{};
            for (int i = 0; i < 4; ++i) image[i] = g.perm[flag[i]];
            row[3] = Gluing{24 * g.tet + perm_index(image), identity};
        }
    }
    return Triangulation(std::move(out));
}

}  // namespace cnsg
