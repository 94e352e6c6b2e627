#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cnsg/errors.hpp"

namespace cnsg {

using Perm = std::array<int, 4>;

Perm compose(const Perm& outer, const Perm& inner);  // outer[inner[i]]
Perm inverse(const Perm& p);
int parity(const Perm& p);  // +1 even, -1 odd
std::string perm_string(const Perm& p);

// Local edge numbering inside a tetrahedron:
// 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3)
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
int local_edge(int u, int v);

struct Gluing {
    int tet = -1;
    Perm perm{};
};

struct EdgeClass {
    int tail = -1;  // vertex class at the start of the canonical orientation
    int head = -1;
    std::vector<std::pair<int, int>> corners;  // (tet, local edge), in scan order
    int degree() const { return static_cast<int>(corners.size()); }
};

// A glued pair of tetrahedron faces. Copy 0 is the representative (first in scan order).
// Corner k of the class sits at local vertex corner[c][k] of copy c; side k runs from
// corner k to corner k+1 (mod 3). Boundary positions of a face enumerate side 0, then 1, then 2.
struct FaceClass {
    std::array<int, 2> tet{};
    std::array<int, 2> face{};
    std::array<std::array<int, 3>, 2> corner{};
    std::array<int, 3> edge{};      // edge class of side k
    std::array<bool, 3> forward{};  // side k runs along its edge class's canonical orientation
    std::array<int, 3> vertex{};    // vertex class at corner k
};

struct VertexClass {
    std::vector<std::pair<int, int>> corners;  // (tet, local vertex)
};

class Triangulation {
public:
    Triangulation() = default;

    // Validates and derives all classes. Throws InvalidInput naming the offending tet/face.
    explicit Triangulation(std::vector<std::array<Gluing, 4>> gluings);

    int size() const { return static_cast<int>(gluings_.size()); }
    const Gluing& gluing(int tet, int face) const { return gluings_.at(tet)[face]; }
    const std::vector<std::array<Gluing, 4>>& gluings() const { return gluings_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_faces() - size(); }

    const EdgeClass& edge(int e) const;
    const FaceClass& face(int f) const;
    const VertexClass& vertex(int v) const;

    int edge_degree(int e) const { return edge(e).degree(); }
    int vertex_degree(int v) const;  // number of edge-class ends at v

    int vertex_of(int tet, int local_vertex) const { return tet_vertex_.at(tet)[local_vertex]; }
    int edge_of(int tet, int local_edge) const { return tet_edge_.at(tet)[local_edge]; }
    // True when local edge (lo -> hi) agrees with the edge class orientation.
    bool edge_forward(int tet, int local_edge) const { return tet_edge_forward_.at(tet)[local_edge]; }
    int face_of(int tet, int face) const { return tet_face_.at(tet)[face]; }
    int face_copy(int tet, int face) const { return tet_face_copy_.at(tet)[face]; }
    int orientation(int tet) const { return orientation_.at(tet); }

    std::string to_text() const;

private:
    void derive();

    std::vector<std::array<Gluing, 4>> gluings_;
    std::vector<EdgeClass> edges_;
    std::vector<FaceClass> faces_;
    std::vector<VertexClass> vertices_;
    std::vector<std::array<int, 4>> tet_vertex_;
    std::vector<std::array<int, 6>> tet_edge_;
    std::vector<std::array<bool, 6>> tet_edge_forward_;
    std::vector<std::array<int, 4>> tet_face_;
    std::vector<std::array<int, 4>> tet_face_copy_;
    std::vector<int> orientation_;
};

Triangulation parse_triangulation(std::string_view text);
Triangulation load_triangulation(const std::string& path);

// Each tetrahedron splits into 24 along its flags (vertex < edge < face < tet).
Triangulation barycentric_subdivide(const Triangulation& tri);

}  // namespace cnsg
