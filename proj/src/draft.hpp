#pragma once

#include <array>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cnsg/surface.hpp"

namespace cnsg::detail {

// Arc endpoint: side of the face and the stable id of the point on that side's edge.
struct End {
    int side = 0;
    int id = 0;
    bool operator==(const End&) const = default;
};

struct DraftArc {
    End a;
    End b;
};

// Annulus curve named by one of its points.
struct Rep {
    int tet = 0;
    int local_edge = 0;
    int id = 0;
};

// Mutable form of an encoding used while a move is rewritten. Points keep their ids
// across insertions and deletions, so arcs and annulus markers never need renumbering.
class Draft {
public:
    Draft(const Triangulation& tri, const SurfaceEncoding& enc);

    const Triangulation& tri() const { return *tri_; }
    int weight(int e) const { return static_cast<int>(points_[e].size()); }
    int id(int e, int index) const { return points_.at(e).at(index); }
    std::pair<int, int> locate(int id) const;  // (edge class, index)
    bool alive(int id) const { return locate_map().count(id) > 0; }

    FaceLayout layout(int face) const;
    End end_at(int face, int pos) const;
    int position(int face, const End& end) const;

    // Index into arcs(face) of the arc ending at the given end, or -1.
    int arc_with(int face, const End& end) const;
    std::vector<DraftArc>& arcs(int face) { return arcs_[face]; }
    const std::vector<DraftArc>& arcs(int face) const { return arcs_[face]; }
    void add_arc(int face, const End& a, const End& b) { arcs_[face].push_back({a, b}); }

    std::vector<std::array<Rep, 2>>& annuli() { return annuli_; }
    const std::vector<std::array<Rep, 2>>& annuli() const { return annuli_; }
    Rep rep(int tet, const TetPoint& p) const;

    std::vector<int> insert(int e, int index, int count);
    // Points must no longer carry arcs.
    void erase(const std::set<int>& ids);
    void erase_arcs_touching(const std::set<int>& ids);

    // Throws MoveNotApplicable if an annulus marker was lost or collapsed onto one curve.
    SurfaceEncoding build() const;

private:
    const std::unordered_map<int, std::pair<int, int>>& locate_map() const;
    std::vector<int> weights() const;

    const Triangulation* tri_;
    std::vector<std::vector<int>> points_;
    std::vector<std::vector<DraftArc>> arcs_;
    std::vector<std::array<Rep, 2>> annuli_;
    int next_id_ = 0;
    mutable std::unordered_map<int, std::pair<int, int>> locate_;
    mutable bool locate_valid_ = false;
};

}  // namespace cnsg::detail
