#include "draft.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnsg::detail {

Draft::Draft(const Triangulation& tri, const SurfaceEncoding& enc) : tri_(&tri) {
    points_.resize(tri.num_edges());
    for (int e = 0; e < tri.num_edges(); ++e)
        for (int i = 0; i < enc.weights[e]; ++i) points_[e].push_back(next_id_++);
    arcs_.resize(tri.num_faces());
    for (int f = 0; f < tri.num_faces(); ++f)
        for (int p = 0; p < static_cast<int>(enc.partner[f].size()); ++p)
            if (enc.partner[f][p] > p) arcs_[f].push_back({end_at(f, p), end_at(f, enc.partner[f][p])});
    for (const Annulus& a : enc.annuli) annuli_.push_back({rep(a.tet, a.a), rep(a.tet, a.b)});
}

std::vector<int> Draft::weights() const {
    std::vector<int> w(points_.size());
    for (std::size_t e = 0; e < points_.size(); ++e) w[e] = static_cast<int>(points_[e].size());
    return w;
}

const std::unordered_map<int, std::pair<int, int>>& Draft::locate_map() const {
    if (!locate_valid_) {
        locate_.clear();
        for (int e = 0; e < static_cast<int>(points_.size()); ++e)
            for (int i = 0; i < static_cast<int>(points_[e].size()); ++i) locate_[points_[e][i]] = {e, i};
        locate_valid_ = true;
    }
    return locate_;
}

std::pair<int, int> Draft::locate(int id) const {
    auto it = locate_map().find(id);
    if (it == locate_map().end()) throw std::logic_error("draft: unknown point id");
    return it->second;
}

FaceLayout Draft::layout(int face) const { return face_layout(*tri_, weights(), face); }

End Draft::end_at(int face, int pos) const {
    const FaceClass& fc = tri_->face(face);
    const FaceLayout l = layout(face);
    int s = 2;
    while (s > 0 && pos < l.offset[s]) --s;
    const int j = pos - l.offset[s];
    const int idx = fc.forward[s] ? j : l.count[s] - 1 - j;
    return End{s, points_[fc.edge[s]].at(idx)};
}

int Draft::position(int face, const End& end) const {
    const FaceClass& fc = tri_->face(face);
    const FaceLayout l = layout(face);
    auto [e, idx] = locate(end.id);
    if (e != fc.edge[end.side]) throw std::logic_error("draft: endpoint on the wrong edge");
    const int j = fc.forward[end.side] ? idx : l.count[end.side] - 1 - idx;
    return l.offset[end.side] + j;
}

int Draft::arc_with(int face, const End& end) const {
    for (std::size_t k = 0; k < arcs_[face].size(); ++k)
        if (arcs_[face][k].a == end || arcs_[face][k].b == end) return static_cast<int>(k);
    return -1;
}

Rep Draft::rep(int tet, const TetPoint& p) const {
    const int e = tri_->edge_of(tet, p.edge);
    const int w = static_cast<int>(points_[e].size());
    const int idx = tri_->edge_forward(tet, p.edge) ? p.index : w - 1 - p.index;
    return Rep{tet, p.edge, points_[e].at(idx)};
}

std::vector<int> Draft::insert(int e, int index, int count) {
    std::vector<int> ids;
    for (int k = 0; k < count; ++k) ids.push_back(next_id_++);
    points_.at(e).insert(points_[e].begin() + index, ids.begin(), ids.end());
    locate_valid_ = false;
    return ids;
}

void Draft::erase_arcs_touching(const std::set<int>& ids) {
    for (auto& list : arcs_)
        list.erase(std::remove_if(list.begin(), list.end(),
                                  [&](const DraftArc& a) { return ids.count(a.a.id) || ids.count(a.b.id); }),
                   list.end());
}

void Draft::erase(const std::set<int>& ids) {
    for (const auto& list : arcs_)
        for (const DraftArc& a : list)
            if (ids.count(a.a.id) || ids.count(a.b.id)) throw std::logic_error("draft: erasing a point that carries an arc");
    for (auto& pts : points_)
        pts.erase(std::remove_if(pts.begin(), pts.end(), [&](int id) { return ids.count(id) > 0; }), pts.end());
    locate_valid_ = false;
}

SurfaceEncoding Draft::build() const {
    SurfaceEncoding enc;
    enc.weights = weights();
    enc.partner.resize(arcs_.size());
    for (int f = 0; f < static_cast<int>(arcs_.size()); ++f) {
        auto& pm = enc.partner[f];
        pm.assign(layout(f).size, -1);
        for (const DraftArc& arc : arcs_[f]) {
            const int p = position(f, arc.a);
            const int q = position(f, arc.b);
            if (p == q || pm[p] >= 0 || pm[q] >= 0) throw std::logic_error("draft: overlapping arcs");
            pm[p] = q;
            pm[q] = p;
        }
        if (std::find(pm.begin(), pm.end(), -1) != pm.end()) throw std::logic_error("draft: unmatched point");
    }
    for (const auto& pair : annuli_) {
        Annulus a;
        a.tet = pair[0].tet;
        for (int k = 0; k < 2; ++k) {
            if (!alive(pair[k].id)) throw MoveNotApplicable("annulus boundary would be removed");
            auto [e, idx] = locate(pair[k].id);
            (void)e;
            (k == 0 ? a.a : a.b) = class_to_tet_point(*tri_, enc.weights, pair[k].tet, pair[k].local_edge, idx);
        }
        enc.annuli.push_back(a);
    }
    try {
        normalize_annuli(*tri_, enc);
    } catch (const InvalidInput& e) {
        throw MoveNotApplicable(e.what());
    }
    return enc;
}

}  // namespace cnsg::detail
