#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "cnsg/triangulation.hpp"

namespace cnsg {

// A point of T on a tetrahedron edge: local edge index and position along it, counted
// from the lower-numbered local vertex.
struct TetPoint {
    int edge = 0;
    int index = 0;
    auto operator<=>(const TetPoint&) const = default;
};

// Two boundary curves of one tetrahedron that bound a common annulus piece. Each curve
// is named by its least point.
struct Annulus {
    int tet = 0;
    TetPoint a;
    TetPoint b;
    auto operator<=>(const Annulus&) const = default;
};

// Combinatorial normal-isotopy class of a surface. Points on edge class e are numbered
// 0..weights[e]-1 along the class orientation. partner[f] is a perfect matching on the
// boundary positions of face class f (side 0, then side 1, then side 2, each in side
// direction). Every curve not named in an annulus bounds a disk piece.
struct SurfaceEncoding {
    std::vector<int> weights;
    std::vector<std::vector<int>> partner;
    std::vector<Annulus> annuli;
    bool operator==(const SurfaceEncoding&) const = default;
};

SurfaceEncoding empty_surface(const Triangulation& tri);
SurfaceEncoding vertex_link(const Triangulation& tri, int vertex);

// Throws InvalidInput when the encoding does not fit the triangulation's shape.
void check_shape(const Triangulation& tri, const SurfaceEncoding& enc);

// Face positions.
struct FaceLayout {
    std::array<int, 3> count{};   // points on each side
    std::array<int, 3> offset{};  // first position of each side
    int size = 0;
};
FaceLayout face_layout(const Triangulation& tri, const std::vector<int>& weights, int face);
// Class point index (along the edge class) of side position j on side s.
int class_index(const Triangulation& tri, const std::vector<int>& weights, int face, int side, int j);
// Side position of class point index i on side s.
int side_position(const Triangulation& tri, const std::vector<int>& weights, int face, int side, int i);

int tet_to_class_index(const Triangulation& tri, const std::vector<int>& weights, int tet, const TetPoint& p);
TetPoint class_to_tet_point(const Triangulation& tri, const std::vector<int>& weights, int tet, int local_edge, int index);

// Regions of a triangle cut by a non-crossing matching: region_of_gap[g] is the region
// containing the boundary stretch between positions g and g+1 (cyclically).
std::vector<int> face_regions(const std::vector<int>& partner, int* region_count = nullptr);

// Boundary curves of T on the sphere bounding one tetrahedron.
struct TetCurves {
    std::array<int, 7> base{};            // point id of TetPoint{e, q} is base[e] + q
    std::vector<int> curve_of;            // per point id
    std::vector<std::vector<int>> curves; // point ids in traversal order
    std::vector<int> least;               // least point id per curve
    std::vector<std::array<int, 2>> sides; // complementary regions on either side of each curve

    int point_id(const TetPoint& p) const { return base[p.edge] + p.index; }
    TetPoint point(int id) const;
    int curve_at(const TetPoint& p) const { return curve_of.at(point_id(p)); }
    int curve_count() const { return static_cast<int>(curves.size()); }
    // No third curve separates the two on the sphere.
    bool adjacent(int c1, int c2) const;
};

// partners[lf] overrides the matching seen on local face lf when non-null.
TetCurves tet_curves(const Triangulation& tri, const std::vector<int>& weights,
                     const std::vector<std::vector<int>>& partner, int tet,
                     const std::array<const std::vector<int>*, 4>& overrides = {});

enum class Classification { crudely_normal, crudely_almost_normal, invalid };

struct Validation {
    Classification kind = Classification::invalid;
    std::string reason;
    bool valid() const { return kind != Classification::invalid; }
};

Validation validate(const Triangulation& tri, const SurfaceEncoding& enc);
std::string classification_name(Classification c);

int weight(const SurfaceEncoding& enc);
int arc_count(const SurfaceEncoding& enc);

struct Topology {
    int points = 0;
    int arcs = 0;
    int disks = 0;
    int annuli = 0;
    int euler = 0;
    int components = 0;
    int genus = 0;
    std::vector<int> component_euler;
};

// Throws InvalidInput if a component has odd Euler characteristic.
Topology topology(const Triangulation& tri, const SurfaceEncoding& enc);
int euler_characteristic(const Triangulation& tri, const SurfaceEncoding& enc);
int genus(const Triangulation& tri, const SurfaceEncoding& enc);

// Points of the surface grouped into connected components, as (edge class, index).
std::vector<std::vector<std::pair<int, int>>> components(const Triangulation& tri, const SurfaceEncoding& enc);

// Rewrites each annulus to name its curves by their least points and sorts the list.
// Throws InvalidInput if an annulus point is missing or both points lie on one curve.
void normalize_annuli(const Triangulation& tri, SurfaceEncoding& enc);

std::string canonical_key(const SurfaceEncoding& enc);
std::string short_hash(const std::string& key);

std::string to_text(const SurfaceEncoding& enc);
SurfaceEncoding parse_surface(std::string_view text);
SurfaceEncoding load_surface(const std::string& path);
std::string tet_point_string(const TetPoint& p);
TetPoint parse_tet_point(std::string_view s);

// All non-crossing perfect matchings of the triangle boundary with the given side counts,
// in lexicographic order of partner arrays.
std::vector<std::vector<int>> arc_systems(const std::array<int, 3>& per_side);

// Every valid encoding of weight at most max_weight, sorted by canonical key.
std::vector<SurfaceEncoding> enumerate_surfaces(const Triangulation& tri, int max_weight);

}  // namespace cnsg
