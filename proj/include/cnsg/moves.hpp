#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cnsg/surface.hpp"

namespace cnsg {

// Move families as selected for graph edges. V0 and E1 cover both directions; PINCH
// and UNPINCH are inverse to each other.
enum class MoveKind { V0, E1, F2, F2p, PINCH, UNPINCH };
using MoveSet = std::set<MoveKind>;

std::string kind_name(MoveKind k);
MoveKind parse_kind(std::string_view s);
// Comma-separated kind names; empty string gives the empty set.
MoveSet parse_move_set(std::string_view s);
std::string move_set_string(const MoveSet& set);
MoveSet default_move_set();  // V0, E1, F2', PINCH, UNPINCH

enum class MoveType { V0_plus, V0_minus, E1_plus, E1_minus, F2, F2p, pinch, unpinch };

// Text form: TYPE@<v|e|f|t>N[key=value,...]
//   V0+@vV[f,c,a]   V0-@vV[f,c]        vertex bubble at corner c of face f, fused to arc a
//   E1+@eE[i,f,s,a] E1-@eE[i]          points i, i+1 on edge E, rerouting arc a of face f side s
//   F2@fF[a,b,g,k]  F2'@fF[a,b,g,k]    reconnect arcs a<b; copy g gains, k picks the annulus side
//   PINCH@tT[c,s,d] UNPINCH@tT[d,s]    tube curve c to curve d of catalog sphere s
// Arc arguments are lower endpoint positions in the source encoding.
struct Move {
    MoveType type = MoveType::E1_plus;
    int where = 0;
    std::vector<int> args;

    MoveKind kind() const;
    bool operator==(const Move&) const = default;
};

std::string to_text(const Move& m);
Move parse_move(std::string_view text);
std::vector<Move> parse_move_list(std::string_view text);  // whitespace separated

struct CatalogSphere {
    std::string name;
    SurfaceEncoding surface;
    int vertex = -1;  // vertex links are placed innermost at their vertex
};
using SphereCatalog = std::vector<CatalogSphere>;

SphereCatalog default_catalog(const Triangulation& tri);
// Adds a crudely normal connected sphere; throws InvalidInput otherwise.
void add_custom_sphere(const Triangulation& tri, SphereCatalog& catalog, std::string name, SurfaceEncoding sphere);

// Throws MoveNotApplicable naming the failed precondition.
SurfaceEncoding apply(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m, const SphereCatalog& catalog);

// The move taking apply(enc, m) back to enc.
Move inverse(const Triangulation& tri, const SurfaceEncoding& enc, const Move& m, const SphereCatalog& catalog);

// Weight change caused by a move of this type at this location.
int weight_delta(const Triangulation& tri, const Move& m, const SphereCatalog& catalog);

SurfaceEncoding pinch(const Triangulation& tri, const SurfaceEncoding& enc, int tet, const TetPoint& curve,
                      const SphereCatalog& catalog, int sphere, const TetPoint& sphere_curve,
                      int budget = std::numeric_limits<int>::max());

struct Neighbor {
    Move move;
    std::string key;
    SurfaceEncoding result;
};

struct NeighborStats {
    std::int64_t candidates = 0;
    std::int64_t rejected_by_budget = 0;
};

// All applicable moves from move_set whose results are valid and weigh at most budget,
// sorted by result key, then move text.
std::vector<Neighbor> neighbors(const Triangulation& tri, const SurfaceEncoding& enc, int budget,
                                const MoveSet& move_set, const SphereCatalog& catalog,
                                NeighborStats* stats = nullptr);

// Text-only entry point: parses all three documents, applies the move with the default
// catalog and returns the resulting surface text.
std::string apply_text(std::string_view triangulation, std::string_view surface, std::string_view move);

}  // namespace cnsg
