#include <map>

#include "cnsg/moves.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cnsg;

namespace {

struct Fixture {
    Triangulation tri = load_triangulation(testing::data("s3_2tet.tri"));
    SurfaceEncoding link = load_surface(testing::data("s3_vertex_link.surf"));
    SphereCatalog catalog = default_catalog(tri);
};

int expected_delta(const Move& m, const Triangulation& tri, const SphereCatalog& cat) {
    switch (m.type) {
        case MoveType::V0_plus: return tri.vertex_degree(m.where);
        case MoveType::V0_minus: return -tri.vertex_degree(m.where);
        case MoveType::E1_plus: return 2;
        case MoveType::E1_minus: return -2;
        case MoveType::F2:
        case MoveType::F2p: return 0;
        case MoveType::pinch: return weight(cat.at(m.args[2]).surface);
        case MoveType::unpinch: return -weight(cat.at(m.args[1]).surface);
    }
    return 0;
}

// Inverse round trip, weight table and topology for one move.
void check_move(const Fixture& fx, const SurfaceEncoding& from, const Move& m) {
    INFO(to_text(m));
    const SurfaceEncoding to = apply(fx.tri, from, m, fx.catalog);
    const Move back = inverse(fx.tri, from, m, fx.catalog);
    CHECK(canonical_key(apply(fx.tri, to, back, fx.catalog)) == canonical_key(from));
    CHECK(weight(to) - weight(from) == weight_delta(fx.tri, m, fx.catalog));
    CHECK(weight_delta(fx.tri, m, fx.catalog) == expected_delta(m, fx.tri, fx.catalog));
    const Topology a = topology(fx.tri, from);
    const Topology b = topology(fx.tri, to);
    CHECK(a.euler == b.euler);
    CHECK(a.components == b.components);
    CHECK(a.genus == b.genus);
    CHECK(validate(fx.tri, to).valid());
}

}  // namespace

TEST_CASE("move text") {
    for (const char* text : {"V0+@v0[f=1,c=2,a=3]", "V0-@v0[f=1,c=2]", "E1+@e2[i=0,f=3,s=1,a=4]", "E1-@e1[i=2]",
                             "F2@f0[a=1,b=4,g=0,k=1]", "F2'@f3[a=0,b=2,g=1,k=0]", "PINCH@t1[c=4.0,s=0,d=5.1]",
                             "UNPINCH@t0[d=1,s=0]"}) {
        CHECK(to_text(parse_move(text)) == text);
    }
    CHECK(parse_move("E1-@e1[i=2]").kind() == MoveKind::E1);
    CHECK(parse_move("UNPINCH@t0[d=1,s=0]").kind() == MoveKind::UNPINCH);
    CHECK_THROWS_AS(parse_move("E1-@v1[i=2]"), ParseError);
    CHECK_THROWS_AS(parse_move("E1-@e1[j=2]"), ParseError);
    CHECK_THROWS_AS(parse_move("E3@e1[i=2]"), ParseError);
    CHECK_THROWS_AS(parse_move("E1-@e1[i=2"), ParseError);
    CHECK(parse_move_list("  E1-@e1[i=2]\tV0-@v0[f=1,c=2] ").size() == 2);
    CHECK(parse_move_list("").empty());
}

TEST_CASE("move sets") {
    CHECK(move_set_string(default_move_set()) == "V0,E1,F2',PINCH,UNPINCH");
    CHECK(parse_move_set("F2', E1") == MoveSet{MoveKind::E1, MoveKind::F2p});
    CHECK(parse_move_set("").empty());
    CHECK(parse_kind("F2") == MoveKind::F2);
    CHECK_THROWS(parse_move_set("E1,X9"));
}

TEST_CASE("neighbours of the vertex link") {
    Fixture fx;
    // regression pins; the E1 count is tied to the oracle closure (57 vertices at W = 8)
    const std::map<MoveKind, std::pair<int, int>> expected{{MoveKind::E1, {56, 111}}, {MoveKind::V0, {10, 48}},
                                                           {MoveKind::F2p, {0, 48}},  {MoveKind::F2, {0, 48}},
                                                           {MoveKind::PINCH, {8, 32}}};
    for (auto [kind, counts] : expected) {
        NeighborStats st;
        const auto ns = neighbors(fx.tri, fx.link, 14, {kind}, fx.catalog, &st);
        INFO(kind_name(kind));
        CHECK(static_cast<int>(ns.size()) == counts.first);
        CHECK(st.candidates == counts.second);
        for (const Neighbor& n : ns) {
            CHECK(n.move.kind() == kind);
            CHECK(n.key == canonical_key(n.result));
            check_move(fx, fx.link, n.move);
        }
        for (std::size_t k = 1; k < ns.size(); ++k)
            CHECK(std::make_pair(ns[k - 1].key, to_text(ns[k - 1].move)) < std::make_pair(ns[k].key, to_text(ns[k].move)));
    }
    NeighborStats st;
    CHECK(neighbors(fx.tri, fx.link, 7, {MoveKind::E1}, fx.catalog, &st).empty());
    CHECK(st.rejected_by_budget == 56);
    CHECK(neighbors(fx.tri, fx.link, 14, {}, fx.catalog).empty());
}

TEST_CASE("inapplicable moves name the failed precondition") {
    Fixture fx;
    auto why = [&](const std::string& text) {
        try {
            apply(fx.tri, fx.link, parse_move(text), fx.catalog);
        } catch (const MoveNotApplicable& e) {
            return std::string(e.what());
        }
        return std::string("applied");
    };
    CHECK(why("E1-@e0[i=0]").find("returning arcs") != std::string::npos);
    CHECK(why("E1-@e0[i=1]") == "edge 0 has no points 1, 2");
    CHECK(why("E1+@e0[i=9,f=1,s=0,a=0]") == "insertion index out of range");
    CHECK(why("F2@f0[a=3,b=1,g=0,k=0]") == "arguments must satisfy a < b");
    CHECK(why("UNPINCH@t0[d=0,s=0]") == "tet 0 holds no annulus");
    CHECK(why("V0-@v0[f=0,c=0]").find("is not fused") != std::string::npos);
    CHECK(why("E1-@e7[i=0]").find("edge class") != std::string::npos);
}

TEST_CASE("pinch preconditions") {
    Fixture fx;
    const SphereCatalog& cat = fx.catalog;
    REQUIRE(cat.size() == 1);
    CHECK(cat[0].name == "link0");
    const TetCurves mine = tet_curves(fx.tri, fx.link.weights, fx.link.partner, 0);
    const TetCurves theirs = tet_curves(fx.tri, cat[0].surface.weights, cat[0].surface.partner, 0);
    const TetPoint c = mine.point(mine.least[0]);
    const TetPoint d = theirs.point(theirs.least[0]);
    CHECK_THROWS_WITH_AS(pinch(fx.tri, fx.link, 0, c, cat, 0, d, 11), "budget exceeded", MoveNotApplicable);
    const SurfaceEncoding once = pinch(fx.tri, fx.link, 0, c, cat, 0, d, 12);
    CHECK(weight(once) == 12);
    CHECK(once.annuli.size() == 1);
    CHECK(topology(fx.tri, once).genus == 0);
    CHECK(topology(fx.tri, once).components == 1);
    const TetCurves again = tet_curves(fx.tri, once.weights, once.partner, 0);
    CHECK_THROWS_WITH_AS(pinch(fx.tri, once, 0, again.point(again.least[0]), cat, 0, d), "annulus slot occupied",
                         MoveNotApplicable);
}

TEST_CASE("custom catalog spheres") {
    Fixture fx;
    SphereCatalog cat = fx.catalog;
    add_custom_sphere(fx.tri, cat, "again", vertex_link(fx.tri, 0));
    CHECK(cat.size() == 2);
    CHECK_THROWS_AS(add_custom_sphere(fx.tri, cat, "empty", empty_surface(fx.tri)), InvalidInput);
    SurfaceEncoding two = vertex_link(fx.tri, 0);
    for (int& w : two.weights) w *= 2;
    CHECK_THROWS_AS(add_custom_sphere(fx.tri, cat, "bad", two), InvalidInput);
}

TEST_CASE("text entry point") {
    Fixture fx;
    const std::string tri_text = testing::slurp(testing::data("s3_2tet.tri"));
    const std::string out = apply_text(tri_text, to_text(fx.link), "E1+@e0[i=0,f=1,s=0,a=0]");
    CHECK(out == to_text(apply(fx.tri, fx.link, parse_move("E1+@e0[i=0,f=1,s=0,a=0]"), fx.catalog)));
    CHECK_THROWS_AS(apply_text(tri_text, to_text(fx.link), "E1-@e0[i=0]"), MoveNotApplicable);
}

TEST_CASE("property: random walks keep the move algebra") {
    Fixture fx;
    const MoveSet all{MoveKind::V0, MoveKind::E1, MoveKind::F2, MoveKind::F2p, MoveKind::PINCH, MoveKind::UNPINCH};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        testing::Rng rng(seed);
        SurfaceEncoding cur = fx.link;
        for (int step = 0; step < 12; ++step) {
            const auto ns = neighbors(fx.tri, cur, 12, all, fx.catalog);
            REQUIRE(!ns.empty());
            const Neighbor& pick = ns[rng.below(static_cast<int>(ns.size()))];
            check_move(fx, cur, pick.move);
            cur = pick.result;
        }
    }
}
