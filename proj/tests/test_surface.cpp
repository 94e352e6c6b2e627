#include <algorithm>
#include <set>

#include "cnsg/surface.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cnsg;

namespace {

Triangulation s3() { return load_triangulation(testing::data("s3_2tet.tri")); }

std::string reason(const Triangulation& tri, const std::string& text) {
    return validate(tri, parse_surface(text)).reason;
}

}  // namespace

TEST_CASE("vertex link certificate") {
    const Triangulation tri = s3();
    const SurfaceEncoding link = load_surface(testing::data("s3_vertex_link.surf"));
    CHECK(link == vertex_link(tri, 0));
    const Validation v = validate(tri, link);
    CHECK(v.kind == Classification::crudely_normal);
    CHECK(classification_name(v.kind) == "crudely_normal");
    const Topology t = topology(tri, link);
    CHECK(weight(link) == 6);
    CHECK(t.points == 6);
    CHECK(t.arcs == 12);
    CHECK(t.disks == 8);
    CHECK(t.annuli == 0);
    CHECK(t.euler == 2);
    CHECK(t.components == 1);
    CHECK(t.genus == 0);
    CHECK(components(tri, link).size() == 1);
    for (int tet = 0; tet < tri.size(); ++tet) CHECK(tet_curves(tri, link.weights, link.partner, tet).curve_count() == 4);
}

TEST_CASE("serialization") {
    const Triangulation tri = s3();
    const SurfaceEncoding link = vertex_link(tri, 0);
    const std::string text = to_text(link);
    CHECK(text == "weights 2 2 2\nface 0: 0-5 1-2 3-4\nface 1: 0-5 1-2 3-4\nface 2: 0-5 1-2 3-4\nface 3: 0-5 1-2 3-4\n");
    CHECK(parse_surface(text) == link);
    CHECK(parse_surface("# c\nweights 2 2 2   \n\nface 3: 3-4 0-5 2-1\nface 0: 0-5 1-2 3-4\n"
                        "face 1: 0-5 1-2 3-4\nface 2: 0-5 1-2 3-4\n") == link);
    const std::string hash = short_hash(canonical_key(link));
    CHECK(hash.size() == 12);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(tet_point_string(parse_tet_point("4.12")) == "4.12");
    CHECK_THROWS_AS(parse_tet_point("6.0"), ParseError);
    CHECK_THROWS_AS(parse_tet_point("4"), ParseError);
}

TEST_CASE("parse diagnostics carry positions") {
    try {
        parse_surface("face 0: 0-1\nweights 1 1 0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("'weights' must come first") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_surface("weights 2 2 2\nface 0: 0-5 1-2\n"), ParseError);
    CHECK_THROWS_AS(parse_surface("weights 2 x 2\n"), ParseError);
    CHECK_THROWS_AS(parse_surface("weights 2 2 2\nblob 1\n"), ParseError);
    CHECK_THROWS_AS(parse_surface(""), ParseError);
}

TEST_CASE("shape and validation failures") {
    const Triangulation tri = s3();
    CHECK_THROWS_WITH_AS(check_shape(tri, parse_surface("weights 2 2 2 0\n")),
                         "surface lists 4 edge classes, triangulation has 3", InvalidInput);
    CHECK(reason(tri, "weights 2 2 2\nface 0: 0-5 1-2 3-4\n").find("shape") == 0);
    CHECK(reason(tri, "weights 2 2 2\nface 0: 0-2 1-3 4-5\nface 1: 0-5 1-2 3-4\nface 2: 0-5 1-2 3-4\nface 3: 0-5 1-2 3-4\n") ==
          "face 0: crossing arcs");
    SurfaceEncoding broken = vertex_link(tri, 0);
    broken.partner[2][0] = 1;
    CHECK(validate(tri, broken).reason == "face 2: not a perfect matching");
    SurfaceEncoding two = vertex_link(tri, 0);
    two.annuli = {{0, {0, 0}, {1, 0}}, {0, {0, 1}, {2, 0}}};
    CHECK(validate(tri, two).reason == "multiple annuli in tet 0");
    SurfaceEncoding single = vertex_link(tri, 0);
    const TetCurves tc = tet_curves(tri, single.weights, single.partner, 0);
    const TetPoint p = tc.point(tc.curves[0][0]);
    const TetPoint q = tc.point(tc.curves[0][1]);
    single.annuli = {{0, p, q}};
    CHECK(validate(tri, single).reason.rfind("annulus on a single curve", 0) == 0);
    CHECK_THROWS_AS(normalize_annuli(tri, single), InvalidInput);
}

TEST_CASE("annulus separation") {
    // search small surfaces for a tetrahedron with a curve pair separated by a third curve
    const Triangulation tri = s3();
    bool found = false;
    for (const SurfaceEncoding& s : enumerate_surfaces(tri, 4)) {
        if (!s.annuli.empty()) continue;
        for (int t = 0; t < tri.size() && !found; ++t) {
            const TetCurves tc = tet_curves(tri, s.weights, s.partner, t);
            for (int a = 0; a < tc.curve_count() && !found; ++a)
                for (int b = a + 1; b < tc.curve_count() && !found; ++b) {
                    if (tc.adjacent(a, b)) continue;
                    SurfaceEncoding bad = s;
                    bad.annuli = {{t, tc.point(tc.least[a]), tc.point(tc.least[b])}};
                    CHECK(validate(tri, bad).reason.rfind("annulus separation", 0) == 0);
                    found = true;
                }
        }
        if (found) break;
    }
    CHECK(found);
}

TEST_CASE("arc systems") {
    CHECK(arc_systems({0, 0, 0}).size() == 1);
    CHECK(arc_systems({2, 0, 0}).size() == 1);
    CHECK(arc_systems({2, 2, 2}).size() == 5);
    CHECK(arc_systems({1, 1, 1}).empty());
    // Catalan numbers for points on a single side
    const int catalan[] = {1, 1, 2, 5, 14, 42};
    for (int k = 0; k <= 5; ++k) CHECK(arc_systems({2 * k, 0, 0}).size() == static_cast<std::size_t>(catalan[k]));
    for (const auto& pm : arc_systems({3, 2, 1})) {
        for (int p = 0; p < 6; ++p) CHECK(pm[pm[p]] == p);
    }
}

TEST_CASE("enumeration counts") {
    const Triangulation tri = s3();
    // values cross-checked against the brute-force oracle in test_oracle
    CHECK(enumerate_surfaces(tri, 0).size() == 1);
    CHECK(enumerate_surfaces(tri, 1).size() == 1);
    CHECK(enumerate_surfaces(tri, 2).size() == 67);
    CHECK(enumerate_surfaces(tri, 3).size() == 67);
}

TEST_CASE("property: enumerated encodings are valid and keyed uniquely") {
    const Triangulation tri = s3();
    const auto all = enumerate_surfaces(tri, 3);
    std::set<std::string> keys;
    for (const SurfaceEncoding& s : all) {
        const Validation v = validate(tri, s);
        REQUIRE(v.valid());
        CHECK((v.kind == Classification::crudely_almost_normal) == !s.annuli.empty());
        CHECK(keys.insert(canonical_key(s)).second);
        SurfaceEncoding back = parse_surface(to_text(s));
        normalize_annuli(tri, back);
        CHECK(back == s);
        const Topology t = topology(tri, s);
        CHECK(t.euler == t.points - t.arcs + t.disks);
        CHECK(t.disks == [&] {
            int curves = 0;
            for (int tet = 0; tet < tri.size(); ++tet) curves += tet_curves(tri, s.weights, s.partner, tet).curve_count();
            return curves - 2 * static_cast<int>(s.annuli.size());
        }());
    }
    CHECK(std::is_sorted(all.begin(), all.end(), [](const auto& a, const auto& b) { return canonical_key(a) < canonical_key(b); }));
}

TEST_CASE("property: index conversions are mutually inverse") {
    const Triangulation tri = s3();
    testing::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> w{rng.below(6), rng.below(6), rng.below(6)};
        for (int f = 0; f < tri.num_faces(); ++f) {
            const FaceLayout l = face_layout(tri, w, f);
            CHECK(l.size == l.count[0] + l.count[1] + l.count[2]);
            for (int s = 0; s < 3; ++s)
                for (int j = 0; j < l.count[s]; ++j) CHECK(side_position(tri, w, f, s, class_index(tri, w, f, s, j)) == j);
        }
        for (int t = 0; t < tri.size(); ++t)
            for (int le = 0; le < 6; ++le)
                for (int i = 0; i < w[tri.edge_of(t, le)]; ++i) CHECK(tet_to_class_index(tri, w, t, class_to_tet_point(tri, w, t, le, i)) == i);
    }
}
