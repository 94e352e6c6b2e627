#include <algorithm>
#include <numeric>

#include "cnsg/triangulation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cnsg;

namespace {

const char* kS3 = "tet 0: 0/1023 0/1023 1/1302 1/2031\ntet 1: 0/2031 0/1302 1/2031 1/1302\n";

std::string error_of(const std::string& text) {
    try {
        parse_triangulation(text);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

// Renumbers tetrahedra by sigma and relabels the vertices of tet t by pi[t].
Triangulation relabel(const Triangulation& tri, const std::vector<int>& sigma, const std::vector<Perm>& pi) {
    std::vector<std::array<Gluing, 4>> g(tri.size());
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& old = tri.gluing(t, f);
            g[sigma[t]][pi[t][f]] = Gluing{sigma[old.tet], compose(pi[old.tet], compose(old.perm, inverse(pi[t])))};
        }
    return Triangulation(g);
}

std::vector<int> sorted_degrees(const Triangulation& tri) {
    std::vector<int> d;
    for (int e = 0; e < tri.num_edges(); ++e) d.push_back(tri.edge_degree(e));
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace

TEST_CASE("reference S3 table") {
    const Triangulation tri = load_triangulation(testing::data("s3_2tet.tri"));
    CHECK(tri.size() == 2);
    CHECK(tri.num_vertices() == 1);
    CHECK(tri.num_edges() == 3);
    CHECK(tri.num_faces() == 4);
    CHECK(tri.euler_characteristic() == 0);
    CHECK(tri.edge_degree(0) == 4);
    CHECK(tri.edge_degree(1) == 7);
    CHECK(tri.edge_degree(2) == 1);
    CHECK(tri.vertex_degree(0) == 6);
    CHECK(parse_triangulation(tri.to_text()).to_text() == tri.to_text());
    CHECK(parse_triangulation(kS3).to_text() == tri.to_text());
}

TEST_CASE("class bookkeeping is consistent") {
    const Triangulation tri = parse_triangulation(kS3);
    int corners = 0;
    for (int e = 0; e < tri.num_edges(); ++e) {
        corners += tri.edge_degree(e);
        for (auto [t, le] : tri.edge(e).corners) CHECK(tri.edge_of(t, le) == e);
    }
    CHECK(corners == 6 * tri.size());
    int ends = 0;
    for (int v = 0; v < tri.num_vertices(); ++v) ends += tri.vertex_degree(v);
    CHECK(ends == 2 * tri.num_edges());
    for (int f = 0; f < tri.num_faces(); ++f) {
        const FaceClass& fc = tri.face(f);
        const Gluing& g = tri.gluing(fc.tet[0], fc.face[0]);
        CHECK(g.tet == fc.tet[1]);
        CHECK(g.perm[fc.face[0]] == fc.face[1]);
        for (int k = 0; k < 3; ++k) {
            CHECK(fc.corner[1][k] == g.perm[fc.corner[0][k]]);
            CHECK(fc.edge[k] == tri.edge_of(fc.tet[0], local_edge(fc.corner[0][k], fc.corner[0][(k + 1) % 3])));
        }
        CHECK(tri.face_of(fc.tet[0], fc.face[0]) == f);
        CHECK(tri.face_copy(fc.tet[1], fc.face[1]) == 1);
    }
    CHECK_THROWS_AS(tri.edge(3), InvalidInput);
    CHECK_THROWS_AS(tri.face(-1), InvalidInput);
}

TEST_CASE("permutation helpers") {
    const Perm p{1, 0, 2, 3};
    const Perm q{1, 2, 3, 0};
    CHECK(parity(p) == -1);
    CHECK(parity(q) == -1);
    CHECK(parity(compose(p, q)) == 1);
    CHECK(compose(q, inverse(q)) == Perm{0, 1, 2, 3});
    CHECK(perm_string(q) == "1230");
    CHECK(local_edge(3, 1) == 4);
}

TEST_CASE("barycentric subdivision") {
    const Triangulation tri = parse_triangulation(kS3);
    const Triangulation sub = barycentric_subdivide(tri);
    CHECK(sub.size() == 48);
    CHECK(sub.euler_characteristic() == 0);
    CHECK(sub.num_vertices() == 10);
    // the original vertex sees every flag that starts at it
    CHECK(sub.vertex_degree(sub.vertex_of(0, 0)) == 26);
    const Triangulation sub2 = barycentric_subdivide(sub);
    CHECK(sub2.size() == 1152);
    CHECK(sub2.euler_characteristic() == 0);
}

TEST_CASE("table diagnostics") {
    CHECK(error_of("") == "no tetrahedra");
    CHECK(error_of("# nothing\n") == "no tetrahedra");
    CHECK(error_of("tet 0: 0/1023 0/1023 1/1302 -\ntet 1: 0/2031 0/1302 1/2031 1/1302\n").find("unglued face") != std::string::npos);
    CHECK(error_of("tet 0: 0/0123 0/1023 1/1302 1/2031\ntet 1: 0/2031 0/1302 1/2031 1/1302\n")
              .find("non-involutive or fixed-point gluing") != std::string::npos);
    // one tetrahedron folded onto itself, the second pair by an even permutation
    CHECK(error_of("tet 0: 0/1023 0/1023 0/1032 0/1032\n").find("non-orientable") != std::string::npos);

    try {
        parse_triangulation("tet 0: 0/1023 0/1023 1/1302 1/2031\ntet 1: 0/2031 0/1302 1/2031 1/13x2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 33);
    }
    CHECK_THROWS_AS(parse_triangulation("tetra 0: 0/1023 0/1023 1/1302 1/2031\n"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("tet 0 0/1023 0/1023 1/1302 1/2031\n"), ParseError);
    CHECK_THROWS_AS(parse_triangulation("tet 0: 0/1023 0/1023 1/1302\n"), ParseError);
    CHECK_THROWS_WITH_AS(parse_triangulation("tet 1: 1/1023 1/1023 1/0132 1/0132\n"), "tet 0 missing from table",
                         InvalidInput);
}

TEST_CASE("property: relabelling preserves the combinatorics") {
    const Triangulation tri = parse_triangulation(kS3);
    const Triangulation sub = barycentric_subdivide(tri);
    testing::Rng rng(7);
    for (const Triangulation* base : {&tri, &sub}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<int> sigma(base->size());
            std::iota(sigma.begin(), sigma.end(), 0);
            for (int i = base->size() - 1; i > 0; --i) std::swap(sigma[i], sigma[rng.below(i + 1)]);
            std::vector<Perm> pi(base->size());
            for (Perm& p : pi) {
                p = {0, 1, 2, 3};
                for (int i = 3; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
            }
            const Triangulation r = relabel(*base, sigma, pi);
            CHECK(r.num_vertices() == base->num_vertices());
            CHECK(r.num_edges() == base->num_edges());
            CHECK(r.num_faces() == base->num_faces());
            CHECK(r.euler_characteristic() == 0);
            CHECK(sorted_degrees(r) == sorted_degrees(*base));
            CHECK(parse_triangulation(r.to_text()).to_text() == r.to_text());
        }
    }
}
