#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cnsg_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cnsg::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string line_with(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (line.rfind(prefix, 0) == 0) return line;
    return "";
}

const std::string kTri = testing::data("s3_2tet.tri");
const std::string kSeed = testing::data("s3_vertex_link.surf");

}  // namespace

TEST_CASE("validate") {
    const Result r = cnsg_run({"validate", kTri, kSeed});
    CHECK(r.code == 0);
    CHECK(r.out.find("crudely_normal, weight 6, χ 2, genus 0\n") != std::string::npos);
    CHECK(r.out.find("6 points, 12 arcs, 8 disks") != std::string::npos);
    CHECK(cnsg_run({"validate", kTri}).out.find("edge degrees: 4 7 1") != std::string::npos);

    testing::ScratchDir dir;
    testing::spit(dir / "bad.tri", "tet 0: 0/1023 0/10x3 1/1302 1/2031\n");
    const Result bad = cnsg_run({"validate", dir / "bad.tri"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("bad.tri: line 1, column") != std::string::npos);

    testing::spit(dir / "wide.surf", "weights 0 0 0 2\n");
    const Result wide = cnsg_run({"validate", kTri, dir / "wide.surf"});
    CHECK(wide.code == 3);
    CHECK(wide.err.find("4 edge classes") != std::string::npos);

    testing::spit(dir / "crossed.surf", "weights 2 2 2\nface 0: 0-2 1-3 4-5\nface 1: 0-5 1-2 3-4\nface 2: 0-5 1-2 3-4\nface 3: 0-5 1-2 3-4\n");
    CHECK(cnsg_run({"validate", kTri, dir / "crossed.surf"}).code == 3);
    CHECK(cnsg_run({"validate", dir / "missing.tri"}).code == 3);
}

TEST_CASE("bounds") {
    const Result r = cnsg_run({"bounds", testing::data("bounds_genus2.cfg")});
    CHECK(r.code == 0);
    CHECK(line_with(r.out, "W = ") == "W = 27");
    CHECK(line_with(r.out, "δ = ") == "δ = 0.99");
    const Result j = cnsg_run({"bounds", testing::data("bounds_genus2.cfg"), "--json"});
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["W"] == 27);
    CHECK(doc["C"].get<double>() > 12.566);

    testing::ScratchDir dir;
    testing::spit(dir / "bad.cfg", "K = 1\n");
    CHECK(cnsg_run({"bounds", dir / "bad.cfg"}).code == 3);
    testing::spit(dir / "junk.cfg", "K == 1\n");
    CHECK(cnsg_run({"bounds", dir / "junk.cfg"}).code == 2);
}

TEST_CASE("graph") {
    testing::ScratchDir dir;
    const Result empty = cnsg_run({"graph", kTri, kSeed, "--budget", "6", "--moves", ""});
    CHECK(empty.code == 0);
    CHECK(line_with(empty.out, "vertices") == "vertices 1, edges 0, rank 0, levels 1");

    const std::vector<std::string> base{"graph", kTri, kSeed, "-W", "8", "--moves", "E1,F2"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return cnsg_run(args);
    };
    const Result a = with({"--workers", "1", "--json", dir / "a.json", "--dot", dir / "a.dot", "--manifest", dir / "a.manifest"});
    const Result b = with({"--workers", "8", "--json", dir / "b.json", "--manifest", dir / "b.manifest"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(line_with(a.out, "digest") == line_with(b.out, "digest"));
    CHECK(testing::slurp(dir / "a.json") == testing::slurp(dir / "b.json"));
    CHECK(line_with(a.out, "vertices") == "vertices 125, edges 168, rank 44, levels 3");

    const auto ma = nlohmann::json::parse(testing::slurp(dir / "a.manifest"));
    const auto mb = nlohmann::json::parse(testing::slurp(dir / "b.manifest"));
    CHECK(ma["result"] == mb["result"]);
    CHECK(ma["parameters"]["workers"] == 1);
    CHECK(mb["parameters"]["workers"] == 8);
    CHECK(ma["parameters"]["W"] == 8);
    CHECK(ma["parameters"]["move_set"] == "E1,F2");
    CHECK(ma["inputs"]["triangulation"]["sha256"].get<std::string>().size() == 64);
    CHECK(ma["result"]["json_sha256"] == line_with(a.out, "digest").substr(7));
    CHECK(testing::slurp(dir / "a.dot").rfind("graph movegraph", 0) == 0);

    const Result partial = with({"--max-vertices", "10", "--json", dir / "p.json"});
    CHECK(partial.code == 1);
    CHECK(line_with(partial.out, "status") == "status PARTIAL");
    CHECK(nlohmann::json::parse(testing::slurp(dir / "p.json"))["status"] == "PARTIAL");

    const Result from_bounds = cnsg_run({"graph", kTri, kSeed, "--bounds", testing::data("bounds_genus2.cfg"), "--moves", ""});
    CHECK(from_bounds.code == 0);
    CHECK(cnsg_run({"graph", kTri, kSeed, "--moves", "E1"}).code == 3);
    CHECK(cnsg_run({"graph", kTri, kSeed, "-W", "8", "--moves", "E7"}).code == 2);
    CHECK(cnsg_run({"graph", kTri, kSeed, "-W", "4"}).code == 3);
}

TEST_CASE("generators and replay") {
    testing::ScratchDir dir;
    const Result g = cnsg_run({"generators", kTri, kSeed, "-W", "8", "--moves", "E1,F2", "--loops", dir / "loops.txt"});
    CHECK(g.code == 0);
    CHECK(line_with(g.out, "generators") == "generators 44");
    const Result ok = cnsg_run({"replay", kTri, kSeed, dir / "loops.txt"});
    CHECK(ok.code == 0);
    CHECK(ok.out.substr(ok.out.size() - 3) == "ok\n");

    std::istringstream in(testing::slurp(dir / "loops.txt"));
    std::string first;
    std::getline(in, first);
    testing::spit(dir / "cut.txt", first.substr(0, first.rfind(' ')) + "\n");
    const Result cut = cnsg_run({"replay", kTri, kSeed, dir / "cut.txt"});
    CHECK(cut.code == 3);
    CHECK(cut.out.find("fail") != std::string::npos);

    testing::spit(dir / "empty.txt", "# nothing to do\n");
    CHECK(cnsg_run({"replay", kTri, kSeed, dir / "empty.txt"}).code == 0);
    testing::spit(dir / "junk.txt", "E1+@e0\n");
    CHECK(cnsg_run({"replay", kTri, kSeed, dir / "junk.txt"}).code == 2);
}

TEST_CASE("usage") {
    CHECK(cnsg_run({"--help"}).code == 0);
    CHECK(cnsg_run({}).code == 2);
    CHECK(cnsg_run({"frobnicate"}).code == 2);
    CHECK(cnsg_run({"--version"}).out.find("0.1.0") != std::string::npos);
    const Result o = cnsg_run({"oracle", "matchings", "2", "2", "2"});
    CHECK(o.code == 0);
    CHECK(o.out.rfind("5\n", 0) == 0);
    CHECK(cnsg_run({"--help"}).out.find("oracle") == std::string::npos);
}
