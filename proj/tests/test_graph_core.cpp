// Copyright 2026 The flatwall Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <sstream>

#include "doctest.h"
#include "flatwall/linkage.hpp"
#include "flatwall/minor_model.hpp"
#include "oracles.hpp"

using namespace fw;

namespace {
Vertex gv(int i, int j, int r) { return (i - 1) * r + (j - 1); }
}  // namespace

TEST_CASE("graph text format round trip and errors") {
    std::istringstream in("# comment\np 4 3\n\ne 0 1\ne 1 2 # trailing\ne 2 3\n");
    Graph g = read_graph(in);
    CHECK(g.n() == 4);
    CHECK(g.m() == 3);
    std::ostringstream out;
    write_graph(out, g);
    CHECK(out.str() == "p 4 3\ne 0 1\ne 1 2\ne 2 3\n");

    std::istringstream loop("p 2 1\ne 1 1\n");
    CHECK_THROWS_AS(read_graph(loop), StructuralError);
    std::istringstream par("p 2 2\ne 0 1\ne 1 0\n");
    CHECK_THROWS_AS(read_graph(par), StructuralError);
    std::istringstream range("p 2 1\ne 0 2\n");
    CHECK_THROWS_AS(read_graph(range), StructuralError);
}

TEST_CASE("validate_minor_model") {
    Graph tri = complete_graph(3);
    CHECK(validate_minor_model(tri, identity_model(tri)).ok());

    Graph p3 = path_graph(3);
    MinorModel m;
    m.pattern = tri;
    m.branch_sets = {{0}, {1}, {2}};
    fill_witnesses(p3, m);
    auto rep = validate_minor_model(p3, m);
    CHECK(rep.kind == ValidationReport::Kind::Semantic);
    CHECK(rep.clause.find("missing witness") != std::string::npos);

    // L-shaped sets in the 4x4 grid, pairwise touching
    Graph grid = grid_graph(4, 4);
    MinorModel k3;
    k3.pattern = tri;
    k3.branch_sets = {{gv(1, 1, 4), gv(1, 2, 4), gv(2, 1, 4)},
                      {gv(1, 3, 4), gv(1, 4, 4), gv(2, 4, 4)},
                      {gv(2, 2, 4), gv(2, 3, 4), gv(3, 2, 4)}};
    fill_witnesses(grid, k3);
    CHECK(validate_minor_model(grid, k3).ok());

    MinorModel bad = k3;
    bad.branch_sets[0].push_back(99);
    CHECK(validate_minor_model(grid, bad).kind == ValidationReport::Kind::Structural);
    bad = k3;
    bad.branch_sets[1].push_back(gv(1, 1, 4));
    CHECK(validate_minor_model(grid, bad).kind == ValidationReport::Kind::Semantic);
    bad = k3;
    bad.branch_sets[2] = {gv(2, 2, 4), gv(4, 4, 4)};
    CHECK(validate_minor_model(grid, bad).clause.find("not connected") != std::string::npos);
}

TEST_CASE("embedding_to_model") {
    Graph k2 = complete_graph(2);
    Graph host = path_graph(2);
    ValidEmbedding e{k2, {{0}, {1}}, {{{0, 1}, {0, 1}}}};
    MinorModel m = embedding_to_model(host, e);
    CHECK(m.branch_sets == std::vector<VertexSet>{{0}, {1}});
    CHECK(validate_minor_model(host, m).ok());

    Graph c6 = cycle_graph(6);
    ValidEmbedding tri{complete_graph(3), {{0}, {2}, {4}}, {{{0, 1}, {0, 1, 2}}, {{1, 2}, {2, 3, 4}}, {{0, 2}, {4, 5, 0}}}};
    MinorModel mt = embedding_to_model(c6, tri);
    CHECK(validate_minor_model(c6, mt).ok());
    // interior vertex 5 of the (0,2) image goes to pattern vertex 0
    CHECK(mt.branch_sets[0] == VertexSet{0, 1, 5});
    CHECK(mt.branch_sets[1] == VertexSet{2, 3});
    CHECK(mt.branch_sets[2] == VertexSet{4});

    ValidEmbedding overlap{k2, {{0, 1}, {1}}, {{{0, 1}, {0, 1}}}};
    CHECK_THROWS_AS(embedding_to_model(host, overlap), PreconditionError);
}

TEST_CASE("compose_models identity and rejection") {
    Graph grid = grid_graph(4, 4);
    MinorModel k3;
    k3.pattern = complete_graph(3);
    k3.branch_sets = {{0, 1, 4}, {2, 3, 7}, {5, 6, 9}};
    fill_witnesses(grid, k3);
    REQUIRE(validate_minor_model(grid, k3).ok());
    MinorModel same = compose_models(k3, identity_model(k3.pattern));
    CHECK(same.branch_sets == k3.branch_sets);
    CHECK(validate_minor_model(grid, same).ok());

    MinorModel bad_inner = identity_model(k3.pattern);
    bad_inner.branch_sets[0] = {1};
    CHECK_THROWS(compose_models(k3, bad_inner));
    MinorModel wrong = identity_model(complete_graph(5));
    CHECK_THROWS_AS(compose_models(k3, wrong), StructuralError);
}

TEST_CASE("vertex_disjoint_linkage examples") {
    const int h = 4, r = 6;
    Graph g = grid_graph(h, r);
    VertexSet first, last;
    for (int i = 1; i <= h; ++i) {
        first.push_back(gv(i, 1, r));
        last.push_back(gv(i, r, r));
    }
    auto res = vertex_disjoint_linkage(g, first, last, h);
    REQUIRE(res.linked);
    CHECK(verify_linkage(g, res.linkage, h));
    for (int i = 1; i <= h; ++i) {
        Path row;
        for (int j = 1; j <= r; ++j) row.push_back(gv(i, j, r));
        CHECK(std::find(res.linkage.paths.begin(), res.linkage.paths.end(), row) != res.linkage.paths.end());
    }

    Graph star(5);
    for (int v = 1; v < 5; ++v) star.add_edge(0, v);
    auto cut = vertex_disjoint_linkage(star, {1, 2}, {3, 4}, 2);
    CHECK_FALSE(cut.linked);
    CHECK(cut.cut == VertexSet{0});
    CHECK(verify_separator(star, {1, 2}, {3, 4}, cut.cut));

    Graph g3 = grid_graph(3, 3);
    VertexSet s{gv(1, 1, 3), gv(3, 1, 3)}, t{gv(1, 3, 3), gv(2, 3, 3)};
    CHECK(oracle::linkage_exists(g3, s, t, 2));
    auto r3 = vertex_disjoint_linkage(g3, s, t, 2);
    CHECK(r3.linked);
    CHECK(verify_linkage(g3, r3.linkage, 2));

    // source that is also a target is a zero-length path
    auto r0 = vertex_disjoint_linkage(g3, {4}, {4}, 1);
    REQUIRE(r0.linked);
    CHECK(r0.linkage.paths[0] == Path{4});
}

TEST_CASE("linkage xor cut agrees with exhaustive search") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 150; ++trial) {
        int n = 5 + static_cast<int>(rng() % 6);
        Graph g = oracle::random_graph(n, 0.35, rng);
        VertexSet s, t;
        for (Vertex v = 0; v < n; ++v) {
            int c = static_cast<int>(rng() % 4);
            if (c == 0) s.push_back(v);
            else if (c == 1) t.push_back(v);
        }
        if (s.empty() || t.empty()) continue;
        int k = 1 + static_cast<int>(rng() % 3);
        auto res = vertex_disjoint_linkage(g, s, t, k);
        CHECK(res.linked == oracle::linkage_exists(g, s, t, k));
        if (res.linked) {
            CHECK(verify_linkage(g, res.linkage, k));
        } else {
            CHECK(static_cast<int>(res.cut.size()) < k);
            CHECK(verify_separator(g, s, t, res.cut));
        }
    }
}

TEST_CASE("reroute_linkage") {
    const int n = 4;
    Graph g = grid_graph(n, n);
    VertexSet x, y;
    for (int i = 1; i <= n; ++i) {
        x.push_back(gv(i, 1, n));
        y.push_back(gv(i, n, n));
    }
    auto full = vertex_disjoint_linkage(g, x, y, n).linkage;
    VertexSet x_sub{x[0], x[1], x[2]};
    LinkageOptions opt;
    opt.avoid_terminals_inside = true;
    auto partial = vertex_disjoint_linkage(g, x_sub, y, n - 1, opt).linkage;
    Linkage out = reroute_linkage(g, x, y, x_sub, full, partial);
    CHECK(verify_linkage(g, out, n));
    int from_sub = 0;
    for (const auto& p : out.paths)
        if (std::find(x_sub.begin(), x_sub.end(), p.front()) != x_sub.end()) ++from_sub;
    CHECK(from_sub >= n - 1);

    // k = 1 with an empty x_sub: any single path
    Linkage one{{full.paths[0]}, x, y};
    Linkage none{{}, {}, y};
    Linkage single = reroute_linkage(g, x, y, {}, one, none);
    CHECK(verify_linkage(g, single, 1));

    CHECK_THROWS_AS(reroute_linkage(g, x, y, {x[0]}, full, partial), PreconditionError);
}
