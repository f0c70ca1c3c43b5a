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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "flatwall/chain.hpp"

using namespace fw;

namespace {

// Subdivide every edge of the template once.
std::pair<Graph, Wall> subdivided_wall(int h, int r) {
    Wall base = identity_wall(h, r);
    Graph host(base.tmpl.g.n());
    std::vector<Path> paths;
    for (auto [u, v] : base.tmpl_edges) {
        Vertex m = host.add_vertex();
        host.add_edge(u, m);
        host.add_edge(m, v);
        paths.push_back({u, m, v});
    }
    return {host, make_wall(base.tmpl, base.branch, paths)};
}

// Set of host edges of a wall, as ordered pairs.
std::set<std::pair<Vertex, Vertex>> edge_set(const Wall& w) {
    std::set<std::pair<Vertex, Vertex>> s;
    for (auto [u, v] : w.host_edges()) s.insert({std::min(u, v), std::max(u, v)});
    return s;
}

void check_cut(const Graph& host, const Wall& w, int n, int z) {
    Chain c = cut_wall_to_chain(host, w, n, z);
    CHECK(c.size() == n * (n - 2));
    CHECK(c.z == z);
    CHECK(check_chain(host, c).ok());
    CHECK(c.union_wall.h() == z);
    CHECK(c.union_wall.r() == z * n * (n - 2));
    for (const Wall& b : c.basic) {
        CHECK(b.h() == z);
        CHECK(b.r() == z);
        CHECK(check_wall(host, b).ok());
        CHECK(is_subwall(w, b));
    }
    // W' is the union of the basic walls and connectors and lives inside W.
    VertexSet expect;
    for (const Wall& b : c.basic) {
        VertexSet v = b.vertices();
        expect.insert(expect.end(), v.begin(), v.end());
    }
    for (const auto& fam : c.connectors)
        for (const Path& p : fam) expect.insert(expect.end(), p.begin(), p.end());
    std::sort(expect.begin(), expect.end());
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    CHECK(c.union_wall.vertices() == expect);
    auto we = edge_set(w);
    for (auto e : edge_set(c.union_wall)) CHECK(we.count(e) == 1);
    // Every turn flips the brick parity, so the joined pattern is not uniform.
    CHECK_FALSE(union_is_elementary(c));
    // One strip alone lines up.
    CHECK(union_is_elementary(truncate_chain(host, c, n - 2)));
}

}  // namespace

TEST_CASE("rotate180") {
    for (int h = 2; h <= 7; ++h)
        for (int r = 2; r <= 6; r += 2)
            for (int phase = 0; phase <= 1; ++phase) {
                Wall w = identity_wall(h + 2, r + 1);
                Wall s = subwall(w, 1 + phase, h + phase, 2, r + 1);
                Wall t = rotate180(s);
                REQUIRE(check_wall(w.tmpl.g, t).ok());
                CHECK(is_subwall(w, t));
                CHECK(t.vertices() == s.vertices());
                for (int i = 1; i <= h; ++i) {
                    Path row = s.row(h + 1 - i);
                    std::reverse(row.begin(), row.end());
                    CHECK(t.row(i) == row);
                }
                CHECK(t.a() == s.c());
                CHECK(t.b() == s.d());
                Wall back = rotate180(t);
                CHECK(back.branch == s.branch);
                CHECK(back.tmpl.col_phase == s.tmpl.col_phase);
            }
}

TEST_CASE("cut_wall_to_chain on identity walls") {
    for (int n : {3, 4, 5})
        for (int z : {4, 6}) {
            CAPTURE(n);
            CAPTURE(z);
            Wall w = identity_wall(n * z, n * z);
            check_cut(w.tmpl.g, w, n, z);
        }
    Wall w = identity_wall(12, 12);
    Chain c = cut_wall_to_chain(w.tmpl.g, w, 3, 4);
    CHECK(c.size() == 3);
    CHECK(c.union_wall.h() == 4);
    Wall w12 = identity_wall(12, 12);
    CHECK(cut_wall_to_chain(w12.tmpl.g, w12, 4, 3).size() == 8);
}

TEST_CASE("cut_wall_to_chain on odd heights, subdivided and oversized walls") {
    for (int z : {2, 3, 5}) {
        CAPTURE(z);
        Wall w = identity_wall(3 * z, 3 * z);
        check_cut(w.tmpl.g, w, 3, z);
    }
    auto [host, sw] = subdivided_wall(12, 12);
    check_cut(host, sw, 4, 3);
    Wall big = identity_wall(14, 13);
    Chain c = cut_wall_to_chain(big.tmpl.g, big, 3, 4);
    CHECK(c.size() == 3);
    CHECK(check_chain(big.tmpl.g, c).ok());
}

TEST_CASE("snake order") {
    const int n = 4, z = 3;
    Wall w = identity_wall(n * z, n * z);
    Chain c = cut_wall_to_chain(w.tmpl.g, w, n, z);
    auto row_of = [&](Vertex v) { return w.tmpl.coord[static_cast<size_t>(v)].first; };
    auto slot_of = [&](Vertex v) { return w.tmpl.coord[static_cast<size_t>(v)].second; };
    // Strip 1 runs left to right in the top rows, strip 2 right to left.
    CHECK(row_of(c.basic[0].a()) == 1);
    CHECK(slot_of(c.basic[0].a()) <= 2 * z + 2);
    CHECK(row_of(c.basic[2].a()) == 2 * z);
    CHECK(slot_of(c.basic[2].a()) >= 6 * z - 1);
    CHECK(slot_of(c.basic[2].a()) <= 6 * z);
    CHECK(slot_of(c.basic[3].a()) >= 4 * z - 1);
    CHECK(slot_of(c.basic[3].a()) <= 4 * z);
    CHECK(row_of(c.basic[4].a()) == 2 * z + 1);
    // Turn connectors pair W rows i and 2z+1-i of the two strips.
    for (int i = 1; i <= z; ++i) {
        const Path& p = c.connectors[1][static_cast<size_t>(i - 1)];
        CHECK(row_of(p.front()) == i);
        CHECK(row_of(p.back()) == 2 * z + 1 - i);
        CHECK(slot_of(p.front()) < slot_of(p[1]));
    }
}

TEST_CASE("cut_wall_to_chain errors") {
    Wall w = identity_wall(12, 12);
    CHECK_THROWS_AS(cut_wall_to_chain(w.tmpl.g, w, 2, 6), ParameterError);
    CHECK_THROWS_AS(cut_wall_to_chain(w.tmpl.g, w, 3, 1), ParameterError);
    CHECK_THROWS_AS(cut_wall_to_chain(w.tmpl.g, w, 3, 5), ParameterError);
}

TEST_CASE("assemble_chain") {
    Wall w = identity_wall(15, 15);
    Chain c = cut_wall_to_chain(w.tmpl.g, w, 3, 5);
    Chain again = assemble_chain(w.tmpl.g, c.basic, c.connectors);
    CHECK(again.union_wall.branch == c.union_wall.branch);
    CHECK(again.union_wall.edge_paths == c.union_wall.edge_paths);
    CHECK(again.first_col == c.first_col);

    // Two 4x4 walls side by side, rows joined by paths with two inner vertices.
    const int z = 4;
    ElementaryWall t = build_elementary_wall(z, z);
    const int n0 = t.g.n();
    Graph host(2 * n0);
    std::vector<Vertex> ba, bb;
    std::vector<Path> pa, pb;
    for (Vertex v = 0; v < n0; ++v) {
        ba.push_back(v);
        bb.push_back(v + n0);
    }
    for (auto [u, v] : t.g.edges()) {
        host.add_edge(u, v);
        host.add_edge(u + n0, v + n0);
        pa.push_back({u, v});
        pb.push_back({u + n0, v + n0});
    }
    Wall a = make_wall(t, ba, pa), b = make_wall(t, bb, pb);
    std::vector<Path> fam;
    for (int i = 1; i <= z; ++i) {
        Vertex m1 = host.add_vertex(), m2 = host.add_vertex();
        Path p{a.row(i).back(), m1, m2, b.row(i).front()};
        for (size_t k = 0; k + 1 < p.size(); ++k) host.add_edge(p[k], p[k + 1]);
        fam.push_back(p);
    }
    Chain hand = assemble_chain(host, {a, b}, {fam});
    CHECK(hand.union_wall.r() == 2 * z);
    CHECK(union_is_elementary(hand));
    CHECK(check_chain(host, hand).ok());
    CHECK(hand.neighborhood(0).size() == host.n());

    // A connector through the interior of a basic wall.
    Graph bad = host;
    auto fam2 = fam;
    Vertex inner = a.tmpl.at(2, 4);
    bad.add_edge(fam2[0][1], inner);
    bad.add_edge(inner, fam2[0][2]);
    fam2[0] = {fam2[0][0], fam2[0][1], inner, fam2[0][2], fam2[0][3]};
    CHECK_THROWS_WITH_AS(assemble_chain(bad, {a, b}, {fam2}), doctest::Contains("passes through a basic wall"),
                         StructuralError);

    // Row i must meet row i.
    auto fam3 = fam;
    std::swap(fam3[0], fam3[1]);
    CHECK_THROWS_AS(assemble_chain(host, {a, b}, {fam3}), StructuralError);

    // A bare edge leaves no room for the bricks between the two walls.
    Graph direct = host;
    std::vector<Path> fam4;
    for (int i = 1; i <= z; ++i) {
        direct.add_edge(a.row(i).back(), b.row(i).front());
        fam4.push_back({a.row(i).back(), b.row(i).front()});
    }
    CHECK_THROWS_WITH_AS(assemble_chain(direct, {a, b}, {fam4}), doctest::Contains("too short"), StructuralError);
}

TEST_CASE("chain JSON round trip and truncation") {
    auto [host, sw] = subdivided_wall(12, 12);
    Chain c = cut_wall_to_chain(host, sw, 3, 4);
    Chain d = chain_from_json(host, nlohmann::json::parse(chain_to_json(c).dump()));
    CHECK(d.union_wall.branch == c.union_wall.branch);
    CHECK(d.connectors == c.connectors);
    Chain e = truncate_chain(host, c, 2);
    CHECK(e.size() == 2);
    CHECK(e.union_wall.r() == 8);
    CHECK_THROWS_AS(truncate_chain(host, c, 4), ParameterError);
    CHECK_THROWS_AS(chain_from_json(host, nlohmann::json::parse(R"({"basic_walls": 3})")), StructuralError);
}
