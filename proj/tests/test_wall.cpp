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

#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "flatwall/wall.hpp"

using namespace fw;

namespace {

// Independent re-derivation of the elementary wall: enumerate the grid slots
// that survive and count edges by hand, without the library's graph code.
std::pair<int, int> count_wall(int h, int r) {
    std::set<std::pair<int, int>> alive;
    auto vertical = [](int i, int x) { return (i % 2) == (x % 2); };
    for (int i = 1; i <= h; ++i)
        for (int x = 1; x <= 2 * r; ++x) alive.insert({i, x});
    auto deg = [&](int i, int x) {
        int d = 0;
        if (alive.count({i, x - 1})) ++d;
        if (alive.count({i, x + 1})) ++d;
        if (i > 1 && vertical(i - 1, x) && alive.count({i - 1, x})) ++d;
        if (i < h && vertical(i, x) && alive.count({i + 1, x})) ++d;
        return d;
    };
    std::vector<std::pair<int, int>> drop;
    for (auto [i, x] : alive)
        if (deg(i, x) == 1) drop.push_back({i, x});
    for (auto p : drop) alive.erase(p);
    int edges = 0;
    for (auto [i, x] : alive) edges += deg(i, x);
    return {static_cast<int>(alive.size()), edges / 2};
}

}  // namespace

TEST_CASE("elementary wall (3,3)") {
    auto w = build_elementary_wall(3, 3);
    CHECK(w.g.n() == 16);
    CHECK(w.g.m() == 19);
    CHECK(w.at(3, 1) == -1);
    CHECK(w.at(1, 6) == -1);
    CHECK(count_wall(3, 3) == std::pair{16, 19});
}

TEST_CASE("elementary wall sizes agree with hand enumeration") {
    for (int h = 2; h <= 10; ++h)
        for (int r = 2; r <= 10; ++r) {
            auto w = build_elementary_wall(h, r);
            CHECK(std::pair{w.g.n(), static_cast<int>(w.g.m())} == count_wall(h, r));
        }
}

TEST_CASE("elementary wall (5,4) and (2,2)") {
    auto w = build_elementary_wall(5, 4);
    CHECK(w.rows.size() == 5);
    CHECK(w.cols.size() == 4);
    std::set<Vertex> corners{w.a, w.b, w.c, w.d};
    CHECK(corners.size() == 4);
    auto s = build_elementary_wall(2, 2);
    CHECK(s.boundary.size() == static_cast<size_t>(s.g.n()));
    CHECK(s.g.n() == 6);
    CHECK_THROWS_AS(build_elementary_wall(1, 4), ParameterError);
}

TEST_CASE("pegs and boundary for all small walls") {
    for (int h = 2; h <= 10; ++h)
        for (int r = 2; r <= 10; ++r) {
            auto w = build_elementary_wall(h, r);
            for (Vertex v = 0; v < w.g.n(); ++v) {
                CHECK(w.g.degree(v) >= 2);
                CHECK(w.g.degree(v) <= 3);
            }
            VertexSet expect;
            for (Vertex v : w.boundary)
                if (w.g.degree(v) == 2) expect.push_back(v);
            CHECK(w.pegs == expect);
            Path z = w.boundary_cycle();
            CHECK(z.size() == w.boundary.size());
            for (size_t i = 0; i < z.size(); ++i) CHECK(w.g.has_edge(z[i], z[(i + 1) % z.size()]));
            CHECK(w.a == w.rows.front().front());
            CHECK(w.b == w.rows.front().back());
            CHECK(w.c == w.rows.back().back());
            CHECK(w.d == w.rows.back().front());
        }
}

TEST_CASE("stripping the boundary leaves the (h-2)x(r-2) wall") {
    for (int h = 4; h <= 9; ++h)
        for (int r = 4; r <= 9; ++r) {
            Wall w = identity_wall(h, r);
            std::vector<char> keep(static_cast<size_t>(w.tmpl.g.n()), 1);
            for (Vertex v : w.tmpl.boundary) keep[static_cast<size_t>(v)] = 0;
            for (bool ch = true; ch;) {
                ch = false;
                for (Vertex v = 0; v < w.tmpl.g.n(); ++v) {
                    if (!keep[static_cast<size_t>(v)]) continue;
                    int d = 0;
                    for (Vertex u : w.tmpl.g.neighbors(v)) d += keep[static_cast<size_t>(u)];
                    if (d <= 1) keep[static_cast<size_t>(v)] = 0, ch = true;
                }
            }
            VertexSet rest;
            for (Vertex v = 0; v < w.tmpl.g.n(); ++v)
                if (keep[static_cast<size_t>(v)]) rest.push_back(v);
            Wall inner = subwall(w, 2, h - 1, 2, r - 1);
            CHECK(inner.vertices() == rest);
            CHECK(inner.tmpl.g.m() == build_elementary_wall(h - 2, r - 2).g.m());
        }
}

TEST_CASE("identity wall and wall checker") {
    Wall w = identity_wall(5, 4);
    CHECK(w.edge_paths.size() == w.tmpl.g.m());
    CHECK(check_wall(w.tmpl.g, w).ok());
    CHECK(check_wall(identity_wall(2, 2).tmpl.g, identity_wall(2, 2)).ok());
    CHECK(check_wall(identity_wall(3, 3).tmpl.g, identity_wall(3, 3)).ok());
    Wall bad = w;
    bad.branch[1] = bad.branch[0];
    CHECK_FALSE(check_wall(w.tmpl.g, bad).ok());
}

TEST_CASE("sub-walls") {
    Wall w = identity_wall(6, 6);
    Wall same = subwall(w, 1, 6, 1, 6);
    CHECK(same.vertices() == w.vertices());
    CHECK(same.a() == w.a());
    CHECK(same.c() == w.c());

    Wall s = subwall(w, 2, 4, 2, 4);
    CHECK(s.h() == 3);
    CHECK(s.r() == 3);
    CHECK(check_wall(w.tmpl.g, s).ok());
    CHECK(is_subwall(w, s));

    const int z = 6;
    Wall big = identity_wall(z + 2, z + 2);
    Wall inner = subwall(big, 2, z + 1, 2, z + 1);
    CHECK(inner.h() == z);
    CHECK(inner.r() == z);
    Wall core = subwall(big, 3, z, 3, z);
    CHECK(core.h() == z - 2);
    CHECK(is_subwall(big, core));
    CHECK_THROWS_AS(subwall(w, 3, 3, 1, 6), ParameterError);

    // every range of a 7x6 wall, including mirrored parity
    Wall p = identity_wall(7, 6);
    for (int i1 = 1; i1 <= 7; ++i1)
        for (int i2 = i1 + 1; i2 <= 7; ++i2)
            for (int j1 = 1; j1 <= 6; ++j1)
                for (int j2 = j1 + 1; j2 <= 6; ++j2) {
                    Wall q = subwall(p, i1, i2, j1, j2);
                    CHECK(check_wall(p.tmpl.g, q).ok());
                    CHECK(is_subwall(p, q));
                }
}

TEST_CASE("sub-wall of a subdivided wall") {
    // subdivide every edge of a 5x5 wall once
    Wall base = identity_wall(5, 5);
    Graph host(base.tmpl.g.n());
    std::vector<Path> paths;
    for (auto [u, v] : base.tmpl_edges) {
        Vertex m = host.add_vertex();
        host.add_edge(u, m);
        host.add_edge(m, v);
        paths.push_back({u, m, v});
    }
    Wall w = make_wall(base.tmpl, base.branch, paths);
    REQUIRE(check_wall(host, w).ok());
    Wall s = subwall(w, 2, 4, 2, 5);
    CHECK(check_wall(host, s).ok());
    CHECK(is_subwall(w, s));
    auto [grid, model] = contract_to_grid(w);
    CHECK(validate_minor_model(host, model).ok());
}

TEST_CASE("contract_to_grid") {
    for (int h = 2; h <= 12; h += 2)
        for (int r = 2; r <= 12; r += 3) {
            Wall w = identity_wall(h, r);
            auto [grid, model] = contract_to_grid(w);
            CHECK(grid.h == h);
            CHECK(grid.r == r);
            CHECK(validate_minor_model(w.tmpl.g, model).ok());
            for (int i = 1; i <= h; ++i) {
                Path row = w.row(i);
                std::set<Vertex> rs(row.begin(), row.end());
                for (int j = 1; j <= r; ++j)
                    for (Vertex x : model.branch_sets[static_cast<size_t>(grid.v(i, j))]) {
                        bool on_some_row = false;
                        for (int k = 1; k <= h; ++k) {
                            Path rk = w.row(k);
                            if (std::find(rk.begin(), rk.end(), x) != rk.end()) on_some_row = true;
                        }
                        if (on_some_row) CHECK(rs.count(x));
                    }
            }
        }
}

TEST_CASE("grid and wall linkage") {
    GridGraph g = make_grid(7, 9);
    Linkage one = grid_linkage(g, {g.v(3, 1)}, {g.v(3, 9)});
    CHECK(one.paths.size() == 1);
    CHECK(one.paths[0].size() == 9);
    VertexSet col1, col9;
    for (int i = 1; i <= 7; ++i) col1.push_back(g.v(i, 1)), col9.push_back(g.v(i, 9));
    CHECK(verify_linkage(g.g, grid_linkage(g, col1, col9), 7));
    std::mt19937 rng(3);
    for (int seed = 0; seed < 100; ++seed) {
        std::vector<int> a(7), b(7);
        std::iota(a.begin(), a.end(), 1);
        std::iota(b.begin(), b.end(), 1);
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        int k = 1 + static_cast<int>(rng() % 7);
        VertexSet x, y;
        for (int i = 0; i < k; ++i) x.push_back(g.v(a[static_cast<size_t>(i)], 1)), y.push_back(g.v(b[static_cast<size_t>(i)], 9));
        CHECK(verify_linkage(g.g, grid_linkage(g, x, y), k));
    }
    CHECK_THROWS_AS(grid_linkage(g, {g.v(1, 2)}, {g.v(1, 9)}), ParameterError);

    auto w = build_elementary_wall(6, 8);
    auto pick = [&](const Path& col, int row) {
        for (Vertex v : col)
            if (w.coord[static_cast<size_t>(v)].first == row) return v;
        return -1;
    };
    for (int seed = 0; seed < 100; ++seed) {
        std::vector<int> a(6), b(6);
        std::iota(a.begin(), a.end(), 1);
        std::iota(b.begin(), b.end(), 1);
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        int k = 1 + static_cast<int>(rng() % 6);
        VertexSet x, y;
        for (int i = 0; i < k; ++i)
            x.push_back(pick(w.cols.front(), a[static_cast<size_t>(i)])), y.push_back(pick(w.cols.back(), b[static_cast<size_t>(i)]));
        CHECK(verify_linkage(w.g, wall_linkage(w, x, y), k));
    }
}

TEST_CASE("wall-cross from a chord") {
    Wall w = identity_wall(7, 7);
    const Graph& g = w.tmpl.g;
    // row-separated interior pair
    Vertex u = w.tmpl.at(2, 5), v = w.tmpl.at(5, 8);
    auto x = wall_cross_from_chord(g, w, u, v);
    Graph gg = g;
    gg.add_edge(u, v);
    CHECK(verify_wall_cross(gg, w, x));

    // boundary u, centre v of a 9x9 wall
    Wall w9 = identity_wall(9, 9);
    Vertex centre = w9.tmpl.at(5, 9);
    for (Vertex b : w9.tmpl.boundary) {
        auto c = wall_cross_from_chord(w9.tmpl.g, w9, b, centre);
        Graph h = w9.tmpl.g;
        if (!h.has_edge(b, centre)) h.add_edge(b, centre);
        CHECK(verify_wall_cross(h, w9, c));
    }

    // a bare wall has no cross: the chord must be necessary
    CHECK_THROWS_AS(wall_cross_from_chord(g, w, w.tmpl.at(2, 3), w.tmpl.at(2, 5)), PreconditionError);
    CHECK_THROWS_AS(wall_cross_from_chord(g, w, w.a(), w.c()), PreconditionError);
}

TEST_CASE("wall-cross on random chords, plain and subdivided") {
    std::mt19937 rng(11);
    Wall w = identity_wall(8, 9);
    Graph host(w.tmpl.g.n());
    std::vector<Path> paths;
    for (auto [a, b] : w.tmpl_edges) {
        Vertex m = host.add_vertex();
        host.add_edge(a, m);
        host.add_edge(m, b);
        paths.push_back({a, m, b});
    }
    Wall sw = make_wall(w.tmpl, w.branch, paths);
    for (const Wall* W : {&w, &sw}) {
        const Graph& g = W == &w ? w.tmpl.g : host;
        VertexSet all = W->vertices();
        int done = 0;
        for (int trial = 0; trial < 4000 && done < 50; ++trial) {
            Vertex u = all[rng() % all.size()], v = all[rng() % all.size()];
            if (u == v) continue;
            try {
                auto c = wall_cross_from_chord(g, *W, u, v);
                Graph h = g;
                if (!h.has_edge(u, v)) h.add_edge(u, v);
                CHECK(verify_wall_cross(h, *W, c));
                ++done;
            } catch (const PreconditionError&) {
            }
        }
        CHECK(done == 50);
    }
}
