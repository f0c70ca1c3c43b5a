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
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "flatwall/tdp.hpp"
#include "flatwall/wall.hpp"

using namespace fw;

namespace {

// Exhaustive reference: every simple s1-t1 path avoiding s2, t2 (and the
// `blocked` vertices), then a BFS for s2-t2 in what remains.
bool brute_two_paths(const Graph& g, Vertex s1, Vertex t1, Vertex s2, Vertex t2, const std::vector<char>& blocked = {}) {
    const size_t n = static_cast<size_t>(g.n());
    auto free_v = [&](Vertex v) { return blocked.empty() || !blocked[static_cast<size_t>(v)]; };
    std::vector<char> on(n, 0);
    on[static_cast<size_t>(s1)] = 1;
    std::function<bool(Vertex)> go = [&](Vertex u) -> bool {
        if (u == t1) {
            std::vector<char> mask(n, 1);
            for (Vertex v = 0; v < g.n(); ++v)
                if (on[static_cast<size_t>(v)] || !free_v(v)) mask[static_cast<size_t>(v)] = 0;
            mask[static_cast<size_t>(s2)] = mask[static_cast<size_t>(t2)] = 1;
            return !bfs_path(g, {s2}, {t2}, mask).empty();
        }
        for (Vertex w : g.neighbors(u)) {
            if (on[static_cast<size_t>(w)] || w == s2 || w == t2) continue;
            if (w != t1 && !free_v(w)) continue;
            on[static_cast<size_t>(w)] = 1;
            if (go(w)) return true;
            on[static_cast<size_t>(w)] = 0;
        }
        return false;
    };
    return go(s1);
}

// Exhaustive cross search over every interleaved quadruple of the cycle.
bool brute_cross(const Graph& g, const Path& c) {
    std::vector<char> onc(static_cast<size_t>(g.n()), 0);
    for (Vertex v : c) onc[static_cast<size_t>(v)] = 1;
    const size_t L = c.size();
    for (size_t a = 0; a < L; ++a)
        for (size_t b = a + 1; b < L; ++b)
            for (size_t x = b + 1; x < L; ++x)
                for (size_t y = x + 1; y < L; ++y)
                    if (brute_two_paths(g, c[a], c[x], c[b], c[y], onc)) return true;
    return false;
}

Graph random_graph(std::mt19937& rng, int n, double p) {
    Graph g(n);
    std::uniform_real_distribution<double> coin(0, 1);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) g.add_edge(u, v);
    return g;
}

void check_paths(const Graph& g, const TwoPaths& tp, Vertex s1, Vertex t1, Vertex s2, Vertex t2) {
    REQUIRE(is_path(g, tp.p1));
    REQUIRE(is_path(g, tp.p2));
    CHECK(tp.p1.front() == s1);
    CHECK(tp.p1.back() == t1);
    CHECK(tp.p2.front() == s2);
    CHECK(tp.p2.back() == t2);
    std::set<Vertex> a(tp.p1.begin(), tp.p1.end());
    for (Vertex v : tp.p2) CHECK_FALSE(a.count(v));
}

}  // namespace

TEST_CASE("tdp: two disjoint paths on small fixtures") {
    Graph c4 = cycle_graph(4);  // 0 1 2 3 in cyclic order
    CHECK_FALSE(two_disjoint_paths(c4, 0, 2, 1, 3).has_value());
    c4.add_edge(0, 2);
    // the chord s1-t1 leaves s2 and t2 with no route: both neighbours are used
    CHECK_FALSE(brute_two_paths(c4, 0, 2, 1, 3));
    auto sol = two_disjoint_paths(c4, 0, 2, 1, 3);
    CHECK_FALSE(sol.has_value());
    // with the terminals in order s1, t1, s2, t2 the chord is not needed
    sol = two_disjoint_paths(c4, 0, 1, 2, 3);
    REQUIRE(sol.has_value());
    check_paths(c4, *sol, 0, 1, 2, 3);
    Graph k4 = complete_graph(4);
    sol = two_disjoint_paths(k4, 0, 2, 1, 3);
    REQUIRE(sol.has_value());
    check_paths(k4, *sol, 0, 2, 1, 3);
    // 4-cycle s1,s2,t1,t2 plus the chord s1-t1: s2-t2 still goes round
    Graph c5 = cycle_graph(4);
    c5.add_edge(0, 2);
    Graph c6(5);
    for (auto [u, v] : c5.edges()) c6.add_edge(u, v);
    c6.add_edge(1, 4);
    c6.add_edge(4, 3);
    sol = two_disjoint_paths(c6, 0, 2, 1, 3);
    REQUIRE(sol.has_value());
    check_paths(c6, *sol, 0, 2, 1, 3);
    CHECK_THROWS_AS(two_disjoint_paths(k4, 0, 0, 1, 2), ParameterError);
    CHECK_THROWS_AS(two_disjoint_paths(k4, 0, 1, 2, 9), ParameterError);
}

TEST_CASE("tdp: agrees with exhaustive search on random small graphs") {
    std::mt19937 rng(4242);
    int yes = 0, no = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 9);
        Graph g = random_graph(rng, n, 0.2 + 0.4 * (rng() % 100) / 100.0);
        std::vector<Vertex> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const Vertex s1 = perm[0], t1 = perm[1], s2 = perm[2], t2 = perm[3];
        const bool expect = brute_two_paths(g, s1, t1, s2, t2);
        auto got = two_disjoint_paths(g, s1, t1, s2, t2);
        CAPTURE(trial);
        CHECK(got.has_value() == expect);
        if (got) check_paths(g, *got, s1, t1, s2, t2);
        (expect ? yes : no)++;
    }
    CHECK(yes > 50);
    CHECK(no > 50);
}

TEST_CASE("tdp: 5x5 grid with random terminals") {
    Graph g = grid_graph(5, 5);
    std::mt19937 rng(99);
    for (int seed = 0; seed < 200; ++seed) {
        std::vector<Vertex> perm(25);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const bool expect = brute_two_paths(g, perm[0], perm[1], perm[2], perm[3]);
        auto got = two_disjoint_paths(g, perm[0], perm[1], perm[2], perm[3]);
        CAPTURE(seed);
        CHECK(got.has_value() == expect);
        if (got) check_paths(g, *got, perm[0], perm[1], perm[2], perm[3]);
    }
}

TEST_CASE("tdp: hidden gadgets are expanded back into the input") {
    // Grid corners as terminals in interleaved order, no solution in the plane.
    // Replacing an interior vertex by K_5 glued on three of its neighbours keeps
    // the answer; gluing K_5 on four far-apart vertices creates one.
    Graph g = grid_graph(5, 5);
    CHECK_FALSE(two_disjoint_paths(g, 0, 24, 4, 20).has_value());
    Graph h(g.n() + 3);
    for (auto [u, v] : g.edges()) h.add_edge(u, v);
    VertexSet k5{12, 7, 13, 25, 26, 27};
    for (size_t a = 0; a < k5.size(); ++a)
        for (size_t b = a + 1; b < k5.size(); ++b)
            if (!(k5[a] < 25 && k5[b] < 25)) h.add_edge(k5[a], k5[b]);
    CHECK_FALSE(brute_two_paths(h, 0, 24, 4, 20));
    CHECK_FALSE(two_disjoint_paths(h, 0, 24, 4, 20).has_value());
    Graph x = g;
    x.add_edge(6, 18);
    x.add_edge(8, 16);
    CHECK(brute_two_paths(x, 0, 24, 4, 20));
    auto sol = two_disjoint_paths(x, 0, 24, 4, 20);
    REQUIRE(sol.has_value());
    check_paths(x, *sol, 0, 24, 4, 20);
}

TEST_CASE("tdp: elementary reductions") {
    // pendant path 3-4-5 hanging off vertex 3 of a 4-cycle
    Graph g = cycle_graph(4);
    Graph p(6);
    for (auto [u, v] : g.edges()) p.add_edge(u, v);
    p.add_edge(3, 4);
    p.add_edge(4, 5);
    std::vector<Vertex> map;
    Graph r = elementary_reduction(p, {0, 1, 2}, {{3, 4, 5}, {0, 1, 2, 3}}, &map);
    CHECK(r.n() == 4);
    CHECK(r.m() == 4);
    CHECK(map == std::vector<Vertex>{0, 1, 2, 3});

    // K_{1,3} centre 4 attached to 1, 2, 3 of a path 0-1-2-3: triangle added
    Graph s(5);
    s.add_edge(0, 1);
    s.add_edge(1, 2);
    s.add_edge(2, 3);
    for (Vertex v : {1, 2, 3}) s.add_edge(4, v);
    r = elementary_reduction(s, {0}, {{1, 2, 3, 4}, {0, 1, 2, 3}}, &map);
    CHECK(r.n() == 4);
    CHECK(r.has_edge(1, 3));
    CHECK(r.has_edge(1, 2));
    CHECK(r.m() == 4);

    auto clause = [&](const Graph& gr, const VertexSet& prot, const Separation& sep) {
        try {
            elementary_reduction(gr, prot, sep);
        } catch (const PreconditionError& e) {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    CHECK(clause(s, {0}, {{1, 2, 4}, {0, 1, 2}}) == "sides do not cover V(G)");
    CHECK(clause(s, {4}, {{1, 2, 3, 4}, {0, 1, 2, 3}}) == "protected vertex outside side_y");
    CHECK(clause(s, {0}, {{4, 1}, {0, 1, 2, 3}}) == "an edge crosses the separation");
    CHECK(clause(complete_graph(5), {0}, {{0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}}) == "separation order exceeds 3");
    Graph two(4);
    two.add_edge(0, 1);
    two.add_edge(0, 2);
    two.add_edge(3, 1);
    CHECK(clause(two, {0}, {{1, 2, 3}, {0, 1, 2}}) == "cut vertices are not connected inside side_x");
}

TEST_CASE("tdp: reductions keep two-paths feasibility and shrink the graph") {
    std::mt19937 rng(17);
    int applied = 0;
    for (int trial = 0; trial < 200; ++trial) {
        // planar grid plus a gadget glued on up to three vertices
        Graph base = grid_graph(3, 3);
        const int extra = 2 + static_cast<int>(rng() % 3);
        Graph g(base.n() + extra);
        for (auto [u, v] : base.edges()) g.add_edge(u, v);
        VertexSet glue;
        while (glue.size() < 1 + rng() % 3) {
            Vertex v = static_cast<Vertex>(rng() % 9);
            if (std::find(glue.begin(), glue.end(), v) == glue.end()) glue.push_back(v);
        }
        for (int k = 0; k < extra; ++k) {
            if (k > 0) g.add_edge(9 + k, 9 + k - 1);
            if (k > 1 && rng() % 2) g.add_edge(9 + k, 9);
        }
        for (Vertex v : glue) g.add_edge(v, 9 + static_cast<int>(rng() % extra));
        VertexSet x, y;
        for (Vertex v = 0; v < g.n(); ++v) {
            if (v >= 9 || std::count(glue.begin(), glue.end(), v)) x.push_back(v);
            if (v < 9) y.push_back(v);
        }
        // terminals among grid vertices outside the glue set
        VertexSet cand;
        for (Vertex v = 0; v < 9; ++v)
            if (!std::count(glue.begin(), glue.end(), v)) cand.push_back(v);
        if (cand.size() < 4) continue;
        std::shuffle(cand.begin(), cand.end(), rng);
        VertexSet term(cand.begin(), cand.begin() + 4);
        std::vector<Vertex> map;
        Graph r = elementary_reduction(g, term, {x, y}, &map);
        CHECK(r.n() < g.n());
        std::vector<Vertex> nw(static_cast<size_t>(g.n()), -1);
        for (size_t i = 0; i < map.size(); ++i) nw[static_cast<size_t>(map[i])] = static_cast<Vertex>(i);
        const bool before = brute_two_paths(g, term[0], term[1], term[2], term[3]);
        const bool after = brute_two_paths(r, nw[static_cast<size_t>(term[0])], nw[static_cast<size_t>(term[1])],
                                           nw[static_cast<size_t>(term[2])], nw[static_cast<size_t>(term[3])]);
        CHECK(before == after);
        ++applied;
    }
    CHECK(applied > 100);
}

TEST_CASE("tdp: cross or flat on fixtures") {
    Graph c = cycle_graph(6);
    Path cyc{0, 1, 2, 3, 4, 5};
    auto res = c_cross_or_flat(c, cyc);
    REQUIRE(res.flat.has_value());
    CHECK_FALSE(res.cross.has_value());
    CHECK(res.flat->pieces.empty());
    CHECK(verify_flat_decomposition(c, cyc, *res.flat).ok());

    // wall with a chord joining interior vertices two rows apart
    Wall w = identity_wall(7, 7);
    Graph g = w.tmpl.g;
    Path bd = w.boundary_cycle();
    res = c_cross_or_flat(g, bd);
    REQUIRE(res.flat.has_value());
    CHECK(verify_flat_decomposition(g, bd, *res.flat).ok());
    const Vertex u = w.tmpl.at(2, 6), v = w.tmpl.at(6, 9);
    REQUIRE(u >= 0);
    REQUIRE(v >= 0);
    g.add_edge(u, v);
    res = c_cross_or_flat(g, bd);
    REQUIRE(res.cross.has_value());
    CHECK_FALSE(res.flat.has_value());
    CHECK(is_cross(g, bd, *res.cross));

    CHECK_THROWS_AS(c_cross_or_flat(c, Path{0, 1, 3}), StructuralError);
    CHECK_THROWS_AS(c_cross_or_flat(c, Path{0, 1}), StructuralError);
}

TEST_CASE("tdp: flat with pieces on planar-plus-gadget graphs") {
    // 5x5 grid, outer cycle as C, a K_3 joined to the three vertices 6, 7, 12
    // of one inner face: K_{3,3} makes the graph non-planar, but the gadget
    // hangs off three vertices of a face and reduces to a triangle there.
    Graph grid = grid_graph(5, 5);
    Path bd;
    for (int j = 0; j < 5; ++j) bd.push_back(j);
    for (int i = 1; i < 5; ++i) bd.push_back(i * 5 + 4);
    for (int j = 3; j >= 0; --j) bd.push_back(20 + j);
    for (int i = 3; i >= 1; --i) bd.push_back(i * 5);
    Graph g(28);
    for (auto [a, b] : grid.edges()) g.add_edge(a, b);
    VertexSet gad{6, 7, 12, 25, 26, 27};
    for (size_t a = 0; a < gad.size(); ++a)
        for (size_t b = a + 1; b < gad.size(); ++b)
            if (gad[a] >= 25 || gad[b] >= 25) g.add_edge(gad[a], gad[b]);
    CHECK_FALSE(is_planar(g));
    auto res = c_cross_or_flat(g, bd);
    REQUIRE(res.flat.has_value());
    CHECK(verify_flat_decomposition(g, bd, *res.flat).ok());
    CHECK_FALSE(res.flat->pieces.empty());

    // glued on 6, 8, 18 instead, the gadget carries a path 6 -> 18 that
    // crosses row 2 of the grid: 1-6-(gadget)-18-23 against 10-11-12-13-14
    Graph x(28);
    for (auto [a, b] : grid.edges()) x.add_edge(a, b);
    for (Vertex n1 : {25, 26, 27}) {
        for (Vertex n2 : {25, 26, 27})
            if (n1 < n2) x.add_edge(n1, n2);
        for (Vertex at : {6, 8, 18}) x.add_edge(n1, at);
    }
    auto crossed = c_cross_or_flat(x, bd);
    REQUIRE(crossed.cross.has_value());
    CHECK(is_cross(x, bd, *crossed.cross));
    bool found_gadget = false;
    for (const FlatPiece& p : res.flat->pieces)
        if (std::count(p.vertices.begin(), p.vertices.end(), 25)) found_gadget = true;
    CHECK(found_gadget);

    // tampering is caught
    FlatDecomposition bad = *res.flat;
    bad.outer.pop_back();
    CHECK_FALSE(verify_flat_decomposition(g, bd, bad).ok());
    bad = *res.flat;
    bad.pieces.clear();
    CHECK(verify_flat_decomposition(g, bd, bad).clause == "vertex covered by neither G_0 nor a piece");
    bad = *res.flat;
    std::reverse(bad.rotation[12].begin(), bad.rotation[12].end());
    std::swap(bad.rotation[12][0], bad.rotation[12][1]);
    bad.rotation[7].clear();
    CHECK_FALSE(verify_flat_decomposition(g, bd, bad).ok());

    auto back = flat_from_json(flat_to_json(*res.flat), g.n());
    CHECK(verify_flat_decomposition(g, bd, back).ok());
    CHECK(back.g0 == res.flat->g0);
}

TEST_CASE("tdp: cross and flat are exclusive on small random graphs") {
    std::mt19937 rng(5150);
    int crosses = 0, flats = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 8);
        const int len = 4 + static_cast<int>(rng() % std::min(4, n - 3));
        Graph g = random_graph(rng, n, 0.15 + 0.25 * (rng() % 100) / 100.0);
        Path cyc;
        for (int i = 0; i < len; ++i) cyc.push_back(i);
        for (int i = 0; i < len; ++i) g.add_edge(i, (i + 1) % len);
        // keep it connected
        for (Vertex v = 1; v < n; ++v) g.add_edge(v, static_cast<Vertex>(rng() % v));
        CAPTURE(trial);
        auto res = c_cross_or_flat(g, cyc);
        CHECK(res.cross.has_value() != res.flat.has_value());
        const bool brute = brute_cross(g, cyc);
        if (res.cross) {
            CHECK(is_cross(g, cyc, *res.cross));
            ++crosses;
        } else {
            CHECK(verify_flat_decomposition(g, cyc, *res.flat).ok());
            CHECK_FALSE(brute);
            ++flats;
        }
        CHECK(brute == res.cross.has_value());
    }
    CHECK(crosses > 30);
    CHECK(flats > 30);
}

TEST_CASE("tdp: wall-cross queries at basic-wall scale") {
    Wall w = identity_wall(16, 16);
    Graph g = w.tmpl.g;
    CHECK_FALSE(two_disjoint_paths(g, w.a(), w.c(), w.b(), w.d()).has_value());
    // a chord between two rows far apart frees the cross
    g.add_edge(w.tmpl.at(3, 10), w.tmpl.at(12, 20));
    auto sol = two_disjoint_paths(g, w.a(), w.c(), w.b(), w.d());
    REQUIRE(sol.has_value());
    check_paths(g, *sol, w.a(), w.c(), w.b(), w.d());
    auto flat = c_cross_or_flat(w.tmpl.g, w.boundary_cycle());
    REQUIRE(flat.flat.has_value());
}
