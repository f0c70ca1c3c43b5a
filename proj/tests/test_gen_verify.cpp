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

#include <chrono>
#include <random>

#include "doctest.h"
#include "flatwall/gen_verify.hpp"
#include "oracles.hpp"

using namespace fw;

namespace {

Graph petersen() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

}  // namespace

TEST_CASE("brute_force_minor fixtures") {
    auto k4 = brute_force_minor(complete_graph(4), 4);
    REQUIRE(k4);
    CHECK(validate_minor_model(complete_graph(4), *k4).ok());
    CHECK(k4->branch_sets == std::vector<VertexSet>{{0}, {1}, {2}, {3}});

    CHECK_FALSE(brute_force_minor(cycle_graph(5), 4));
    CHECK(brute_force_minor(cycle_graph(5), 3));

    Graph p = petersen();
    auto k5 = brute_force_minor(p, 5);
    REQUIRE(k5);
    CHECK(validate_minor_model(p, *k5).ok());
    CHECK_FALSE(brute_force_minor(p, 6));

    CHECK_FALSE(brute_force_minor(grid_graph(5, 5), 5));
    CHECK(brute_force_minor(grid_graph(3, 3), 4));
    CHECK_FALSE(brute_force_minor(complete_graph(3), 4));
    CHECK_THROWS_AS(brute_force_minor(petersen(), 6, 3), BudgetExceeded);
    CHECK_THROWS_AS(brute_force_minor(Graph(65), 3), ParameterError);
}

TEST_CASE("brute_force_minor agrees with exhaustive labelling") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 4 + static_cast<int>(rng() % 4);
        Graph g = oracle::random_graph(n, 0.55, rng);
        for (int t = 3; t <= 5; ++t) {
            auto got = brute_force_minor(g, t);
            CHECK(got.has_value() == oracle::has_clique_minor(g, t));
            if (got) CHECK(validate_minor_model(g, *got).ok());
        }
    }
}

TEST_CASE("compose K3 in K4 in a grid with a diagonal") {
    Graph g = grid_graph(5, 5);
    g.add_edge(6, 12);  // v(2,2)-v(3,3)
    auto outer = brute_force_minor(g, 4);
    REQUIRE(outer);
    auto inner = brute_force_minor(complete_graph(4), 3);
    REQUIRE(inner);
    MinorModel c = compose_models(*outer, *inner);
    CHECK(validate_minor_model(g, c).ok());
    CHECK(c.pattern.n() == 3);
}

TEST_CASE("lower-bound generator") {
    auto lb = gen_lowerbound(3, 2);
    CHECK(lb.side == 5);
    CHECK(lb.black_cells.size() == 4);
    CHECK(lb.g.max_degree() == 5);
    CHECK(lb.g.m() == 2 * 5 * 4 + 2 * 4);

    auto one = gen_lowerbound(4, 1);
    CHECK(one.side == 3);
    CHECK(one.g.m() == 12 + 2);
    for (Vertex c : {0, 2, 6, 8}) CHECK(one.g.degree(c) <= 5);

    for (int wp = 3; wp <= 7; ++wp)
        for (int tp = 1; tp <= 4; ++tp) {
            auto g = gen_lowerbound(wp, tp);
            const int s = g.side;
            // a 2x2 grid is just the black cell, i.e. K4
            CHECK(g.g.max_degree() == (s >= 3 ? 5 : 3));
            for (auto [x, y] : g.black_cells) {
                CHECK(x + 1 < s);
                CHECK(y + 1 < s);
                // the corner opposite the grid corner picks up both a
                // diagonal and four grid edges when it is interior
                Vertex in = (x + 1) * s + (y + 1);
                if (x + 2 < s && y + 2 < s) CHECK(g.g.degree(in) == 5);
            }
        }
    CHECK_THROWS_AS(gen_lowerbound(2, 3), ParameterError);
    CHECK_THROWS_AS(gen_lowerbound(3, 0), ParameterError);
    CHECK(gen_lowerbound_for(44, 60).wp == 3);
    CHECK(gen_lowerbound_for(44, 60).tp == 2);

    auto tiny = gen_lowerbound(6, 1);
    CHECK(tiny.side == 5);
    auto t0 = std::chrono::steady_clock::now();
    CHECK_FALSE(brute_force_minor(tiny.g, 5));
    MESSAGE("K5 search on side-5 instance: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s");
    CHECK_FALSE(brute_force_minor(lb.g, 5));
}
