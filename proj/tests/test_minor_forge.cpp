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
#include <random>
#include <set>

#include "doctest.h"
#include "flatwall/gen_verify.hpp"
#include "flatwall/minor_forge.hpp"
#include "flatwall/wall.hpp"

using namespace fw;

namespace {

bool is_permutation_of_1_to_t(const std::vector<int>& s) {
    std::vector<int> c = s;
    std::sort(c.begin(), c.end());
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != static_cast<int>(i) + 1) return false;
    return true;
}

// Every pattern edge of the instance graph is present in the model's pattern.
MinorModel identity_of(const FamilyInstance& inst) { return identity_model(inst.graph()); }

// Host with a pendant vertex hung off every vertex; branch set of v is {v, pendant}.
std::pair<Graph, MinorModel> padded_host(const FamilyInstance& inst) {
    Graph h = inst.graph();
    const int n = h.n();
    Graph g(2 * n);
    for (auto [u, v] : h.edges()) g.add_edge(u, v);
    std::vector<VertexSet> sets;
    for (int v = 0; v < n; ++v) {
        g.add_edge(v, n + v);
        sets.push_back({v, n + v});
    }
    MinorModel m;
    m.pattern = h;
    m.branch_sets = sets;
    fill_witnesses(g, m);
    return {g, m};
}

void check_clique(const Graph& g, const MinorModel& k, int t) {
    CHECK(k.pattern.n() == t);
    CHECK(static_cast<int>(k.pattern.edges().size()) == t * (t - 1) / 2);
    auto rep = validate_minor_model(g, k);
    CHECK_MESSAGE(rep.ok(), rep.clause);
}

// A random member of H3. Endpoints go anywhere the definition allows; some y
// land in the top and bottom bands so both extraction routes are exercised.
FamilyInstance random_h3(int t, std::mt19937& rng, double band_share) {
    const int T = t * (t - 1) / 2, n = 10 * T + 6;
    const int h = 4 * t + 1 + static_cast<int>(rng() % 4);
    for (;;) {
        std::vector<std::pair<int, int>> xs;
        int c = t + 1 + static_cast<int>(rng() % 3);
        for (int k = 0; k < n; ++k) {
            const int row = 2 * t + 1 + static_cast<int>(rng() % static_cast<unsigned>(h - 4 * t));
            xs.push_back({row, c});
            c += 2 * t + 3 + static_cast<int>(rng() % 3);
        }
        const int r = c + static_cast<int>(rng() % 3);
        std::set<std::pair<int, int>> used(xs.begin(), xs.end());
        std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> e;
        std::uniform_real_distribution<double> coin(0, 1);
        bool ok = true;
        for (auto x : xs) {
            bool placed = false;
            for (int tries = 0; tries < 200 && !placed; ++tries) {
                int row;
                if (coin(rng) < band_share)
                    row = coin(rng) < 0.5 ? 1 + static_cast<int>(rng() % t) : h - static_cast<int>(rng() % t);
                else
                    row = t + 1 + static_cast<int>(rng() % static_cast<unsigned>(h - 2 * t));
                const int off = (t + 2 + static_cast<int>(rng() % (3 * t))) * (rng() % 2 ? 1 : -1);
                const int col = x.second + off;
                if (col <= t || col >= r) continue;
                if (!used.insert({row, col}).second) continue;
                e.push_back({x, {row, col}});
                placed = true;
            }
            if (!placed) ok = false;
        }
        if (!ok) continue;
        auto inst = make_family_instance(Family::H3, t, h, r, e);
        if (validate_family(inst).ok()) return inst;
    }
}

}  // namespace

TEST_CASE("minor_forge: swap sequence") {
    CHECK(swap_sequence(3) == std::vector<std::vector<int>>{{1, 2, 3}, {2, 1, 3}, {2, 3, 1}, {3, 2, 1}});
    for (int t = 2; t <= 8; ++t) {
        auto s = swap_sequence(t);
        const int T = t * (t - 1) / 2;
        REQUIRE(static_cast<int>(s.size()) == T + 1);
        for (auto& p : s) CHECK(is_permutation_of_1_to_t(p));
        std::vector<int> rev(static_cast<size_t>(t));
        for (int i = 0; i < t; ++i) rev[static_cast<size_t>(i)] = t - i;
        CHECK(s.back() == rev);
        // block S_k holds the i-swaps for i = 1..t-k in order
        size_t idx = 1;
        for (int k = 1; k < t; ++k)
            for (int i = 1; i <= t - k; ++i, ++idx) CHECK(swap_position(s[idx - 1], s[idx]) == i);
        // each pair of labels is swapped exactly once
        std::set<std::pair<int, int>> seen;
        for (size_t i = 1; i < s.size(); ++i) {
            int j = swap_position(s[i - 1], s[i]);
            int a = s[i - 1][static_cast<size_t>(j - 1)], b = s[i - 1][static_cast<size_t>(j)];
            CHECK(seen.insert({std::min(a, b), std::max(a, b)}).second);
        }
    }
    CHECK_THROWS_AS(swap_sequence(1), ParameterError);
    CHECK(swap_position({1, 2, 3}, {1, 3, 2}) == 2);
    CHECK(swap_position({1, 2, 3}, {3, 2, 1}) == 0);
    CHECK(swap_position({1, 2, 3}, {1, 2, 3}) == 0);
}

TEST_CASE("minor_forge: canonical instances belong to their families") {
    for (Family f : {Family::HStar, Family::H1, Family::H2, Family::H3})
        for (int t = 2; t <= 6; ++t) {
            auto inst = build_family_instance(f, t);
            auto rep = validate_family(inst);
            CHECK_MESSAGE(rep.ok(), family_name(f) << " t=" << t << ": " << rep.clause);
        }
    auto hs = build_family_instance(Family::HStar, 3);
    CHECK(hs.grid.h == 6);
    CHECK(hs.grid.r == 10);
    CHECK(hs.extra.size() == 6);
    CHECK(build_family_instance(Family::H3, 3).extra.size() == 36);
    CHECK(build_family_instance(Family::H2, 4).extra.size() == 14);
    CHECK(build_family_instance(Family::H1, 5).extra.size() == 10);
}

TEST_CASE("minor_forge: family violations are named") {
    auto clause = [](const FamilyInstance& i) { return validate_family(i).clause; };
    // H1 with endpoints four columns apart, t = 3 needs more than five
    auto near = make_family_instance(Family::H1, 3, 7, 30, {{{4, 2}, {4, 6}}, {{4, 12}, {4, 20}}, {{4, 26}, {4, 29}}});
    CHECK(clause(near) == "H1 endpoints not separated by t+2 columns");
    auto low = make_family_instance(Family::H1, 3, 6, 30, {{{4, 2}, {4, 8}}, {{4, 14}, {4, 20}}, {{4, 26}, {4, 29}}});
    CHECK(clause(low) == "H1 needs h > 2t");
    auto first = make_family_instance(Family::H1, 3, 7, 30, {{{4, 1}, {4, 8}}, {{4, 14}, {4, 20}}, {{4, 26}, {4, 29}}});
    CHECK(clause(first) == "H1 endpoint in the first column");
    auto band = make_family_instance(Family::H1, 3, 7, 30, {{{3, 2}, {4, 8}}, {{4, 14}, {4, 20}}, {{4, 26}, {4, 29}}});
    CHECK(clause(band) == "H1 endpoint outside the middle band");

    auto h2 = build_family_instance(Family::H2, 3);
    h2.extra[0].second = h2.grid.v(6, h2.grid.col_of(h2.extra[0].second));
    CHECK(clause(h2) == "H2 y-endpoint outside G_1 and G_2");

    auto h3 = build_family_instance(Family::H3, 3);
    h3.extra.pop_back();
    CHECK(clause(h3) == "H3 needs exactly 10T+6 extra edges");
    auto h3b = build_family_instance(Family::H3, 2);
    h3b.extra[0].second = h3b.grid.v(3, h3b.grid.col_of(h3b.extra[0].first) + 3);
    CHECK(clause(h3b) == "H3 edge endpoints not separated by t+1 columns");

    auto hs = build_family_instance(Family::HStar, 3);
    hs.extra.pop_back();
    CHECK(clause(hs) == "H* cross edges differ from the two diagonals of each cell L_i");
}

TEST_CASE("minor_forge: clique extraction from every family") {
    for (Family f : {Family::HStar, Family::H1, Family::H2, Family::H3})
        for (int t = 2; t <= 5; ++t) {
            CAPTURE(family_name(f));
            CAPTURE(t);
            auto inst = build_family_instance(f, t);
            Graph h = inst.graph();
            auto k = clique_from_family(h, inst, identity_of(inst));
            check_clique(h, k, t);
            auto [g, m] = padded_host(inst);
            auto k2 = clique_from_family(g, inst, m);
            check_clique(g, k2, t);
        }
}

TEST_CASE("minor_forge: small instances agree with exhaustive search") {
    // H* for t = 2 and t = 3 fit under the brute-force vertex cap.
    for (int t = 2; t <= 3; ++t) {
        auto inst = build_family_instance(Family::HStar, t);
        Graph h = inst.graph();
        REQUIRE(brute_force_minor(h, t).has_value());
        check_clique(h, clique_from_hstar(h, inst, identity_of(inst)), t);
    }
}

TEST_CASE("minor_forge: random H3 instances through both routes") {
    std::mt19937 rng(20261019);
    int via_bands = 0, via_blocks = 0;
    for (int t = 2; t <= 4; ++t)
        for (int rep = 0; rep < 6; ++rep) {
            const double share = rep % 3 == 0 ? 0.6 : 0.05;
            auto inst = random_h3(t, rng, share);
            const int T = t * (t - 1) / 2;
            int bands = 0;
            for (auto [x, y] : inst.extra)
                if (inst.grid.row_of(y) <= t || inst.grid.row_of(y) > inst.grid.h - t) ++bands;
            (bands >= 2 * T + 2 ? via_bands : via_blocks)++;
            CAPTURE(family_to_json(inst).dump());
            Graph h = inst.graph();
            check_clique(h, clique_from_h3(h, inst, identity_of(inst)), t);
        }
    CHECK(via_bands > 0);
    CHECK(via_blocks > 0);
}

TEST_CASE("minor_forge: grasp by a wall") {
    Wall w = identity_wall(6, 6);
    MinorModel singles = clique_model(w.tmpl.g, {{w.row(1)[0]}, {w.row(3)[0]}, {w.row(5)[0]}});
    CHECK_FALSE(grasped_by(w, singles, 3));
    // branch set k crosses columns 1..3 of row 2k: it meets three columns
    std::vector<VertexSet> sets;
    for (int k = 1; k <= 3; ++k) {
        Path row = w.row(2 * k);
        sets.push_back(VertexSet(row.begin(), row.begin() + 6));
    }
    MinorModel crossing;
    crossing.pattern = Graph(3);
    crossing.branch_sets = sets;
    CHECK(grasped_by(w, crossing, 3));
    CHECK_FALSE(grasped_by(w, crossing, 4));

    // A wall that shares no vertex with the model cannot grasp it.
    auto inst = build_family_instance(Family::H1, 3);
    Graph h = inst.graph();
    Wall far = identity_wall(2, 2);
    for (Vertex& v : far.branch) v += h.n();
    for (Path& p : far.edge_paths)
        for (Vertex& v : p) v += h.n();
    CHECK_THROWS_AS(clique_from_h1(h, inst, identity_of(inst), &far), std::logic_error);
}

TEST_CASE("minor_forge: preconditions") {
    auto inst = build_family_instance(Family::H1, 3);
    Graph h = inst.graph();
    CHECK_THROWS_AS(clique_from_h2(h, inst, identity_of(inst)), PreconditionError);
    auto bad = inst;
    bad.extra.pop_back();
    CHECK_THROWS_AS(clique_from_h1(bad.graph(), bad, identity_model(bad.graph())), PreconditionError);
    MinorModel m = identity_of(inst);
    m.branch_sets[0] = {m.branch_sets[0][0], m.branch_sets[5][0]};
    CHECK_THROWS_AS(clique_from_h1(h, inst, m), PreconditionError);
}

TEST_CASE("minor_forge: select_unconflicted_edges") {
    // a directed path of blocks 1 -> 2 -> 3 -> 4 -> 5: alternate levels survive
    auto s = select_unconflicted_edges({{1, 2}, {2, 3}, {3, 4}, {4, 5}});
    CHECK(s.size() == 2);
    std::set<int> xs, ys;
    std::vector<std::pair<int, int>> e{{1, 2}, {2, 3}, {3, 4}, {4, 5}};
    for (int k : s) {
        xs.insert(e[static_cast<size_t>(k)].first);
        ys.insert(e[static_cast<size_t>(k)].second);
    }
    for (int b : xs) CHECK_FALSE(ys.count(b));
    // the minority direction is discarded
    auto s2 = select_unconflicted_edges({{1, 3}, {2, 5}, {4, 6}, {7, 0}});
    CHECK(s2 == std::vector<int>{0, 1, 2});
    // an in-star keeps every edge
    CHECK(select_unconflicted_edges({{1, 5}, {2, 5}, {3, 5}}).size() == 3);
    CHECK_THROWS_AS(select_unconflicted_edges({{1, 1}}), PreconditionError);
    CHECK_THROWS_AS(select_unconflicted_edges({{1, 2}, {1, 3}}), PreconditionError);
    // random forests: result has no block holding both an x and a y, and keeps a quarter
    std::mt19937 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const int nb = 4 + static_cast<int>(rng() % 30);
        std::vector<std::pair<int, int>> eb;
        for (int b = 0; b < nb; ++b)
            if (rng() % 3) {
                int y = static_cast<int>(rng() % nb);
                if (y != b) eb.push_back({b, y});
            }
        std::vector<int> out;
        try {
            out = select_unconflicted_edges(eb);
        } catch (const PreconditionError&) {
            continue;  // random digraph had a cycle
        }
        std::set<int> ox, oy;
        for (int k : out) {
            ox.insert(eb[static_cast<size_t>(k)].first);
            oy.insert(eb[static_cast<size_t>(k)].second);
        }
        for (int b : ox) CHECK_FALSE(oy.count(b));
        CHECK(4 * out.size() >= eb.size());
    }
}

TEST_CASE("minor_forge: json round trip") {
    for (Family f : {Family::HStar, Family::H1, Family::H2, Family::H3}) {
        auto inst = build_family_instance(f, 3);
        auto back = family_from_json(family_to_json(inst));
        CHECK(back.family == f);
        CHECK(back.grid.h == inst.grid.h);
        CHECK(back.grid.r == inst.grid.r);
        CHECK(back.extra == inst.extra);
    }
    CHECK_THROWS_AS(family_from_json(nlohmann::json{{"family", "H9"}, {"t", 3}, {"height", 4}, {"width", 4}, {"edges", nlohmann::json::array()}}),
                    ParameterError);
    CHECK_THROWS_AS(family_from_json(nlohmann::json{{"t", 3}}), StructuralError);
}
