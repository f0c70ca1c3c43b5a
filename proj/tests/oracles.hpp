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

// Independent exhaustive reference solvers used only by tests. They share no
// code with the library routines they check.

#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "flatwall/graph.hpp"

namespace oracle {

using fw::Graph;
using fw::Vertex;

// Enumerate every simple path from s; `visit` returns true to stop.
inline bool each_simple_path(const Graph& g, Vertex s, std::vector<char>& used, std::vector<Vertex>& cur,
                             const std::function<bool(const std::vector<Vertex>&)>& visit) {
    used[static_cast<size_t>(s)] = 1;
    cur.push_back(s);
    bool stop = visit(cur);
    if (!stop)
        for (Vertex v : g.neighbors(s))
            if (!used[static_cast<size_t>(v)] && each_simple_path(g, v, used, cur, visit)) {
                stop = true;
                break;
            }
    cur.pop_back();
    used[static_cast<size_t>(s)] = 0;
    return stop;
}

// Do k vertex-disjoint paths from `src` to `tgt` exist? Plain backtracking.
inline bool linkage_exists(const Graph& g, const std::vector<Vertex>& src, const std::vector<Vertex>& tgt, int k,
                           std::vector<char> used = {}, size_t first = 0) {
    if (k == 0) return true;
    if (used.empty()) used.assign(static_cast<size_t>(g.n()), 0);
    std::vector<char> is_t(static_cast<size_t>(g.n()), 0);
    for (Vertex t : tgt) is_t[static_cast<size_t>(t)] = 1;
    for (size_t i = first; i < src.size(); ++i) {
        Vertex s = src[i];
        if (used[static_cast<size_t>(s)]) continue;
        std::vector<Vertex> cur;
        bool found = each_simple_path(g, s, used, cur, [&](const std::vector<Vertex>& p) {
            if (!is_t[static_cast<size_t>(p.back())]) return false;
            std::vector<char> u2 = used;
            for (Vertex v : p) u2[static_cast<size_t>(v)] = 1;
            return linkage_exists(g, src, tgt, k - 1, u2, i + 1);
        });
        if (found) return true;
    }
    return false;
}

// Two disjoint paths s1-t1 and s2-t2 by exhaustive enumeration of P1.
inline bool two_paths_exist(const Graph& g, Vertex s1, Vertex t1, Vertex s2, Vertex t2) {
    std::vector<char> used(static_cast<size_t>(g.n()), 0);
    used[static_cast<size_t>(s2)] = used[static_cast<size_t>(t2)] = 1;
    std::vector<Vertex> cur;
    return each_simple_path(g, s1, used, cur, [&](const std::vector<Vertex>& p) {
        if (p.back() != t1) return false;
        std::vector<char> mask(static_cast<size_t>(g.n()), 1);
        for (Vertex v : p) mask[static_cast<size_t>(v)] = 0;
        mask[static_cast<size_t>(s2)] = mask[static_cast<size_t>(t2)] = 1;
        std::vector<Vertex> st{s2};
        std::vector<char> seen(static_cast<size_t>(g.n()), 0);
        seen[static_cast<size_t>(s2)] = 1;
        while (!st.empty()) {
            Vertex u = st.back();
            st.pop_back();
            if (u == t2) return true;
            for (Vertex v : g.neighbors(u))
                if (mask[static_cast<size_t>(v)] && !seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = 1;
                    st.push_back(v);
                }
        }
        return false;
    });
}

// K_t minor by trying every map V -> {unused, 1..t}; only for n <= 8.
inline bool has_clique_minor(const Graph& g, int t) {
    const int n = g.n();
    std::vector<int> lab(static_cast<size_t>(n), 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) {
            for (int a = 1; a <= t; ++a) {
                std::vector<Vertex> part;
                for (Vertex v = 0; v < n; ++v)
                    if (lab[static_cast<size_t>(v)] == a) part.push_back(v);
                if (part.empty()) return false;
                std::vector<char> seen(static_cast<size_t>(n), 0);
                std::vector<Vertex> st{part[0]};
                seen[static_cast<size_t>(part[0])] = 1;
                size_t cnt = 0;
                while (!st.empty()) {
                    Vertex u = st.back();
                    st.pop_back();
                    ++cnt;
                    for (Vertex w : g.neighbors(u))
                        if (!seen[static_cast<size_t>(w)] && lab[static_cast<size_t>(w)] == a) {
                            seen[static_cast<size_t>(w)] = 1;
                            st.push_back(w);
                        }
                }
                if (cnt != part.size()) return false;
            }
            std::vector<char> adj(static_cast<size_t>((t + 1) * (t + 1)), 0);
            for (Vertex u = 0; u < n; ++u)
                for (Vertex w : g.neighbors(u)) {
                    int a = lab[static_cast<size_t>(u)], b = lab[static_cast<size_t>(w)];
                    if (a && b && a != b) adj[static_cast<size_t>(a * (t + 1) + b)] = 1;
                }
            for (int a = 1; a <= t; ++a)
                for (int b = a + 1; b <= t; ++b)
                    if (!adj[static_cast<size_t>(a * (t + 1) + b)]) return false;
            return true;
        }
        for (int a = 0; a <= t; ++a) {
            lab[static_cast<size_t>(i)] = a;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

inline Graph random_graph(int n, double p, std::mt19937& rng) {
    Graph g(n);
    std::bernoulli_distribution coin(p);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

}  // namespace oracle
