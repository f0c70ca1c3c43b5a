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

#include "flatwall/planarity.hpp"

#include <algorithm>
#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/property_map/property_map.hpp>
#include <map>

namespace fw {

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::property<boost::vertex_index_t, int>, boost::property<boost::edge_index_t, int>>;
using BEdge = boost::graph_traits<BGraph>::edge_descriptor;

}  // namespace

std::optional<Rotation> planar_embedding(const Graph& g) {
    BGraph bg(static_cast<size_t>(g.n()));
    for (auto [u, v] : g.edges()) boost::add_edge(static_cast<size_t>(u), static_cast<size_t>(v), bg);
    int idx = 0;
    auto eidx = boost::get(boost::edge_index, bg);
    for (auto [it, end] = boost::edges(bg); it != end; ++it) boost::put(eidx, *it, idx++);
    std::vector<std::vector<BEdge>> emb(static_cast<size_t>(g.n()));
    const bool planar = boost::boyer_myrvold_planarity_test(
        boost::boyer_myrvold_params::graph = bg,
        boost::boyer_myrvold_params::embedding = boost::make_iterator_property_map(emb.begin(), boost::get(boost::vertex_index, bg)));
    if (!planar) return std::nullopt;
    Rotation rot(static_cast<size_t>(g.n()));
    for (Vertex v = 0; v < g.n(); ++v)
        for (const BEdge& e : emb[static_cast<size_t>(v)]) {
            const Vertex a = static_cast<Vertex>(boost::source(e, bg)), b = static_cast<Vertex>(boost::target(e, bg));
            rot[static_cast<size_t>(v)].push_back(a == v ? b : a);
        }
    return rot;
}

bool is_planar(const Graph& g) { return planar_embedding(g).has_value(); }

std::vector<Path> trace_faces(const Graph& g, const Rotation& rot) {
    // position of u in rotation[v]
    std::vector<std::map<Vertex, size_t>> pos(static_cast<size_t>(g.n()));
    for (Vertex v = 0; v < g.n(); ++v)
        for (size_t i = 0; i < rot[static_cast<size_t>(v)].size(); ++i) pos[static_cast<size_t>(v)][rot[static_cast<size_t>(v)][i]] = i;
    std::map<std::pair<Vertex, Vertex>, char> used;
    std::vector<Path> faces;
    for (Vertex u = 0; u < g.n(); ++u)
        for (Vertex v : rot[static_cast<size_t>(u)]) {
            if (used[{u, v}]) continue;
            Path face;
            Vertex a = u, b = v;
            while (!used[{a, b}]) {
                used[{a, b}] = 1;
                face.push_back(a);
                const auto& rb = rot[static_cast<size_t>(b)];
                const Vertex c = rb[(pos[static_cast<size_t>(b)].at(a) + 1) % rb.size()];
                a = b;
                b = c;
            }
            faces.push_back(std::move(face));
        }
    return faces;
}

ValidationReport check_rotation_system(const Graph& g, const Rotation& rot) {
    if (static_cast<int>(rot.size()) != g.n()) return ValidationReport::structural("rotation system size differs from vertex count");
    for (Vertex v = 0; v < g.n(); ++v) {
        std::vector<Vertex> r = rot[static_cast<size_t>(v)];
        std::sort(r.begin(), r.end());
        if (r != g.neighbors(v))
            return ValidationReport::structural("rotation at vertex " + std::to_string(v) + " is not a permutation of its neighbours");
    }
    auto faces = trace_faces(g, rot);
    auto comps = components(g);
    std::vector<int> comp_of(static_cast<size_t>(g.n()), -1);
    for (size_t c = 0; c < comps.size(); ++c)
        for (Vertex v : comps[c]) comp_of[static_cast<size_t>(v)] = static_cast<int>(c);
    std::vector<long> vcount(comps.size(), 0), ecount(comps.size(), 0), fcount(comps.size(), 0);
    for (Vertex v = 0; v < g.n(); ++v) {
        vcount[static_cast<size_t>(comp_of[static_cast<size_t>(v)])]++;
        ecount[static_cast<size_t>(comp_of[static_cast<size_t>(v)])] += g.degree(v);
    }
    for (const Path& f : faces) fcount[static_cast<size_t>(comp_of[static_cast<size_t>(f.front())])]++;
    for (size_t c = 0; c < comps.size(); ++c) {
        if (ecount[c] == 0) continue;
        if (vcount[c] - ecount[c] / 2 + fcount[c] != 2) return ValidationReport::semantic("rotation system is not a plane embedding (Euler characteristic)");
    }
    return ValidationReport::pass();
}

bool same_cyclic_sequence(const Path& walk, const Path& cycle) {
    if (walk.size() != cycle.size() || walk.empty()) return false;
    const size_t n = cycle.size();
    auto it = std::find(walk.begin(), walk.end(), cycle.front());
    if (it == walk.end()) return false;
    const size_t off = static_cast<size_t>(it - walk.begin());
    bool fwd = true, bwd = true;
    for (size_t i = 0; i < n; ++i) {
        if (walk[(off + i) % n] != cycle[i]) fwd = false;
        if (walk[(off + n - i) % n] != cycle[i]) bwd = false;
    }
    return fwd || bwd;
}

VertexSet articulation_points(const Graph& g, const std::vector<char>& allowed) {
    const size_t n = static_cast<size_t>(g.n());
    auto ok = [&](Vertex v) { return allowed.empty() || allowed[static_cast<size_t>(v)]; };
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<char> art(n, 0);
    int timer = 0;
    struct Frame {
        Vertex v, parent;
        size_t next;
        int children;
    };
    for (Vertex root = 0; root < g.n(); ++root) {
        if (!ok(root) || disc[static_cast<size_t>(root)] >= 0) continue;
        std::vector<Frame> st{{root, -1, 0, 0}};
        disc[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = timer++;
        while (!st.empty()) {
            Frame& f = st.back();
            const auto& nb = g.neighbors(f.v);
            if (f.next < nb.size()) {
                const Vertex w = nb[f.next++];
                if (!ok(w) || w == f.parent) continue;
                if (disc[static_cast<size_t>(w)] >= 0) {
                    low[static_cast<size_t>(f.v)] = std::min(low[static_cast<size_t>(f.v)], disc[static_cast<size_t>(w)]);
                } else {
                    disc[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = timer++;
                    f.children++;
                    st.push_back({w, f.v, 0, 0});
                }
            } else {
                const Frame done = f;
                st.pop_back();
                if (!st.empty()) {
                    Frame& p = st.back();
                    low[static_cast<size_t>(p.v)] = std::min(low[static_cast<size_t>(p.v)], low[static_cast<size_t>(done.v)]);
                    if (p.parent != -1 && low[static_cast<size_t>(done.v)] >= disc[static_cast<size_t>(p.v)]) art[static_cast<size_t>(p.v)] = 1;
                } else if (done.children > 1) {
                    art[static_cast<size_t>(done.v)] = 1;
                }
            }
        }
    }
    VertexSet out;
    for (Vertex v = 0; v < g.n(); ++v)
        if (art[static_cast<size_t>(v)]) out.push_back(v);
    return out;
}

}  // namespace fw
