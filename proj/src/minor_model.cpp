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

#include "flatwall/minor_model.hpp"

#include <algorithm>
#include <map>

namespace fw {

namespace {

using EdgeKey = std::pair<Vertex, Vertex>;

EdgeKey key(Vertex a, Vertex b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

ValidationReport validate_minor_model(const Graph& g, const MinorModel& model) {
    const Graph& h = model.pattern;
    if (static_cast<int>(model.branch_sets.size()) != h.n())
        return ValidationReport::structural("branch_sets size differs from pattern vertex count");
    for (const auto& bs : model.branch_sets)
        for (Vertex v : bs)
            if (!g.valid(v)) return ValidationReport::structural("branch set references host vertex " + std::to_string(v));
    for (const auto& w : model.edge_witness) {
        if (!h.valid(w[0]) || !h.valid(w[1]))
            return ValidationReport::structural("witness references pattern vertex out of range");
        if (!g.valid(w[2]) || !g.valid(w[3]))
            return ValidationReport::structural("witness references host vertex out of range");
    }

    std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
    for (Vertex p = 0; p < h.n(); ++p) {
        const auto& bs = model.branch_sets[static_cast<size_t>(p)];
        if (bs.empty()) return ValidationReport::semantic("branch set of pattern vertex " + std::to_string(p) + " is empty");
        for (Vertex v : bs) {
            auto& o = owner[static_cast<size_t>(v)];
            if (o != -1 && o != p)
                return ValidationReport::semantic("branch sets " + std::to_string(o) + " and " + std::to_string(p) +
                                                  " share host vertex " + std::to_string(v));
            o = p;
        }
        if (!is_connected_set(g, bs))
            return ValidationReport::semantic("branch set of pattern vertex " + std::to_string(p) + " is not connected");
    }

    std::map<EdgeKey, bool> witnessed;
    for (const auto& w : model.edge_witness) {
        if (!h.has_edge(w[0], w[1]))
            return ValidationReport::semantic("witness for non-edge (" + std::to_string(w[0]) + "," + std::to_string(w[1]) + ")");
        if (!g.has_edge(w[2], w[3]))
            return ValidationReport::semantic("witness host pair (" + std::to_string(w[2]) + "," + std::to_string(w[3]) +
                                              ") is not an edge");
        if (owner[static_cast<size_t>(w[2])] != w[0] || owner[static_cast<size_t>(w[3])] != w[1])
            return ValidationReport::semantic("witness edge endpoints not in the branch sets of (" + std::to_string(w[0]) +
                                              "," + std::to_string(w[1]) + ")");
        witnessed[key(w[0], w[1])] = true;
    }
    for (auto [a, b] : h.edges())
        if (!witnessed.count({a, b}))
            return ValidationReport::semantic("missing witness for pattern edge (" + std::to_string(a) + "," +
                                              std::to_string(b) + ")");
    return ValidationReport::pass();
}

void fill_witnesses(const Graph& g, MinorModel& model) {
    model.edge_witness.clear();
    std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
    for (size_t p = 0; p < model.branch_sets.size(); ++p)
        for (Vertex v : model.branch_sets[p]) owner[static_cast<size_t>(v)] = static_cast<Vertex>(p);
    std::map<EdgeKey, std::array<Vertex, 4>> best;
    for (auto [u, v] : g.edges()) {
        Vertex a = owner[static_cast<size_t>(u)], b = owner[static_cast<size_t>(v)];
        if (a < 0 || b < 0 || a == b || !model.pattern.has_edge(a, b)) continue;
        auto k = key(a, b);
        if (best.count(k)) continue;
        best[k] = a < b ? std::array<Vertex, 4>{a, b, u, v} : std::array<Vertex, 4>{b, a, v, u};
    }
    for (auto& [k, w] : best) model.edge_witness.push_back(w);
}

ValidationReport validate_embedding(const Graph& g, const ValidEmbedding& emb) {
    const Graph& h = emb.pattern;
    if (static_cast<int>(emb.vertex_images.size()) != h.n())
        return ValidationReport::structural("vertex_images size differs from pattern vertex count");
    std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
    for (Vertex p = 0; p < h.n(); ++p) {
        const auto& img = emb.vertex_images[static_cast<size_t>(p)];
        for (Vertex v : img) {
            if (!g.valid(v)) return ValidationReport::structural("vertex image references host vertex out of range");
            if (owner[static_cast<size_t>(v)] != -1 && owner[static_cast<size_t>(v)] != p)
                return ValidationReport::semantic("vertex images are not disjoint");
            owner[static_cast<size_t>(v)] = p;
        }
        if (!is_connected_set(g, img)) return ValidationReport::semantic("vertex image " + std::to_string(p) + " is not connected");
    }
    std::map<EdgeKey, bool> seen;
    std::vector<char> interior_used(static_cast<size_t>(g.n()), 0);
    for (const auto& [pe, path] : emb.edge_images) {
        auto [a, b] = pe;
        if (!h.valid(a) || !h.valid(b)) return ValidationReport::structural("edge image references pattern vertex out of range");
        for (Vertex v : path)
            if (!g.valid(v)) return ValidationReport::structural("edge image references host vertex out of range");
        if (!h.has_edge(a, b)) return ValidationReport::semantic("edge image for a non-edge");
        if (path.size() < 2 || !is_path(g, path)) return ValidationReport::semantic("edge image is not a host path");
        Vertex s = owner[static_cast<size_t>(path.front())], t = owner[static_cast<size_t>(path.back())];
        if (!((s == a && t == b) || (s == b && t == a)))
            return ValidationReport::semantic("edge image endpoints not in the endpoint images");
        for (size_t i = 1; i + 1 < path.size(); ++i) {
            Vertex v = path[i];
            if (owner[static_cast<size_t>(v)] != -1)
                return ValidationReport::semantic("edge image passes through a vertex image");
            if (interior_used[static_cast<size_t>(v)]) return ValidationReport::semantic("edge images are not internally disjoint");
            interior_used[static_cast<size_t>(v)] = 1;
        }
        seen[key(a, b)] = true;
    }
    for (auto e : h.edges())
        if (!seen.count(e)) return ValidationReport::semantic("pattern edge without an image");
    return ValidationReport::pass();
}

MinorModel embedding_to_model(const Graph& g, const ValidEmbedding& emb) {
    auto rep = validate_embedding(g, emb);
    if (!rep.ok()) throw PreconditionError("invalid embedding: " + rep.clause);
    MinorModel m;
    m.pattern = emb.pattern;
    m.branch_sets = emb.vertex_images;
    std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
    for (size_t p = 0; p < emb.vertex_images.size(); ++p)
        for (Vertex v : emb.vertex_images[p]) owner[static_cast<size_t>(v)] = static_cast<Vertex>(p);
    for (const auto& [pe, path] : emb.edge_images) {
        Path p = path;
        Vertex lo = std::min(pe.first, pe.second), hi = std::max(pe.first, pe.second);
        if (owner[static_cast<size_t>(p.front())] != lo) std::reverse(p.begin(), p.end());
        auto& bs = m.branch_sets[static_cast<size_t>(lo)];
        for (size_t i = 1; i + 1 < p.size(); ++i) bs.push_back(p[i]);
        m.edge_witness.push_back({lo, hi, p[p.size() - 2], p.back()});
    }
    for (auto& bs : m.branch_sets) std::sort(bs.begin(), bs.end());
    std::sort(m.edge_witness.begin(), m.edge_witness.end());
    return m;
}

MinorModel compose_models(const MinorModel& outer, const MinorModel& inner) {
    const Graph& h = outer.pattern;
    if (inner.pattern.n() != static_cast<int>(inner.branch_sets.size()))
        throw StructuralError("inner model shape mismatch");
    for (const auto& bs : inner.branch_sets)
        for (Vertex x : bs)
            if (!h.valid(x)) throw StructuralError("inner model host does not match outer pattern");
    auto rep = validate_minor_model(h, inner);
    if (!rep.ok()) throw PreconditionError("inner model invalid: " + rep.clause);

    std::map<EdgeKey, std::array<Vertex, 4>> ow;
    for (const auto& w : outer.edge_witness) ow[key(w[0], w[1])] = w;

    MinorModel out;
    out.pattern = inner.pattern;
    for (const auto& bs : inner.branch_sets) {
        VertexSet s;
        for (Vertex x : bs) {
            const auto& o = outer.branch_sets[static_cast<size_t>(x)];
            s.insert(s.end(), o.begin(), o.end());
        }
        std::sort(s.begin(), s.end());
        out.branch_sets.push_back(std::move(s));
    }
    for (const auto& w : inner.edge_witness) {
        auto it = ow.find(key(w[2], w[3]));
        if (it == ow.end()) throw PreconditionError("outer model lacks a witness for an edge used by inner");
        auto hw = it->second;
        // orient the host edge so that it matches (w[2], w[3])
        if (hw[0] == w[2])
            out.edge_witness.push_back({w[0], w[1], hw[2], hw[3]});
        else
            out.edge_witness.push_back({w[0], w[1], hw[3], hw[2]});
    }
    return out;
}

MinorModel identity_model(const Graph& h) {
    MinorModel m;
    m.pattern = h;
    for (Vertex v = 0; v < h.n(); ++v) m.branch_sets.push_back({v});
    for (auto [u, v] : h.edges()) m.edge_witness.push_back({u, v, u, v});
    return m;
}

MinorModel clique_model(const Graph& g, std::vector<VertexSet> branch_sets) {
    MinorModel m;
    m.pattern = complete_graph(static_cast<int>(branch_sets.size()));
    for (auto& bs : branch_sets) {
        std::sort(bs.begin(), bs.end());
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    }
    m.branch_sets = std::move(branch_sets);
    fill_witnesses(g, m);
    return m;
}

nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json e = nlohmann::json::array();
    for (auto [u, v] : g.edges()) e.push_back({u, v});
    return {{"n", g.n()}, {"edges", e}};
}

Graph graph_from_json(const nlohmann::json& j) {
    Graph g(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) {
        Vertex u = e.at(0).get<Vertex>(), v = e.at(1).get<Vertex>();
        if (!g.valid(u) || !g.valid(v) || u == v) throw StructuralError("pattern edge out of range");
        g.add_edge(u, v);
    }
    return g;
}

nlohmann::json model_to_json(const MinorModel& m) {
    nlohmann::json j;
    j["pattern"] = graph_to_json(m.pattern);
    j["branch_sets"] = m.branch_sets;
    j["edge_witness"] = m.edge_witness;
    return j;
}

MinorModel model_from_json(const nlohmann::json& j) {
    MinorModel m;
    try {
        m.pattern = graph_from_json(j.at("pattern"));
        m.branch_sets = j.at("branch_sets").get<std::vector<VertexSet>>();
        m.edge_witness = j.at("edge_witness").get<std::vector<std::array<Vertex, 4>>>();
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed model document: ") + e.what());
    }
    return m;
}

}  // namespace fw
