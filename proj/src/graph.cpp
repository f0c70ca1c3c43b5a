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

#include "flatwall/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fw {

bool Graph::add_edge(Vertex u, Vertex v) {
    if (!valid(u) || !valid(v)) throw StructuralError("edge endpoint out of range");
    if (u == v) throw StructuralError("self-loop");
    auto& au = adj_[static_cast<size_t>(u)];
    auto it = std::lower_bound(au.begin(), au.end(), v);
    if (it != au.end() && *it == v) return false;
    au.insert(it, v);
    auto& av = adj_[static_cast<size_t>(v)];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    ++m_;
    return true;
}

bool Graph::remove_edge(Vertex u, Vertex v) {
    if (!has_edge(u, v)) return false;
    auto& au = adj_[static_cast<size_t>(u)];
    au.erase(std::lower_bound(au.begin(), au.end(), v));
    auto& av = adj_[static_cast<size_t>(v)];
    av.erase(std::lower_bound(av.begin(), av.end(), u));
    --m_;
    return true;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    if (!valid(u) || !valid(v)) return false;
    const auto& a = adj_[static_cast<size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
}

int Graph::max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(m_);
    for (Vertex u = 0; u < n(); ++u)
        for (Vertex v : adj_[static_cast<size_t>(u)])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph complete_graph(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph grid_graph(int h, int r) {
    if (h < 1 || r < 1) throw ParameterError("grid dimensions must be positive");
    Graph g(h * r);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < r; ++j) {
            if (j + 1 < r) g.add_edge(i * r + j, i * r + j + 1);
            if (i + 1 < h) g.add_edge(i * r + j, (i + 1) * r + j);
        }
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) throw ParameterError("cycle needs at least 3 vertices");
    Graph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

Graph path_graph(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph masked_subgraph(const Graph& g, const std::vector<char>& keep) {
    Graph out(g.n());
    for (auto [u, v] : g.edges())
        if (keep[static_cast<size_t>(u)] && keep[static_cast<size_t>(v)]) out.add_edge(u, v);
    return out;
}

Graph induced_subgraph(const Graph& g, const VertexSet& vs, std::vector<Vertex>* old_of_new) {
    std::vector<Vertex> idx(static_cast<size_t>(g.n()), -1);
    VertexSet sorted = vs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) idx[static_cast<size_t>(sorted[i])] = static_cast<Vertex>(i);
    Graph out(static_cast<int>(sorted.size()));
    for (Vertex u : sorted)
        for (Vertex v : g.neighbors(u))
            if (idx[static_cast<size_t>(v)] >= 0 && u < v)
                out.add_edge(idx[static_cast<size_t>(u)], idx[static_cast<size_t>(v)]);
    if (old_of_new) *old_of_new = sorted;
    return out;
}

std::vector<char> make_mask(int n, const VertexSet& vs, bool value) {
    std::vector<char> m(static_cast<size_t>(n), value ? 0 : 1);
    for (Vertex v : vs) m[static_cast<size_t>(v)] = value ? 1 : 0;
    return m;
}

Path bfs_path(const Graph& g, const VertexSet& from, const VertexSet& to,
              const std::vector<char>& allowed) {
    const size_t n = static_cast<size_t>(g.n());
    auto ok = [&](Vertex v) { return allowed.empty() || allowed[static_cast<size_t>(v)]; };
    std::vector<char> is_target(n, 0);
    for (Vertex v : to)
        if (ok(v)) is_target[static_cast<size_t>(v)] = 1;
    std::vector<Vertex> pred(n, -2);
    std::deque<Vertex> q;
    VertexSet starts = from;
    std::sort(starts.begin(), starts.end());
    for (Vertex s : starts) {
        if (!ok(s) || pred[static_cast<size_t>(s)] != -2) continue;
        if (is_target[static_cast<size_t>(s)]) return {s};
        pred[static_cast<size_t>(s)] = -1;
        q.push_back(s);
    }
    while (!q.empty()) {
        Vertex u = q.front();
        q.pop_front();
        for (Vertex v : g.neighbors(u)) {
            if (!ok(v) || pred[static_cast<size_t>(v)] != -2) continue;
            pred[static_cast<size_t>(v)] = u;
            if (is_target[static_cast<size_t>(v)]) {
                Path p;
                for (Vertex x = v; x != -1; x = pred[static_cast<size_t>(x)]) p.push_back(x);
                std::reverse(p.begin(), p.end());
                return p;
            }
            q.push_back(v);
        }
    }
    return {};
}

std::vector<VertexSet> components(const Graph& g, const std::vector<char>& allowed) {
    const size_t n = static_cast<size_t>(g.n());
    std::vector<char> seen(n, 0);
    std::vector<VertexSet> out;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (seen[static_cast<size_t>(s)] || (!allowed.empty() && !allowed[static_cast<size_t>(s)])) continue;
        VertexSet comp{s};
        seen[static_cast<size_t>(s)] = 1;
        for (size_t k = 0; k < comp.size(); ++k)
            for (Vertex v : g.neighbors(comp[k])) {
                if (seen[static_cast<size_t>(v)]) continue;
                if (!allowed.empty() && !allowed[static_cast<size_t>(v)]) continue;
                seen[static_cast<size_t>(v)] = 1;
                comp.push_back(v);
            }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_connected_set(const Graph& g, const VertexSet& vs) {
    if (vs.empty()) return false;
    for (Vertex v : vs)
        if (!g.valid(v)) return false;
    auto mask = make_mask(g.n(), vs);
    VertexSet stack{vs.front()};
    std::vector<char> seen(static_cast<size_t>(g.n()), 0);
    seen[static_cast<size_t>(vs.front())] = 1;
    size_t count = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex v : g.neighbors(u))
            if (mask[static_cast<size_t>(v)] && !seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    VertexSet uniq = vs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    return count == uniq.size();
}

bool is_path(const Graph& g, const Path& p) {
    if (p.empty()) return false;
    std::vector<Vertex> s = p;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    for (Vertex v : p)
        if (!g.valid(v)) return false;
    for (size_t i = 0; i + 1 < p.size(); ++i)
        if (!g.has_edge(p[i], p[i + 1])) return false;
    return true;
}

Graph read_graph(std::istream& in) {
    std::string line;
    Graph g;
    bool header = false;
    size_t declared_m = 0;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "p") {
            long long n = -1, m = -1;
            if (header || !(ls >> n >> m) || n < 0 || m < 0)
                throw StructuralError("bad header at line " + std::to_string(lineno));
            g = Graph(static_cast<int>(n));
            declared_m = static_cast<size_t>(m);
            header = true;
        } else if (tag == "e") {
            long long u = -1, v = -1;
            if (!header || !(ls >> u >> v))
                throw StructuralError("bad edge line " + std::to_string(lineno));
            if (u < 0 || v < 0 || u >= g.n() || v >= g.n())
                throw StructuralError("edge endpoint out of range at line " + std::to_string(lineno));
            if (u == v) throw StructuralError("self-loop at line " + std::to_string(lineno));
            if (!g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
                throw StructuralError("parallel edge at line " + std::to_string(lineno));
        } else {
            throw StructuralError("unknown record '" + tag + "' at line " + std::to_string(lineno));
        }
    }
    if (!header) throw StructuralError("missing 'p' header");
    if (g.m() != declared_m) throw StructuralError("edge count does not match header");
    return g;
}

Graph read_graph_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw StructuralError("cannot open " + path);
    return read_graph(f);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "p " << g.n() << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream f(path);
    if (!f) throw StructuralError("cannot write " + path);
    write_graph(f, g);
}

}  // namespace fw
