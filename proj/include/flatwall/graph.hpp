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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fw {

using Vertex = int;
using Path = std::vector<Vertex>;
using VertexSet = std::vector<Vertex>;

// Bad caller-supplied parameters (sizes, ranges, counts).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input that references things that do not exist (ids out of range, wrong shapes).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An input that is well formed but violates a documented precondition.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bounded search ran out of its node budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Simple undirected graph on vertices 0..n-1. Neighbor lists are kept sorted,
// which makes every traversal below visit vertices in ascending id order.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n) : adj_(static_cast<size_t>(n)) {
        if (n < 0) throw ParameterError("negative vertex count");
    }

    int n() const { return static_cast<int>(adj_.size()); }
    size_t m() const { return m_; }

    int add_vertex() {
        adj_.emplace_back();
        return n() - 1;
    }

    // Returns false when the edge is already present.
    bool add_edge(Vertex u, Vertex v);
    bool remove_edge(Vertex u, Vertex v);
    bool has_edge(Vertex u, Vertex v) const;

    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[static_cast<size_t>(v)]; }
    int degree(Vertex v) const { return static_cast<int>(adj_[static_cast<size_t>(v)].size()); }
    int max_degree() const;
    bool valid(Vertex v) const { return v >= 0 && v < n(); }

    // All edges as (u,v) with u<v, lexicographically sorted.
    std::vector<std::pair<Vertex, Vertex>> edges() const;

    bool operator==(const Graph& o) const { return adj_ == o.adj_; }

  private:
    std::vector<std::vector<Vertex>> adj_;
    size_t m_ = 0;
};

Graph complete_graph(int n);
Graph grid_graph(int h, int r);  // v(i,j) = (i-1)*r + (j-1)
Graph cycle_graph(int n);
Graph path_graph(int n);

// Subgraph induced by `keep` (mask of size g.n()); vertex ids are unchanged,
// dropped vertices simply become isolated.
Graph masked_subgraph(const Graph& g, const std::vector<char>& keep);

// Induced subgraph with compacted ids; old_of_new[i] is the original id.
Graph induced_subgraph(const Graph& g, const VertexSet& vs, std::vector<Vertex>* old_of_new);

// Shortest path from any vertex of `from` to any vertex of `to`, using only
// vertices with allowed[v] != 0 (empty mask = everything allowed). Among
// shortest paths the BFS picks the lexicographically smallest predecessor
// chain. Returns an empty path when none exists.
Path bfs_path(const Graph& g, const VertexSet& from, const VertexSet& to,
              const std::vector<char>& allowed = {});

// Connected components of the graph restricted to the mask.
std::vector<VertexSet> components(const Graph& g, const std::vector<char>& allowed = {});

bool is_connected_set(const Graph& g, const VertexSet& vs);
bool is_path(const Graph& g, const Path& p);

std::vector<char> make_mask(int n, const VertexSet& vs, bool value = true);

// Text format: "p <n> <m>" then "e <u> <v>" lines, 0-based; '#' comments.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace fw
