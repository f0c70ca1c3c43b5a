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

#include <utility>
#include <vector>

#include "flatwall/graph.hpp"
#include "flatwall/linkage.hpp"
#include "flatwall/minor_model.hpp"
#include "json.hpp"

namespace fw {

// h x r grid with v(i,j) = (i-1)*r + (j-1), 1-based coordinates.
struct GridGraph {
    int h = 0, r = 0;
    Graph g;
    Vertex v(int i, int j) const { return (i - 1) * r + (j - 1); }
    int row_of(Vertex x) const { return x / r + 1; }
    int col_of(Vertex x) const { return x % r + 1; }
};

GridGraph make_grid(int h, int r);

// Elementary wall built from the h x 2r grid by the parity deletion of
// vertical edges and removal of degree-1 vertices. With phase 1 the parity is
// flipped (odd grid columns keep the even vertical edges); sub-walls whose top
// row is an even row of their parent come out this way. Vertex ids follow the
// row-major order of the surviving grid vertices.
//
// The parity may also be chosen per column (col_phase[j-1] for grid columns
// 2j-1 and 2j). Joining walls of opposite parity side by side gives such a
// template; it is a wall in every respect used here except that the bricks do
// not line up across a parity change.
struct ElementaryWall {
    int h = 0, r = 0, phase = 0;
    std::vector<int> col_phase;
    Graph g;
    std::vector<std::pair<int, int>> coord;  // (row, grid column), 1-based
    std::vector<Path> rows;                  // left to right
    std::vector<Path> cols;                  // top to bottom
    Vertex a = -1, b = -1, c = -1, d = -1;   // clockwise from top-left
    VertexSet boundary;                      // vertices of R_1, C_1, R_h, C_r
    VertexSet pegs;                          // degree-2 boundary vertices

    Vertex at(int i, int x) const;
    bool horizontal(Vertex u, Vertex v) const { return coord[static_cast<size_t>(u)].first == coord[static_cast<size_t>(v)].first; }
    // Outer boundary as a closed walk a -> b -> c -> d (first vertex not repeated).
    Path boundary_cycle() const;
    bool uniform() const;

    std::vector<Vertex> index_;  // grid slot -> vertex id or -1
};

ElementaryWall build_elementary_wall(int h, int r, int phase = 0);
ElementaryWall build_wall_template(int h, std::vector<int> col_phase);

// A subdivision of an elementary wall inside a host graph, given by a good
// mapping: branch[x] is the host image of template vertex x, and edge_paths[k]
// is the host path for template edge tmpl.g.edges()[k], oriented from the
// smaller template endpoint. Corners and pegs are the images of the
// template's; they are fixed once the mapping is fixed.
struct Wall {
    ElementaryWall tmpl;
    std::vector<std::pair<Vertex, Vertex>> tmpl_edges;
    std::vector<Vertex> branch;
    std::vector<Path> edge_paths;

    int h() const { return tmpl.h; }
    int r() const { return tmpl.r; }
    int edge_index(Vertex u, Vertex v) const;
    // Host path of template edge (u,v) oriented from u to v.
    Path edge_path(Vertex u, Vertex v) const;
    // Host path along a template path.
    Path host_path(const Path& tmpl_path) const;
    Path row(int i) const { return host_path(tmpl.rows[static_cast<size_t>(i - 1)]); }
    Path col(int j) const { return host_path(tmpl.cols[static_cast<size_t>(j - 1)]); }
    Vertex a() const { return branch[static_cast<size_t>(tmpl.a)]; }
    Vertex b() const { return branch[static_cast<size_t>(tmpl.b)]; }
    Vertex c() const { return branch[static_cast<size_t>(tmpl.c)]; }
    Vertex d() const { return branch[static_cast<size_t>(tmpl.d)]; }
    VertexSet pegs() const;
    VertexSet vertices() const;  // sorted host vertex set
    Path boundary_cycle() const;
    // Host edges used by the wall.
    std::vector<std::pair<Vertex, Vertex>> host_edges() const;
};

// Wall from an elementary template and a good mapping; edge paths are given
// per template edge in tmpl.g.edges() order.
Wall make_wall(ElementaryWall tmpl, std::vector<Vertex> branch, std::vector<Path> edge_paths);

// The template itself viewed as a wall in the graph tmpl.g.
Wall identity_wall(int h, int r);

ValidationReport check_wall(const Graph& host, const Wall& w);

// Sub-wall spanned by rows i1..i2 and columns j1..j2 (1-based, inclusive).
Wall subwall(const Wall& w, int i1, int i2, int j1, int j2);

// True iff every row of `sub` is a sub-path of a row of `parent` and every
// column of `sub` is a sub-path of a column of `parent`.
bool is_subwall(const Wall& parent, const Wall& sub);

// Contract every R_i cap C_j; branch set of grid vertex (i,j) holds the host
// segment R_i cap C_j plus interiors of paths assigned to the smaller grid
// endpoint.
std::pair<GridGraph, MinorModel> contract_to_grid(const Wall& w);

Linkage grid_linkage(const GridGraph& g, const VertexSet& x_sub, const VertexSet& y_sub);
Linkage wall_linkage(const ElementaryWall& w, const VertexSet& x_sub, const VertexSet& y_sub);

struct WallCross {
    Path p1;  // a -> c
    Path p2;  // b -> d
};

// Wall-cross in w plus the edge (u,v). Case 1: u, v off the boundary and
// separated by a row or a column. Case 2: u on the boundary and v in the
// sub-wall spanned by rows 3..h-2 and columns 3..r-2.
WallCross wall_cross_from_chord(const Graph& host, const Wall& w, Vertex u, Vertex v);

// Disjoint, a->c and b->d, and inside `g` (which should contain the chord).
bool verify_wall_cross(const Graph& g, const Wall& w, const WallCross& x);

nlohmann::json wall_to_json(const Wall& w);
Wall wall_from_json(const nlohmann::json& j);

// Remove repeated vertices from a walk by cutting out the closed sub-walks.
Path walk_to_path(const Path& walk);

// Sub-path of `p` between vertices x and y (in the direction x -> y).
Path segment(const Path& p, Vertex x, Vertex y);

}  // namespace fw
