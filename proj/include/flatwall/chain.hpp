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

#include <vector>

#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace fw {

// Basic walls B_1..B_M of height z laid out left to right, joined by
// connector families. connectors[k][i-1] runs from the last vertex of row i of
// basic[k] to the first vertex of row i of basic[k+1]. union_wall is the wall
// W' formed by the basic walls and the connectors; basic[k] occupies its
// columns first_col[k] .. first_col[k] + basic[k].r() - 1.
struct Chain {
    int z = 0;
    std::vector<Wall> basic;
    std::vector<std::vector<Path>> connectors;
    Wall union_wall;
    std::vector<int> first_col;

    int size() const { return static_cast<int>(basic.size()); }
    // V(B_{k-1} + P_{k-1} + B_k + P_k + B_{k+1}), 0-based k, sorted.
    VertexSet neighborhood(int k) const;
    // All host vertices of W', sorted.
    VertexSet vertices() const { return union_wall.vertices(); }
};

// Validates the chain clauses and builds W'. Throws StructuralError naming the
// failed clause.
Chain assemble_chain(const Graph& host, std::vector<Wall> basic, std::vector<std::vector<Path>> connectors);

ValidationReport check_chain(const Graph& host, const Chain& c);

// W' has a brick pattern that lines up across every junction. Chains cut from
// a square wall fail this at each turn of the snake.
bool union_is_elementary(const Chain& c);

// The same wall turned upside down and read right to left.
Wall rotate180(const Wall& w);

// Snake through the horizontal strips of height z of an (nz x nz) wall. Strips
// alternate between turning on the right and on the left; the outermost basic
// wall of each strip side is used up by the turn, leaving n(n-2) basic walls.
// A larger wall is cut down to its top-left (nz x nz) sub-wall first.
Chain cut_wall_to_chain(const Graph& host, const Wall& w, int n, int z);

// The first m basic walls with their connectors.
Chain truncate_chain(const Graph& host, const Chain& c, int m);

nlohmann::json chain_to_json(const Chain& c);
Chain chain_from_json(const Graph& host, const nlohmann::json& j);

}  // namespace fw
