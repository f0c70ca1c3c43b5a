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
#include <optional>
#include <vector>

#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/planarity.hpp"
#include "json.hpp"

namespace fw {

inline constexpr std::uint64_t kDefaultSearchBudget = 5'000'000;

struct TwoPaths {
    Path p1;  // s1 -> t1
    Path p2;  // s2 -> t2
};

// Vertex-disjoint paths s1 -> t1 and s2 -> t2, or nullopt when none exist.
// Throws BudgetExceeded when the search needs more than `budget` nodes.
std::optional<TwoPaths> two_disjoint_paths(const Graph& g, Vertex s1, Vertex t1, Vertex s2, Vertex t2,
                                           std::uint64_t budget = kDefaultSearchBudget);

// A separation given by its two vertex sides; side_x and side_y cover V(G),
// meet in the cut, and no edge joins side_x - side_y to side_y - side_x.
struct Separation {
    VertexSet side_x;
    VertexSet side_y;
};

// side_y with a clique on the cut, renumbered in increasing old id order.
Graph elementary_reduction(const Graph& g, const VertexSet& protected_set, const Separation& sep,
                           std::vector<Vertex>* old_of_new = nullptr);

struct FlatPiece {
    VertexSet vertices;
    std::vector<std::pair<Vertex, Vertex>> edges;
};

// Witness that a graph is flat around a cycle C. Vertex ids are those of the
// host; `plane` has the host's vertex count and is empty outside g0.
struct FlatDecomposition {
    VertexSet g0;
    std::vector<FlatPiece> pieces;
    Graph plane;
    Rotation rotation;
    Path outer;
};

ValidationReport verify_flat_decomposition(const Graph& g, const Path& cycle, const FlatDecomposition& d);

struct CrossOrFlat {
    std::optional<TwoPaths> cross;  // endpoints s1, s2, t1, t2 in this order on C
    std::optional<FlatDecomposition> flat;
};

// Either a cross over the cycle or a flat decomposition with the cycle as
// outer face. Throws StructuralError if `cycle` is not a cycle of g.
CrossOrFlat c_cross_or_flat(const Graph& g, const Path& cycle, std::uint64_t budget = kDefaultSearchBudget);

// True iff p1, p2 form a cross over the cycle.
bool is_cross(const Graph& g, const Path& cycle, const TwoPaths& c);

nlohmann::json flat_to_json(const FlatDecomposition& d);
FlatDecomposition flat_from_json(const nlohmann::json& j, int n);

}  // namespace fw
