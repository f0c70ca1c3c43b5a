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

#include <string>
#include <vector>

#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace fw {

// sigma_0 .. sigma_T with T = t(t-1)/2: consecutive permutations differ by a
// swap of two adjacent positions and every pair of values is adjacent in some
// permutation. Values are 1-based.
std::vector<std::vector<int>> swap_sequence(int t);

// Position j (1-based) such that b is a j-swap of a, or 0 if none.
int swap_position(const std::vector<int>& a, const std::vector<int>& b);

enum class Family { HStar, H1, H2, H3 };

std::string family_name(Family f);
Family family_from_name(const std::string& s);

// An h x r grid plus extra edges. For H2 and H3 each extra edge is stored as
// (x, y) with x the endpoint in the middle band; for H* and H1 the order is
// (left endpoint, right endpoint).
struct FamilyInstance {
    Family family = Family::HStar;
    int t = 0;
    GridGraph grid;
    std::vector<std::pair<Vertex, Vertex>> extra;

    Graph graph() const;
};

// Smallest member of the family with endpoints on the middle row of the
// middle band at the minimal legal spacing.
FamilyInstance build_family_instance(Family f, int t);

// Grid plus extra edges given as grid coordinates (row, column) pairs.
FamilyInstance make_family_instance(Family f, int t, int h, int r,
                                    const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& edges);

ValidationReport validate_family(const FamilyInstance& inst);

// K_t models extracted from a model `m` of inst.graph() in g. When `grasp` is
// given, the caller asserts that the first block of the instance is a
// contraction of a sub-wall of it; every branch set then meets at least t rows
// or t columns of it, and a failure of that is reported as a logic error.
MinorModel clique_from_hstar(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp = nullptr);
MinorModel clique_from_h1(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp = nullptr);
MinorModel clique_from_h2(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp = nullptr);
MinorModel clique_from_h3(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp = nullptr);
// Dispatch on inst.family.
MinorModel clique_from_family(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp = nullptr);

// Every branch set meets at least t rows or at least t columns of w.
bool grasped_by(const Wall& w, const MinorModel& m, int t);

// Edge k goes from block edge_blocks[k].first (its x-endpoint) to block
// edge_blocks[k].second (its y-endpoint); blocks are numbered left to right.
// Returns indices of at least a quarter of the edges such that no block holds
// both a kept x-endpoint and a kept y-endpoint.
std::vector<int> select_unconflicted_edges(const std::vector<std::pair<int, int>>& edge_blocks);

nlohmann::json family_to_json(const FamilyInstance& inst);
FamilyInstance family_from_json(const nlohmann::json& j);

}  // namespace fw
