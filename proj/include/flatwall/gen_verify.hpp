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
#include <utility>
#include <vector>

#include <string>

#include "flatwall/chain.hpp"
#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace fw {

// Exhaustive K_t-minor search for graphs with at most 64 vertices. Returns a
// validated model, or nullopt when no K_t minor exists. Throws BudgetExceeded
// when more than `budget` search nodes would be expanded.
std::optional<MinorModel> brute_force_minor(const Graph& g, int t, std::uint64_t budget = 50'000'000);

struct LowerBoundGraph {
    Graph g;
    int side = 0;  // vertices per row and per column
    int wp = 0, tp = 0;
    std::vector<std::pair<int, int>> black_cells;  // top-left corners (row, col), 0-based
};

// Grid of side w'*t'-1 with vertex (i,j) = i*side + j, plus both diagonals in
// every black cell Q(i*w', j*w'), 0 <= i,j < t'.
LowerBoundGraph gen_lowerbound(int wp, int tp);

// Same, from the target parameters: w' = w/4 - 8, t' = floor(t/30).
LowerBoundGraph gen_lowerbound_for(int w, int t);

// What to plant on interior wall `index` (0-based, 1 .. n-2) of a chain.
// Type 1 variants: "top" (chord to row 1 of the next wall), "side" (chord to
// the first column of the next wall, middle row), "component" (a new vertex
// joined to both ends of the "top" chord). Type 2 uses a chord to row 1 of a
// wall two or more steps away. Type 3 uses a chord between the second and the
// second-to-last row of the core. Type 4 variants: "" (nothing), "pendant"
// (a two-vertex path hanging from the top of the core boundary), "k5" (two new
// vertices forming a K5 with three consecutive boundary vertices).
struct PlantedWall {
    int index = 0;
    int type = 4;
    std::string variant;
};

struct PlantedPlan {
    int n = 0;    // basic walls
    int z = 0;    // height and width of each basic wall
    int tau = 0;  // core depth the plan is meant for
    std::uint64_t seed = 0;
    std::vector<PlantedWall> walls;
};

struct PlantedChain {
    Graph g;
    Wall wall;                // the (z x nz) wall the chain is cut from
    Chain chain;
    std::vector<int> expected;  // type of interior wall k at entry k-1
};

// Plants the gadgets on an existing chain of g and returns the expected type of
// interior wall k at entry k-1.
std::vector<int> plant_on_chain(Graph& g, const Chain& chain, int tau, const std::vector<PlantedWall>& walls,
                                std::uint64_t seed);

// A long wall cut into n basic walls of size z x z with the plan planted on
// top. Positions inside the allowed rows and columns are drawn from `seed`.
// Throws ParameterError on a contradictory plan.
PlantedChain gen_planted_chain(const PlantedPlan& plan);

nlohmann::json plan_to_json(const PlantedPlan& plan);
PlantedPlan plan_from_json(const nlohmann::json& j);

}  // namespace fw
