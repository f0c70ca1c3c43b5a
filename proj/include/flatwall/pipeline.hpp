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

#include <optional>
#include <string>
#include <vector>

#include "flatwall/chain.hpp"
#include "flatwall/classifier.hpp"
#include "flatwall/graph.hpp"
#include "flatwall/minor_forge.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace fw {

// Raised when a run with overridden sizes reaches a step whose counting
// argument needs the full sizes (too few walls of some type, too few paths).
struct InsufficientSizeError : ParameterError {
    using ParameterError::ParameterError;
};

struct Overrides {
    std::optional<long long> n;  // number of basic walls N
    std::optional<int> z;        // height z' of the basic walls
    std::optional<int> tau;      // core depth
};

// Sizes of a run. Without overrides they are the theorem values:
//   T = t(t-1)/2, tau = 2t, z = w + 4t,
//   N = 8 D^2 (10T+6) + 14T + 8 (weak) or 500T + 200 (strong),
//   R = z (2 + ceil(sqrt N)).
// The chain is cut from the top-left (R x R) sub-wall with `strips` = R / z
// strips, which gives strips (strips - 2) >= N basic walls.
struct Params {
    bool strong = false;
    int t = 0;
    int w = 0;
    int D = 0;  // weak only
    long long T = 0;
    int tau = 0;
    int z = 0;
    long long N = 0;
    long long strips = 0;
    long long R = 0;
    std::vector<std::string> overrides;  // one note per overridden size

    bool overridden() const { return !overrides.empty(); }
};

Params weak_params(int t, int w, int D, const Overrides& o = {});
Params strong_params(int t, int w, const Overrides& o = {});
nlohmann::json params_to_json(const Params& p);

struct RunOptions {
    int threads = 1;
    // Check the apex-search invariants after every iteration.
    bool check_invariants = false;
};

struct Outcome {
    enum class Kind { CliqueMinor, Flat };
    Kind kind = Kind::Flat;
    MinorModel model;        // CliqueMinor
    bool grasped = false;    // CliqueMinor: grasped_by(input wall, model, t)
    VertexSet apex;          // Flat
    FlatWallCertificate cert;  // Flat
    std::string branch;      // the step that produced the outcome
    std::vector<std::string> log;
};

// Certificate checks: the model validates, is a K_t and is grasped by w; or
// the flat certificate verifies in g - A, the apex bound of the mode holds
// and the flat wall has at least (z - 2 tau) rows and columns.
ValidationReport verify_outcome(const Graph& g, const Wall& w, const Params& p, const Outcome& o);

nlohmann::json outcome_to_json(const Outcome& o);
Outcome outcome_from_json(const nlohmann::json& j);

// The first N basic walls of the snake cut from the (R x R) corner of w.
Chain build_chain(const Graph& g, const Wall& w, const Params& p);

Outcome flat_wall_weak(const Graph& g, const Wall& w, const Params& p, const RunOptions& opt = {});
Outcome flat_wall_strong(const Graph& g, const Wall& w, const Params& p, const RunOptions& opt = {});

// A path from x = path.front() in the core interior X_index of wall `index`.
struct MatchedPath {
    int index = 0;
    Path path;
};

// Disjoint paths from the cores of the selected type-2 walls to W' minus the
// neighbourhoods, internally disjoint from W', at most one per wall. The
// selected walls must be type 2 and pairwise at least 2 apart.
std::vector<MatchedPath> gather_bridge_matching(const Graph& g, const Chain& chain, const std::vector<int>& selected,
                                                int tau, int D);

struct H3Minor {
    FamilyInstance inst;
    MinorModel model;
};

// W' plus the first 10T+6 paths, contracted to a member of H3.
H3Minor h3_from_paths(const Graph& g, const Chain& chain, const std::vector<MatchedPath>& paths, int t, int tau);

// Paths whose far end can serve as a y-endpoint of H3: not in the first t
// columns and not in the last column of W'.
std::vector<MatchedPath> usable_for_h3(const Chain& chain, const std::vector<MatchedPath>& paths, int t);

// Working sets of the apex search. q[k].anchor is the position in pstar of
// the path whose inner vertex q[k].path.back() is.
struct ApexSearchState {
    struct QPath {
        int index = 0;
        Path path;
        int anchor = 0;
    };
    std::vector<MatchedPath> pstar;
    std::vector<QPath> q;
};

ValidationReport check_apex_state(const Graph& g, const Chain& chain, int tau, const ApexSearchState& s);

struct ApexResult {
    bool found_paths = false;
    std::vector<MatchedPath> paths;  // found_paths: 10T+6 paths
    VertexSet apex;                  // otherwise: A, sorted
    std::vector<int> walls;          // and B', ascending
    int iterations = 0;
    // How the iterations ended: a path joined to Q, a Q path turned into a
    // path of P* through its anchor, or a path of P* split in two.
    int q_steps = 0, q_joins = 0, splits = 0;
};

ApexResult find_apex_vertices(const Graph& g, const Chain& chain, const Params& p, const RunOptions& opt = {});

// True iff some path from X_k to V(W') - N(B_k) avoids `blocked` and is
// internally disjoint from W'. The path found is stored in `path`.
bool routable(const Graph& g, const Chain& chain, int k, int tau, const std::vector<char>& blocked, Path* path = nullptr);

// Paths from the core interiors of walls to one apex vertex.
struct ApexPaths {
    Vertex apex = -1;
    std::vector<MatchedPath> paths;  // each ends at apex
};

struct ApexCollection {
    std::vector<ApexPaths> sets;   // one per apex vertex, in the order given
    VertexSet inactive;            // apex vertices with 2t paths
    std::vector<int> active_walls; // walls no path starts from
};

ApexCollection collect_apex_paths(const Graph& g, const Chain& chain, int tau, const VertexSet& apex,
                                  const std::vector<int>& walls, int t);

// K_t from t-4 apex vertices with 2t paths each.
MinorModel case1_clique(const Graph& g, const Chain& chain, int tau, const std::vector<ApexPaths>& sets, int t);

// K_t through K_{t,t} from apex vertices whose path counts add up to
// sum (|Q_j| - 1) >= 3t^2 after filtering. `apex` is the whole apex set.
MinorModel case2_clique(const Graph& g, const Chain& chain, int tau, const VertexSet& apex,
                        const std::vector<ApexPaths>& sets, int t);

// Case 3: walls of B* against the inactive apex set A*.
Outcome case3_resolve(const Graph& g, const Chain& chain, const Wall& w, int tau, const VertexSet& astar,
                      const std::vector<int>& walls, int t, const RunOptions& opt = {});

}  // namespace fw
