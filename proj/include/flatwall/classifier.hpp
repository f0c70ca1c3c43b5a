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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flatwall/chain.hpp"
#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"
#include "flatwall/tdp.hpp"
#include "flatwall/wall.hpp"
#include "json.hpp"

namespace fw {

// Chain indices are 0-based here: the interior walls are 1 .. N-2.

// The tau-core B'_k of basic wall k: rows tau .. z-tau+1, all columns.
struct CoreWall {
    int index = 0;
    int tau = 0;
    Wall wall;
    Path boundary;  // closed walk a -> b -> c -> d
    Vertex a = -1, b = -1, c = -1, d = -1;
};

CoreWall core_wall(const Chain& chain, int k, int tau);

struct Bridge {
    enum class Kind { Edge, Component };
    Kind kind = Kind::Edge;
    int core = 0;
    // Edge bridges: u is the endpoint inside the core, v the other one.
    Vertex u = -1, v = -1;
    // Component bridges: the vertices of the component of g - V(W').
    VertexSet component;
    VertexSet attachments;  // vertices of W' touched, sorted
    bool neighborhood = false;
};

// Every bridge incident on B'_k: chords from the interior of the core to
// W' - B'_k, then components of g - V(W') touching both, in order of their
// smallest vertex.
std::vector<Bridge> bridges_of(const Graph& g, const Chain& chain, int k, int tau);

// A path from a vertex x of B'_k - Gamma'_k to a vertex y of W' - B'_k whose
// inner vertices avoid W'. For a neighborhood bridge y lies in N(B_k).
Path bridge_path(const Graph& g, const Chain& chain, const Bridge& br, int tau);

enum class WallKind { Type1, Type2, Type3, Type4 };

std::string wall_kind_name(WallKind k);

struct WallType {
    WallKind kind = WallKind::Type4;
    int core = 0;
    int tau = 0;
    std::vector<Bridge> bridges;   // Type1 and Type2
    std::optional<TwoPaths> cross; // Type3: p1 a' -> c', p2 b' -> d'
    VertexSet side_x;              // Type3 and Type4: vertices of X
};

WallType classify(const Graph& g, const Chain& chain, int k, int tau);

// Types of the interior walls 1 .. N-2 (entry k-1 is wall k). Components of
// g - V(W') are computed once; walls are spread over `threads` workers.
std::vector<WallType> classify_all(const Graph& g, const Chain& chain, int tau, int threads = 1);

// Flat wall W* inside g - apex with its separation (side_a, side_b) and a
// flat decomposition of the reduction graph: g[side_b] minus the apex, plus
// the cycle through side_a & side_b in the order of the boundary of W*.
// Vertices of the reduction graph are numbered by the sorted side_b.
struct FlatWallCertificate {
    Wall wall;
    VertexSet apex;
    VertexSet side_a;
    VertexSet side_b;
    VertexSet pegs;
    FlatDecomposition reduction;
    // Piece counts of the L-flat decomposition of X by the four piece types
    // (informational; not checked).
    std::array<int, 4> x_piece_types{0, 0, 0, 0};
};

// The interior wall of B'_k (rows and columns 2 .. end-1) with the
// separation built from the L-flat decomposition of X + L. With a non-empty
// apex set the classification is done in g - apex.
FlatWallCertificate flat_from_type4(const Graph& g, const Chain& chain, int k, int tau, const VertexSet& apex = {});

ValidationReport verify_flat_certificate(const Graph& g, const FlatWallCertificate& cert);

// Cycle through side_a & side_b in boundary order, and the reduction graph.
Path separator_cycle(const FlatWallCertificate& cert);
Graph reduction_graph(const Graph& g, const FlatWallCertificate& cert);

nlohmann::json certificate_to_json(const FlatWallCertificate& cert);
FlatWallCertificate certificate_from_json(const nlohmann::json& j);

// A wall-cross of the tau-core of basic wall `index`.
struct CoreCross {
    int index = 0;
    int tau = 0;
    TwoPaths cross;  // p1 a' -> c', p2 b' -> d'
};

struct Type3Report {
    std::vector<int> selected;  // chain indices implementing the even blocks
};

// K_t from at least 2T type-3 cores with tau > t, through a model of H*.
MinorModel kt_from_type3(const Graph& g, const Chain& chain, const std::vector<CoreCross>& crosses, int t,
                         const Wall* grasp = nullptr, Type3Report* report = nullptr);

// A path of a neighborhood bridge of the tau-core of basic wall `index`, as
// returned by bridge_path.
struct BridgeWitness {
    int index = 0;
    int tau = 0;
    Path path;
};

struct Type1Report {
    std::vector<int> selected;  // 4T+2 indices, pairwise at least 3 apart
    std::vector<int> s1, s2;    // y in the top/bottom t rows, or elsewhere
    std::string route;          // "H2" or "HSTAR"
    std::vector<std::string> notes;
};

// K_t from at least 12T+6 type-1 cores with tau >= 2t.
MinorModel kt_from_type1(const Graph& g, const Chain& chain, const std::vector<BridgeWitness>& witnesses, int t,
                         const Wall* grasp = nullptr, Type1Report* report = nullptr);

}  // namespace fw
