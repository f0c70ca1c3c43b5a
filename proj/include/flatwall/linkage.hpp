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

namespace fw {

struct Linkage {
    std::vector<Path> paths;
    VertexSet source_set;
    VertexSet target_set;
};

// Exactly one of `linkage` (k paths) or `cut` (fewer than k vertices) is set.
struct LinkageResult {
    bool linked = false;
    Linkage linkage;
    VertexSet cut;
};

struct LinkageOptions {
    // Restrict routing to vertices with allowed[v] != 0. Empty means all.
    std::vector<char> allowed;
    // Forbid source and target vertices as inner path vertices.
    bool avoid_terminals_inside = false;
};

// Unit vertex-capacity max-flow. Sources that are also targets contribute
// zero-length paths. Returned paths are trimmed so that each one meets the
// source set only in its first vertex and the target set only in its last.
LinkageResult vertex_disjoint_linkage(const Graph& g, const VertexSet& sources, const VertexSet& targets, int k,
                                      const LinkageOptions& opt = {});

// True iff `l` holds k pairwise disjoint source->target paths in g.
bool verify_linkage(const Graph& g, const Linkage& l, int k);

// True iff removing `cut` leaves no path from sources to targets.
bool verify_separator(const Graph& g, const VertexSet& sources, const VertexSet& targets, const VertexSet& cut,
                      const std::vector<char>& allowed = {});

// Re-routing: given k disjoint x->y paths and k-1 disjoint x_sub->y paths that
// avoid x and y internally, return k disjoint x->y paths, internally disjoint
// from x and y, k-1 of which start in x_sub. The vertices of x \ x_sub are
// merged into one vertex before the flow is rerun.
Linkage reroute_linkage(const Graph& h, const VertexSet& x, const VertexSet& y, const VertexSet& x_sub,
                        const Linkage& full, const Linkage& partial);

}  // namespace fw
