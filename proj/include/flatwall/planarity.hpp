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
#include <vector>

#include "flatwall/graph.hpp"
#include "flatwall/minor_model.hpp"

namespace fw {

// Cyclic order of neighbours around every vertex; rotation[v] is a
// permutation of g.neighbors(v).
using Rotation = std::vector<std::vector<Vertex>>;

// Planar embedding of g, or nullopt when g is not planar.
std::optional<Rotation> planar_embedding(const Graph& g);
bool is_planar(const Graph& g);

// Face boundary walks of the rotation system. Dart (u,v) is followed by
// (v,w) where w comes right after u in rotation[v].
std::vector<Path> trace_faces(const Graph& g, const Rotation& rot);

// Every rotation is a permutation of its neighbourhood and every connected
// component satisfies Euler's formula for the sphere.
ValidationReport check_rotation_system(const Graph& g, const Rotation& rot);

// True iff `walk` equals `cycle` read cyclically in either direction.
bool same_cyclic_sequence(const Path& walk, const Path& cycle);

VertexSet articulation_points(const Graph& g, const std::vector<char>& allowed = {});

}  // namespace fw
