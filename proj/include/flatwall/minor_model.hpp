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
#include <string>
#include <vector>

#include "flatwall/graph.hpp"
#include "json.hpp"

namespace fw {

// Model of `pattern` in some host: disjoint connected branch sets, one per
// pattern vertex, and one witnessing host edge per pattern edge. A witness is
// stored as {pu, pv, hu, hv} with hu in branch_sets[pu], hv in branch_sets[pv].
struct MinorModel {
    Graph pattern;
    std::vector<VertexSet> branch_sets;
    std::vector<std::array<Vertex, 4>> edge_witness;
};

struct ValidationReport {
    enum class Kind { Ok, Structural, Semantic };
    Kind kind = Kind::Ok;
    std::string clause;

    bool ok() const { return kind == Kind::Ok; }
    static ValidationReport pass() { return {}; }
    static ValidationReport structural(std::string c) { return {Kind::Structural, std::move(c)}; }
    static ValidationReport semantic(std::string c) { return {Kind::Semantic, std::move(c)}; }
};

ValidationReport validate_minor_model(const Graph& g, const MinorModel& model);

// Fill edge_witness with the smallest host edge between each pair of adjacent
// branch sets. Pattern edges with no such host edge are left unwitnessed, so
// validation of the result reports them.
void fill_witnesses(const Graph& g, MinorModel& model);

// Vertex images are connected vertex sets, edge images are host paths whose
// end vertices lie in the two endpoint images.
struct ValidEmbedding {
    Graph pattern;
    std::vector<VertexSet> vertex_images;
    std::vector<std::pair<std::pair<Vertex, Vertex>, Path>> edge_images;
};

ValidationReport validate_embedding(const Graph& g, const ValidEmbedding& emb);

// Interior vertices of every edge image join the branch set of the smaller
// pattern endpoint. Throws PreconditionError naming the violated invariant.
MinorModel embedding_to_model(const Graph& g, const ValidEmbedding& emb);

// outer: H in G, inner: H' in H. Result: H' in G.
MinorModel compose_models(const MinorModel& outer, const MinorModel& inner);

MinorModel identity_model(const Graph& h);

// Model of K_t with the given branch sets (witnesses filled from g).
MinorModel clique_model(const Graph& g, std::vector<VertexSet> branch_sets);

nlohmann::json model_to_json(const MinorModel& m);
MinorModel model_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace fw
