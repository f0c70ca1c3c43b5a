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

#include "flatwall/gen_verify.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>
#include <unordered_set>

namespace fw {

namespace {

using Mask = std::uint64_t;

Mask bit(int v) { return Mask{1} << v; }

// A contracted-and-pruned image of the input: alive super-vertices, each
// named by one original vertex, with the originals it absorbed. Vertices in
// `fixed` have been committed to be whole branch sets.
struct State {
    Mask alive = 0;
    Mask fixed = 0;
    std::vector<Mask> adj;
    std::vector<Mask> members;
};

// Every step keeps the invariant "if the current graph has a K_t model in
// which each fixed vertex is a singleton branch set, the subtree finds one".
class MinorSearch {
  public:
    MinorSearch(const Graph& g, int t, std::uint64_t budget) : t_(t), budget_(budget) {
        const int n = g.n();
        root_.adj.assign(static_cast<size_t>(n), 0);
        root_.members.assign(static_cast<size_t>(n), 0);
        for (Vertex v = 0; v < n; ++v) {
            root_.alive |= bit(v);
            root_.members[static_cast<size_t>(v)] = bit(v);
            for (Vertex u : g.neighbors(v)) root_.adj[static_cast<size_t>(v)] |= bit(u);
        }
    }

    std::optional<std::vector<Mask>> run() { return search(root_); }

  private:
    static Mask nbrs(const State& s, int v) { return s.adj[static_cast<size_t>(v)] & s.alive; }
    static int deg(const State& s, int v) { return std::popcount(nbrs(s, v)); }

    static void remove(State& s, int v) {
        s.alive &= ~bit(v);
        for (Mask m = s.adj[static_cast<size_t>(v)]; m; m &= m - 1) s.adj[static_cast<size_t>(std::countr_zero(m))] &= ~bit(v);
        s.adj[static_cast<size_t>(v)] = 0;
    }

    // Merge v into u.
    static void contract(State& s, int v, int u) {
        Mask nv = s.adj[static_cast<size_t>(v)] & ~bit(u);
        s.members[static_cast<size_t>(u)] |= s.members[static_cast<size_t>(v)];
        remove(s, v);
        s.adj[static_cast<size_t>(u)] |= nv;
        for (Mask m = nv; m; m &= m - 1) s.adj[static_cast<size_t>(std::countr_zero(m))] |= bit(u);
    }

    static bool simplicial(const State& s, int v) {
        Mask nb = nbrs(s, v);
        for (Mask m = nb; m; m &= m - 1) {
            int u = std::countr_zero(m);
            if (((nbrs(s, u) | bit(u)) & nb) != nb) return false;
        }
        return true;
    }

    // A free vertex of degree <= 1, or a free simplicial vertex too small to
    // be a branch set, is never needed for t >= 3. For t >= 4 a
    // free degree-2 vertex can be merged into a free neighbour, or deleted
    // when both neighbours are fixed.
    void reduce(State& s) const {
        for (bool changed = true; changed;) {
            changed = false;
            for (Mask m = s.alive & ~s.fixed; m; m &= m - 1) {
                int v = std::countr_zero(m);
                int d = deg(s, v);
                if (d <= 1 || (d < t_ - 1 && simplicial(s, v))) {
                    remove(s, v);
                    changed = true;
                } else if (t_ >= 4 && d == 2) {
                    Mask freen = nbrs(s, v) & ~s.fixed;
                    if (freen) contract(s, v, std::countr_zero(freen));
                    else remove(s, v);
                    changed = true;
                }
            }
        }
    }

    bool clique(const State& s, Mask cand, int need, std::vector<int>& pick) const {
        if (need == 0) return true;
        if (std::popcount(cand) < need) return false;
        for (Mask m = cand; m; m &= m - 1) {
            int v = std::countr_zero(m);
            pick.push_back(v);
            Mask rest = cand & s.adj[static_cast<size_t>(v)] & ~((bit(v) << 1) - 1);
            if (clique(s, rest, need - 1, pick)) return true;
            pick.pop_back();
        }
        return false;
    }

    std::string key(const State& s) const {
        std::string k(reinterpret_cast<const char*>(&s.fixed), sizeof(Mask));
        for (Mask m = s.alive; m; m &= m - 1) {
            int v = std::countr_zero(m);
            k.append(reinterpret_cast<const char*>(&s.members[static_cast<size_t>(v)]), sizeof(Mask));
        }
        return k;
    }

    std::optional<std::vector<Mask>> search(State s) {
        if (++nodes_ > budget_) throw BudgetExceeded("brute_force_minor: node budget exhausted");
        reduce(s);
        if (std::popcount(s.alive) < t_) return std::nullopt;
        int m2 = 0;
        Mask rich = 0;
        for (Mask m = s.alive; m; m &= m - 1) {
            int v = std::countr_zero(m), d = deg(s, v);
            m2 += d;
            if (d >= t_ - 1) rich |= bit(v);
        }
        if (m2 / 2 < t_ * (t_ - 1) / 2) return std::nullopt;
        if ((s.fixed & ~rich) != 0) return std::nullopt;
        // a clique containing all fixed vertices is an answer
        std::vector<int> pick;
        for (Mask m = s.fixed; m; m &= m - 1) pick.push_back(std::countr_zero(m));
        Mask cand = rich & ~s.fixed;
        for (int v : pick) cand &= s.adj[static_cast<size_t>(v)];
        if (clique(s, cand, t_ - static_cast<int>(pick.size()), pick)) {
            std::vector<Mask> out;
            for (int v : pick) out.push_back(s.members[static_cast<size_t>(v)]);
            return out;
        }
        if (std::popcount(s.fixed) >= t_) return std::nullopt;
        if (!seen_.insert(key(s)).second) return std::nullopt;

        int v = -1, best = 1 << 30;
        for (Mask m = s.alive & ~s.fixed; m; m &= m - 1) {
            int x = std::countr_zero(m), d = deg(s, x);
            if (d < best) best = d, v = x;
        }
        if (v < 0) return std::nullopt;
        // Take a model using as many vertices as possible. If v is unused
        // and has a free neighbour, that neighbour is unused too and the two
        // may be merged; so deleting v is only needed when every neighbour
        // is fixed.
        Mask freen = nbrs(s, v) & ~s.fixed;
        for (Mask m = freen; m; m &= m - 1) {
            State c = s;
            contract(c, v, std::countr_zero(m));
            if (auto r = search(std::move(c))) return r;
        }
        if (best >= t_ - 1 && (nbrs(s, v) & s.fixed) == s.fixed) {
            State f = s;
            f.fixed |= bit(v);
            if (auto r = search(std::move(f))) return r;
        }
        if (freen) return std::nullopt;
        State d = s;
        remove(d, v);
        return search(std::move(d));
    }

    int t_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    State root_;
    std::unordered_set<std::string> seen_;
};

}  // namespace

std::optional<MinorModel> brute_force_minor(const Graph& g, int t, std::uint64_t budget) {
    if (t < 1) throw ParameterError("clique size must be positive");
    if (g.n() > 64) throw ParameterError("brute_force_minor handles at most 64 vertices");
    std::vector<Mask> sets;
    if (t <= 2) {
        // K_1 needs a vertex, K_2 an edge; the general search prunes with t >= 3 rules
        if (t == 1 && g.n() > 0) sets = {bit(0)};
        if (t == 2 && g.m() > 0) {
            auto [u, v] = g.edges().front();
            sets = {bit(u), bit(v)};
        }
        if (sets.empty()) return std::nullopt;
    } else {
        MinorSearch search(g, t, budget);
        auto r = search.run();
        if (!r) return std::nullopt;
        sets = *r;
    }
    std::vector<VertexSet> branch;
    for (Mask m : sets) {
        VertexSet b;
        for (; m; m &= m - 1) b.push_back(std::countr_zero(m));
        branch.push_back(std::move(b));
    }
    std::sort(branch.begin(), branch.end());
    return clique_model(g, std::move(branch));
}

LowerBoundGraph gen_lowerbound(int wp, int tp) {
    if (tp < 1) throw ParameterError("t' must be at least 1");
    if (wp < 3) {
        // with fewer than 3 columns per block the last black cell would need
        // a corner outside the grid
        int c = (tp - 1) * wp;
        throw ParameterError("black cell Q(" + std::to_string(c) + "," + std::to_string(c) +
                             ") does not fit: w' must be at least 3");
    }
    LowerBoundGraph out;
    out.wp = wp;
    out.tp = tp;
    out.side = wp * tp - 1;
    const int s = out.side;
    out.g = Graph(s * s);
    auto v = [s](int i, int j) { return i * s + j; };
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            if (j + 1 < s) out.g.add_edge(v(i, j), v(i, j + 1));
            if (i + 1 < s) out.g.add_edge(v(i, j), v(i + 1, j));
        }
    for (int i = 0; i < tp; ++i)
        for (int j = 0; j < tp; ++j) {
            int x = i * wp, y = j * wp;
            out.black_cells.push_back({x, y});
            out.g.add_edge(v(x, y), v(x + 1, y + 1));
            out.g.add_edge(v(x + 1, y), v(x, y + 1));
        }
    return out;
}

LowerBoundGraph gen_lowerbound_for(int w, int t) { return gen_lowerbound(w / 4 - 8, t / 30); }


namespace {

// Vertex of `p` at a random position strictly between its two ends, chosen
// among those with keep(v). Vertices of degree 2 in g go first, so that a
// planted edge keeps the maximum degree of a wall at 3 where it can.
template <class Keep>
Vertex pick_on(const Graph& g, const Path& p, std::mt19937_64& rng, Keep keep) {
    std::vector<Vertex> low, any;
    for (size_t i = 1; i + 1 < p.size(); ++i) {
        if (!keep(p[i])) continue;
        any.push_back(p[i]);
        if (g.degree(p[i]) <= 2) low.push_back(p[i]);
    }
    const std::vector<Vertex>& c = low.empty() ? any : low;
    if (c.empty()) throw ParameterError("no room to plant on this row");
    return c[std::uniform_int_distribution<size_t>(0, c.size() - 1)(rng)];
}

}  // namespace

std::vector<int> plant_on_chain(Graph& g, const Chain& chain, int tau, const std::vector<PlantedWall>& walls,
                                std::uint64_t seed) {
    const int n = chain.size(), z = chain.z;
    if (n < 3) throw ParameterError("planted chain needs n >= 3");
    if (tau < 1 || 2 * tau >= z) throw ParameterError("planted chain needs 1 <= tau < z/2");
    std::vector<int> expected(static_cast<size_t>(n - 2), 4);
    std::vector<const PlantedWall*> at(static_cast<size_t>(n), nullptr);
    for (const PlantedWall& w : walls) {
        const std::string where = "planted wall " + std::to_string(w.index);
        if (w.index < 1 || w.index > n - 2) throw ParameterError(where + " is not an interior wall");
        if (at[static_cast<size_t>(w.index)]) throw ParameterError(where + " is planted twice");
        if (w.type < 1 || w.type > 4) throw ParameterError(where + " has an unknown type");
        const std::string& v = w.variant;
        const bool ok = (w.type == 1 && (v.empty() || v == "top" || v == "side" || v == "component")) ||
                        ((w.type == 2 || w.type == 3) && v.empty()) || (w.type == 4 && (v.empty() || v == "pendant" || v == "k5"));
        if (!ok) throw ParameterError(where + ": variant '" + v + "' does not fit type " + std::to_string(w.type));
        if (w.type == 2 && w.index + 2 > n - 1 && w.index - 2 < 0)
            throw ParameterError(where + ": no basic wall outside its neighbourhood");
        if (w.type == 3 && z - 2 * tau < 3) throw ParameterError(where + ": the core is too short for a type-3 chord");
        at[static_cast<size_t>(w.index)] = &w;
        expected[static_cast<size_t>(w.index - 1)] = w.type;
    }

    std::mt19937_64 rng(seed);
    for (int k = 1; k <= n - 2; ++k) {
        const PlantedWall* w = at[static_cast<size_t>(k)];
        if (!w) continue;
        const Wall& b = chain.basic[static_cast<size_t>(k)];
        const Wall core = subwall(b, tau, z - tau + 1, 1, b.r());
        VertexSet bd = core.boundary_cycle();
        std::sort(bd.begin(), bd.end());
        auto inner = [&](Vertex v) { return !std::binary_search(bd.begin(), bd.end(), v); };
        auto any = [](Vertex) { return true; };
        const int hc = core.h();
        const Vertex x = pick_on(g, core.row((hc + 1) / 2), rng, inner);
        switch (w->type) {
            case 1: {
                const Wall& next = chain.basic[static_cast<size_t>(k + 1)];
                const Vertex y = w->variant == "side" ? next.col(1)[next.col(1).size() / 2] : pick_on(g, next.row(1), rng, any);
                if (w->variant == "component") {
                    const Vertex f = g.add_vertex();
                    g.add_edge(f, x);
                    g.add_edge(f, y);
                } else {
                    g.add_edge(x, y);
                }
                break;
            }
            case 2: {
                const int far = k + 2 <= n - 1 ? k + 2 : k - 2;
                g.add_edge(x, pick_on(g, chain.basic[static_cast<size_t>(far)].row(1), rng, any));
                break;
            }
            case 3: {
                const Vertex top = pick_on(g, core.row(2), rng, inner);
                g.add_edge(top, pick_on(g, core.row(hc - 1), rng, inner));
                break;
            }
            case 4: {
                const Path top = core.row(1);
                const size_t mid = top.size() / 2;
                if (w->variant == "pendant") {
                    const Vertex p = g.add_vertex(), q = g.add_vertex();
                    g.add_edge(top[mid], p);
                    g.add_edge(p, q);
                } else if (w->variant == "k5") {
                    VertexSet five{top[mid - 1], top[mid], top[mid + 1], g.add_vertex(), g.add_vertex()};
                    for (size_t i = 0; i < five.size(); ++i)
                        for (size_t j = i + 1; j < five.size(); ++j) g.add_edge(five[i], five[j]);
                }
                break;
            }
        }
    }
    return expected;
}

PlantedChain gen_planted_chain(const PlantedPlan& plan) {
    const int n = plan.n, z = plan.z;
    if (n < 3) throw ParameterError("planted chain needs n >= 3");
    if (z < 3) throw ParameterError("planted chain needs z >= 3");
    PlantedChain out;
    out.wall = identity_wall(z, n * z);
    Graph g = out.wall.tmpl.g;
    std::vector<Wall> basic;
    for (int k = 0; k < n; ++k) basic.push_back(subwall(out.wall, 1, z, k * z + 1, (k + 1) * z));
    std::vector<std::vector<Path>> conn(static_cast<size_t>(n - 1));
    for (int k = 0; k + 1 < n; ++k)
        for (int i = 1; i <= z; ++i)
            conn[static_cast<size_t>(k)].push_back(
                segment(out.wall.row(i), basic[static_cast<size_t>(k)].row(i).back(), basic[static_cast<size_t>(k + 1)].row(i).front()));
    Chain pre = assemble_chain(g, basic, conn);
    out.expected = plant_on_chain(g, pre, plan.tau, plan.walls, plan.seed);
    out.chain = assemble_chain(g, std::move(basic), std::move(conn));
    out.g = std::move(g);
    return out;
}

nlohmann::json plan_to_json(const PlantedPlan& plan) {
    nlohmann::json j;
    j["n"] = plan.n;
    j["z"] = plan.z;
    j["tau"] = plan.tau;
    j["seed"] = plan.seed;
    j["walls"] = nlohmann::json::array();
    for (const PlantedWall& w : plan.walls) j["walls"].push_back({{"index", w.index}, {"type", w.type}, {"variant", w.variant}});
    return j;
}

PlantedPlan plan_from_json(const nlohmann::json& j) {
    try {
        PlantedPlan p;
        p.n = j.at("n").get<int>();
        p.z = j.at("z").get<int>();
        p.tau = j.at("tau").get<int>();
        p.seed = j.value("seed", std::uint64_t{0});
        for (const auto& w : j.value("walls", nlohmann::json::array()))
            p.walls.push_back({w.at("index").get<int>(), w.at("type").get<int>(), w.value("variant", std::string{})});
        return p;
    } catch (const nlohmann::json::exception& ex) {
        throw ParameterError(std::string("malformed plan: ") + ex.what());
    }
}

}  // namespace fw
