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

#include "flatwall/tdp.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace fw {

namespace {

using Edge = std::pair<Vertex, Vertex>;

Edge key(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// One elementary reduction: the deleted vertices, their attachments, and the
// edges that touched them at the time, each tagged with the reduction that
// created it (-1 for an edge of the input graph).
struct Record {
    VertexSet inner;
    VertexSet cut;
    std::vector<std::pair<Edge, int>> edges;
};

// Applies elementary reductions in place. Vertex ids stay those of the input
// graph; reduced vertices become isolated and dead.
class Reducer {
  public:
    Reducer(const Graph& g, const VertexSet& prot)
        : cur_(g), alive_(static_cast<size_t>(g.n()), 1), prot_(static_cast<size_t>(g.n()), 0), attached_(static_cast<size_t>(g.n())) {
        for (Vertex v : prot) prot_[static_cast<size_t>(v)] = 1;
    }

    const Graph& graph() const { return cur_; }
    const std::vector<char>& alive() const { return alive_; }

    int owner(Edge e) const {
        auto it = vedge_.find(e);
        return it == vedge_.end() ? -1 : find(it->second);
    }

    void reduce(const VertexSet& k) {
        std::vector<char> in_k(alive_.size(), 0);
        for (Vertex v : k) in_k[static_cast<size_t>(v)] = 1;
        std::set<Vertex> cut;
        for (Vertex v : k)
            for (Vertex w : cur_.neighbors(v))
                if (!in_k[static_cast<size_t>(w)]) cut.insert(w);
        if (cut.size() > 3) throw std::logic_error("reduction with more than three attachments");
        Record r;
        r.inner = k;
        std::sort(r.inner.begin(), r.inner.end());
        r.cut.assign(cut.begin(), cut.end());
        for (Vertex v : r.inner)
            for (Vertex w : cur_.neighbors(v)) {
                if (in_k[static_cast<size_t>(w)] && w < v) continue;
                r.edges.push_back({key(v, w), owner(key(v, w))});
            }
        const int id = static_cast<int>(recs_.size());
        parent_.push_back(id);
        for (Vertex v : r.inner)
            for (int old : attached_[static_cast<size_t>(v)]) {
                const int root = find(old);
                if (root != id) parent_[static_cast<size_t>(root)] = id;
            }
        for (Vertex v : r.inner) {
            const std::vector<Vertex> nb = cur_.neighbors(v);
            for (Vertex w : nb) {
                cur_.remove_edge(v, w);
                vedge_.erase(key(v, w));
            }
            alive_[static_cast<size_t>(v)] = 0;
        }
        for (size_t a = 0; a < r.cut.size(); ++a)
            for (size_t b = a + 1; b < r.cut.size(); ++b)
                if (cur_.add_edge(r.cut[a], r.cut[b])) vedge_[key(r.cut[a], r.cut[b])] = id;
        for (Vertex c : r.cut) attached_[static_cast<size_t>(c)].push_back(id);
        recs_.push_back(std::move(r));
    }

    // Reduces every protected-free component of G - s. Returns true if any.
    bool try_cut(const VertexSet& s) {
        std::vector<char> mask = alive_;
        for (Vertex v : s) mask[static_cast<size_t>(v)] = 0;
        bool any = false;
        for (const VertexSet& comp : components(cur_, mask)) {
            if (std::any_of(comp.begin(), comp.end(), [&](Vertex v) { return prot_[static_cast<size_t>(v)] != 0; })) continue;
            reduce(comp);
            any = true;
        }
        return any;
    }

    // All reductions of order at most two, to a fixed point.
    void fixpoint2() {
        for (bool changed = true; changed;) {
            changed = false;
            for (Vertex v = 0; v < cur_.n(); ++v)
                if (alive_[static_cast<size_t>(v)] && !prot_[static_cast<size_t>(v)] && cur_.degree(v) <= 2) {
                    reduce({v});
                    changed = true;
                }
            if (try_cut({})) changed = true;
            for (Vertex a : articulation_points(cur_, alive_))
                if (alive_[static_cast<size_t>(a)] && try_cut({a})) changed = true;
            if (changed) continue;
            for (Vertex u = 0; u < cur_.n() && !changed; ++u) {
                if (!alive_[static_cast<size_t>(u)]) continue;
                std::vector<char> mask = alive_;
                mask[static_cast<size_t>(u)] = 0;
                for (Vertex a : articulation_points(cur_, mask))
                    if (try_cut({u, a})) {
                        changed = true;
                        break;
                    }
            }
        }
    }

    // The largest protected-free component cut off by three vertices, reduced.
    bool step3() {
        VertexSet best;
        for (Vertex u = 0; u < cur_.n(); ++u) {
            if (!alive_[static_cast<size_t>(u)]) continue;
            for (Vertex v = u + 1; v < cur_.n(); ++v) {
                if (!alive_[static_cast<size_t>(v)]) continue;
                std::vector<char> mask = alive_;
                mask[static_cast<size_t>(u)] = mask[static_cast<size_t>(v)] = 0;
                for (Vertex a : articulation_points(cur_, mask)) {
                    mask[static_cast<size_t>(a)] = 0;
                    for (const VertexSet& comp : components(cur_, mask)) {
                        if (comp.size() <= best.size()) continue;
                        if (std::any_of(comp.begin(), comp.end(), [&](Vertex x) { return prot_[static_cast<size_t>(x)] != 0; }))
                            continue;
                        best = comp;
                    }
                    mask[static_cast<size_t>(a)] = 1;
                }
            }
        }
        if (best.empty()) return false;
        reduce(best);
        return true;
    }

    // Replaces the reduction edges of a path in the reduced graph by paths
    // through the deleted parts.
    Path expand(const Path& p) const {
        return expand_with(p, [&](Edge e) { return owner(e); });
    }

    // Root reductions, each with its merged vertex and edge sets.
    std::vector<std::pair<int, FlatPiece>> pieces() const {
        std::map<int, FlatPiece> by_root;
        for (size_t r = 0; r < recs_.size(); ++r) {
            FlatPiece& p = by_root[find(static_cast<int>(r))];
            const Record& rec = recs_[r];
            p.vertices.insert(p.vertices.end(), rec.inner.begin(), rec.inner.end());
            p.vertices.insert(p.vertices.end(), rec.cut.begin(), rec.cut.end());
            for (const auto& [e, via] : rec.edges)
                if (via < 0) p.edges.push_back(e);
        }
        std::vector<std::pair<int, FlatPiece>> out;
        for (auto& [root, p] : by_root) {
            std::sort(p.vertices.begin(), p.vertices.end());
            p.vertices.erase(std::unique(p.vertices.begin(), p.vertices.end()), p.vertices.end());
            std::sort(p.edges.begin(), p.edges.end());
            p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
            out.emplace_back(root, std::move(p));
        }
        return out;
    }

    const VertexSet& cut_of(int r) const { return recs_[static_cast<size_t>(r)].cut; }

  private:
    int find(int r) const {
        while (parent_[static_cast<size_t>(r)] != r) r = parent_[static_cast<size_t>(r)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(r)])];
        return r;
    }

    Path expand_with(const Path& p, const std::function<int(Edge)>& own) const {
        if (p.size() < 2) return p;
        Path out;
        size_t i = 0;
        while (i + 1 < p.size()) {
            const int r = own(key(p[i], p[i + 1]));
            if (r < 0) {
                out.push_back(p[i]);
                ++i;
                continue;
            }
            size_t j = i + 1;
            while (j + 1 < p.size() && own(key(p[j], p[j + 1])) == r) ++j;
            Path sub = route(r, p[i], p[j]);
            out.insert(out.end(), sub.begin(), sub.end() - 1);
            i = j;
        }
        out.push_back(p.back());
        return out;
    }

    // Path a -> b through the deleted part of reduction r.
    Path route(int r, Vertex a, Vertex b) const {
        const Record& rec = recs_[static_cast<size_t>(r)];
        std::map<Vertex, std::vector<Vertex>> adj;
        std::map<Edge, int> via;
        for (const auto& [e, v] : rec.edges) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
            via[e] = v;
        }
        std::set<Vertex> inner(rec.inner.begin(), rec.inner.end());
        std::map<Vertex, Vertex> pred{{a, a}};
        std::deque<Vertex> q{a};
        while (!q.empty() && !pred.count(b)) {
            const Vertex u = q.front();
            q.pop_front();
            for (Vertex w : adj[u]) {
                if (pred.count(w) || (w != b && !inner.count(w))) continue;
                if (u == a && w == b) continue;  // must pass through the deleted part
                pred[w] = u;
                q.push_back(w);
            }
        }
        if (!pred.count(b)) throw std::logic_error("reduction piece does not connect its attachments");
        Path p;
        for (Vertex x = b; x != a; x = pred[x]) p.push_back(x);
        p.push_back(a);
        std::reverse(p.begin(), p.end());
        return expand_with(p, [&](Edge e) {
            auto it = via.find(e);
            return it == via.end() ? -1 : it->second;
        });
    }

    Graph cur_;
    std::vector<char> alive_, prot_;
    std::vector<std::vector<int>> attached_;
    std::map<Edge, int> vedge_;
    std::vector<Record> recs_;
    mutable std::vector<int> parent_;
};

enum class Verdict { Found, None, Unknown };

struct SearchResult {
    Verdict verdict = Verdict::Unknown;
    TwoPaths paths;
};

// Two quick tries: shortest P1 then P2 in the rest, and the other way round.
std::optional<TwoPaths> greedy_pair(const Graph& g, const std::vector<char>& alive, Vertex s1, Vertex t1, Vertex s2, Vertex t2) {
    for (int order = 0; order < 2; ++order) {
        const Vertex a = order ? s2 : s1, b = order ? t2 : t1, c = order ? s1 : s2, d = order ? t1 : t2;
        std::vector<char> mask = alive.empty() ? std::vector<char>(static_cast<size_t>(g.n()), 1) : alive;
        mask[static_cast<size_t>(c)] = mask[static_cast<size_t>(d)] = 0;
        Path p = bfs_path(g, {a}, {b}, mask);
        if (p.empty()) continue;
        mask = alive.empty() ? std::vector<char>(static_cast<size_t>(g.n()), 1) : alive;
        for (Vertex v : p) mask[static_cast<size_t>(v)] = 0;
        Path q = bfs_path(g, {c}, {d}, mask);
        if (q.empty()) continue;
        return order ? TwoPaths{q, p} : TwoPaths{p, q};
    }
    return std::nullopt;
}

// Depth-first enumeration of P1 with reachability pruning. Exhaustive.
std::optional<TwoPaths> dfs_search(const Graph& g, const std::vector<char>& alive, Vertex s1, Vertex t1, Vertex s2, Vertex t2,
                                   std::uint64_t budget) {
    const size_t n = static_cast<size_t>(g.n());
    std::vector<char> base = alive.empty() ? std::vector<char>(n, 1) : alive;
    std::vector<char> on(n, 0);
    Path p1{s1};
    on[static_cast<size_t>(s1)] = 1;
    std::uint64_t used = 0;
    std::optional<TwoPaths> found;
    // distance to t1 orders the branching
    std::vector<int> dist(n, 1 << 29);
    {
        std::deque<Vertex> q{t1};
        dist[static_cast<size_t>(t1)] = 0;
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop_front();
            for (Vertex w : g.neighbors(u))
                if (base[static_cast<size_t>(w)] && w != s2 && w != t2 && dist[static_cast<size_t>(w)] > dist[static_cast<size_t>(u)] + 1) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(u)] + 1;
                    q.push_back(w);
                }
        }
    }
    std::function<bool(Vertex)> go = [&](Vertex u) -> bool {
        if (++used > budget) throw BudgetExceeded("two-disjoint-paths search exceeded its node budget");
        std::vector<char> rest = base;
        for (Vertex v : p1) rest[static_cast<size_t>(v)] = 0;
        if (u == t1) {
            Path q = bfs_path(g, {s2}, {t2}, rest);
            if (q.empty()) return false;
            found = TwoPaths{p1, q};
            return true;
        }
        if (bfs_path(g, {s2}, {t2}, rest).empty()) return false;
        rest[static_cast<size_t>(u)] = 1;
        rest[static_cast<size_t>(s2)] = rest[static_cast<size_t>(t2)] = 0;
        if (bfs_path(g, {u}, {t1}, rest).empty()) return false;
        std::vector<Vertex> next;
        for (Vertex w : g.neighbors(u))
            if (base[static_cast<size_t>(w)] && !on[static_cast<size_t>(w)] && w != s2 && w != t2) next.push_back(w);
        std::stable_sort(next.begin(), next.end(), [&](Vertex a, Vertex b) { return dist[static_cast<size_t>(a)] < dist[static_cast<size_t>(b)]; });
        for (Vertex w : next) {
            on[static_cast<size_t>(w)] = 1;
            p1.push_back(w);
            if (go(w)) return true;
            p1.pop_back();
            on[static_cast<size_t>(w)] = 0;
        }
        return false;
    };
    go(s1);
    return found;
}

bool planar_with_terminals(const Graph& g, const VertexSet& ring) {
    Graph h(g.n() + 1);
    for (auto [u, v] : g.edges()) h.add_edge(u, v);
    const Vertex omega = g.n();
    for (size_t i = 0; i < ring.size(); ++i) {
        h.add_edge(omega, ring[i]);
        h.add_edge(ring[i], ring[(i + 1) % ring.size()]);
    }
    return is_planar(h);
}

SearchResult solve(const Graph& g, Vertex s1, Vertex t1, Vertex s2, Vertex t2, std::uint64_t budget, bool exhaustive) {
    SearchResult res;
    if (auto quick = greedy_pair(g, {}, s1, t1, s2, t2)) {
        res.verdict = Verdict::Found;
        res.paths = *quick;
        return res;
    }
    Reducer red(g, {s1, t1, s2, t2});
    red.fixpoint2();
    for (;;) {
        if (planar_with_terminals(red.graph(), {s1, s2, t1, t2})) {
            res.verdict = Verdict::None;
            return res;
        }
        if (auto quick = greedy_pair(red.graph(), red.alive(), s1, t1, s2, t2)) {
            res.verdict = Verdict::Found;
            res.paths = {red.expand(quick->p1), red.expand(quick->p2)};
            return res;
        }
        if (!exhaustive) return res;
        if (!red.step3()) break;
        red.fixpoint2();
    }
    auto sol = dfs_search(red.graph(), red.alive(), s1, t1, s2, t2, budget);
    if (!sol) {
        res.verdict = Verdict::None;
        return res;
    }
    res.verdict = Verdict::Found;
    res.paths = {red.expand(sol->p1), red.expand(sol->p2)};
    return res;
}

void check_two_paths(const Graph& g, const TwoPaths& tp, Vertex s1, Vertex t1, Vertex s2, Vertex t2) {
    if (!is_path(g, tp.p1) || !is_path(g, tp.p2)) throw std::logic_error("expanded path is not a path of the input");
    if (tp.p1.front() != s1 || tp.p1.back() != t1 || tp.p2.front() != s2 || tp.p2.back() != t2)
        throw std::logic_error("expanded path has wrong ends");
    std::set<Vertex> a(tp.p1.begin(), tp.p1.end());
    for (Vertex v : tp.p2)
        if (a.count(v)) throw std::logic_error("expanded paths intersect");
}

void check_cycle(const Graph& g, const Path& c) {
    if (c.size() < 3) throw StructuralError("c is not a cycle: fewer than three vertices");
    std::set<Vertex> seen;
    for (size_t i = 0; i < c.size(); ++i) {
        if (!g.valid(c[i])) throw StructuralError("c is not a cycle: vertex out of range");
        if (!seen.insert(c[i]).second) throw StructuralError("c is not a cycle: repeated vertex");
        if (!g.has_edge(c[i], c[(i + 1) % c.size()])) throw StructuralError("c is not a cycle: consecutive vertices not adjacent");
    }
}

// A cross found by fixing P1's ends (c_i, c_k) and letting P2 run between
// the two open arcs through two super-terminals.
std::optional<TwoPaths> find_cross(const Graph& g, const Path& c, std::uint64_t budget, bool exhaustive) {
    const size_t len = c.size();
    std::vector<int> pos(static_cast<size_t>(g.n()), -1);
    for (size_t i = 0; i < len; ++i) pos[static_cast<size_t>(c[i])] = static_cast<int>(i);
    for (size_t i = 0; i < len; ++i)
        for (size_t k = i + 2; k < len; ++k) {
            if (i == 0 && k == len - 1) continue;
            auto in_a = [&](Vertex v) { int p = pos[static_cast<size_t>(v)]; return p > static_cast<int>(i) && p < static_cast<int>(k); };
            auto in_b = [&](Vertex v) { int p = pos[static_cast<size_t>(v)]; return p >= 0 && (p > static_cast<int>(k) || p < static_cast<int>(i)); };
            const Vertex ci = c[i], ck = c[k];
            Graph h(g.n() + 2);
            const Vertex S = g.n(), T = g.n() + 1;
            std::optional<Edge> chord;
            for (auto [u, v] : g.edges()) {
                const bool uc = pos[static_cast<size_t>(u)] >= 0, vc = pos[static_cast<size_t>(v)] >= 0;
                if (!uc && !vc) {
                    h.add_edge(u, v);
                    continue;
                }
                if (uc && vc) {
                    if (key(u, v) == key(ci, ck)) h.add_edge(u, v);
                    if ((in_a(u) && in_b(v)) || (in_a(v) && in_b(u))) {
                        if (!chord) chord = in_a(u) ? Edge{u, v} : Edge{v, u};
                        h.add_edge(S, T);
                    }
                    continue;
                }
                const Vertex cv = uc ? u : v, other = uc ? v : u;
                if (cv == ci || cv == ck)
                    h.add_edge(cv, other);
                else if (in_a(cv))
                    h.add_edge(S, other);
                else
                    h.add_edge(T, other);
            }
            auto res = solve(h, ci, ck, S, T, budget, exhaustive);
            if (res.verdict != Verdict::Found) continue;
            const Path& q = res.paths.p2;
            Path p2;
            if (q.size() == 2) {
                p2 = {chord->first, chord->second};
            } else {
                const Vertex x = q[1], y = q[q.size() - 2];
                Vertex a = -1, b = -1;
                for (Vertex w : g.neighbors(x))
                    if (in_a(w)) {
                        a = w;
                        break;
                    }
                for (Vertex w : g.neighbors(y))
                    if (in_b(w)) {
                        b = w;
                        break;
                    }
                p2.push_back(a);
                p2.insert(p2.end(), q.begin() + 1, q.end() - 1);
                p2.push_back(b);
            }
            TwoPaths out{res.paths.p1, p2};
            if (!is_cross(g, c, out)) throw std::logic_error("assembled cross fails its own check");
            return out;
        }
    return std::nullopt;
}

std::optional<FlatDecomposition> embed(const Graph& g, const Path& c, const Reducer& red) {
    const Graph& cur = red.graph();
    const int n = g.n();
    auto pieces = red.pieces();
    std::set<VertexSet> triples;
    for (const auto& [root, piece] : pieces)
        if (red.cut_of(root).size() == 3) triples.insert(red.cut_of(root));
    Graph h(n + 1 + static_cast<int>(triples.size()));
    for (auto [u, v] : cur.edges()) h.add_edge(u, v);
    for (Vertex v : c) h.add_edge(n, v);
    int m = n + 1;
    for (const VertexSet& t : triples) {
        for (Vertex v : t) h.add_edge(m, v);
        ++m;
    }
    auto rot = planar_embedding(h);
    if (!rot) return std::nullopt;
    FlatDecomposition d;
    d.plane = Graph(n);
    for (auto [u, v] : cur.edges()) d.plane.add_edge(u, v);
    d.rotation.assign(static_cast<size_t>(n), {});
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : (*rot)[static_cast<size_t>(v)])
            if (w < n) d.rotation[static_cast<size_t>(v)].push_back(w);
    for (Vertex v = 0; v < n; ++v)
        if (red.alive()[static_cast<size_t>(v)]) d.g0.push_back(v);
    for (auto& [root, piece] : pieces) d.pieces.push_back(std::move(piece));
    for (const Path& f : trace_faces(d.plane, d.rotation))
        if (same_cyclic_sequence(f, c)) {
            d.outer = f;
            break;
        }
    if (d.outer.empty()) throw std::logic_error("no face of the embedding is bounded by the cycle");
    return d;
}

}  // namespace

std::optional<TwoPaths> two_disjoint_paths(const Graph& g, Vertex s1, Vertex t1, Vertex s2, Vertex t2, std::uint64_t budget) {
    for (Vertex v : {s1, t1, s2, t2})
        if (!g.valid(v)) throw ParameterError("terminal out of range");
    std::set<Vertex> distinct{s1, t1, s2, t2};
    if (distinct.size() != 4) throw ParameterError("terminals overlap");
    auto res = solve(g, s1, t1, s2, t2, budget, true);
    if (res.verdict == Verdict::None) return std::nullopt;
    check_two_paths(g, res.paths, s1, t1, s2, t2);
    return res.paths;
}

Graph elementary_reduction(const Graph& g, const VertexSet& protected_set, const Separation& sep, std::vector<Vertex>* old_of_new) {
    const size_t n = static_cast<size_t>(g.n());
    std::vector<char> in_x(n, 0), in_y(n, 0);
    for (Vertex v : sep.side_x) {
        if (!g.valid(v)) throw PreconditionError("separation side holds an invalid vertex");
        in_x[static_cast<size_t>(v)] = 1;
    }
    for (Vertex v : sep.side_y) {
        if (!g.valid(v)) throw PreconditionError("separation side holds an invalid vertex");
        in_y[static_cast<size_t>(v)] = 1;
    }
    VertexSet cut;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!in_x[static_cast<size_t>(v)] && !in_y[static_cast<size_t>(v)]) throw PreconditionError("sides do not cover V(G)");
        if (in_x[static_cast<size_t>(v)] && in_y[static_cast<size_t>(v)]) cut.push_back(v);
    }
    if (cut.size() > 3) throw PreconditionError("separation order exceeds 3");
    for (auto [u, v] : g.edges()) {
        const bool ux = in_x[static_cast<size_t>(u)] && !in_y[static_cast<size_t>(u)];
        const bool vx = in_x[static_cast<size_t>(v)] && !in_y[static_cast<size_t>(v)];
        const bool uy = in_y[static_cast<size_t>(u)] && !in_x[static_cast<size_t>(u)];
        const bool vy = in_y[static_cast<size_t>(v)] && !in_x[static_cast<size_t>(v)];
        if ((ux && vy) || (vx && uy)) throw PreconditionError("an edge crosses the separation");
    }
    for (Vertex v : protected_set)
        if (!g.valid(v) || !in_y[static_cast<size_t>(v)]) throw PreconditionError("protected vertex outside side_y");
    if (cut.size() > 1) {
        // connectivity of the cut through side_x, not using cut-to-cut edges
        Graph x(g.n());
        for (auto [u, v] : g.edges())
            if (in_x[static_cast<size_t>(u)] && in_x[static_cast<size_t>(v)] && !(in_y[static_cast<size_t>(u)] && in_y[static_cast<size_t>(v)]))
                x.add_edge(u, v);
        std::vector<char> mask = in_x;
        for (Vertex v : cut)
            if (bfs_path(x, {cut.front()}, {v}, mask).empty()) throw PreconditionError("cut vertices are not connected inside side_x");
    }
    VertexSet ys;
    for (Vertex v = 0; v < g.n(); ++v)
        if (in_y[static_cast<size_t>(v)]) ys.push_back(v);
    std::vector<Vertex> map;
    Graph out = induced_subgraph(g, ys, &map);
    std::vector<Vertex> new_of_old(n, -1);
    for (size_t i = 0; i < map.size(); ++i) new_of_old[static_cast<size_t>(map[i])] = static_cast<Vertex>(i);
    for (size_t a = 0; a < cut.size(); ++a)
        for (size_t b = a + 1; b < cut.size(); ++b)
            out.add_edge(new_of_old[static_cast<size_t>(cut[a])], new_of_old[static_cast<size_t>(cut[b])]);
    if (old_of_new) *old_of_new = map;
    return out;
}

bool is_cross(const Graph& g, const Path& cycle, const TwoPaths& c) {
    if (!is_path(g, c.p1) || !is_path(g, c.p2)) return false;
    std::map<Vertex, int> pos;
    for (size_t i = 0; i < cycle.size(); ++i) pos[cycle[i]] = static_cast<int>(i);
    std::set<Vertex> a(c.p1.begin(), c.p1.end());
    for (Vertex v : c.p2)
        if (a.count(v)) return false;
    for (const Path* p : {&c.p1, &c.p2}) {
        if (!pos.count(p->front()) || !pos.count(p->back())) return false;
        for (size_t i = 1; i + 1 < p->size(); ++i)
            if (pos.count((*p)[i])) return false;
    }
    const int len = static_cast<int>(cycle.size());
    auto rel = [&](Vertex v) { return (pos[v] - pos[c.p1.front()] + len) % len; };
    const int s2 = rel(c.p2.front()), t1 = rel(c.p1.back()), t2 = rel(c.p2.back());
    return s2 < t1 && t1 < t2;
}

ValidationReport verify_flat_decomposition(const Graph& g, const Path& cycle, const FlatDecomposition& d) {
    const size_t n = static_cast<size_t>(g.n());
    if (d.plane.n() != g.n()) return ValidationReport::structural("plane graph has the wrong vertex count");
    if (d.rotation.size() != n) return ValidationReport::structural("rotation system has the wrong size");
    std::vector<char> in0(n, 0);
    for (Vertex v : d.g0) {
        if (!g.valid(v)) return ValidationReport::structural("G_0 holds an invalid vertex");
        in0[static_cast<size_t>(v)] = 1;
    }
    // edge partition
    std::set<Edge> piece_edges;
    std::vector<int> pieces_at(n, 0);
    for (const FlatPiece& p : d.pieces) {
        std::set<Vertex> pv(p.vertices.begin(), p.vertices.end());
        for (Vertex v : pv) {
            if (!g.valid(v)) return ValidationReport::structural("piece holds an invalid vertex");
            if (!in0[static_cast<size_t>(v)]) pieces_at[static_cast<size_t>(v)]++;
        }
        for (auto [u, v] : p.edges) {
            if (!g.valid(u) || !g.valid(v) || !g.has_edge(u, v)) return ValidationReport::structural("piece edge is not an edge of G");
            if (!pv.count(u) || !pv.count(v)) return ValidationReport::structural("piece edge leaves its piece");
            if (!piece_edges.insert(key(u, v)).second) return ValidationReport::semantic("pieces are not edge-disjoint");
        }
    }
    for (Vertex v = 0; v < g.n(); ++v) {
        if (pieces_at[static_cast<size_t>(v)] > 1) return ValidationReport::semantic("two pieces share a vertex outside G_0");
        if (!in0[static_cast<size_t>(v)] && pieces_at[static_cast<size_t>(v)] == 0)
            return ValidationReport::semantic("vertex covered by neither G_0 nor a piece");
    }
    for (auto [u, v] : g.edges()) {
        if (piece_edges.count({u, v})) continue;
        if (!in0[static_cast<size_t>(u)] || !in0[static_cast<size_t>(v)]) return ValidationReport::semantic("edge of G covered by neither G_0 nor a piece");
        if (!d.plane.has_edge(u, v)) return ValidationReport::semantic("G_0 is not a subgraph of the plane graph");
    }
    for (size_t i = 0; i < cycle.size(); ++i) {
        const Vertex a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        if (!g.valid(a) || !in0[static_cast<size_t>(a)]) return ValidationReport::semantic("C is not a subgraph of G_0");
        if (!g.has_edge(a, b) || piece_edges.count(key(a, b))) return ValidationReport::semantic("C is not a subgraph of G_0");
    }
    for (auto [u, v] : d.plane.edges())
        if (!in0[static_cast<size_t>(u)] || !in0[static_cast<size_t>(v)])
            return ValidationReport::semantic("plane graph has a vertex outside V(G_0)");
    // the drawing
    auto rep = check_rotation_system(d.plane, d.rotation);
    if (!rep.ok()) return rep;
    if (!is_planar(d.plane)) return ValidationReport::semantic("plane graph is not planar");
    auto faces = trace_faces(d.plane, d.rotation);
    long outer_idx = -1;
    for (size_t f = 0; f < faces.size(); ++f)
        if (same_cyclic_sequence(faces[f], d.outer)) {
            outer_idx = static_cast<long>(f);
            break;
        }
    if (outer_idx < 0) return ValidationReport::semantic("outer walk is not a face of the rotation system");
    if (!same_cyclic_sequence(d.outer, cycle)) return ValidationReport::semantic("C does not bound the outer face");
    for (const FlatPiece& p : d.pieces) {
        VertexSet att;
        for (Vertex v : p.vertices)
            if (in0[static_cast<size_t>(v)]) att.push_back(v);
        std::sort(att.begin(), att.end());
        att.erase(std::unique(att.begin(), att.end()), att.end());
        if (att.size() > 3) return ValidationReport::semantic("piece meets G_0 in more than three vertices");
        if (att.size() == 2 && !d.plane.has_edge(att[0], att[1]))
            return ValidationReport::semantic("two attachments of a piece are not adjacent in the plane graph");
        if (att.size() == 3) {
            bool ok = false;
            for (size_t f = 0; f < faces.size() && !ok; ++f) {
                if (static_cast<long>(f) == outer_idx) continue;
                VertexSet fv = faces[f];
                std::sort(fv.begin(), fv.end());
                fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
                ok = fv == att;
            }
            if (!ok) return ValidationReport::semantic("no finite face is incident with exactly the three attachments of a piece");
        }
    }
    return ValidationReport::pass();
}

CrossOrFlat c_cross_or_flat(const Graph& g, const Path& cycle, std::uint64_t budget) {
    check_cycle(g, cycle);
    Reducer red(g, cycle);
    red.fixpoint2();
    CrossOrFlat out;
    for (;;) {
        if (auto d = embed(g, cycle, red)) {
            auto rep = verify_flat_decomposition(g, cycle, *d);
            if (!rep.ok()) throw std::logic_error("flat decomposition fails verification: " + rep.clause);
            out.flat = std::move(d);
            return out;
        }
        if (auto cr = find_cross(g, cycle, budget, false)) {
            out.cross = cr;
            return out;
        }
        if (!red.step3()) break;
        red.fixpoint2();
    }
    out.cross = find_cross(g, cycle, budget, true);
    if (!out.cross) throw std::logic_error("graph is neither flat around the cycle nor crossed");
    return out;
}

nlohmann::json flat_to_json(const FlatDecomposition& d) {
    nlohmann::json j;
    j["g0"] = d.g0;
    j["pieces"] = nlohmann::json::array();
    for (const FlatPiece& p : d.pieces) j["pieces"].push_back({{"vertices", p.vertices}, {"edges", p.edges}});
    j["plane_edges"] = d.plane.edges();
    nlohmann::json rot = nlohmann::json::array();
    for (Vertex v : d.g0) rot.push_back({v, d.rotation[static_cast<size_t>(v)]});
    j["rotation"] = rot;
    j["outer"] = d.outer;
    return j;
}

FlatDecomposition flat_from_json(const nlohmann::json& j, int n) {
    try {
        FlatDecomposition d;
        d.g0 = j.at("g0").get<VertexSet>();
        for (const auto& p : j.at("pieces"))
            d.pieces.push_back({p.at("vertices").get<VertexSet>(), p.at("edges").get<std::vector<Edge>>()});
        d.plane = Graph(n);
        for (auto [u, v] : j.at("plane_edges").get<std::vector<Edge>>()) d.plane.add_edge(u, v);
        d.rotation.assign(static_cast<size_t>(n), {});
        for (const auto& r : j.at("rotation")) {
            const Vertex v = r.at(0).get<Vertex>();
            if (v < 0 || v >= n) throw StructuralError("rotation entry for an invalid vertex");
            d.rotation[static_cast<size_t>(v)] = r.at(1).get<std::vector<Vertex>>();
        }
        d.outer = j.at("outer").get<Path>();
        return d;
    } catch (const nlohmann::json::exception& ex) {
        throw StructuralError(std::string("malformed flat decomposition: ") + ex.what());
    }
}

}  // namespace fw
