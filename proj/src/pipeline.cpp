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

#include "flatwall/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "flatwall/linkage.hpp"

namespace fw {

namespace {

long long pair_count(long long t) { return t * (t - 1) / 2; }

long long ceil_sqrt(long long n) {
    long long s = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (s * s < n) ++s;
    while (s > 0 && (s - 1) * (s - 1) >= n) --s;
    return s;
}

bool has(const VertexSet& sorted, Vertex v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

std::string str(long long x) { return std::to_string(x); }

void finish_params(Params& p, const Overrides& o) {
    if (p.t < 2) throw ParameterError("t must be at least 2");
    if (p.w < 1) throw ParameterError("w must be at least 1");
    p.T = pair_count(p.t);
    p.tau = 2 * p.t;
    p.z = p.w + 4 * p.t;
    p.N = p.strong ? 500 * p.T + 200 : 8LL * p.D * p.D * (10 * p.T + 6) + 14 * p.T + 8;
    if (o.n) {
        p.overrides.push_back("N=" + str(*o.n) + " (theorem value " + str(p.N) + ")");
        p.N = *o.n;
    }
    if (o.z) {
        p.overrides.push_back("z'=" + str(*o.z) + " (theorem value " + str(p.z) + ")");
        p.z = *o.z;
    }
    if (o.tau) {
        p.overrides.push_back("tau=" + str(*o.tau) + " (theorem value " + str(p.tau) + ")");
        p.tau = *o.tau;
    }
    if (p.N < 3) throw ParameterError("the chain needs N >= 3 basic walls");
    if (p.tau < 1 || 2 * p.tau >= p.z) throw ParameterError("sizes need 1 <= tau < z'/2");
    p.strips = 2 + ceil_sqrt(p.N);
    p.R = p.z * p.strips;
}

// Where the vertices of W' sit along the chain: 2q on basic wall q, 2q+1
// inside the connectors between walls q and q+1, -1 off W'.
struct ChainInfo {
    const Chain* chain = nullptr;
    int tau = 0;
    std::vector<char> on_wall;
    std::vector<int> pos;
    std::vector<int> core_of;  // wall whose core interior holds v, or -1
    std::vector<VertexSet> interior;
    std::vector<VertexSet> core;

    bool in_n(int k, Vertex v) const {
        const int p = pos[static_cast<size_t>(v)];
        return p >= 2 * k - 2 && p <= 2 * k + 2;
    }
    bool in_y(int k, Vertex v) const { return on_wall[static_cast<size_t>(v)] && !in_n(k, v); }
    bool in_x(int k, Vertex v) const { return core_of[static_cast<size_t>(v)] == k; }
};

ChainInfo chain_info(const Graph& g, const Chain& chain, int tau) {
    ChainInfo ci;
    ci.chain = &chain;
    ci.tau = tau;
    const size_t n = static_cast<size_t>(g.n());
    ci.on_wall = make_mask(g.n(), chain.vertices());
    ci.pos.assign(n, -1);
    ci.core_of.assign(n, -1);
    for (int q = 0; q + 1 < chain.size(); ++q)
        for (const Path& p : chain.connectors[static_cast<size_t>(q)])
            for (Vertex v : p) ci.pos[static_cast<size_t>(v)] = 2 * q + 1;
    for (int q = 0; q < chain.size(); ++q)
        for (Vertex v : chain.basic[static_cast<size_t>(q)].vertices()) ci.pos[static_cast<size_t>(v)] = 2 * q;
    ci.interior.resize(static_cast<size_t>(chain.size()));
    ci.core.resize(static_cast<size_t>(chain.size()));
    for (int k = 1; k + 1 < chain.size(); ++k) {
        const CoreWall c = core_wall(chain, k, tau);
        VertexSet bd = c.boundary;
        std::sort(bd.begin(), bd.end());
        ci.core[static_cast<size_t>(k)] = c.wall.vertices();
        for (Vertex v : ci.core[static_cast<size_t>(k)])
            if (!has(bd, v)) {
                ci.interior[static_cast<size_t>(k)].push_back(v);
                ci.core_of[static_cast<size_t>(v)] = k;
            }
    }
    return ci;
}

// Interior walls k whose neighbourhood holds none of the given vertices.
std::vector<char> walls_touched(const ChainInfo& ci, const VertexSet& vs) {
    const int n = ci.chain->size();
    std::vector<char> hit(static_cast<size_t>(n), 0);
    for (Vertex v : vs) {
        const int p = ci.pos[static_cast<size_t>(v)];
        if (p < 0) continue;
        for (int k = std::max(0, (p - 1) / 2); k <= std::min(n - 1, (p + 2) / 2); ++k)
            if (ci.in_n(k, v)) hit[static_cast<size_t>(k)] = 1;
    }
    return hit;
}

// Breadth-first search from `sources`. Vertices off W' are expanded when
// open(v); vertices of W' other than the sources are never expanded. Returns
// the path to the first vertex with hit(v), or an empty path.
class Search {
  public:
    explicit Search(int n) : parent_(static_cast<size_t>(n), -1), stamp_(static_cast<size_t>(n), 0) {}

    template <class Open, class Hit>
    Path run(const Graph& g, const std::vector<char>& on_wall, const VertexSet& sources, Open open, Hit hit) {
        ++cur_;
        std::vector<Vertex> queue;
        for (Vertex s : sources) {
            if (stamp_[static_cast<size_t>(s)] == cur_) continue;
            stamp_[static_cast<size_t>(s)] = cur_;
            parent_[static_cast<size_t>(s)] = -1;
            queue.push_back(s);
        }
        const size_t nsrc = queue.size();
        for (size_t head = 0; head < queue.size(); ++head) {
            const Vertex v = queue[head];
            if (head >= nsrc && on_wall[static_cast<size_t>(v)]) continue;
            for (Vertex u : g.neighbors(v)) {
                if (stamp_[static_cast<size_t>(u)] == cur_) continue;
                if (hit(u)) {
                    Path p{u};
                    for (Vertex x = v; x >= 0; x = parent_[static_cast<size_t>(x)]) p.push_back(x);
                    std::reverse(p.begin(), p.end());
                    return p;
                }
                if (on_wall[static_cast<size_t>(u)] || !open(u)) continue;
                stamp_[static_cast<size_t>(u)] = cur_;
                parent_[static_cast<size_t>(u)] = v;
                queue.push_back(u);
            }
        }
        return {};
    }

  private:
    std::vector<Vertex> parent_;
    std::vector<int> stamp_;
    int cur_ = 0;
};

Path route_pair(const Graph& g, const ChainInfo& ci, int k, const std::vector<char>& blocked, Search& s) {
    VertexSet src;
    for (Vertex v : ci.interior[static_cast<size_t>(k)])
        if (!blocked[static_cast<size_t>(v)]) src.push_back(v);
    return s.run(
        g, ci.on_wall, src, [&](Vertex u) { return !blocked[static_cast<size_t>(u)]; },
        [&](Vertex u) { return !blocked[static_cast<size_t>(u)] && ci.in_y(k, u); });
}

Graph without(const Graph& g, const VertexSet& apex) {
    Graph h = g;
    for (Vertex a : apex) {
        const std::vector<Vertex> nb = g.neighbors(a);
        for (Vertex u : nb) h.remove_edge(a, u);
    }
    return h;
}

bool disjoint(const Path& a, const Path& b) {
    VertexSet x = a, y = b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    VertexSet both;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
    return both.empty();
}

Path concat(Path a, const Path& b) {
    if (!a.empty() && !b.empty() && a.back() == b.front()) a.insert(a.end(), b.begin() + 1, b.end());
    else a.insert(a.end(), b.begin(), b.end());
    return a;
}

Path reversed(Path p) {
    std::reverse(p.begin(), p.end());
    return p;
}

// Host graph of the edges of W'.
Graph wall_graph(const Graph& g, const Wall& w) {
    Graph h(g.n());
    for (auto [u, v] : w.host_edges()) h.add_edge(u, v);
    return h;
}

// Position of a vertex of W' relative to the rows: on row `row`, or inside
// the vertical path from `up` (on row `row`) to `down` (on row `row`+1).
struct Spot {
    int row = 0;
    Path vertical;
};

Spot locate(const Wall& w, Vertex x) {
    const auto& t = w.tmpl;
    for (size_t v = 0; v < w.branch.size(); ++v)
        if (w.branch[v] == x) return {t.coord[v].first, {}};
    for (size_t k = 0; k < w.edge_paths.size(); ++k) {
        const Path& p = w.edge_paths[k];
        if (std::find(p.begin() + 1, p.end() - 1, x) == p.end() - 1) continue;
        auto [a, b] = w.tmpl_edges[k];
        if (t.horizontal(a, b)) return {t.coord[static_cast<size_t>(a)].first, {}};
        if (t.coord[static_cast<size_t>(a)].first > t.coord[static_cast<size_t>(b)].first) std::swap(a, b);
        return {t.coord[static_cast<size_t>(a)].first, w.edge_path(a, b)};
    }
    throw std::logic_error("vertex not on the wall");
}

// k disjoint paths inside `region` from from[j] to to[j], j in order.
std::vector<Path> ordered_linkage(const Graph& wg, const Wall& region, const VertexSet& from, const VertexSet& to) {
    LinkageOptions opt;
    opt.allowed = make_mask(wg.n(), region.vertices());
    const int k = static_cast<int>(from.size());
    LinkageResult lr = vertex_disjoint_linkage(wg, from, to, k, opt);
    if (!lr.linked) throw std::logic_error("a basic wall is not linked between its sides");
    std::vector<Path> out(static_cast<size_t>(k));
    for (Path& p : lr.linkage.paths) {
        const auto i = std::find(from.begin(), from.end(), p.front()) - from.begin();
        const auto j = std::find(to.begin(), to.end(), p.back()) - to.begin();
        if (i != j || i >= k) throw std::logic_error("linkage across a basic wall changes the order of its paths");
        out[static_cast<size_t>(i)] = std::move(p);
    }
    return out;
}

struct Label {
    Vertex x = -1;
    int wall = 0;
    int q = 0;  // 0-based position among the rows
};

// Disjoint paths in W', the j-th of which runs along rows[j] between the
// labelled walls and passes through every vertex with label j. Each labelled
// wall is crossed inside its neighbourhood; the walls must be pairwise at
// least 3 apart.
std::vector<Path> label_paths(const Graph& wg, const Chain& chain, const std::vector<Path>& rows_of,
                              const std::vector<int>& rows, std::vector<Label> labels) {
    const int k = static_cast<int>(rows.size()), z = chain.z;
    std::sort(labels.begin(), labels.end(), [](const Label& a, const Label& b) { return a.wall < b.wall; });
    for (size_t i = 1; i < labels.size(); ++i)
        if (labels[i].wall < labels[i - 1].wall + 3)
            throw PreconditionError("labelled walls " + str(labels[i - 1].wall) + " and " + str(labels[i].wall) +
                                    " are closer than 3");
    const Wall& wp = chain.union_wall;
    std::vector<Path> out(static_cast<size_t>(k));
    for (const Label& lab : labels) {
        const int i = lab.wall;
        if (i < 1 || i + 1 >= chain.size()) throw PreconditionError("labelled wall is not interior");
        const Wall& left = chain.basic[static_cast<size_t>(i - 1)];
        const Wall& right = chain.basic[static_cast<size_t>(i + 1)];
        const Spot sp = locate(wp, lab.x);
        const int s = sp.row, s_out = sp.vertical.empty() ? s : s + 1;
        if (s <= lab.q || s_out > z - (k - lab.q - 1))
            throw PreconditionError("label vertex too close to the top or bottom of W'");
        std::vector<int> mid_in, mid_out;
        for (int r = 1; r <= lab.q; ++r) mid_in.push_back(r);
        mid_in.push_back(s);
        for (int r = z - (k - lab.q - 1) + 1; r <= z; ++r) mid_in.push_back(r);
        mid_out = mid_in;
        mid_out[static_cast<size_t>(lab.q)] = s_out;
        VertexSet s1, t1, t2, s2;
        for (int j = 0; j < k; ++j) {
            s1.push_back(left.row(rows[static_cast<size_t>(j)]).front());
            t1.push_back(left.row(mid_in[static_cast<size_t>(j)]).back());
            t2.push_back(right.row(mid_out[static_cast<size_t>(j)]).front());
            s2.push_back(right.row(rows[static_cast<size_t>(j)]).back());
        }
        std::vector<Path> l1 = ordered_linkage(wg, left, s1, t1);
        std::vector<Path> l3 = ordered_linkage(wg, right, t2, s2);
        for (int j = 0; j < k; ++j) {
            const size_t jj = static_cast<size_t>(j);
            Path mid;
            if (j != lab.q || sp.vertical.empty()) {
                mid = segment(rows_of[static_cast<size_t>(mid_in[jj])], t1[jj], t2[jj]);
            } else {
                mid = segment(rows_of[static_cast<size_t>(s)], t1[jj], sp.vertical.front());
                mid = concat(mid, sp.vertical);
                mid = concat(mid, segment(rows_of[static_cast<size_t>(s + 1)], sp.vertical.back(), t2[jj]));
            }
            Path piece = concat(concat(l1[jj], mid), l3[jj]);
            if (j == lab.q && std::find(piece.begin(), piece.end(), lab.x) == piece.end())
                throw std::logic_error("label path misses its vertex");
            if (out[jj].empty()) out[jj] = std::move(piece);
            else out[jj] = concat(concat(out[jj], segment(rows_of[static_cast<size_t>(rows[jj])], out[jj].back(), piece.front())), piece);
        }
    }
    return out;
}

std::vector<Path> all_rows(const Wall& w) {
    std::vector<Path> r(static_cast<size_t>(w.h() + 1));
    for (int i = 1; i <= w.h(); ++i) r[static_cast<size_t>(i)] = w.row(i);
    return r;
}

// Interior vertices of p.
VertexSet inner(const Path& p) {
    if (p.size() <= 2) return {};
    return VertexSet(p.begin() + 1, p.end() - 1);
}

void add_to(VertexSet& set, const VertexSet& more) { set.insert(set.end(), more.begin(), more.end()); }

MinorModel finish_clique(const Graph& g, std::vector<VertexSet> sets, const char* what) {
    for (VertexSet& s : sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    MinorModel m = clique_model(g, std::move(sets));
    auto rep = validate_minor_model(g, m);
    if (!rep.ok()) throw std::logic_error(std::string(what) + " produced an invalid model: " + rep.clause);
    return m;
}

Outcome clique_outcome(const Wall& w, MinorModel m, int t, std::string branch) {
    Outcome o;
    o.kind = Outcome::Kind::CliqueMinor;
    o.grasped = grasped_by(w, m, t);
    o.model = std::move(m);
    o.branch = std::move(branch);
    return o;
}

Outcome flat_outcome(FlatWallCertificate cert, std::string branch) {
    Outcome o;
    o.kind = Outcome::Kind::Flat;
    o.apex = cert.apex;
    o.cert = std::move(cert);
    o.branch = std::move(branch);
    return o;
}

void check_size(const Wall& w, const Params& p) {
    if (w.h() < p.R || w.r() < p.R)
        throw ParameterError("the wall is " + str(w.h()) + " x " + str(w.r()) + " but the run needs " + str(p.R) + " x " +
                             str(p.R) + (p.overridden() ? "" : "; use overrides for a smaller run"));
}

// Sub-theorem calls fail with PreconditionError when their counting
// arguments do not hold, which at full sizes cannot happen.
template <class F>
auto guarded(const Params& p, const std::string& step, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        if (!p.overridden()) throw;
        throw InsufficientSizeError(step + " failed below the theorem sizes: " + e.what());
    }
}

}  // namespace

Params weak_params(int t, int w, int D, const Overrides& o) {
    if (D < 1) throw ParameterError("D must be at least 1");
    Params p;
    p.t = t;
    p.w = w;
    p.D = D;
    finish_params(p, o);
    return p;
}

Params strong_params(int t, int w, const Overrides& o) {
    Params p;
    p.strong = true;
    p.t = t;
    p.w = w;
    finish_params(p, o);
    return p;
}

nlohmann::json params_to_json(const Params& p) {
    nlohmann::json j{{"mode", p.strong ? "strong" : "weak"}, {"t", p.t}, {"w", p.w}, {"T", p.T},
                     {"tau", p.tau}, {"z", p.z}, {"N", p.N}, {"strips", p.strips}, {"R", p.R},
                     {"overrides", p.overrides}};
    if (!p.strong) j["D"] = p.D;
    return j;
}

Chain build_chain(const Graph& g, const Wall& w, const Params& p) {
    check_size(w, p);
    Chain c = cut_wall_to_chain(g, w, static_cast<int>(p.strips), p.z);
    return truncate_chain(g, c, static_cast<int>(p.N));
}

bool routable(const Graph& g, const Chain& chain, int k, int tau, const std::vector<char>& blocked, Path* path) {
    if (k < 1 || k + 1 >= chain.size()) throw ParameterError("wall " + str(k) + " is not an interior wall");
    const ChainInfo ci = chain_info(g, chain, tau);
    std::vector<char> b = blocked;
    b.resize(static_cast<size_t>(g.n()), 0);
    Search s(g.n());
    Path p = route_pair(g, ci, k, b, s);
    if (path) *path = p;
    return !p.empty();
}

// ---------------------------------------------------------------------------
// Matching of type-2 bridges and the H3 contraction.

std::vector<MatchedPath> gather_bridge_matching(const Graph& g, const Chain& chain, const std::vector<int>& selected,
                                                int tau, int D) {
    (void)D;
    std::vector<int> sel = selected;
    std::sort(sel.begin(), sel.end());
    for (size_t i = 1; i < sel.size(); ++i)
        if (sel[i] < sel[i - 1] + 2) throw PreconditionError("selected walls must be at least 2 apart");
    const ChainInfo ci = chain_info(g, chain, tau);
    Search search(g.n());

    struct Tag {
        int wall;
        Vertex x, u;
    };
    std::vector<MatchedPath> loose;
    std::vector<std::pair<VertexSet, std::vector<Tag>>> tagged;  // component, tags
    for (int k : sel) {
        std::vector<Bridge> brs = bridges_of(g, chain, k, tau);
        auto it = std::find_if(brs.begin(), brs.end(), [](const Bridge& b) { return !b.neighborhood; });
        if (it == brs.end()) throw PreconditionError("wall " + str(k) + " has no non-neighbourhood bridge");
        if (it->kind == Bridge::Kind::Edge) {
            loose.push_back({k, {it->u, it->v}});
            continue;
        }
        Vertex x = -1;
        for (Vertex a : it->attachments)
            if (ci.in_x(k, a)) {
                x = a;
                break;
            }
        Vertex u = -1;
        for (Vertex c : it->component)
            if (g.has_edge(c, x)) {
                u = c;
                break;
            }
        auto slot = std::find_if(tagged.begin(), tagged.end(), [&](const auto& e) { return e.first == it->component; });
        if (slot == tagged.end()) {
            tagged.push_back({it->component, {}});
            slot = tagged.end() - 1;
        }
        slot->second.push_back({k, x, u});
    }

    for (const auto& [comp, tags] : tagged) {
        const std::vector<char> in_f = make_mask(g.n(), comp);
        if (tags.size() == 1) {
            const Tag& tg = tags.front();
            Path p = search.run(
                g, ci.on_wall, {tg.u}, [&](Vertex v) { return in_f[static_cast<size_t>(v)] != 0; },
                [&](Vertex v) { return ci.in_y(tg.wall, v); });
            if (p.empty()) throw std::logic_error("non-neighbourhood bridge without a far attachment");
            p.insert(p.begin(), tg.x);
            loose.push_back({tg.wall, std::move(p)});
            continue;
        }
        // Spanning tree of the component plus the tagging edges, terminals as
        // leaves; pair terminals at the lowest vertex seeing two of them.
        std::vector<Vertex> node(comp.begin(), comp.end());
        std::vector<int> parent, wall_of;
        std::vector<std::vector<int>> kids;
        auto id_of = [&](Vertex v) { return static_cast<int>(std::lower_bound(comp.begin(), comp.end(), v) - comp.begin()); };
        const int nf = static_cast<int>(comp.size());
        parent.assign(static_cast<size_t>(nf), -2);
        wall_of.assign(static_cast<size_t>(nf), -1);
        kids.resize(static_cast<size_t>(nf));
        std::vector<int> order{id_of(tags.front().u)};
        parent[static_cast<size_t>(order[0])] = -1;
        for (size_t h = 0; h < order.size(); ++h)
            for (Vertex u : g.neighbors(node[static_cast<size_t>(order[h])])) {
                if (!in_f[static_cast<size_t>(u)]) continue;
                const int iu = id_of(u);
                if (parent[static_cast<size_t>(iu)] != -2) continue;
                parent[static_cast<size_t>(iu)] = order[h];
                kids[static_cast<size_t>(order[h])].push_back(iu);
                order.push_back(iu);
            }
        for (const Tag& tg : tags) {
            const int id = static_cast<int>(node.size());
            node.push_back(tg.x);
            parent.push_back(id_of(tg.u));
            wall_of.push_back(tg.wall);
            kids.emplace_back();
            kids[static_cast<size_t>(id_of(tg.u))].push_back(id);
            order.push_back(id);
        }
        std::vector<char> alive(node.size(), 1);
        std::vector<int> cnt(node.size());
        for (;;) {
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const size_t v = static_cast<size_t>(*it);
                cnt[v] = alive[v] && wall_of[v] >= 0 ? 1 : 0;
                if (!alive[v]) continue;
                for (int c : kids[v])
                    if (alive[static_cast<size_t>(c)]) cnt[v] += cnt[static_cast<size_t>(c)];
            }
            int v = order[0];
            if (cnt[static_cast<size_t>(v)] < 2) break;
            for (bool down = true; down;) {
                down = false;
                for (int c : kids[static_cast<size_t>(v)])
                    if (alive[static_cast<size_t>(c)] && cnt[static_cast<size_t>(c)] >= 2) {
                        v = c;
                        down = true;
                        break;
                    }
            }
            std::vector<int> terms, stack{v};
            while (!stack.empty()) {
                const int a = stack.back();
                stack.pop_back();
                if (!alive[static_cast<size_t>(a)]) continue;
                if (wall_of[static_cast<size_t>(a)] >= 0) terms.push_back(a);
                for (int c : kids[static_cast<size_t>(a)]) stack.push_back(c);
                alive[static_cast<size_t>(a)] = 0;
            }
            std::sort(terms.begin(), terms.end(),
                      [&](int a, int b) { return wall_of[static_cast<size_t>(a)] < wall_of[static_cast<size_t>(b)]; });
            Path up, down;
            for (int a = terms[0]; a != v; a = parent[static_cast<size_t>(a)]) up.push_back(node[static_cast<size_t>(a)]);
            up.push_back(node[static_cast<size_t>(v)]);
            for (int b = terms[1]; b != v; b = parent[static_cast<size_t>(b)]) down.push_back(node[static_cast<size_t>(b)]);
            std::reverse(down.begin(), down.end());
            up.insert(up.end(), down.begin(), down.end());
            const int k = wall_of[static_cast<size_t>(terms[0])];
            if (!ci.in_y(k, up.back())) throw std::logic_error("paired terminals lie in one neighbourhood");
            loose.push_back({k, std::move(up)});
        }
    }

    // Keep paths that share no endpoint with a path kept before.
    std::sort(loose.begin(), loose.end(), [](const MatchedPath& a, const MatchedPath& b) { return a.index < b.index; });
    std::vector<MatchedPath> out;
    VertexSet ends;
    for (MatchedPath& p : loose) {
        if (std::find(ends.begin(), ends.end(), p.path.front()) != ends.end() ||
            std::find(ends.begin(), ends.end(), p.path.back()) != ends.end())
            continue;
        ends.push_back(p.path.front());
        ends.push_back(p.path.back());
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<MatchedPath> usable_for_h3(const Chain& chain, const std::vector<MatchedPath>& paths, int t) {
    auto [grid, gm] = contract_to_grid(chain.union_wall);
    std::vector<MatchedPath> out;
    for (const MatchedPath& p : paths) {
        int col = -1;
        for (size_t b = 0; b < gm.branch_sets.size() && col < 0; ++b)
            if (has(gm.branch_sets[b], p.path.back())) col = grid.col_of(static_cast<Vertex>(b));
        if (col > t && col < grid.r) out.push_back(p);
    }
    return out;
}

H3Minor h3_from_paths(const Graph& g, const Chain& chain, const std::vector<MatchedPath>& paths, int t, int tau) {
    if (t < 2) throw ParameterError("t must be at least 2");
    const int need = static_cast<int>(10 * pair_count(t) + 6);
    if (static_cast<int>(paths.size()) < need)
        throw PreconditionError("too few paths for H3: " + str(static_cast<long long>(paths.size())) + " < 10T+6 = " + str(need));
    const ChainInfo ci = chain_info(g, chain, tau);
    std::vector<MatchedPath> use(paths.begin(), paths.begin() + need);
    for (size_t i = 0; i < use.size(); ++i) {
        const MatchedPath& p = use[i];
        const std::string who = "path " + str(static_cast<long long>(i));
        if (p.index < 1 || p.index + 1 >= chain.size()) throw PreconditionError(who + " names a wall that is not interior");
        if (p.path.size() < 2 || !is_path(g, p.path)) throw PreconditionError(who + " is not a path");
        if (!ci.in_x(p.index, p.path.front())) throw PreconditionError(who + " does not start in X_i");
        if (!ci.in_y(p.index, p.path.back())) throw PreconditionError(who + " does not end in Y_i");
        for (size_t k = 1; k + 1 < p.path.size(); ++k)
            if (ci.on_wall[static_cast<size_t>(p.path[k])]) throw PreconditionError(who + " runs through W'");
        for (size_t j = 0; j < i; ++j) {
            if (std::abs(use[j].index - p.index) < 2) throw PreconditionError(who + " starts next to another path's wall");
            if (!disjoint(use[j].path, p.path)) throw PreconditionError(who + " meets another path");
        }
    }
    auto [grid, gm] = contract_to_grid(chain.union_wall);
    std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
    for (size_t b = 0; b < gm.branch_sets.size(); ++b)
        for (Vertex v : gm.branch_sets[b]) owner[static_cast<size_t>(v)] = static_cast<Vertex>(b);
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
    MinorModel m;
    m.branch_sets = gm.branch_sets;
    for (const MatchedPath& p : use) {
        const Vertex gx = owner[static_cast<size_t>(p.path.front())], gy = owner[static_cast<size_t>(p.path.back())];
        if (gx < 0 || gy < 0) throw std::logic_error("path endpoint outside the contracted grid");
        edges.push_back({{grid.row_of(gx), grid.col_of(gx)}, {grid.row_of(gy), grid.col_of(gy)}});
        add_to(m.branch_sets[static_cast<size_t>(gx)], inner(p.path));
        std::sort(m.branch_sets[static_cast<size_t>(gx)].begin(), m.branch_sets[static_cast<size_t>(gx)].end());
    }
    H3Minor out;
    out.inst = make_family_instance(Family::H3, t, grid.h, grid.r, edges);
    auto vr = validate_family(out.inst);
    if (!vr.ok()) throw PreconditionError("contracted graph is not in H3: " + vr.clause);
    m.pattern = out.inst.graph();
    fill_witnesses(g, m);
    out.model = std::move(m);
    return out;
}

// ---------------------------------------------------------------------------
// Apex search.

ValidationReport check_apex_state(const Graph& g, const Chain& chain, int tau, const ApexSearchState& s) {
    const ChainInfo ci = chain_info(g, chain, tau);
    std::vector<int> on_p(static_cast<size_t>(g.n()), -1);
    VertexSet ends;
    for (size_t i = 0; i < s.pstar.size(); ++i) {
        const MatchedPath& p = s.pstar[i];
        const std::string who = "P*[" + str(static_cast<long long>(i)) + "]";
        if (p.index < 1 || p.index + 1 >= chain.size()) return ValidationReport::structural(who + " names a wall that is not interior");
        if (p.path.size() < 2 || !is_path(g, p.path)) return ValidationReport::structural(who + " is not a path");
        if (!ci.in_x(p.index, p.path.front())) return ValidationReport::semantic(who + " does not start in X_i");
        if (!ci.in_y(p.index, p.path.back())) return ValidationReport::semantic(who + " does not end in Y_i");
        for (size_t k = 0; k < p.path.size(); ++k) {
            const Vertex v = p.path[k];
            if (k > 0 && k + 1 < p.path.size() && ci.on_wall[static_cast<size_t>(v)])
                return ValidationReport::semantic(who + " runs through W'");
            if (on_p[static_cast<size_t>(v)] >= 0) return ValidationReport::semantic(who + " meets another path of P*");
            on_p[static_cast<size_t>(v)] = static_cast<int>(i);
        }
        for (size_t j = 0; j < i; ++j)
            if (std::abs(s.pstar[j].index - p.index) <= 1) return ValidationReport::semantic(who + " starts next to another path's wall");
        ends.push_back(p.path.front());
        ends.push_back(p.path.back());
    }
    const std::vector<char> in_s = walls_touched(ci, ends);
    std::vector<char> on_q(static_cast<size_t>(g.n()), 0);
    for (size_t i = 0; i < s.q.size(); ++i) {
        const auto& q = s.q[i];
        const std::string who = "Q[" + str(static_cast<long long>(i)) + "]";
        if (q.index < 1 || q.index + 1 >= chain.size()) return ValidationReport::structural(who + " names a wall that is not interior");
        if (q.path.size() < 2 || !is_path(g, q.path)) return ValidationReport::structural(who + " is not a path");
        if (q.anchor < 0 || q.anchor >= static_cast<int>(s.pstar.size())) return ValidationReport::structural(who + " has no anchor path");
        if (in_s[static_cast<size_t>(q.index)]) return ValidationReport::semantic(who + " starts at a wall near an end of P*");
        if (!ci.in_x(q.index, q.path.front())) return ValidationReport::semantic(who + " does not start in X_i");
        const Path& anchor = s.pstar[static_cast<size_t>(q.anchor)].path;
        if (std::find(anchor.begin() + 1, anchor.end() - 1, q.path.back()) == anchor.end() - 1)
            return ValidationReport::semantic(who + " does not end inside its anchor path");
        for (size_t j = 0; j < i; ++j) {
            if (s.q[j].index == q.index) return ValidationReport::semantic(who + " starts at the wall of another Q path");
            if (s.q[j].anchor == q.anchor) return ValidationReport::semantic(who + " shares its anchor path");
        }
        for (size_t k = 0; k < q.path.size(); ++k) {
            const Vertex v = q.path[k];
            const bool inner = k > 0 && k + 1 < q.path.size();
            if (inner && (ci.on_wall[static_cast<size_t>(v)] || on_p[static_cast<size_t>(v)] >= 0))
                return ValidationReport::semantic(who + " has an inner vertex on W' or on P*");
            if (on_q[static_cast<size_t>(v)]) return ValidationReport::semantic(who + " meets another Q path");
            on_q[static_cast<size_t>(v)] = 1;
        }
    }
    return ValidationReport::pass();
}

ApexResult find_apex_vertices(const Graph& g, const Chain& chain, const Params& p, const RunOptions& opt) {
    const ChainInfo ci = chain_info(g, chain, p.tau);
    const size_t need = static_cast<size_t>(10 * p.T + 6);
    ApexSearchState st;
    ApexResult res;
    Search search(g.n());
    for (;; ++res.iterations) {
        if (st.pstar.size() >= need) {
            res.found_paths = true;
            res.paths.assign(st.pstar.begin(), st.pstar.begin() + static_cast<long>(need));
            return res;
        }
        VertexSet a;
        for (const MatchedPath& m : st.pstar) {
            a.push_back(m.path.front());
            a.push_back(m.path.back());
        }
        for (const auto& q : st.q) {
            a.push_back(q.path.front());
            a.push_back(q.path.back());
        }
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        const std::vector<char> touched = walls_touched(ci, a);
        const std::vector<char> blocked = make_mask(g.n(), a);
        std::vector<int> free_walls;
        Path z;
        int k = -1;
        for (int i = 1; i + 1 < chain.size(); ++i) {
            if (touched[static_cast<size_t>(i)]) continue;
            free_walls.push_back(i);
            if (k < 0) {
                z = route_pair(g, ci, i, blocked, search);
                if (!z.empty()) k = i;
            }
        }
        if (k < 0) {
            res.apex = std::move(a);
            res.walls = std::move(free_walls);
            return res;
        }

        std::vector<int> on_p(static_cast<size_t>(g.n()), -1), on_q(static_cast<size_t>(g.n()), -1);
        for (size_t i = 0; i < st.pstar.size(); ++i)
            for (Vertex v : st.pstar[i].path) on_p[static_cast<size_t>(v)] = static_cast<int>(i);
        for (size_t i = 0; i < st.q.size(); ++i)
            for (Vertex v : st.q[i].path) on_q[static_cast<size_t>(v)] = static_cast<int>(i);
        size_t iv = 0;
        while (iv < z.size() && on_p[static_cast<size_t>(z[iv])] < 0 && on_q[static_cast<size_t>(z[iv])] < 0) ++iv;
        if (iv == z.size()) {
            st.pstar.push_back({k, z});
            st.q.clear();
        } else {
            const Vertex v = z[iv];
            const Path head(z.begin(), z.begin() + static_cast<long>(iv) + 1);
            if (on_q[static_cast<size_t>(v)] >= 0) {
                const Path& qp = st.q[static_cast<size_t>(on_q[static_cast<size_t>(v)])].path;
                const Path tail(qp.begin(), std::find(qp.begin(), qp.end(), v) + 1);
                st.pstar.push_back({k, concat(head, reversed(tail))});
                st.q.clear();
                ++res.q_joins;
            } else {
                const int pi = on_p[static_cast<size_t>(v)];
                auto qi = std::find_if(st.q.begin(), st.q.end(), [&](const auto& q) { return q.anchor == pi; });
                if (qi == st.q.end()) {
                    st.q.push_back({k, head, pi});
                    ++res.q_steps;
                } else {
                    const Path pp = st.pstar[static_cast<size_t>(pi)].path;
                    const auto at_v = std::find(pp.begin(), pp.end(), v) - pp.begin();
                    const auto at_a = std::find(pp.begin(), pp.end(), qi->path.back()) - pp.begin();
                    MatchedPath p1{k, {}}, p2{qi->index, {}};
                    if (at_v < at_a) {
                        p1.path = concat(head, reversed(Path(pp.begin(), pp.begin() + at_v + 1)));
                        p2.path = concat(qi->path, Path(pp.begin() + at_a, pp.end()));
                    } else {
                        p1.path = concat(head, Path(pp.begin() + at_v, pp.end()));
                        p2.path = concat(qi->path, reversed(Path(pp.begin(), pp.begin() + at_a + 1)));
                    }
                    st.pstar[static_cast<size_t>(pi)] = std::move(p1);
                    st.pstar.push_back(std::move(p2));
                    st.q.clear();
                    ++res.splits;
                }
            }
        }
        if (opt.check_invariants) {
            auto rep = check_apex_state(g, chain, p.tau, st);
            if (!rep.ok()) throw std::logic_error("apex search invariant broken: " + rep.clause);
        }
    }
}

ApexCollection collect_apex_paths(const Graph& g, const Chain& chain, int tau, const VertexSet& apex,
                                  const std::vector<int>& walls, int t) {
    const ChainInfo ci = chain_info(g, chain, tau);
    const std::vector<char> is_apex = make_mask(g.n(), apex);
    std::vector<int> slot(static_cast<size_t>(g.n()), -1);
    ApexCollection out;
    for (size_t j = 0; j < apex.size(); ++j) {
        slot[static_cast<size_t>(apex[j])] = static_cast<int>(j);
        out.sets.push_back({apex[j], {}});
    }
    Search search(g.n());
    // A wall that finds no active apex never will, since apexes only turn
    // inactive; one pass over the walls is enough.
    for (int k : walls) {
        Path q = search.run(
            g, ci.on_wall, ci.interior[static_cast<size_t>(k)], [&](Vertex u) { return !is_apex[static_cast<size_t>(u)]; },
            [&](Vertex u) {
                return is_apex[static_cast<size_t>(u)] &&
                       static_cast<int>(out.sets[static_cast<size_t>(slot[static_cast<size_t>(u)])].paths.size()) < 2 * t;
            });
        if (q.empty()) {
            out.active_walls.push_back(k);
            continue;
        }
        out.sets[static_cast<size_t>(slot[static_cast<size_t>(q.back())])].paths.push_back({k, std::move(q)});
    }
    for (const ApexPaths& s : out.sets)
        if (static_cast<int>(s.paths.size()) >= 2 * t) out.inactive.push_back(s.apex);
    return out;
}

// ---------------------------------------------------------------------------
// Cases of the apex branch.

namespace {

// Row of W' through v, or 0 when v lies on no row.
std::vector<int> row_ids(const Graph& g, const std::vector<Path>& rows_of) {
    std::vector<int> id(static_cast<size_t>(g.n()), 0);
    for (size_t r = 1; r < rows_of.size(); ++r)
        for (Vertex v : rows_of[r]) id[static_cast<size_t>(v)] = static_cast<int>(r);
    return id;
}

bool wall_free_of(const Wall& w, const std::vector<char>& mask) {
    for (Vertex v : w.vertices())
        if (mask[static_cast<size_t>(v)]) return false;
    return true;
}

// Leftmost (or rightmost) vertex of `row` on the column path `col`.
Vertex crossing(const Path& row, const Path& col, bool leftmost) {
    const std::vector<Vertex> sorted_col = [&] {
        VertexSet c = col;
        std::sort(c.begin(), c.end());
        return c;
    }();
    Vertex hit = -1;
    for (Vertex v : row)
        if (has(sorted_col, v)) {
            hit = v;
            if (leftmost) break;
        }
    if (hit < 0) throw std::logic_error("row misses a column of the wall");
    return hit;
}

// Inner vertices of the part of `col` between rows ra < rb.
VertexSet column_piece(const Path& col, const std::vector<int>& row_id, int ra, int rb) {
    long last_a = -1, first_b = -1;
    for (size_t i = 0; i < col.size(); ++i) {
        const int r = row_id[static_cast<size_t>(col[i])];
        if (r == ra) last_a = static_cast<long>(i);
        if (r == rb && first_b < 0) first_b = static_cast<long>(i);
    }
    if (last_a < 0 || first_b < 0 || first_b <= last_a) throw std::logic_error("column does not run between the rows");
    return VertexSet(col.begin() + last_a + 1, col.begin() + first_b);
}

struct Case2Part {
    std::vector<std::pair<size_t, size_t>> members;  // (set index, paths kept)
};

// Greedy partition into t parts with sum(|Q| - 1) = t each, after the
// filtering of the second case; empty when it does not exist.
struct Case2Plan {
    std::vector<ApexPaths> sets;  // filtered
    std::vector<Case2Part> parts;
    std::vector<int> rows;
};

Case2Plan plan_case2(const Graph& g, const Chain& chain, int tau, const VertexSet& apex, const std::vector<ApexPaths>& sets,
                     int t) {
    const ChainInfo ci = chain_info(g, chain, tau);
    const std::vector<char> bad = walls_touched(ci, apex);
    const std::vector<int> row_id = row_ids(g, all_rows(chain.union_wall));
    const int z = chain.z;
    Case2Plan plan;
    long top = 0, bottom = 0;
    for (const ApexPaths& s : sets) {
        ApexPaths f{s.apex, {}};
        for (const MatchedPath& p : s.paths)
            if (!bad[static_cast<size_t>(p.index)]) f.paths.push_back(p);
        if (f.paths.size() <= 1) continue;
        const int r = row_id[static_cast<size_t>(s.apex)];
        if (r >= 1 && r <= 2 * t) top += static_cast<long>(f.paths.size()) - 1;
        if (r >= z - 2 * t + 1) bottom += static_cast<long>(f.paths.size()) - 1;
        plan.sets.push_back(std::move(f));
    }
    const bool drop_bottom = bottom <= top;
    std::vector<ApexPaths> kept;
    for (ApexPaths& s : plan.sets) {
        const int r = row_id[static_cast<size_t>(s.apex)];
        const bool in_band = drop_bottom ? r >= z - 2 * t + 1 : (r >= 1 && r <= 2 * t);
        if (!in_band) kept.push_back(std::move(s));
    }
    plan.sets = std::move(kept);
    for (int r = 1; r <= 2 * t; ++r) plan.rows.push_back(drop_bottom ? z - 2 * t + r : r);

    Case2Part cur;
    long sum = 0;
    for (size_t j = 0; j < plan.sets.size() && static_cast<int>(plan.parts.size()) < t; ++j) {
        const long have = static_cast<long>(plan.sets[j].paths.size()) - 1;
        const long take = std::min(have, t - sum);
        cur.members.push_back({j, static_cast<size_t>(take + 1)});
        sum += take;
        if (sum == t) {
            plan.parts.push_back(std::move(cur));
            cur = {};
            sum = 0;
        }
    }
    if (static_cast<int>(plan.parts.size()) < t) plan.parts.clear();
    return plan;
}

}  // namespace

MinorModel case1_clique(const Graph& g, const Chain& chain, int tau, const std::vector<ApexPaths>& sets, int t) {
    if (t < 2) throw ParameterError("t must be at least 2");
    const int na = std::max(0, t - 4), nl = std::max(t, 4), n = chain.size(), z = chain.z;
    if (static_cast<int>(sets.size()) < na) throw PreconditionError("the first case needs t-4 apex vertices");
    const ChainInfo ci = chain_info(g, chain, tau);
    VertexSet apex;
    for (int j = 0; j < na; ++j) apex.push_back(sets[static_cast<size_t>(j)].apex);
    const std::vector<char> in_a = make_mask(g.n(), apex);
    const std::vector<char> bad = walls_touched(ci, apex);

    std::vector<std::vector<MatchedPath>> q(static_cast<size_t>(na));
    std::vector<Label> labels;
    for (int j = 0; j < na; ++j) {
        for (const MatchedPath& p : sets[static_cast<size_t>(j)].paths)
            if (!bad[static_cast<size_t>(p.index)] && static_cast<int>(q[static_cast<size_t>(j)].size()) < t)
                q[static_cast<size_t>(j)].push_back(p);
        if (static_cast<int>(q[static_cast<size_t>(j)].size()) < t)
            throw PreconditionError("apex vertex " + str(apex[static_cast<size_t>(j)]) + " keeps fewer than t paths");
        for (int i = 0; i < t; ++i) {
            const MatchedPath& p = q[static_cast<size_t>(j)][static_cast<size_t>(i)];
            labels.push_back({p.path.front(), p.index, i});
        }
    }

    const Wall& wp = chain.union_wall;
    const std::vector<Path> rows_of = all_rows(wp);
    const std::vector<int> row_id = row_ids(g, rows_of);
    std::vector<int> rows;
    for (int r = 1; r <= z && static_cast<int>(rows.size()) < nl; ++r)
        if (std::none_of(rows_of[static_cast<size_t>(r)].begin(), rows_of[static_cast<size_t>(r)].end(),
                         [&](Vertex v) { return in_a[static_cast<size_t>(v)] != 0; }))
            rows.push_back(r);
    if (static_cast<int>(rows.size()) < nl) throw PreconditionError("fewer than t rows of W' avoid the apex vertices");

    int first = n, last = -1;
    for (const Label& l : labels) {
        first = std::min(first, l.wall);
        last = std::max(last, l.wall);
    }
    int lo = -1, hi = -1;
    for (int i = 0; i <= std::max(0, t - 4) && lo < 0; ++i)
        if (wall_free_of(chain.basic[static_cast<size_t>(i)], in_a) && (labels.empty() || i <= first - 2)) lo = i;
    for (int i = n - 1; i >= std::min(n - 1, n - t + 3) && hi < 0; --i)
        if (wall_free_of(chain.basic[static_cast<size_t>(i)], in_a) && (labels.empty() ? i >= lo + 2 : i >= last + 2)) hi = i;
    if (lo < 0 || hi < 0) throw PreconditionError("no apex-free end walls around the labelled walls");

    const Graph wg = wall_graph(g, wp);
    std::vector<Path> l = label_paths(wg, chain, rows_of, rows, labels);
    if (labels.empty())
        for (int j = 0; j < nl; ++j)
            l[static_cast<size_t>(j)] = {chain.basic[static_cast<size_t>(lo + 1)].row(rows[static_cast<size_t>(j)]).front()};

    const Wall& left = chain.basic[static_cast<size_t>(lo)];
    const Path c[5] = {{}, left.col(1), left.col(2), left.col(3), chain.basic[static_cast<size_t>(hi)].col(1)};
    const int reach_left[4] = {1, 3, 2, 1};
    const bool reach_right[4] = {false, true, false, true};
    for (int j = 0; j < 4; ++j) {
        const Path& row = rows_of[static_cast<size_t>(rows[static_cast<size_t>(j)])];
        Path& lj = l[static_cast<size_t>(j)];
        lj = concat(segment(row, crossing(row, c[reach_left[j]], true), lj.front()), lj);
        if (reach_right[j]) lj = concat(lj, segment(row, lj.back(), crossing(row, c[4], false)));
    }

    std::vector<VertexSet> bs(static_cast<size_t>(nl));
    for (int j = 0; j < nl; ++j) bs[static_cast<size_t>(j)] = l[static_cast<size_t>(j)];
    for (int j = 0; j < na; ++j) {
        for (int i = 0; i < t; ++i) add_to(bs[static_cast<size_t>(i)], inner(q[static_cast<size_t>(j)][static_cast<size_t>(i)].path));
        bs[static_cast<size_t>(4 + j)].push_back(apex[static_cast<size_t>(j)]);
    }
    auto r_of = [&](int j) { return rows[static_cast<size_t>(j)]; };
    const std::array<std::array<int, 3>, 6> pieces{{{3, 0, 1}, {3, 1, 2}, {3, 2, 3}, {2, 0, 2}, {1, 0, 3}, {4, 1, 3}}};
    for (const auto& [col, a, b] : pieces) add_to(bs[static_cast<size_t>(a)], column_piece(c[col], row_id, r_of(a), r_of(b)));
    bs.resize(static_cast<size_t>(t));
    return finish_clique(g, std::move(bs), "the first apex case");
}

MinorModel case2_clique(const Graph& g, const Chain& chain, int tau, const VertexSet& apex,
                        const std::vector<ApexPaths>& sets, int t) {
    if (t < 2) throw ParameterError("t must be at least 2");
    Case2Plan plan = plan_case2(g, chain, tau, apex, sets, t);
    if (plan.parts.empty()) throw PreconditionError("the apex paths do not split into t parts of weight t");
    // Per part: the paths with label t+r, and those with labels 0..t-1.
    std::vector<std::vector<Path>> s1(static_cast<size_t>(t)), s2(static_cast<size_t>(t));
    std::vector<Label> labels;
    for (int r = 0; r < t; ++r) {
        int next = 0;
        for (auto [j, keep] : plan.parts[static_cast<size_t>(r)].members) {
            const auto& paths = plan.sets[j].paths;
            for (size_t i = 0; i < keep; ++i) {
                const MatchedPath& p = paths[i];
                const int lab = i == 0 ? t + r : next++;
                labels.push_back({p.path.front(), p.index, lab});
                (i == 0 ? s1 : s2)[static_cast<size_t>(r)].push_back(p.path);
            }
        }
        if (next != t) throw std::logic_error("part without t labelled paths");
    }
    const std::vector<Path> rows_of = all_rows(chain.union_wall);
    const std::vector<Path> l = label_paths(wall_graph(g, chain.union_wall), chain, rows_of, plan.rows, labels);
    std::vector<VertexSet> bs(static_cast<size_t>(t));
    for (int r = 0; r < t; ++r) {
        VertexSet& b = bs[static_cast<size_t>(r)];
        add_to(b, l[static_cast<size_t>(t + r)]);
        add_to(b, l[static_cast<size_t>(r)]);
        for (const Path& p : s1[static_cast<size_t>(r)]) add_to(b, p);
        for (const Path& p : s2[static_cast<size_t>(r)]) add_to(b, VertexSet(p.begin() + 1, p.end()));
    }
    return finish_clique(g, std::move(bs), "the second apex case");
}

Outcome case3_resolve(const Graph& g, const Chain& chain, const Wall& w, int tau, const VertexSet& astar,
                      const std::vector<int>& walls, int t, const RunOptions& opt) {
    (void)opt;
    if (t < 2) throw ParameterError("t must be at least 2");
    const long long T = pair_count(t);
    const ChainInfo ci = chain_info(g, chain, tau);
    const std::vector<char> blocked = make_mask(g.n(), astar);
    const Graph gm = without(g, astar);
    Search search(g.n());
    std::vector<BridgeWitness> tilde1;
    std::vector<int> rest;
    for (int k : walls) {
        const VertexSet& core = ci.core[static_cast<size_t>(k)];
        VertexSet src;
        for (Vertex v : ci.interior[static_cast<size_t>(k)])
            if (!blocked[static_cast<size_t>(v)]) src.push_back(v);
        Path p = search.run(
            g, ci.on_wall, src, [&](Vertex u) { return !blocked[static_cast<size_t>(u)]; },
            [&](Vertex u) { return !blocked[static_cast<size_t>(u)] && ci.on_wall[static_cast<size_t>(u)] && !has(core, u); });
        if (p.empty()) {
            rest.push_back(k);
            continue;
        }
        if (!ci.in_n(k, p.back()))
            throw PreconditionError("wall " + str(k) + " routes its demand pair around the apex set");
        tilde1.push_back({k, tau, std::move(p)});
    }
    Outcome o;
    o.log.push_back("third case: " + str(static_cast<long long>(tilde1.size())) + " walls reach their neighbourhood, " +
                    str(static_cast<long long>(rest.size())) + " do not");
    if (static_cast<long long>(tilde1.size()) >= 12 * T + 6) {
        Outcome r = clique_outcome(w, kt_from_type1(g, chain, tilde1, t, &w), t, "case3-type1");
        r.log = o.log;
        return r;
    }
    std::vector<CoreCross> crosses;
    for (int k : rest) {
        WallType wt = classify(gm, chain, k, tau);
        if (wt.kind == WallKind::Type4) {
            Outcome r = flat_outcome(flat_from_type4(g, chain, k, tau, astar), "case3-flat");
            r.log = o.log;
            r.log.push_back("wall " + str(k) + " has no wall-cross in G - A*");
            return r;
        }
        if (wt.kind == WallKind::Type3) crosses.push_back({k, tau, *wt.cross});
    }
    if (static_cast<long long>(crosses.size()) >= 2 * T) {
        Outcome r = clique_outcome(w, kt_from_type3(gm, chain, crosses, t, &w), t, "case3-type3");
        r.log = o.log;
        return r;
    }
    throw PreconditionError("third case: " + str(static_cast<long long>(crosses.size())) +
                            " walls with a wall-cross, fewer than 2T = " + str(2 * T));
}

// ---------------------------------------------------------------------------
// Drivers.

Outcome flat_wall_weak(const Graph& g, const Wall& w, const Params& p, const RunOptions& opt) {
    if (p.strong) throw ParameterError("weak run with strong parameters");
    if (g.max_degree() > p.D)
        throw ParameterError("maximum degree " + str(g.max_degree()) + " exceeds D = " + str(p.D));
    const Chain chain = build_chain(g, w, p);
    std::vector<std::string> log{"chain of " + str(chain.size()) + " basic walls of height " + str(chain.z)};
    for (const std::string& s : p.overrides) log.push_back("override " + s);
    const std::vector<WallType> types = classify_all(g, chain, p.tau, opt.threads);
    std::vector<int> of[4];
    for (size_t i = 0; i < types.size(); ++i) of[static_cast<int>(types[i].kind)].push_back(static_cast<int>(i) + 1);
    log.push_back("wall types: " + str(static_cast<long long>(of[0].size())) + " type1, " +
                  str(static_cast<long long>(of[1].size())) + " type2, " + str(static_cast<long long>(of[2].size())) +
                  " type3, " + str(static_cast<long long>(of[3].size())) + " type4");
    auto done = [&](Outcome o) {
        o.log.insert(o.log.begin(), log.begin(), log.end());
        return o;
    };
    if (!of[3].empty()) {
        const int k = of[3].front();
        return done(flat_outcome(flat_from_type4(g, chain, k, p.tau), "type4"));
    }
    if (static_cast<long long>(of[2].size()) >= 2 * p.T) {
        std::vector<CoreCross> crosses;
        for (int k : of[2]) crosses.push_back({k, p.tau, *types[static_cast<size_t>(k - 1)].cross});
        return guarded(p, "type-3 walls",
                       [&] { return done(clique_outcome(w, kt_from_type3(g, chain, crosses, p.t, &w), p.t, "type3")); });
    }
    if (static_cast<long long>(of[0].size()) >= 12 * p.T + 6) {
        std::vector<BridgeWitness> wit;
        for (int k : of[0]) {
            const WallType& wt = types[static_cast<size_t>(k - 1)];
            auto br = std::find_if(wt.bridges.begin(), wt.bridges.end(), [](const Bridge& b) { return b.neighborhood; });
            wit.push_back({k, p.tau, bridge_path(g, chain, *br, p.tau)});
        }
        return guarded(p, "type-1 walls",
                       [&] { return done(clique_outcome(w, kt_from_type1(g, chain, wit, p.t, &w), p.t, "type1")); });
    }
    const long long cap = 4LL * p.D * p.D * (10 * p.T + 6);
    std::vector<int> sel;
    for (size_t i = 0; i < of[1].size() && static_cast<long long>(sel.size()) < cap; i += 2) sel.push_back(of[1][i]);
    return guarded(p, "type-2 walls", [&] {
        std::vector<MatchedPath> paths = usable_for_h3(chain, gather_bridge_matching(g, chain, sel, p.tau, p.D), p.t);
        log.push_back(str(static_cast<long long>(paths.size())) + " disjoint bridge paths usable for H3");
        if (static_cast<long long>(paths.size()) < 10 * p.T + 6)
            throw PreconditionError("fewer than 10T+6 bridge paths from type-2 walls");
        H3Minor h = h3_from_paths(g, chain, paths, p.t, p.tau);
        return done(clique_outcome(w, clique_from_h3(g, h.inst, h.model, &w), p.t, "type2"));
    });
}

Outcome flat_wall_strong(const Graph& g, const Wall& w, const Params& p, const RunOptions& opt) {
    if (!p.strong) throw ParameterError("strong run with weak parameters");
    const Chain chain = build_chain(g, w, p);
    std::vector<std::string> log{"chain of " + str(chain.size()) + " basic walls of height " + str(chain.z)};
    for (const std::string& s : p.overrides) log.push_back("override " + s);
    auto done = [&](Outcome o) {
        o.log.insert(o.log.begin(), log.begin(), log.end());
        return o;
    };
    const ApexResult ar = find_apex_vertices(g, chain, p, opt);
    log.push_back("apex search: " + str(ar.iterations) + " iterations");
    if (ar.found_paths) {
        return guarded(p, "apex search paths", [&] {
            std::vector<MatchedPath> paths = usable_for_h3(chain, ar.paths, p.t);
            if (static_cast<long long>(paths.size()) < 10 * p.T + 6)
                throw PreconditionError("fewer than 10T+6 routed paths usable for H3");
            H3Minor h = h3_from_paths(g, chain, paths, p.t, p.tau);
            return done(clique_outcome(w, clique_from_h3(g, h.inst, h.model, &w), p.t, "paths"));
        });
    }
    log.push_back("apex set of " + str(static_cast<long long>(ar.apex.size())) + " vertices, " +
                  str(static_cast<long long>(ar.walls.size())) + " walls not routable around it");
    const long long cap = 132 * p.T + p.t + 50;
    std::vector<int> spread;
    for (size_t i = 0; i < ar.walls.size() && static_cast<long long>(spread.size()) < cap; i += 3) {
        const int k = ar.walls[i];
        if (k > p.t - 4 && k < p.N - p.t + 3) spread.push_back(k);
    }
    const ApexCollection coll = collect_apex_paths(g, chain, p.tau, ar.apex, spread, p.t);
    log.push_back(str(static_cast<long long>(coll.inactive.size())) + " apex vertices with 2t paths, " +
                  str(static_cast<long long>(coll.active_walls.size())) + " walls without a path");
    const int na = std::max(0, p.t - 4);
    if (static_cast<int>(coll.inactive.size()) >= na) {
        std::vector<ApexPaths> full;
        for (const ApexPaths& s : coll.sets)
            if (static_cast<int>(full.size()) < na && static_cast<int>(s.paths.size()) >= 2 * p.t) full.push_back(s);
        return guarded(p, "first apex case",
                       [&] { return done(clique_outcome(w, case1_clique(g, chain, p.tau, full, p.t), p.t, "case1")); });
    }
    if (!plan_case2(g, chain, p.tau, ar.apex, coll.sets, p.t).parts.empty()) {
        return guarded(p, "second apex case", [&] {
            return done(clique_outcome(w, case2_clique(g, chain, p.tau, ar.apex, coll.sets, p.t), p.t, "case2"));
        });
    }
    log.push_back("apex paths do not split into t parts of weight t");
    return guarded(p, "third apex case",
                   [&] { return done(case3_resolve(g, chain, w, p.tau, coll.inactive, coll.active_walls, p.t, opt)); });
}

// ---------------------------------------------------------------------------
// Checks and serialisation.

ValidationReport verify_outcome(const Graph& g, const Wall& w, const Params& p, const Outcome& o) {
    if (o.kind == Outcome::Kind::CliqueMinor) {
        auto rep = validate_minor_model(g, o.model);
        if (!rep.ok()) return rep;
        if (!(o.model.pattern == complete_graph(p.t))) return ValidationReport::semantic("model is not a K_t");
        if (!grasped_by(w, o.model, p.t)) return ValidationReport::semantic("model is not grasped by the wall");
        return ValidationReport::pass();
    }
    const size_t bound = p.strong ? static_cast<size_t>(std::max(0, p.t - 5)) : 0;
    if (o.apex.size() > bound)
        return ValidationReport::semantic("apex set of " + str(static_cast<long long>(o.apex.size())) + " exceeds " +
                                          str(static_cast<long long>(bound)));
    VertexSet a = o.apex, b = o.cert.apex;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return ValidationReport::structural("apex set differs from the certificate");
    auto rep = verify_flat_certificate(g, o.cert);
    if (!rep.ok()) return rep;
    const int need = p.z - 2 * p.tau;
    if (o.cert.wall.h() < need || o.cert.wall.r() < need)
        return ValidationReport::semantic("flat wall smaller than " + str(need) + " x " + str(need));
    return ValidationReport::pass();
}

nlohmann::json outcome_to_json(const Outcome& o) {
    nlohmann::json j{{"branch", o.branch}, {"log", o.log}};
    if (o.kind == Outcome::Kind::CliqueMinor) {
        j["kind"] = "clique_minor";
        j["model"] = model_to_json(o.model);
        j["grasped"] = o.grasped;
    } else {
        j["kind"] = "flat";
        j["apex"] = o.apex;
        j["certificate"] = certificate_to_json(o.cert);
    }
    return j;
}

Outcome outcome_from_json(const nlohmann::json& j) {
    try {
        Outcome o;
        const std::string kind = j.at("kind").get<std::string>();
        o.branch = j.value("branch", std::string());
        o.log = j.value("log", std::vector<std::string>());
        if (kind == "clique_minor") {
            o.kind = Outcome::Kind::CliqueMinor;
            o.model = model_from_json(j.at("model"));
            o.grasped = j.value("grasped", false);
        } else if (kind == "flat") {
            o.kind = Outcome::Kind::Flat;
            o.apex = j.at("apex").get<VertexSet>();
            o.cert = certificate_from_json(j.at("certificate"));
        } else {
            throw StructuralError("unknown outcome kind '" + kind + "'");
        }
        return o;
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed outcome document: ") + e.what());
    }
}

}  // namespace fw
