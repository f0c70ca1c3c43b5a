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

#include "flatwall/linkage.hpp"

#include <algorithm>
#include <deque>

namespace fw {

namespace {

constexpr int kInf = 1 << 29;

struct Arc {
    int to;
    int cap;
};

// Residual network with arcs stored in pairs (arc ^ 1 is the reverse).
class FlowNet {
  public:
    explicit FlowNet(int nodes) : out_(static_cast<size_t>(nodes)) {}

    void add(int u, int v, int cap) {
        out_[static_cast<size_t>(u)].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({v, cap});
        out_[static_cast<size_t>(v)].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({u, 0});
    }

    bool augment(int s, int t) {
        std::vector<int> via(out_.size(), -1);
        std::vector<char> seen(out_.size(), 0);
        std::deque<int> q{s};
        seen[static_cast<size_t>(s)] = 1;
        while (!q.empty() && !seen[static_cast<size_t>(t)]) {
            int u = q.front();
            q.pop_front();
            for (int a : out_[static_cast<size_t>(u)]) {
                int v = arcs_[static_cast<size_t>(a)].to;
                if (arcs_[static_cast<size_t>(a)].cap <= 0 || seen[static_cast<size_t>(v)]) continue;
                seen[static_cast<size_t>(v)] = 1;
                via[static_cast<size_t>(v)] = a;
                q.push_back(v);
            }
        }
        if (!seen[static_cast<size_t>(t)]) return false;
        for (int v = t; v != s;) {
            int a = via[static_cast<size_t>(v)];
            arcs_[static_cast<size_t>(a)].cap -= 1;
            arcs_[static_cast<size_t>(a ^ 1)].cap += 1;
            v = arcs_[static_cast<size_t>(a ^ 1)].to;
        }
        return true;
    }

    std::vector<char> reachable(int s) const {
        std::vector<char> seen(out_.size(), 0);
        std::vector<int> st{s};
        seen[static_cast<size_t>(s)] = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            for (int a : out_[static_cast<size_t>(u)]) {
                int v = arcs_[static_cast<size_t>(a)].to;
                if (arcs_[static_cast<size_t>(a)].cap > 0 && !seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = 1;
                    st.push_back(v);
                }
            }
        }
        return seen;
    }

    // Flow on a forward arc = capacity moved to its reverse arc.
    int flow(int a) const { return (a & 1) ? 0 : arcs_[static_cast<size_t>(a ^ 1)].cap; }
    const std::vector<int>& out(int u) const { return out_[static_cast<size_t>(u)]; }
    int to(int a) const { return arcs_[static_cast<size_t>(a)].to; }
    void consume(int a) { arcs_[static_cast<size_t>(a ^ 1)].cap -= 1; }

  private:
    std::vector<std::vector<int>> out_;
    std::vector<Arc> arcs_;
};

VertexSet sorted_unique(VertexSet v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

LinkageResult vertex_disjoint_linkage(const Graph& g, const VertexSet& sources_in, const VertexSet& targets_in, int k,
                                      const LinkageOptions& opt) {
    if (k < 1) throw ParameterError("linkage size must be at least 1");
    VertexSet sources = sorted_unique(sources_in), targets = sorted_unique(targets_in);
    for (Vertex v : sources)
        if (!g.valid(v)) throw StructuralError("source out of range");
    for (Vertex v : targets)
        if (!g.valid(v)) throw StructuralError("target out of range");
    const int n = g.n();
    auto ok = [&](Vertex v) { return opt.allowed.empty() || opt.allowed[static_cast<size_t>(v)]; };
    std::vector<char> is_src(static_cast<size_t>(n), 0), is_tgt(static_cast<size_t>(n), 0);
    for (Vertex v : sources)
        if (ok(v)) is_src[static_cast<size_t>(v)] = 1;
    for (Vertex v : targets)
        if (ok(v)) is_tgt[static_cast<size_t>(v)] = 1;

    const int S = 2 * n, T = 2 * n + 1;
    FlowNet net(2 * n + 2);
    for (Vertex v : sources)
        if (ok(v)) net.add(S, 2 * v, kInf);
    for (Vertex v = 0; v < n; ++v) {
        if (!ok(v)) continue;
        net.add(2 * v, 2 * v + 1, 1);
        if (is_tgt[static_cast<size_t>(v)]) net.add(2 * v + 1, T, kInf);
        if (opt.avoid_terminals_inside && is_tgt[static_cast<size_t>(v)]) continue;
        for (Vertex u : g.neighbors(v)) {
            if (!ok(u)) continue;
            if (opt.avoid_terminals_inside && is_src[static_cast<size_t>(u)]) continue;
            net.add(2 * v + 1, 2 * u, kInf);
        }
    }

    int flow = 0;
    while (flow < k && net.augment(S, T)) ++flow;

    LinkageResult res;
    if (flow < k) {
        auto reach = net.reachable(S);
        for (Vertex v = 0; v < n; ++v)
            if (ok(v) && reach[static_cast<size_t>(2 * v)] && !reach[static_cast<size_t>(2 * v + 1)]) res.cut.push_back(v);
        return res;
    }

    res.linked = true;
    res.linkage.source_set = sources;
    res.linkage.target_set = targets;
    for (int p = 0; p < k; ++p) {
        Path path;
        int u = S;
        while (u != T) {
            int next = -1;
            for (int a : net.out(u))
                if (net.flow(a) > 0) {
                    net.consume(a);
                    next = net.to(a);
                    break;
                }
            if (next < 0) break;
            if (next < 2 * n && (next % 2 == 0)) path.push_back(next / 2);
            u = next;
        }
        // trim to the segment between the last source before the first target
        size_t first_t = 0;
        while (first_t < path.size() && !is_tgt[static_cast<size_t>(path[first_t])]) ++first_t;
        size_t last_s = first_t;
        while (!is_src[static_cast<size_t>(path[last_s])]) --last_s;
        res.linkage.paths.emplace_back(path.begin() + static_cast<long>(last_s),
                                       path.begin() + static_cast<long>(first_t) + 1);
    }
    std::sort(res.linkage.paths.begin(), res.linkage.paths.end());
    return res;
}

bool verify_linkage(const Graph& g, const Linkage& l, int k) {
    if (static_cast<int>(l.paths.size()) != k) return false;
    std::vector<char> used(static_cast<size_t>(g.n()), 0);
    auto src = make_mask(g.n(), l.source_set), tgt = make_mask(g.n(), l.target_set);
    for (const auto& p : l.paths) {
        if (!is_path(g, p)) return false;
        if (!src[static_cast<size_t>(p.front())] || !tgt[static_cast<size_t>(p.back())]) return false;
        for (Vertex v : p) {
            if (used[static_cast<size_t>(v)]) return false;
            used[static_cast<size_t>(v)] = 1;
        }
    }
    return true;
}

bool verify_separator(const Graph& g, const VertexSet& sources, const VertexSet& targets, const VertexSet& cut,
                      const std::vector<char>& allowed) {
    std::vector<char> mask = allowed.empty() ? std::vector<char>(static_cast<size_t>(g.n()), 1) : allowed;
    for (Vertex v : cut) mask[static_cast<size_t>(v)] = 0;
    return bfs_path(g, sources, targets, mask).empty();
}

Linkage reroute_linkage(const Graph& h, const VertexSet& x_in, const VertexSet& y_in, const VertexSet& x_sub_in,
                        const Linkage& full, const Linkage& partial) {
    VertexSet x = sorted_unique(x_in), y = sorted_unique(y_in), x_sub = sorted_unique(x_sub_in);
    const int k = static_cast<int>(full.paths.size());
    if (k < 1) throw PreconditionError("full linkage is empty");
    if (!std::includes(x.begin(), x.end(), x_sub.begin(), x_sub.end()))
        throw PreconditionError("x_sub is not a subset of x");
    if (static_cast<int>(x_sub.size()) < k - 1) throw PreconditionError("|x_sub| < k-1");
    auto xm = make_mask(h.n(), x), ym = make_mask(h.n(), y);
    for (Vertex v : x)
        if (ym[static_cast<size_t>(v)]) throw PreconditionError("x and y are not disjoint");
    Linkage f = full;
    f.source_set = x;
    f.target_set = y;
    if (!verify_linkage(h, f, k)) throw PreconditionError("full is not k disjoint x->y paths");
    Linkage pl = partial;
    pl.source_set = x_sub;
    pl.target_set = y;
    if (!verify_linkage(h, pl, k - 1)) throw PreconditionError("partial is not k-1 disjoint x_sub->y paths");
    for (const auto& p : partial.paths)
        for (size_t i = 1; i + 1 < p.size(); ++i)
            if (xm[static_cast<size_t>(p[i])] || ym[static_cast<size_t>(p[i])])
                throw PreconditionError("partial paths are not internally disjoint from x and y");

    // H': the vertices of x \ x_sub collapse into v* = h.n().
    VertexSet rest;
    std::set_difference(x.begin(), x.end(), x_sub.begin(), x_sub.end(), std::back_inserter(rest));
    auto rest_mask = make_mask(h.n(), rest);
    Graph hp(h.n() + 1);
    const Vertex vstar = h.n();
    for (auto [u, v] : h.edges()) {
        bool ru = rest_mask[static_cast<size_t>(u)], rv = rest_mask[static_cast<size_t>(v)];
        if (ru && rv) continue;
        if (ru) hp.add_edge(vstar, v);
        else if (rv) hp.add_edge(u, vstar);
        else hp.add_edge(u, v);
    }
    VertexSet xstar = x_sub;
    if (!rest.empty()) xstar.push_back(vstar);
    LinkageOptions opt;
    opt.allowed.assign(static_cast<size_t>(hp.n()), 1);
    for (Vertex v : rest) opt.allowed[static_cast<size_t>(v)] = 0;
    opt.avoid_terminals_inside = true;
    // x vertices other than the chosen sources must not be used either
    auto res = vertex_disjoint_linkage(hp, xstar, y, k, opt);
    if (!res.linked) throw PreconditionError("re-routing failed: hypotheses do not hold");

    Linkage out;
    out.source_set = x;
    out.target_set = y;
    for (auto p : res.linkage.paths) {
        if (p.front() == vstar) {
            Vertex succ = p.size() > 1 ? p[1] : -1;
            Vertex pick = -1;
            for (Vertex r : rest)
                if (succ >= 0 && h.has_edge(r, succ)) {
                    pick = r;
                    break;
                }
            if (pick < 0) throw PreconditionError("re-routing failed: v* path has no preimage");
            p.front() = pick;
        }
        out.paths.push_back(std::move(p));
    }
    std::sort(out.paths.begin(), out.paths.end());
    return out;
}

}  // namespace fw
