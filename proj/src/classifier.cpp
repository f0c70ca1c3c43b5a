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

#include "flatwall/classifier.hpp"

#include <algorithm>
#include <exception>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <thread>

#include "flatwall/minor_forge.hpp"

namespace fw {

namespace {

int pair_count(int t) { return t * (t - 1) / 2; }

void check_core_args(const Chain& chain, int k, int tau) {
    if (chain.size() < 3) throw ParameterError("chain needs at least three basic walls");
    if (k < 1 || k > chain.size() - 2)
        throw ParameterError("wall " + std::to_string(k) + " is not an interior wall of the chain");
    if (tau < 1 || 2 * tau >= chain.z) throw ParameterError("tau must satisfy 1 <= tau < z/2");
}

bool has(const VertexSet& sorted, Vertex v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

// Components of g - V(W') and the vertices of W' each of them touches.
struct ChainIndex {
    std::vector<char> on_wall;
    std::vector<int> comp;
    std::vector<VertexSet> comps;
    std::vector<VertexSet> attach;
};

ChainIndex index_chain(const Graph& g, const Chain& chain) {
    ChainIndex ix;
    const size_t n = static_cast<size_t>(g.n());
    ix.on_wall = make_mask(g.n(), chain.vertices());
    std::vector<char> off(n);
    for (size_t v = 0; v < n; ++v) off[v] = !ix.on_wall[v];
    ix.comp.assign(n, -1);
    for (VertexSet& c : components(g, off)) {
        if (c.empty()) continue;
        const int id = static_cast<int>(ix.comps.size());
        VertexSet at;
        for (Vertex v : c) {
            ix.comp[static_cast<size_t>(v)] = id;
            for (Vertex u : g.neighbors(v))
                if (ix.on_wall[static_cast<size_t>(u)]) at.push_back(u);
        }
        std::sort(at.begin(), at.end());
        at.erase(std::unique(at.begin(), at.end()), at.end());
        ix.comps.push_back(std::move(c));
        ix.attach.push_back(std::move(at));
    }
    return ix;
}

struct CoreMasks {
    CoreWall core;
    std::vector<char> in_core, on_gamma, nbhd;
    bool interior(Vertex v) const { return in_core[static_cast<size_t>(v)] && !on_gamma[static_cast<size_t>(v)]; }
};

CoreMasks core_masks(const Graph& g, const Chain& chain, int k, int tau) {
    CoreMasks m;
    m.core = core_wall(chain, k, tau);
    m.in_core = make_mask(g.n(), m.core.wall.vertices());
    m.on_gamma = make_mask(g.n(), m.core.boundary);
    m.nbhd = make_mask(g.n(), chain.neighborhood(k));
    return m;
}

std::vector<Bridge> bridges_with(const Graph& g, const ChainIndex& ix, const CoreMasks& m, int k) {
    std::vector<Bridge> out;
    auto outside_core = [&](Vertex v) { return ix.on_wall[static_cast<size_t>(v)] && !m.in_core[static_cast<size_t>(v)]; };
    for (Vertex x : m.core.wall.vertices()) {
        if (!m.interior(x)) continue;
        for (Vertex y : g.neighbors(x)) {
            if (!outside_core(y)) continue;
            Bridge b;
            b.kind = Bridge::Kind::Edge;
            b.core = k;
            b.u = x;
            b.v = y;
            b.attachments = {std::min(x, y), std::max(x, y)};
            b.neighborhood = m.nbhd[static_cast<size_t>(x)] && m.nbhd[static_cast<size_t>(y)];
            out.push_back(std::move(b));
        }
    }
    for (size_t c = 0; c < ix.comps.size(); ++c) {
        const VertexSet& at = ix.attach[c];
        bool in = false, outside = false, local = true;
        for (Vertex v : at) {
            in = in || m.interior(v);
            outside = outside || outside_core(v);
            local = local && m.nbhd[static_cast<size_t>(v)];
        }
        if (!in || !outside) continue;
        Bridge b;
        b.kind = Bridge::Kind::Component;
        b.core = k;
        b.component = ix.comps[c];
        b.attachments = at;
        b.neighborhood = local;
        out.push_back(std::move(b));
    }
    return out;
}

WallType classify_with(const Graph& g, const Chain& chain, const ChainIndex& ix, int k, int tau) {
    CoreMasks m = core_masks(g, chain, k, tau);
    WallType wt;
    wt.core = k;
    wt.tau = tau;
    wt.bridges = bridges_with(g, ix, m, k);
    if (!wt.bridges.empty()) {
        const bool local = std::any_of(wt.bridges.begin(), wt.bridges.end(), [](const Bridge& b) { return b.neighborhood; });
        wt.kind = local ? WallKind::Type1 : WallKind::Type2;
        return wt;
    }

    // Side X: Gamma' plus every component of g - Gamma' that stays away from
    // the rest of W'.
    std::vector<char> off_gamma(static_cast<size_t>(g.n()));
    for (size_t v = 0; v < off_gamma.size(); ++v) off_gamma[v] = !m.on_gamma[v];
    VertexSet side = m.core.boundary;
    for (const VertexSet& c : components(g, off_gamma)) {
        if (c.empty() || !off_gamma[static_cast<size_t>(c.front())]) continue;
        const bool foreign = std::any_of(c.begin(), c.end(), [&](Vertex v) {
            return ix.on_wall[static_cast<size_t>(v)] && !m.in_core[static_cast<size_t>(v)];
        });
        if (!foreign) side.insert(side.end(), c.begin(), c.end());
    }
    std::sort(side.begin(), side.end());
    side.erase(std::unique(side.begin(), side.end()), side.end());
    wt.side_x = side;

    std::vector<Vertex> old;
    Graph x = induced_subgraph(g, side, &old);
    auto local = [&](Vertex v) {
        return static_cast<Vertex>(std::lower_bound(old.begin(), old.end(), v) - old.begin());
    };
    auto paths = two_disjoint_paths(x, local(m.core.a), local(m.core.c), local(m.core.b), local(m.core.d));
    if (!paths) {
        wt.kind = WallKind::Type4;
        return wt;
    }
    for (Vertex& v : paths->p1) v = old[static_cast<size_t>(v)];
    for (Vertex& v : paths->p2) v = old[static_cast<size_t>(v)];
    wt.kind = WallKind::Type3;
    wt.cross = std::move(*paths);
    return wt;
}

}  // namespace

CoreWall core_wall(const Chain& chain, int k, int tau) {
    check_core_args(chain, k, tau);
    const Wall& b = chain.basic[static_cast<size_t>(k)];
    CoreWall cw;
    cw.index = k;
    cw.tau = tau;
    cw.wall = subwall(b, tau, chain.z - tau + 1, 1, b.r());
    cw.boundary = cw.wall.boundary_cycle();
    cw.a = cw.wall.a();
    cw.b = cw.wall.b();
    cw.c = cw.wall.c();
    cw.d = cw.wall.d();
    return cw;
}

std::vector<Bridge> bridges_of(const Graph& g, const Chain& chain, int k, int tau) {
    check_core_args(chain, k, tau);
    return bridges_with(g, index_chain(g, chain), core_masks(g, chain, k, tau), k);
}

Path bridge_path(const Graph& g, const Chain& chain, const Bridge& br, int tau) {
    if (br.kind == Bridge::Kind::Edge) return {br.u, br.v};
    CoreMasks m = core_masks(g, chain, br.core, tau);
    VertexSet xs, ys;
    for (Vertex v : br.attachments) {
        if (m.interior(v)) xs.push_back(v);
        else if (!m.in_core[static_cast<size_t>(v)]) ys.push_back(v);
    }
    if (xs.empty() || ys.empty()) throw PreconditionError("bridge does not touch both the core interior and the rest of W'");
    auto mask = make_mask(g.n(), br.component);
    VertexSet from, to;
    for (Vertex v : br.component) {
        for (Vertex u : g.neighbors(v)) {
            if (u == xs.front()) from.push_back(v);
            if (u == ys.front()) to.push_back(v);
        }
    }
    Path mid = bfs_path(g, from, to, mask);
    if (mid.empty()) throw std::logic_error("bridge component is not connected");
    Path p{xs.front()};
    p.insert(p.end(), mid.begin(), mid.end());
    p.push_back(ys.front());
    return p;
}

std::string wall_kind_name(WallKind k) {
    switch (k) {
        case WallKind::Type1: return "type1";
        case WallKind::Type2: return "type2";
        case WallKind::Type3: return "type3";
        case WallKind::Type4: return "type4";
    }
    return "unknown";
}

WallType classify(const Graph& g, const Chain& chain, int k, int tau) {
    check_core_args(chain, k, tau);
    return classify_with(g, chain, index_chain(g, chain), k, tau);
}

std::vector<WallType> classify_all(const Graph& g, const Chain& chain, int tau, int threads) {
    if (chain.size() < 3) return {};
    check_core_args(chain, 1, tau);
    const ChainIndex ix = index_chain(g, chain);
    const int n = chain.size() - 2;
    std::vector<WallType> out(static_cast<size_t>(n));
    std::vector<std::exception_ptr> err(static_cast<size_t>(n));
    const int workers = std::clamp(threads, 1, n);
    auto run = [&](int w) {
        for (int k = 1 + w; k <= n; k += workers) {
            try {
                out[static_cast<size_t>(k - 1)] = classify_with(g, chain, ix, k, tau);
            } catch (...) {
                err[static_cast<size_t>(k - 1)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

// ---------------------------------------------------------------- type 4

namespace {

Graph without(const Graph& g, const VertexSet& apex) {
    Graph h = g;
    for (Vertex a : apex) {
        if (!g.valid(a)) throw StructuralError("apex vertex out of range");
        const std::vector<Vertex> nb = h.neighbors(a);
        for (Vertex u : nb) h.remove_edge(a, u);
    }
    return h;
}

// Host degree of each vertex inside the edge set of a wall.
std::vector<int> wall_degrees(int n, const Wall& w) {
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (auto [u, v] : w.host_edges()) {
        ++deg[static_cast<size_t>(u)];
        ++deg[static_cast<size_t>(v)];
    }
    return deg;
}

// Component label of every vertex of g restricted to the mask, -1 outside.
std::vector<int> label_components(const Graph& g, const std::vector<char>& mask) {
    std::vector<int> lab(static_cast<size_t>(g.n()), -1);
    int id = 0;
    for (const VertexSet& c : components(g, mask)) {
        if (c.empty() || !mask[static_cast<size_t>(c.front())]) continue;
        for (Vertex v : c) lab[static_cast<size_t>(v)] = id;
        ++id;
    }
    return lab;
}

Graph local_graph(const Graph& g, const VertexSet& side, std::vector<Vertex>& old) {
    return induced_subgraph(g, side, &old);
}

Vertex local_id(const std::vector<Vertex>& old, Vertex v) {
    auto it = std::lower_bound(old.begin(), old.end(), v);
    if (it == old.end() || *it != v) throw std::logic_error("vertex missing from the local graph");
    return static_cast<Vertex>(it - old.begin());
}

}  // namespace

Path separator_cycle(const FlatWallCertificate& cert) {
    VertexSet a = cert.side_a, b = cert.side_b;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Path out;
    for (Vertex v : cert.wall.boundary_cycle())
        if (has(a, v) && has(b, v)) out.push_back(v);
    return out;
}

Graph reduction_graph(const Graph& g, const FlatWallCertificate& cert) {
    VertexSet side = cert.side_b;
    std::sort(side.begin(), side.end());
    side.erase(std::unique(side.begin(), side.end()), side.end());
    std::vector<Vertex> old;
    Graph r = local_graph(without(g, cert.apex), side, old);
    Path cyc = separator_cycle(cert);
    for (size_t i = 0; i < cyc.size() && cyc.size() >= 3; ++i)
        r.add_edge(local_id(old, cyc[i]), local_id(old, cyc[(i + 1) % cyc.size()]));
    return r;
}

FlatWallCertificate flat_from_type4(const Graph& g, const Chain& chain, int k, int tau, const VertexSet& apex) {
    check_core_args(chain, k, tau);
    if (chain.z - 2 * tau < 2) throw ParameterError("the core is too short to hold an interior wall (need z - 2 tau >= 2)");
    const Graph ga = without(g, apex);
    const WallType wt = classify(ga, chain, k, tau);
    if (wt.kind != WallKind::Type4)
        throw PreconditionError("classification mismatch: wall " + std::to_string(k) + " is " + wall_kind_name(wt.kind));
    const CoreWall core = core_wall(chain, k, tau);
    FlatWallCertificate cert;
    cert.apex = apex;
    std::sort(cert.apex.begin(), cert.apex.end());
    cert.wall = subwall(core.wall, 2, core.wall.h() - 1, 2, core.wall.r() - 1);
    const VertexSet wall_vs = cert.wall.vertices();
    for (Vertex a : cert.apex)
        if (has(wall_vs, a)) throw PreconditionError("apex vertex on the wall");

    // L-flat decomposition of X + L.
    std::vector<Vertex> xold;
    Graph xt = local_graph(ga, wt.side_x, xold);
    const Path L{local_id(xold, core.a), local_id(xold, core.b), local_id(xold, core.c), local_id(xold, core.d)};
    for (size_t i = 0; i < 4; ++i) xt.add_edge(L[i], L[(i + 1) % 4]);
    CrossOrFlat xf = c_cross_or_flat(xt, L);
    if (!xf.flat) throw std::logic_error("X + L has an L-cross although X has no wall-cross");

    const Path gstar = cert.wall.boundary_cycle();
    const auto on_gstar = make_mask(g.n(), gstar);
    const auto in_wall = make_mask(g.n(), wall_vs);
    std::vector<char> off_gstar(static_cast<size_t>(g.n()));
    for (size_t v = 0; v < off_gstar.size(); ++v) off_gstar[v] = !on_gstar[v];
    const auto lab = label_components(ga, off_gstar);
    const int outer = lab[static_cast<size_t>(core.a)];  // R': holds B - B'

    std::vector<char> sep(static_cast<size_t>(g.n()), 0);
    for (Vertex v : gstar)
        for (Vertex u : ga.neighbors(v))
            if (lab[static_cast<size_t>(u)] == outer) sep[static_cast<size_t>(v)] = 1;

    VertexSet g0;
    for (Vertex v : xf.flat->g0) g0.push_back(xold[static_cast<size_t>(v)]);
    std::sort(g0.begin(), g0.end());
    for (const FlatPiece& p : xf.flat->pieces) {
        VertexSet inner, ends;
        for (Vertex lv : p.vertices) {
            const Vertex v = xold[static_cast<size_t>(lv)];
            (has(g0, v) ? ends : inner).push_back(v);
        }
        const bool touches = std::any_of(inner.begin(), inner.end(), [&](Vertex v) { return on_gstar[static_cast<size_t>(v)]; });
        int type = 0;
        if (!touches) {
            type = 1;
        } else if (ends.size() == 2) {
            type = 2;
        } else {
            VertexSet off;
            for (Vertex v : ends)
                if (!on_gstar[static_cast<size_t>(v)]) off.push_back(v);
            type = off.size() == 1 && lab[static_cast<size_t>(off.front())] == outer ? 3 : 4;
        }
        ++cert.x_piece_types[static_cast<size_t>(type - 1)];
        if (type != 3) continue;
        for (Vertex lv : p.vertices) {
            const Vertex v = xold[static_cast<size_t>(lv)];
            if (!in_wall[static_cast<size_t>(v)]) continue;
            if (!on_gstar[static_cast<size_t>(v)]) throw std::logic_error("type-3 piece meets the wall off its boundary");
            sep[static_cast<size_t>(v)] = 1;
        }
    }

    // B: the separator plus every component of g - Z' holding a wall vertex.
    std::vector<char> off_sep(static_cast<size_t>(g.n()));
    for (size_t v = 0; v < off_sep.size(); ++v) off_sep[v] = !sep[v];
    for (Vertex a : cert.apex) off_sep[static_cast<size_t>(a)] = 0;
    const auto lab2 = label_components(ga, off_sep);
    std::vector<char> keep_comp(static_cast<size_t>(g.n()) + 1, 0);
    for (Vertex v : wall_vs)
        if (lab2[static_cast<size_t>(v)] >= 0) keep_comp[static_cast<size_t>(lab2[static_cast<size_t>(v)])] = 1;
    std::vector<char> in_b(static_cast<size_t>(g.n()), 0);
    for (Vertex v = 0; v < g.n(); ++v) {
        const int c = lab2[static_cast<size_t>(v)];
        if (sep[static_cast<size_t>(v)] || (c >= 0 && keep_comp[static_cast<size_t>(c)])) in_b[static_cast<size_t>(v)] = 1;
        if (c >= 0 && keep_comp[static_cast<size_t>(c)] && lab[static_cast<size_t>(v)] == outer && !on_gstar[static_cast<size_t>(v)])
            throw std::logic_error("the wall side of the separation reaches R'");
    }
    for (Vertex v = 0; v < g.n(); ++v) {
        if (has(cert.apex, v)) continue;
        if (in_b[static_cast<size_t>(v)]) cert.side_b.push_back(v);
        if (!in_b[static_cast<size_t>(v)] || sep[static_cast<size_t>(v)]) cert.side_a.push_back(v);
    }

    const auto deg_w = wall_degrees(g.n(), cert.wall), deg_b = wall_degrees(g.n(), core.wall);
    for (Vertex v : gstar)
        if (deg_w[static_cast<size_t>(v)] == 2 && deg_b[static_cast<size_t>(v)] == 3) cert.pegs.push_back(v);
    std::sort(cert.pegs.begin(), cert.pegs.end());
    for (Vertex p : cert.pegs)
        if (!sep[static_cast<size_t>(p)]) throw std::logic_error("peg without an edge into R'");

    const std::vector<Vertex>& bold = cert.side_b;
    Graph red = reduction_graph(g, cert);
    Path cyc;
    for (Vertex v : separator_cycle(cert)) cyc.push_back(local_id(bold, v));
    CrossOrFlat rf = c_cross_or_flat(red, cyc);
    if (!rf.flat) throw std::logic_error("the wall side of the separation is not flat around the separator");
    cert.reduction = std::move(*rf.flat);

    auto rep = verify_flat_certificate(g, cert);
    if (!rep.ok()) throw std::logic_error("flat certificate failed its own check: " + rep.clause);
    return cert;
}

ValidationReport verify_flat_certificate(const Graph& g, const FlatWallCertificate& cert) {
    for (const VertexSet* s : {&cert.apex, &cert.side_a, &cert.side_b, &cert.pegs})
        for (Vertex v : *s)
            if (!g.valid(v)) return ValidationReport::structural("certificate vertex out of range");
    for (Vertex v : cert.wall.branch)
        if (!g.valid(v)) return ValidationReport::structural("wall vertex out of range");
    const Graph ga = without(g, cert.apex);
    auto rep = check_wall(ga, cert.wall);
    if (!rep.ok()) return {rep.kind, "wall: " + rep.clause};

    auto sorted = [](VertexSet s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    };
    const VertexSet apex = sorted(cert.apex), sa = sorted(cert.side_a), sb = sorted(cert.side_b);
    const VertexSet wall_vs = cert.wall.vertices();
    for (Vertex v : wall_vs)
        if (has(apex, v)) return ValidationReport::semantic("wall meets the apex set");
    for (Vertex v : apex)
        if (has(sa, v) || has(sb, v)) return ValidationReport::semantic("apex vertex inside the separation");
    for (Vertex v = 0; v < g.n(); ++v)
        if (!has(apex, v) && !has(sa, v) && !has(sb, v)) return ValidationReport::semantic("sides do not cover V(G) - A");
    for (auto [u, v] : ga.edges()) {
        const bool ua = has(sa, u) && !has(sb, u), ub = has(sb, u) && !has(sa, u);
        const bool va = has(sa, v) && !has(sb, v), vb = has(sb, v) && !has(sa, v);
        if ((ua && vb) || (ub && va)) return ValidationReport::semantic("an edge crosses the separation");
    }
    const VertexSet bd = sorted(cert.wall.boundary_cycle());
    for (Vertex v : sa)
        if (has(sb, v) && !has(bd, v)) return ValidationReport::semantic("A & B leaves the boundary of the wall");
    for (Vertex v : wall_vs)
        if (!has(sb, v)) return ValidationReport::semantic("wall vertex outside B");
    for (Vertex p : cert.pegs)
        if (!has(sa, p) || !has(sb, p)) return ValidationReport::semantic("peg outside A & B");
    const VertexSet pegs = sorted(cert.pegs);
    for (Vertex p : cert.wall.pegs())
        if (!has(pegs, p)) return ValidationReport::semantic("a peg of the wall is missing from the peg set");

    const Path cyc_host = separator_cycle(cert);
    if (cyc_host.size() < 3) return ValidationReport::semantic("fewer than three separator vertices");
    Graph red = reduction_graph(g, cert);
    Path cyc;
    for (Vertex v : cyc_host) cyc.push_back(static_cast<Vertex>(std::lower_bound(sb.begin(), sb.end(), v) - sb.begin()));
    rep = verify_flat_decomposition(red, cyc, cert.reduction);
    if (!rep.ok()) return {rep.kind, "reduction: " + rep.clause};
    return ValidationReport::pass();
}

nlohmann::json certificate_to_json(const FlatWallCertificate& cert) {
    nlohmann::json j;
    j["wall"] = wall_to_json(cert.wall);
    j["apex"] = cert.apex;
    j["side_a"] = cert.side_a;
    j["side_b"] = cert.side_b;
    j["pegs"] = cert.pegs;
    j["reduction"] = flat_to_json(cert.reduction);
    j["x_piece_types"] = cert.x_piece_types;
    return j;
}

FlatWallCertificate certificate_from_json(const nlohmann::json& j) {
    try {
        FlatWallCertificate cert;
        cert.wall = wall_from_json(j.at("wall"));
        cert.apex = j.at("apex").get<VertexSet>();
        cert.side_a = j.at("side_a").get<VertexSet>();
        cert.side_b = j.at("side_b").get<VertexSet>();
        cert.pegs = j.at("pegs").get<VertexSet>();
        cert.reduction = flat_from_json(j.at("reduction"), static_cast<int>(cert.side_b.size()));
        if (j.contains("x_piece_types")) cert.x_piece_types = j.at("x_piece_types").get<std::array<int, 4>>();
        return cert;
    } catch (const nlohmann::json::exception& ex) {
        throw StructuralError(std::string("malformed flat wall certificate: ") + ex.what());
    }
}

// ---------------------------------------------------------------- K_t from crossed walls

namespace {

// A wall-cross of the sub-wall of W' spanned by rows rho1..rho2 and columns
// j1..j2, with p1 from its corner a to c and p2 from b to d.
struct RangeCross {
    int j1 = 0, j2 = 0, rho1 = 0, rho2 = 0;
    Path p1, p2;
};

size_t position(const Path& p, Vertex v) {
    auto it = std::find(p.begin(), p.end(), v);
    if (it == p.end()) throw std::logic_error("vertex is not on the expected row or column");
    return static_cast<size_t>(it - p.begin());
}

Path join(std::initializer_list<Path> parts) {
    Path walk;
    for (const Path& p : parts) {
        if (!walk.empty() && !p.empty() && walk.back() == p.front()) walk.pop_back();
        walk.insert(walk.end(), p.begin(), p.end());
    }
    return walk_to_path(walk);
}

// Model of H* in g. Block J_r sits on the t columns that follow the previous
// crossed range (the first t columns of W' for r = 1), the two cross edges of
// L_r run through the cross of range r, and the rows of H* are the top t and
// bottom t rows of W'.
std::pair<FamilyInstance, MinorModel> hstar_from_ranges(const Graph& g, const Wall& wp, const std::vector<RangeCross>& sel,
                                                        int t) {
    const int T = pair_count(t), z = wp.h();
    if (static_cast<int>(sel.size()) != T) throw std::logic_error("H* needs exactly T crossed ranges");
    FamilyInstance inst = build_family_instance(Family::HStar, t);
    const GridGraph& grid = inst.grid;

    std::vector<int> q(static_cast<size_t>(T * t + 2), 0);
    int prev = 0;
    for (int r = 1; r <= T; ++r) {
        const RangeCross& x = sel[static_cast<size_t>(r - 1)];
        if (prev + t >= x.j1) throw std::logic_error("fewer than t free columns before a crossed range");
        if (x.rho1 <= t || x.rho2 >= z - t + 1) throw std::logic_error("crossed range reaches the top or bottom t rows");
        for (int m = 1; m <= t; ++m) q[static_cast<size_t>(t * (r - 1) + m)] = prev + m;
        prev = x.j2;
    }
    if (prev + 1 > wp.r()) throw std::logic_error("no column after the last crossed range");
    q[static_cast<size_t>(T * t + 1)] = prev + 1;

    auto rho = [&](int i) { return i <= t ? i : z - 2 * t + i; };
    std::vector<Path> rows(static_cast<size_t>(2 * t + 1));
    std::vector<std::vector<char>> on_row(static_cast<size_t>(2 * t + 1));
    for (int i = 1; i <= 2 * t; ++i) {
        rows[static_cast<size_t>(i)] = wp.row(rho(i));
        on_row[static_cast<size_t>(i)] = make_mask(g.n(), rows[static_cast<size_t>(i)]);
    }
    const int ncol = T * t + 1;
    std::vector<Path> cols(static_cast<size_t>(ncol + 1));
    for (int c = 1; c <= ncol; ++c) cols[static_cast<size_t>(c)] = wp.col(q[static_cast<size_t>(c)]);

    // Row positions [lo, hi] of each image.
    std::vector<std::pair<size_t, size_t>> span(static_cast<size_t>(grid.g.n()));
    for (int i = 1; i <= 2 * t; ++i) {
        const Path& row = rows[static_cast<size_t>(i)];
        for (int c = 1; c <= ncol; ++c) {
            size_t lo = row.size(), hi = 0;
            for (Vertex v : cols[static_cast<size_t>(c)]) {
                if (!on_row[static_cast<size_t>(i)][static_cast<size_t>(v)]) continue;
                const size_t p = position(row, v);
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
            if (lo > hi) throw std::logic_error("row and column of W' do not meet");
            span[static_cast<size_t>(grid.v(i, c))] = {lo, hi};
        }
    }

    ValidEmbedding emb;
    emb.pattern = inst.graph();
    auto last_on = [&](const Path& col, int i) {
        Vertex out = -1;
        for (Vertex v : col)
            if (on_row[static_cast<size_t>(i)][static_cast<size_t>(v)]) out = v;
        return out;
    };
    auto first_on = [&](const Path& col, int i) {
        for (Vertex v : col)
            if (on_row[static_cast<size_t>(i)][static_cast<size_t>(v)]) return v;
        return Vertex{-1};
    };
    for (int r = 1; r <= T; ++r) {
        const RangeCross& x = sel[static_cast<size_t>(r - 1)];
        const int c = t * r;
        const Path cj1 = wp.col(x.j1), cj2 = wp.col(x.j2);
        const Vertex a2 = last_on(cj1, t), b2 = last_on(cj2, t), d2 = first_on(cj1, t + 1), c2 = first_on(cj2, t + 1);
        span[static_cast<size_t>(grid.v(t, c))].second = position(rows[static_cast<size_t>(t)], a2);
        span[static_cast<size_t>(grid.v(t, c + 1))].first = position(rows[static_cast<size_t>(t)], b2);
        span[static_cast<size_t>(grid.v(t + 1, c))].second = position(rows[static_cast<size_t>(t + 1)], d2);
        span[static_cast<size_t>(grid.v(t + 1, c + 1))].first = position(rows[static_cast<size_t>(t + 1)], c2);
        Path q1 = join({segment(cj1, a2, x.p1.front()), x.p1, segment(cj2, x.p1.back(), c2)});
        Path q2 = join({segment(cj2, b2, x.p2.front()), x.p2, segment(cj1, x.p2.back(), d2)});
        emb.edge_images.push_back({{grid.v(t, c), grid.v(t + 1, c + 1)}, std::move(q1)});
        emb.edge_images.push_back({{grid.v(t, c + 1), grid.v(t + 1, c)}, std::move(q2)});
    }
    emb.vertex_images.resize(static_cast<size_t>(grid.g.n()));
    for (int i = 1; i <= 2 * t; ++i) {
        const Path& row = rows[static_cast<size_t>(i)];
        for (int c = 1; c <= ncol; ++c) {
            auto [lo, hi] = span[static_cast<size_t>(grid.v(i, c))];
            if (lo > hi) throw std::logic_error("corner of a crossed range precedes its H* column");
            emb.vertex_images[static_cast<size_t>(grid.v(i, c))].assign(row.begin() + static_cast<long>(lo),
                                                                          row.begin() + static_cast<long>(hi) + 1);
            if (c < ncol) {
                const size_t nlo = span[static_cast<size_t>(grid.v(i, c + 1))].first;
                emb.edge_images.push_back({{grid.v(i, c), grid.v(i, c + 1)},
                                           Path(row.begin() + static_cast<long>(hi), row.begin() + static_cast<long>(nlo) + 1)});
            }
        }
    }
    for (int c = 1; c <= ncol; ++c) {
        const Path& col = cols[static_cast<size_t>(c)];
        for (int i = 1; i < 2 * t; ++i) {
            const Vertex top = last_on(col, i), bot = first_on(col, i + 1);
            emb.edge_images.push_back({{grid.v(i, c), grid.v(i + 1, c)}, segment(col, top, bot)});
        }
    }
    auto rep = validate_embedding(g, emb);
    if (!rep.ok()) throw std::logic_error("H* embedding failed: " + rep.clause);
    return {inst, embedding_to_model(g, emb)};
}

bool disjoint_paths(const Path& a, const Path& b) {
    VertexSet sa(a.begin(), a.end());
    std::sort(sa.begin(), sa.end());
    return std::none_of(b.begin(), b.end(), [&](Vertex v) { return has(sa, v); });
}

}  // namespace

MinorModel kt_from_type3(const Graph& g, const Chain& chain, const std::vector<CoreCross>& crosses, int t, const Wall* grasp,
                         Type3Report* report) {
    if (t < 2) throw ParameterError("t must be at least 2");
    const int T = pair_count(t);
    if (static_cast<int>(crosses.size()) < 2 * T)
        throw PreconditionError("too few type-3 walls: " + std::to_string(crosses.size()) + " < 2T = " + std::to_string(2 * T));
    std::vector<CoreCross> s = crosses;
    std::sort(s.begin(), s.end(), [](const CoreCross& a, const CoreCross& b) { return a.index < b.index; });
    for (size_t i = 0; i < s.size(); ++i) {
        const CoreCross& x = s[i];
        check_core_args(chain, x.index, x.tau);
        if (i > 0 && s[i - 1].index == x.index) throw PreconditionError("wall " + std::to_string(x.index) + " listed twice");
        if (x.tau <= t) throw PreconditionError("type-3 walls need tau > t");
        const CoreWall core = core_wall(chain, x.index, x.tau);
        const TwoPaths& p = x.cross;
        if (p.p1.empty() || p.p2.empty() || p.p1.front() != core.a || p.p1.back() != core.c || p.p2.front() != core.b ||
            p.p2.back() != core.d || !is_path(g, p.p1) || !is_path(g, p.p2) || !disjoint_paths(p.p1, p.p2))
            throw PreconditionError("missing or invalid cross witness for wall " + std::to_string(x.index));
    }
    std::vector<RangeCross> ranges;
    Type3Report rep;
    for (size_t i = 1; i < s.size() && static_cast<int>(ranges.size()) < T; i += 2) {
        const CoreCross& x = s[i];
        const int j1 = chain.first_col[static_cast<size_t>(x.index)];
        ranges.push_back({j1, j1 + chain.basic[static_cast<size_t>(x.index)].r() - 1, x.tau, chain.z - x.tau + 1, x.cross.p1,
                          x.cross.p2});
        rep.selected.push_back(x.index);
    }
    auto [inst, m] = hstar_from_ranges(g, chain.union_wall, ranges, t);
    if (report) *report = rep;
    return clique_from_hstar(g, inst, m, grasp);
}

MinorModel kt_from_type1(const Graph& g, const Chain& chain, const std::vector<BridgeWitness>& witnesses, int t,
                         const Wall* grasp, Type1Report* report) {
    if (t < 2) throw ParameterError("t must be at least 2");
    const int T = pair_count(t);
    if (static_cast<int>(witnesses.size()) < 12 * T + 6)
        throw PreconditionError("too few type-1 walls: " + std::to_string(witnesses.size()) + " < 12T+6 = " +
                                std::to_string(12 * T + 6));
    const Wall& wp = chain.union_wall;
    const int z = chain.z;
    const auto on_wall = make_mask(g.n(), chain.vertices());
    std::vector<BridgeWitness> s = witnesses;
    std::sort(s.begin(), s.end(), [](const BridgeWitness& a, const BridgeWitness& b) { return a.index < b.index; });
    for (size_t i = 0; i < s.size(); ++i) {
        const BridgeWitness& w = s[i];
        check_core_args(chain, w.index, w.tau);
        if (i > 0 && s[i - 1].index == w.index) throw PreconditionError("wall " + std::to_string(w.index) + " listed twice");
        if (w.tau < 2 * t) throw PreconditionError("type-1 walls need tau >= 2t");
        const std::string who = "bridge path of wall " + std::to_string(w.index);
        if (w.path.size() < 2 || !is_path(g, w.path)) throw PreconditionError(who + " is not a path");
        CoreWall core = core_wall(chain, w.index, w.tau);
        const VertexSet cv = core.wall.vertices(), bd = [&] {
            VertexSet b = core.boundary;
            std::sort(b.begin(), b.end());
            return b;
        }();
        const VertexSet nb = chain.neighborhood(w.index);
        const Vertex x = w.path.front(), y = w.path.back();
        if (!has(cv, x) || has(bd, x)) throw PreconditionError(who + " does not start inside the core");
        if (!has(nb, y) || has(cv, y)) throw PreconditionError(who + " does not end in N(B) - B'");
        for (size_t k = 1; k + 1 < w.path.size(); ++k)
            if (on_wall[static_cast<size_t>(w.path[k])]) throw PreconditionError(who + " runs through W'");
    }

    Type1Report rep;
    std::vector<BridgeWitness> chosen;
    for (size_t i = 2; i < s.size() && static_cast<int>(chosen.size()) < 4 * T + 2; i += 3) chosen.push_back(s[i]);
    for (size_t i = 1; i < chosen.size(); ++i)
        if (chosen[i].index < chosen[i - 1].index + 3) throw std::logic_error("selected walls closer than 3");
    for (size_t i = 0; i < chosen.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (!disjoint_paths(chosen[i].path, chosen[j].path))
                throw PreconditionError("bridge paths of walls " + std::to_string(chosen[j].index) + " and " +
                                        std::to_string(chosen[i].index) + " meet");
    const VertexSet middle = subwall(wp, t + 1, z - t, 1, wp.r()).vertices();
    std::vector<BridgeWitness> s1, s2;
    for (const BridgeWitness& w : chosen) {
        rep.selected.push_back(w.index);
        if (has(middle, w.path.back())) {
            s2.push_back(w);
            rep.s2.push_back(w.index);
        } else {
            s1.push_back(w);
            rep.s1.push_back(w.index);
        }
    }

    if (static_cast<int>(s1.size()) >= 2 * T + 2) {
        rep.route = "H2";
        auto [grid, gm] = contract_to_grid(wp);
        std::vector<Vertex> owner(static_cast<size_t>(g.n()), -1);
        for (size_t b = 0; b < gm.branch_sets.size(); ++b)
            for (Vertex v : gm.branch_sets[b]) owner[static_cast<size_t>(v)] = static_cast<Vertex>(b);
        std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
        MinorModel m;
        m.branch_sets = gm.branch_sets;
        for (int e = 0; e < 2 * T + 2; ++e) {
            const Path& p = s1[static_cast<size_t>(e)].path;
            const Vertex gx = owner[static_cast<size_t>(p.front())], gy = owner[static_cast<size_t>(p.back())];
            if (gx < 0 || gy < 0) throw std::logic_error("bridge endpoint outside the contracted grid");
            edges.push_back({{grid.row_of(gx), grid.col_of(gx)}, {grid.row_of(gy), grid.col_of(gy)}});
            auto& bs = m.branch_sets[static_cast<size_t>(gx)];
            bs.insert(bs.end(), p.begin() + 1, p.end() - 1);
            std::sort(bs.begin(), bs.end());
        }
        FamilyInstance inst = make_family_instance(Family::H2, t, grid.h, grid.r, edges);
        auto vr = validate_family(inst);
        if (!vr.ok()) throw std::logic_error("contracted graph is not in H2: " + vr.clause);
        m.pattern = inst.graph();
        fill_witnesses(g, m);
        if (report) *report = rep;
        return clique_from_h2(g, inst, m, grasp);
    }

    if (static_cast<int>(s2.size()) < 2 * T) throw std::logic_error("neither S1 >= 2T+2 nor S2 >= 2T");
    rep.route = "HSTAR";
    auto range_of = [&](int k) {
        const int i1 = chain.first_col[static_cast<size_t>(k - 1)];
        const int i2 = chain.first_col[static_cast<size_t>(k + 1)] + chain.basic[static_cast<size_t>(k + 1)].r() - 1;
        return std::pair<int, int>{i1, i2};
    };
    for (size_t i = 1; i < s2.size(); ++i) {
        if (range_of(s2[i].index).first == range_of(s2[i - 1].index).second + 1)
            rep.notes.push_back("neighbourhood ranges of walls " + std::to_string(s2[i - 1].index) + " and " +
                                std::to_string(s2[i].index) + " abut; only every second range is used");
    }
    std::vector<RangeCross> ranges;
    for (size_t i = 1; i < s2.size() && static_cast<int>(ranges.size()) < T; i += 2) {
        const BridgeWitness& w = s2[i];
        auto [i1, i2] = range_of(w.index);
        const Wall core = subwall(wp, t + 1, z - t, i1, i2);
        const Vertex x = w.path.front(), y = w.path.back();
        Graph gp = g;
        gp.add_edge(x, y);
        WallCross wc = wall_cross_from_chord(gp, core, x, y);
        auto splice = [&](Path& p) {
            for (size_t k = 0; k + 1 < p.size(); ++k) {
                const bool fwd = p[k] == x && p[k + 1] == y, bwd = p[k] == y && p[k + 1] == x;
                if (!fwd && !bwd) continue;
                Path mid = w.path;
                if (bwd) std::reverse(mid.begin(), mid.end());
                Path out(p.begin(), p.begin() + static_cast<long>(k));
                out.insert(out.end(), mid.begin(), mid.end());
                out.insert(out.end(), p.begin() + static_cast<long>(k) + 2, p.end());
                p = std::move(out);
                return;
            }
        };
        splice(wc.p1);
        splice(wc.p2);
        if (!is_path(g, wc.p1) || !is_path(g, wc.p2)) throw std::logic_error("wall-cross still uses the chord");
        ranges.push_back({i1, i2, t + 1, z - t, wc.p1, wc.p2});
    }
    if (!ranges.empty() && ranges.front().j1 <= t) throw std::logic_error("first neighbourhood range overlaps the first t columns");
    auto [inst, m] = hstar_from_ranges(g, wp, ranges, t);
    if (report) *report = rep;
    return clique_from_hstar(g, inst, m, grasp);
}

}  // namespace fw
