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

#include "flatwall/minor_forge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "flatwall/linkage.hpp"

namespace fw {

namespace {

int pair_count(int t) { return t * (t - 1) / 2; }

// All unordered pairs {i, j} of 1..t in lexicographic order.
std::vector<std::pair<int, int>> label_pairs(int t) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= t; ++i)
        for (int j = i + 1; j <= t; ++j) out.emplace_back(i, j);
    return out;
}

Path row_segment(const GridGraph& g, int i, int c1, int c2) {
    Path p;
    const int step = c1 <= c2 ? 1 : -1;
    for (int j = c1;; j += step) {
        p.push_back(g.v(i, j));
        if (j == c2) break;
    }
    return p;
}

Path col_segment(const GridGraph& g, int j, int r1, int r2) {
    Path p;
    const int step = r1 <= r2 ? 1 : -1;
    for (int i = r1;; i += step) {
        p.push_back(g.v(i, j));
        if (i == r2) break;
    }
    return p;
}

// Append q to p; q starts at the last vertex of p or at a neighbour of it.
void extend(Path& p, const Path& q) {
    if (!p.empty() && !q.empty() && p.back() == q.front())
        p.insert(p.end(), q.begin() + 1, q.end());
    else
        p.insert(p.end(), q.begin(), q.end());
}

// Disjoint paths src[k] -> tgt[k] inside rows r1..r2, columns c1..c2. Both
// terminal lists run top to bottom, so planarity fixes the pairing.
std::vector<Path> block_linkage(const GridGraph& g, int r1, int r2, int c1, int c2, const VertexSet& src,
                                const VertexSet& tgt) {
    LinkageOptions opt;
    opt.allowed.assign(static_cast<size_t>(g.g.n()), 0);
    for (int i = r1; i <= r2; ++i)
        for (int j = c1; j <= c2; ++j) opt.allowed[static_cast<size_t>(g.v(i, j))] = 1;
    opt.avoid_terminals_inside = true;
    const int k = static_cast<int>(src.size());
    auto res = vertex_disjoint_linkage(g.g, src, tgt, k, opt);
    if (!res.linked) throw std::logic_error("grid block is not linked");
    std::vector<Path> out(src.size());
    for (Path& p : res.linkage.paths) {
        auto it = std::find(src.begin(), src.end(), p.front());
        if (it == src.end()) throw std::logic_error("linkage path starts off the sources");
        const size_t idx = static_cast<size_t>(it - src.begin());
        if (p.back() != tgt[idx]) throw std::logic_error("grid linkage does not keep the top-to-bottom order");
        out[idx] = std::move(p);
    }
    return out;
}

VertexSet as_set(const Path& p) {
    VertexSet s = p;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// ---------------------------------------------------------------- H*

std::vector<VertexSet> hstar_sets(const FamilyInstance& inst) {
    const int t = inst.t, T = pair_count(t);
    const GridGraph& g = inst.grid;
    auto sigma = swap_sequence(t);
    std::vector<Path> paths(static_cast<size_t>(t));
    std::vector<int> rows(static_cast<size_t>(t)), order(static_cast<size_t>(t));
    for (int k = 0; k < t; ++k) {
        rows[static_cast<size_t>(k)] = k + 1;
        order[static_cast<size_t>(k)] = k + 1;
        paths[static_cast<size_t>(k)] = {g.v(k + 1, 1)};
    }
    for (int i = 1; i <= T; ++i) {
        const int j = swap_position(sigma[static_cast<size_t>(i - 1)], sigma[static_cast<size_t>(i)]);
        const int c1 = t * (i - 1) + 1, c2 = t * i;
        VertexSet src, tgt;
        for (int k = 0; k < t; ++k) {
            src.push_back(g.v(rows[static_cast<size_t>(k)], c1));
            tgt.push_back(g.v(t - j + 1 + k, c2));
        }
        auto link = block_linkage(g, 1, 2 * t, c1, c2, src, tgt);
        for (int k = 0; k < t; ++k) {
            const int l = t - j + 1 + k;
            // rows t and t+1 leave the block through the two diagonals
            const int next = l == t ? t + 1 : (l == t + 1 ? t : l);
            Path& p = paths[static_cast<size_t>(order[static_cast<size_t>(k)] - 1)];
            extend(p, link[static_cast<size_t>(k)]);
            extend(p, {g.v(l, c2), g.v(next, c2 + 1)});
            rows[static_cast<size_t>(k)] = l;
        }
        std::swap(order[static_cast<size_t>(j - 1)], order[static_cast<size_t>(j)]);
        if (order != sigma[static_cast<size_t>(i)]) throw std::logic_error("path order differs from the swap sequence");
    }
    std::vector<VertexSet> sets;
    for (const Path& p : paths) sets.push_back(as_set(p));
    return sets;
}

// ---------------------------------------------------------------- H1

struct Labelled {
    Vertex v;
    int label;
};

// t disjoint paths in the sub-grid of rows top..bot, path k (top to bottom)
// passing through every endpoint labelled k+1.
std::vector<Path> route_labelled(const GridGraph& g, int top, int bot, std::vector<Labelled> xs, int t) {
    std::sort(xs.begin(), xs.end(), [&](const Labelled& a, const Labelled& b) { return g.col_of(a.v) < g.col_of(b.v); });
    std::vector<Path> paths(static_cast<size_t>(t));
    int prev_col = 0, prev_top = 0;
    for (size_t q = 0; q < xs.size(); ++q) {
        const int iq = g.row_of(xs[q].v), jq = g.col_of(xs[q].v), l = xs[q].label;
        const int first = iq - l + 1;
        if (first < top || first + t - 1 > bot) throw std::logic_error("row window leaves the band");
        const int s_col = std::max(1, jq - 1), t_col = std::min(g.r, jq + 1);
        if (q == 0) {
            for (int k = 0; k < t; ++k) paths[static_cast<size_t>(k)] = row_segment(g, first + k, 1, s_col);
        } else {
            VertexSet src, tgt;
            for (int k = 0; k < t; ++k) {
                src.push_back(g.v(prev_top + k, prev_col));
                tgt.push_back(g.v(first + k, s_col));
            }
            auto link = block_linkage(g, top, bot, prev_col, s_col, src, tgt);
            for (int k = 0; k < t; ++k) extend(paths[static_cast<size_t>(k)], link[static_cast<size_t>(k)]);
        }
        for (int k = 0; k < t; ++k) extend(paths[static_cast<size_t>(k)], row_segment(g, first + k, s_col, t_col));
        prev_col = t_col;
        prev_top = first;
    }
    return paths;
}

// Labels for a list of pattern edges between endpoints: edge k gets the k-th
// pair, the endpoint in the smaller column the smaller label.
std::vector<Labelled> label_endpoints(const GridGraph& g, const std::vector<std::pair<Vertex, Vertex>>& edges, int t) {
    auto pairs = label_pairs(t);
    std::vector<Labelled> out;
    for (size_t k = 0; k < edges.size(); ++k) {
        auto [a, b] = edges[k];
        if (g.col_of(a) > g.col_of(b)) std::swap(a, b);
        out.push_back({a, pairs[k].first});
        out.push_back({b, pairs[k].second});
    }
    return out;
}

std::vector<VertexSet> h1_sets(const GridGraph& g, int top, int bot, const std::vector<std::pair<Vertex, Vertex>>& edges,
                               int t) {
    auto paths = route_labelled(g, top, bot, label_endpoints(g, edges, t), t);
    std::vector<VertexSet> sets;
    for (const Path& p : paths) sets.push_back(as_set(p));
    return sets;
}

// ---------------------------------------------------------------- H2

// Boustrophedon through rows r1..r2: first row left to right.
std::vector<Vertex> snake(const GridGraph& g, int r1, int r2) {
    Path p;
    for (int i = r1; i <= r2; ++i) {
        Path row = (i - r1) % 2 == 0 ? row_segment(g, i, 1, g.r) : row_segment(g, i, g.r, 1);
        p.insert(p.end(), row.begin(), row.end());
    }
    return p;
}

// Pairs up consecutive marked vertices along `p` into disjoint segments.
std::vector<Path> pair_segments(const Path& p, const std::vector<char>& marked) {
    std::vector<Path> out;
    long open = -1;
    for (size_t i = 0; i < p.size(); ++i) {
        if (!marked[static_cast<size_t>(p[i])]) continue;
        if (open < 0) {
            open = static_cast<long>(i);
        } else {
            out.emplace_back(p.begin() + open, p.begin() + static_cast<long>(i) + 1);
            open = -1;
        }
    }
    return out;
}

std::vector<VertexSet> h2_sets(const FamilyInstance& inst, const std::vector<std::pair<Vertex, Vertex>>& edges) {
    const int t = inst.t, T = pair_count(t);
    const GridGraph& g = inst.grid;
    const int h = g.h;
    std::map<Vertex, Vertex> x_of;
    std::vector<char> top_mark(static_cast<size_t>(g.g.n()), 0), bot_mark = top_mark;
    for (auto [x, y] : edges) {
        x_of[y] = x;
        if (g.row_of(y) <= t)
            top_mark[static_cast<size_t>(y)] = 1;
        else
            bot_mark[static_cast<size_t>(y)] = 1;
    }
    auto segs = pair_segments(snake(g, 1, t), top_mark);
    auto bottom = pair_segments(snake(g, h - t + 1, h), bot_mark);
    segs.insert(segs.end(), bottom.begin(), bottom.end());
    if (static_cast<int>(segs.size()) < T) throw std::logic_error("too few y-segments");
    segs.resize(static_cast<size_t>(T));

    std::vector<std::pair<Vertex, Vertex>> reduced;
    for (const Path& s : segs) reduced.emplace_back(x_of.at(s.front()), x_of.at(s.back()));
    auto labels = label_endpoints(g, reduced, t);
    auto paths = route_labelled(g, t + 1, h - t, labels, t);
    // each segment joins the branch set of its smaller label
    for (size_t k = 0; k < segs.size(); ++k) {
        const int l = std::min(labels[2 * k].label, labels[2 * k + 1].label);
        Path& p = paths[static_cast<size_t>(l - 1)];
        p.insert(p.end(), segs[k].begin(), segs[k].end());
    }
    std::vector<VertexSet> sets;
    for (const Path& p : paths) sets.push_back(as_set(p));
    return sets;
}

// ---------------------------------------------------------------- H3

struct Block {
    int c1 = 0, c2 = 0;
    int edge = -1;  // index into the working edge list of the x-endpoint it hosts
    bool special = false;
};

std::vector<VertexSet> h3_sets(const FamilyInstance& inst) {
    const int t = inst.t, T = pair_count(t);
    const GridGraph& g = inst.grid;
    const int h = g.h, r = g.r;
    std::vector<std::pair<Vertex, Vertex>> e1, work;
    for (auto [x, y] : inst.extra) {
        if (g.row_of(y) <= t || g.row_of(y) > h - t)
            e1.emplace_back(x, y);
        else
            work.emplace_back(x, y);
    }
    if (static_cast<int>(e1.size()) >= 2 * T + 2) {
        e1.resize(static_cast<size_t>(2 * T + 2));
        return h2_sets(inst, e1);
    }
    const int hh = (h - t) % 2 == 0 ? h - 1 : h;

    // Block partition. Edges that cannot host the x construction are dropped
    // and the partition is rebuilt.
    std::vector<Block> blocks;
    std::vector<int> block_of_col;
    for (bool again = true; again;) {
        again = false;
        std::sort(work.begin(), work.end(), [&](auto a, auto b) { return g.col_of(a.first) < g.col_of(b.first); });
        auto drop = [&](size_t k) {
            work.erase(work.begin() + static_cast<long>(k));
            again = true;
        };
        for (size_t k = 0; k < work.size() && !again; ++k) {
            const int c = g.col_of(work[k].first);
            if (c - t <= t || c + t > r) drop(k);
        }
        if (again) continue;
        blocks.clear();
        blocks.push_back({1, t, -1, true});
        for (size_t k = 0; k < work.size(); ++k) {
            const int c = g.col_of(work[k].first);
            blocks.push_back({c - t, c + t, static_cast<int>(k), false});
        }
        std::vector<Block> full;
        for (size_t b = 0; b < blocks.size(); ++b) {
            full.push_back(blocks[b]);
            const int next = b + 1 < blocks.size() ? blocks[b + 1].c1 : r + 1;
            Block& cur = full.back();
            if (next == cur.c2 + 2 && b + 1 < blocks.size()) {
                auto own_y_in = [&](const Block& bl, int col) {
                    return bl.edge >= 0 && g.col_of(work[static_cast<size_t>(bl.edge)].second) == col;
                };
                const int col = cur.c2 + 1;
                if (!own_y_in(cur, col))
                    cur.c2 = col;
                else if (!own_y_in(blocks[b + 1], col))
                    blocks[b + 1].c1 = col;
                else {
                    drop(static_cast<size_t>(cur.edge));
                    break;
                }
            } else if (next > cur.c2 + 2 || (b + 1 == blocks.size() && cur.c2 < r)) {
                full.push_back({cur.c2 + 1, next - 1, -1, false});
            }
        }
        if (again) continue;
        blocks = std::move(full);
        block_of_col.assign(static_cast<size_t>(r + 1), -1);
        for (size_t b = 0; b < blocks.size(); ++b)
            for (int c = blocks[b].c1; c <= blocks[b].c2; ++c) block_of_col[static_cast<size_t>(c)] = static_cast<int>(b);
        for (size_t k = 0; k < work.size() && !again; ++k) {
            const int bx = block_of_col[static_cast<size_t>(g.col_of(work[k].first))];
            const int by = block_of_col[static_cast<size_t>(g.col_of(work[k].second))];
            if (bx == by || blocks[static_cast<size_t>(by)].special) drop(k);
        }
    }

    std::vector<std::pair<int, int>> eb;
    for (auto [x, y] : work)
        eb.emplace_back(block_of_col[static_cast<size_t>(g.col_of(x))], block_of_col[static_cast<size_t>(g.col_of(y))]);
    auto keep = select_unconflicted_edges(eb);
    if (static_cast<int>(keep.size()) < 2 * T) throw std::logic_error("too few unconflicted edges");
    std::vector<char> x_block(blocks.size(), 0);
    std::map<Vertex, Vertex> x_of;
    std::vector<char> ymark(static_cast<size_t>(g.g.n()), 0);
    for (int k : keep) {
        x_block[static_cast<size_t>(eb[static_cast<size_t>(k)].first)] = 1;
        x_of[work[static_cast<size_t>(k)].second] = work[static_cast<size_t>(k)].first;
        ymark[static_cast<size_t>(work[static_cast<size_t>(k)].second)] = 1;
    }

    // Path through the lower part, covering every vertex outside U.
    Path low;
    for (size_t b = 1; b < blocks.size(); ++b) {
        const Block& bl = blocks[b];
        if (x_block[b]) {
            extend(low, row_segment(g, hh, bl.c1, bl.c2));
        } else if (bl.c2 > bl.c1) {
            extend(low, col_segment(g, bl.c1, hh, t + 1));
            for (int i = t + 1; i <= hh; ++i) {
                bool ltr = (i - t - 1) % 2 == 0;
                extend(low, ltr ? row_segment(g, i, bl.c1 + 1, bl.c2) : row_segment(g, i, bl.c2, bl.c1 + 1));
            }
        } else {
            extend(low, col_segment(g, bl.c1, hh, t + 1));
        }
    }
    auto segs = pair_segments(low, ymark);
    if (static_cast<int>(segs.size()) < T) throw std::logic_error("too few y-segments");
    segs.resize(static_cast<size_t>(T));
    std::vector<std::pair<Vertex, Vertex>> reduced;
    for (const Path& s : segs) reduced.emplace_back(x_of.at(s.front()), x_of.at(s.back()));
    auto labels = label_endpoints(g, reduced, t);
    std::map<Vertex, int> label_of;
    for (const auto& lx : labels) label_of[lx.v] = lx.label;

    // t paths along the top rows, dipping to each labelled x.
    std::vector<Path> paths(static_cast<size_t>(t));
    for (size_t b = 0; b < blocks.size(); ++b) {
        const Block& bl = blocks[b];
        Vertex x = -1;
        if (x_block[b]) x = work[static_cast<size_t>(bl.edge)].first;
        if (x < 0 || !label_of.count(x)) {
            for (int k = 0; k < t; ++k) extend(paths[static_cast<size_t>(k)], row_segment(g, k + 1, bl.c1, bl.c2));
            continue;
        }
        const int l = label_of[x], i = g.row_of(x), cx = g.col_of(x);
        if (cx != bl.c1 + t) throw std::logic_error("x-endpoint off the middle of its block");
        const int first = i - l + 1;
        VertexSet lsrc, lmid, rmid, rdst;
        for (int k = 0; k < t; ++k) {
            lsrc.push_back(g.v(k + 1, bl.c1));
            lmid.push_back(g.v(first + k, cx - 1));
            rmid.push_back(g.v(first + k, cx + 1));
            rdst.push_back(g.v(k + 1, bl.c2));
        }
        auto left = block_linkage(g, 1, hh - 1, bl.c1, cx - 1, lsrc, lmid);
        auto right = block_linkage(g, 1, hh - 1, cx + 1, bl.c2, rmid, rdst);
        for (int k = 0; k < t; ++k) {
            Path& p = paths[static_cast<size_t>(k)];
            extend(p, left[static_cast<size_t>(k)]);
            extend(p, row_segment(g, first + k, cx - 1, cx + 1));
            extend(p, right[static_cast<size_t>(k)]);
        }
    }
    for (size_t k = 0; k < segs.size(); ++k) {
        const int l = std::min(labels[2 * k].label, labels[2 * k + 1].label);
        Path& p = paths[static_cast<size_t>(l - 1)];
        p.insert(p.end(), segs[k].begin(), segs[k].end());
    }
    std::vector<VertexSet> sets;
    for (const Path& p : paths) sets.push_back(as_set(p));
    return sets;
}

// ---------------------------------------------------------------- plumbing

void check_input(const Graph& g, const FamilyInstance& inst, const MinorModel& m, Family want) {
    if (inst.family != want) throw PreconditionError("family mismatch: expected " + family_name(want));
    auto rep = validate_family(inst);
    if (!rep.ok()) throw PreconditionError("instance is not in its family: " + rep.clause);
    Graph h = inst.graph();
    if (m.pattern.n() != h.n() || m.pattern.edges() != h.edges())
        throw PreconditionError("model pattern differs from the instance graph");
    rep = validate_minor_model(g, m);
    if (!rep.ok()) throw PreconditionError("invalid input model: " + rep.clause);
}

MinorModel finish(const Graph& g, const FamilyInstance& inst, const MinorModel& m, std::vector<VertexSet> sets,
                  const Wall* grasp) {
    Graph h = inst.graph();
    MinorModel inner = clique_model(h, std::move(sets));
    auto rep = validate_minor_model(h, inner);
    if (!rep.ok()) throw std::logic_error("clique model in the instance is invalid: " + rep.clause);
    MinorModel out = compose_models(m, inner);
    rep = validate_minor_model(g, out);
    if (!rep.ok()) throw std::logic_error("composed clique model is invalid: " + rep.clause);
    if (grasp && !grasped_by(*grasp, out, inst.t)) throw std::logic_error("clique model is not grasped by the wall");
    return out;
}

using CoordEdges = std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>;

}  // namespace

std::vector<std::vector<int>> swap_sequence(int t) {
    if (t < 2) throw ParameterError("swap sequence needs t >= 2");
    std::vector<int> s(static_cast<size_t>(t));
    std::iota(s.begin(), s.end(), 1);
    std::vector<std::vector<int>> out{s};
    for (int k = 1; k < t; ++k)
        for (int i = 1; i <= t - k; ++i) {
            std::swap(s[static_cast<size_t>(i - 1)], s[static_cast<size_t>(i)]);
            out.push_back(s);
        }
    return out;
}

int swap_position(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return 0;
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (a[i] != b[i + 1] || a[i + 1] != b[i]) return 0;
        for (size_t k = i + 2; k < a.size(); ++k)
            if (a[k] != b[k]) return 0;
        return static_cast<int>(i) + 1;
    }
    return 0;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::HStar:
            return "HSTAR";
        case Family::H1:
            return "H1";
        case Family::H2:
            return "H2";
        case Family::H3:
            return "H3";
    }
    return "?";
}

Family family_from_name(const std::string& s) {
    for (Family f : {Family::HStar, Family::H1, Family::H2, Family::H3})
        if (family_name(f) == s) return f;
    throw ParameterError("unknown family tag: " + s);
}

Graph FamilyInstance::graph() const {
    Graph h = grid.g;
    for (auto [u, v] : extra)
        if (!h.has_edge(u, v)) h.add_edge(u, v);
    return h;
}

FamilyInstance make_family_instance(Family f, int t, int h, int r, const CoordEdges& edges) {
    if (t < 2) throw ParameterError("family instances need t >= 2");
    FamilyInstance inst;
    inst.family = f;
    inst.t = t;
    inst.grid = make_grid(h, r);
    for (auto [a, b] : edges) {
        for (auto [i, j] : {a, b})
            if (i < 1 || i > h || j < 1 || j > r) throw ParameterError("extra edge endpoint outside the grid");
        inst.extra.emplace_back(inst.grid.v(a.first, a.second), inst.grid.v(b.first, b.second));
    }
    return inst;
}

FamilyInstance build_family_instance(Family f, int t) {
    if (t < 2) throw ParameterError("family instances need t >= 2");
    const int T = pair_count(t);
    CoordEdges e;
    switch (f) {
        case Family::HStar:
            for (int i = 1; i <= T; ++i) {
                e.push_back({{t, t * i}, {t + 1, t * i + 1}});
                e.push_back({{t + 1, t * i}, {t, t * i + 1}});
            }
            return make_family_instance(f, t, 2 * t, T * t + 1, e);
        case Family::H1: {
            const int step = t + 3;
            for (int k = 0; k < T; ++k) e.push_back({{t + 1, 2 + 2 * k * step}, {t + 1, 2 + (2 * k + 1) * step}});
            return make_family_instance(f, t, 2 * t + 1, 2 + (2 * T - 1) * step + 1, e);
        }
        case Family::H2: {
            const int step = t + 3, n = 2 * T + 2;
            for (int k = 0; k < n; ++k) e.push_back({{2 * t + 1, 2 + k * step}, {1, 2 + k * step}});
            return make_family_instance(f, t, 4 * t + 1, 2 + (n - 1) * step + 1, e);
        }
        case Family::H3: {
            const int step = 2 * t + 3, n = 10 * T + 6;
            for (int k = 0; k < n; ++k) {
                const int c = 2 * t + 1 + k * step;
                e.push_back({{2 * t + 1, c}, {t + 1, c + t + 2}});
            }
            return make_family_instance(f, t, 4 * t + 1, 2 * t + 1 + (n - 1) * step + t + 3, e);
        }
    }
    throw ParameterError("unknown family");
}

ValidationReport validate_family(const FamilyInstance& inst) {
    const int t = inst.t, T = pair_count(t);
    const GridGraph& g = inst.grid;
    const int h = g.h, r = g.r;
    if (t < 2) return ValidationReport::structural("t below 2");
    if (g.g.n() != h * r || h < 1 || r < 1) return ValidationReport::structural("grid shape mismatch");
    for (auto [u, v] : inst.extra)
        if (!g.g.valid(u) || !g.g.valid(v) || u == v) return ValidationReport::structural("extra edge endpoint invalid");
    auto distinct = [&]() {
        VertexSet all;
        for (auto [u, v] : inst.extra) {
            all.push_back(u);
            all.push_back(v);
        }
        std::sort(all.begin(), all.end());
        return std::adjacent_find(all.begin(), all.end()) == all.end();
    };
    auto col = [&](Vertex v) { return g.col_of(v); };
    auto row = [&](Vertex v) { return g.row_of(v); };
    auto spread = [&](const VertexSet& xs, int sep) {
        for (size_t a = 0; a < xs.size(); ++a)
            for (size_t b = a + 1; b < xs.size(); ++b)
                if (std::abs(col(xs[a]) - col(xs[b])) <= sep) return false;
        return true;
    };
    switch (inst.family) {
        case Family::HStar: {
            if (h != 2 * t || r != T * t + 1) return ValidationReport::semantic("H* grid must be 2t x (Tt+1)");
            std::vector<std::pair<Vertex, Vertex>> want, have;
            for (int i = 1; i <= T; ++i) {
                want.emplace_back(g.v(t, t * i), g.v(t + 1, t * i + 1));
                want.emplace_back(g.v(t + 1, t * i), g.v(t, t * i + 1));
            }
            for (auto& [u, v] : want)
                if (u > v) std::swap(u, v);
            for (auto [u, v] : inst.extra) have.emplace_back(std::min(u, v), std::max(u, v));
            std::sort(want.begin(), want.end());
            std::sort(have.begin(), have.end());
            if (want != have) return ValidationReport::semantic("H* cross edges differ from the two diagonals of each cell L_i");
            return ValidationReport::pass();
        }
        case Family::H1: {
            if (h <= 2 * t) return ValidationReport::semantic("H1 needs h > 2t");
            if (static_cast<int>(inst.extra.size()) != T) return ValidationReport::semantic("H1 needs exactly T extra edges");
            if (!distinct()) return ValidationReport::semantic("H1 endpoints are not distinct");
            VertexSet xs;
            for (auto [u, v] : inst.extra) {
                xs.push_back(u);
                xs.push_back(v);
            }
            for (Vertex x : xs) {
                if (row(x) <= t || row(x) > h - t) return ValidationReport::semantic("H1 endpoint outside the middle band");
                if (col(x) == 1) return ValidationReport::semantic("H1 endpoint in the first column");
            }
            if (!spread(xs, t + 2)) return ValidationReport::semantic("H1 endpoints not separated by t+2 columns");
            return ValidationReport::pass();
        }
        case Family::H2:
        case Family::H3: {
            const bool three = inst.family == Family::H3;
            const std::string tag = three ? "H3" : "H2";
            if (h <= 4 * t) return ValidationReport::semantic(tag + " needs h > 4t");
            const int want = three ? 10 * T + 6 : 2 * T + 2;
            if (static_cast<int>(inst.extra.size()) != want)
                return ValidationReport::semantic(tag + (three ? " needs exactly 10T+6 extra edges" : " needs exactly 2T+2 extra edges"));
            if (!distinct()) return ValidationReport::semantic(tag + " endpoints are not distinct");
            VertexSet xs;
            for (auto [x, y] : inst.extra) {
                xs.push_back(x);
                if (row(x) <= 2 * t || row(x) > h - 2 * t) return ValidationReport::semantic(tag + " x-endpoint outside G_3");
                if (!three && row(y) > t && row(y) <= h - t) return ValidationReport::semantic("H2 y-endpoint outside G_1 and G_2");
                if (three) {
                    if (std::abs(col(x) - col(y)) <= t + 1)
                        return ValidationReport::semantic("H3 edge endpoints not separated by t+1 columns");
                    for (Vertex v : {x, y})
                        if (col(v) <= t || col(v) == r)
                            return ValidationReport::semantic("H3 endpoint in the first t columns or the last column");
                }
            }
            if (!spread(xs, three ? 2 * t + 2 : t + 2))
                return ValidationReport::semantic(tag + (three ? " x-endpoints not separated by 2t+2 columns"
                                                               : " x-endpoints not separated by t+2 columns"));
            return ValidationReport::pass();
        }
    }
    return ValidationReport::structural("unknown family");
}

MinorModel clique_from_hstar(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp) {
    check_input(g, inst, m, Family::HStar);
    return finish(g, inst, m, hstar_sets(inst), grasp);
}

MinorModel clique_from_h1(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp) {
    check_input(g, inst, m, Family::H1);
    return finish(g, inst, m, h1_sets(inst.grid, 1, inst.grid.h, inst.extra, inst.t), grasp);
}

MinorModel clique_from_h2(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp) {
    check_input(g, inst, m, Family::H2);
    return finish(g, inst, m, h2_sets(inst, inst.extra), grasp);
}

MinorModel clique_from_h3(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp) {
    check_input(g, inst, m, Family::H3);
    return finish(g, inst, m, h3_sets(inst), grasp);
}

MinorModel clique_from_family(const Graph& g, const FamilyInstance& inst, const MinorModel& m, const Wall* grasp) {
    switch (inst.family) {
        case Family::HStar:
            return clique_from_hstar(g, inst, m, grasp);
        case Family::H1:
            return clique_from_h1(g, inst, m, grasp);
        case Family::H2:
            return clique_from_h2(g, inst, m, grasp);
        case Family::H3:
            return clique_from_h3(g, inst, m, grasp);
    }
    throw PreconditionError("unknown family");
}

bool grasped_by(const Wall& w, const MinorModel& m, int t) {
    std::map<Vertex, int> row_of, col_of;
    for (int i = 1; i <= w.h(); ++i)
        for (Vertex v : w.row(i)) row_of[v] = i;
    for (int j = 1; j <= w.r(); ++j)
        for (Vertex v : w.col(j)) col_of[v] = j;
    for (const VertexSet& s : m.branch_sets) {
        std::vector<int> rows, cols;
        for (Vertex v : s) {
            if (auto it = row_of.find(v); it != row_of.end()) rows.push_back(it->second);
            if (auto it = col_of.find(v); it != col_of.end()) cols.push_back(it->second);
        }
        std::sort(rows.begin(), rows.end());
        std::sort(cols.begin(), cols.end());
        const long nr = std::unique(rows.begin(), rows.end()) - rows.begin();
        const long nc = std::unique(cols.begin(), cols.end()) - cols.begin();
        if (nr < t && nc < t) return false;
    }
    return true;
}

std::vector<int> select_unconflicted_edges(const std::vector<std::pair<int, int>>& edge_blocks) {
    int nb = 0;
    std::map<int, int> x_count;
    for (auto [bx, by] : edge_blocks) {
        if (bx < 0 || by < 0) throw PreconditionError("negative block index");
        if (bx == by) throw PreconditionError("edge with both endpoints in one block");
        if (++x_count[bx] > 1) throw PreconditionError("block " + std::to_string(bx) + " holds two x-endpoints");
        nb = std::max({nb, bx + 1, by + 1});
    }
    std::vector<int> right, left;
    for (size_t k = 0; k < edge_blocks.size(); ++k)
        (edge_blocks[k].first < edge_blocks[k].second ? right : left).push_back(static_cast<int>(k));
    const std::vector<int>& dir = right.size() >= left.size() ? right : left;

    // Union-find over blocks; a cycle in the underlying graph is reported.
    std::vector<int> parent(static_cast<size_t>(nb));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
        return v;
    };
    std::vector<int> out_edge(static_cast<size_t>(nb), -1);
    for (int k : dir) {
        auto [bx, by] = edge_blocks[static_cast<size_t>(k)];
        out_edge[static_cast<size_t>(bx)] = by;
        int a = find(bx), b = find(by);
        if (a == b)
            throw PreconditionError("block digraph has a cycle through blocks " + std::to_string(bx) + " and " +
                                    std::to_string(by));
        parent[static_cast<size_t>(a)] = b;
    }
    // depth of a block = number of edges on its way to the root of its tree
    std::vector<int> depth(static_cast<size_t>(nb), -1);
    std::function<int(int)> depth_of = [&](int v) -> int {
        if (depth[static_cast<size_t>(v)] >= 0) return depth[static_cast<size_t>(v)];
        const int nxt = out_edge[static_cast<size_t>(v)];
        return depth[static_cast<size_t>(v)] = nxt < 0 ? 0 : depth_of(nxt) + 1;
    };
    std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_tree;  // root -> (odd, even)
    for (int k : dir) {
        const int bx = edge_blocks[static_cast<size_t>(k)].first;
        auto& slot = by_tree[find(bx)];
        (depth_of(bx) % 2 == 1 ? slot.first : slot.second).push_back(k);
    }
    std::vector<int> out;
    for (auto& [root, sides] : by_tree) {
        const auto& pick = sides.first.size() >= sides.second.size() ? sides.first : sides.second;
        out.insert(out.end(), pick.begin(), pick.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json family_to_json(const FamilyInstance& inst) {
    nlohmann::json j;
    j["family"] = family_name(inst.family);
    j["t"] = inst.t;
    j["height"] = inst.grid.h;
    j["width"] = inst.grid.r;
    j["edges"] = nlohmann::json::array();
    for (auto [x, y] : inst.extra)
        j["edges"].push_back({{"x", {inst.grid.row_of(x), inst.grid.col_of(x)}}, {"y", {inst.grid.row_of(y), inst.grid.col_of(y)}}});
    return j;
}

FamilyInstance family_from_json(const nlohmann::json& j) {
    try {
        CoordEdges e;
        for (const auto& x : j.at("edges"))
            e.push_back({x.at("x").get<std::pair<int, int>>(), x.at("y").get<std::pair<int, int>>()});
        return make_family_instance(family_from_name(j.at("family").get<std::string>()), j.at("t").get<int>(),
                                    j.at("height").get<int>(), j.at("width").get<int>(), e);
    } catch (const nlohmann::json::exception& ex) {
        throw StructuralError(std::string("malformed family document: ") + ex.what());
    }
}

}  // namespace fw
