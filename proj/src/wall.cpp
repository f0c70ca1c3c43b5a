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

#include "flatwall/wall.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace fw {

GridGraph make_grid(int h, int r) {
    GridGraph g;
    g.h = h;
    g.r = r;
    g.g = grid_graph(h, r);
    return g;
}

Vertex ElementaryWall::at(int i, int x) const {
    if (i < 1 || i > h || x < 1 || x > 2 * r) return -1;
    return index_[static_cast<size_t>((i - 1) * 2 * r + (x - 1))];
}

Path ElementaryWall::boundary_cycle() const {
    Path cyc = rows.front();
    const Path& right = cols.back();
    cyc.insert(cyc.end(), right.begin() + 1, right.end());
    Path bottom(rows.back().rbegin(), rows.back().rend());
    cyc.insert(cyc.end(), bottom.begin() + 1, bottom.end());
    Path left(cols.front().rbegin(), cols.front().rend());
    cyc.insert(cyc.end(), left.begin() + 1, left.end() - 1);
    return cyc;
}

bool ElementaryWall::uniform() const {
    return std::all_of(col_phase.begin(), col_phase.end(), [&](int p) { return p == phase; });
}

ElementaryWall build_elementary_wall(int h, int r, int phase) {
    if (r < 2) throw ParameterError("elementary wall needs h >= 2 and r >= 2");
    return build_wall_template(h, std::vector<int>(static_cast<size_t>(r), phase));
}

ElementaryWall build_wall_template(int h, std::vector<int> col_phase) {
    const int r = static_cast<int>(col_phase.size());
    if (h < 2 || r < 2) throw ParameterError("elementary wall needs h >= 2 and r >= 2");
    for (int p : col_phase)
        if (p != 0 && p != 1) throw ParameterError("phase must be 0 or 1");
    const int width = 2 * r;
    auto slot = [&](int i, int x) { return (i - 1) * width + (x - 1); };
    Graph grid(h * width);
    for (int i = 1; i <= h; ++i)
        for (int x = 1; x <= width; ++x) {
            if (x < width) grid.add_edge(slot(i, x), slot(i, x + 1));
            // column x keeps its i-th vertical edge iff i and x+phase have equal parity
            if (i < h && (i % 2) == ((x + col_phase[static_cast<size_t>((x - 1) / 2)]) % 2)) grid.add_edge(slot(i, x), slot(i + 1, x));
        }
    std::vector<char> alive(static_cast<size_t>(grid.n()), 1);
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < grid.n(); ++v) {
            if (!alive[static_cast<size_t>(v)]) continue;
            int deg = 0;
            for (Vertex u : grid.neighbors(v)) deg += alive[static_cast<size_t>(u)];
            if (deg <= 1) {
                alive[static_cast<size_t>(v)] = 0;
                changed = true;
            }
        }
    }

    ElementaryWall w;
    w.h = h;
    w.r = r;
    w.phase = col_phase.front();
    w.col_phase = std::move(col_phase);
    w.index_.assign(static_cast<size_t>(grid.n()), -1);
    for (int i = 1; i <= h; ++i)
        for (int x = 1; x <= width; ++x)
            if (alive[static_cast<size_t>(slot(i, x))]) {
                w.index_[static_cast<size_t>(slot(i, x))] = static_cast<Vertex>(w.coord.size());
                w.coord.emplace_back(i, x);
            }
    w.g = Graph(static_cast<int>(w.coord.size()));
    for (auto [p, q] : grid.edges())
        if (alive[static_cast<size_t>(p)] && alive[static_cast<size_t>(q)])
            w.g.add_edge(w.index_[static_cast<size_t>(p)], w.index_[static_cast<size_t>(q)]);

    w.rows.resize(static_cast<size_t>(h));
    for (Vertex v = 0; v < w.g.n(); ++v) w.rows[static_cast<size_t>(w.coord[static_cast<size_t>(v)].first - 1)].push_back(v);

    for (int j = 1; j <= r; ++j) {
        Path col;
        Vertex cur = -1;
        for (int x : {2 * j - 1, 2 * j}) {
            Vertex t = w.at(1, x);
            if (t >= 0 && w.at(2, x) >= 0 && w.g.has_edge(t, w.at(2, x))) cur = t;
        }
        if (cur < 0) throw std::logic_error("column without a top vertex");
        col.push_back(cur);
        for (int i = 1; i < h; ++i) {
            int x = w.coord[static_cast<size_t>(cur)].second;
            Vertex down = w.at(i + 1, x);
            if (down < 0 || !w.g.has_edge(cur, down)) {
                x = (x % 2 == 1) ? x + 1 : x - 1;
                cur = w.at(i, x);
                col.push_back(cur);
                down = w.at(i + 1, x);
            }
            cur = down;
            col.push_back(cur);
        }
        w.cols.push_back(std::move(col));
    }

    w.a = w.cols.front().front();
    w.b = w.cols.back().front();
    w.c = w.cols.back().back();
    w.d = w.cols.front().back();
    std::vector<char> bd(static_cast<size_t>(w.g.n()), 0);
    for (const Path* p : {&w.rows.front(), &w.rows.back(), &w.cols.front(), &w.cols.back()})
        for (Vertex v : *p) bd[static_cast<size_t>(v)] = 1;
    for (Vertex v = 0; v < w.g.n(); ++v)
        if (bd[static_cast<size_t>(v)]) {
            w.boundary.push_back(v);
            if (w.g.degree(v) == 2) w.pegs.push_back(v);
        }
    return w;
}

int Wall::edge_index(Vertex u, Vertex v) const {
    std::pair<Vertex, Vertex> k = u < v ? std::pair{u, v} : std::pair{v, u};
    auto it = std::lower_bound(tmpl_edges.begin(), tmpl_edges.end(), k);
    if (it == tmpl_edges.end() || *it != k) return -1;
    return static_cast<int>(it - tmpl_edges.begin());
}

Path Wall::edge_path(Vertex u, Vertex v) const {
    int k = edge_index(u, v);
    if (k < 0) throw std::logic_error("not a template edge");
    Path p = edge_paths[static_cast<size_t>(k)];
    if (u > v) std::reverse(p.begin(), p.end());
    return p;
}

Path Wall::host_path(const Path& tp) const {
    if (tp.size() == 1) return {branch[static_cast<size_t>(tp[0])]};
    Path out;
    for (size_t i = 0; i + 1 < tp.size(); ++i) {
        Path e = edge_path(tp[i], tp[i + 1]);
        out.insert(out.end(), e.begin() + (i == 0 ? 0 : 1), e.end());
    }
    return out;
}

VertexSet Wall::pegs() const {
    VertexSet out;
    for (Vertex p : tmpl.pegs) out.push_back(branch[static_cast<size_t>(p)]);
    std::sort(out.begin(), out.end());
    return out;
}

VertexSet Wall::vertices() const {
    VertexSet out(branch.begin(), branch.end());
    for (const auto& p : edge_paths) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Path Wall::boundary_cycle() const {
    Path cyc = tmpl.boundary_cycle();
    cyc.push_back(cyc.front());
    Path hp = host_path(cyc);
    hp.pop_back();
    return hp;
}

std::vector<std::pair<Vertex, Vertex>> Wall::host_edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (const auto& p : edge_paths)
        for (size_t i = 0; i + 1 < p.size(); ++i) out.emplace_back(std::min(p[i], p[i + 1]), std::max(p[i], p[i + 1]));
    std::sort(out.begin(), out.end());
    return out;
}

Wall make_wall(ElementaryWall tmpl, std::vector<Vertex> branch, std::vector<Path> edge_paths) {
    Wall w;
    w.tmpl_edges = tmpl.g.edges();
    w.tmpl = std::move(tmpl);
    w.branch = std::move(branch);
    w.edge_paths = std::move(edge_paths);
    if (static_cast<int>(w.branch.size()) != w.tmpl.g.n() || w.edge_paths.size() != w.tmpl_edges.size())
        throw StructuralError("good mapping does not match the template");
    return w;
}

Wall identity_wall(int h, int r) {
    ElementaryWall t = build_elementary_wall(h, r);
    std::vector<Vertex> branch(static_cast<size_t>(t.g.n()));
    for (Vertex v = 0; v < t.g.n(); ++v) branch[static_cast<size_t>(v)] = v;
    std::vector<Path> paths;
    for (auto [u, v] : t.g.edges()) paths.push_back({u, v});
    return make_wall(std::move(t), std::move(branch), std::move(paths));
}

ValidationReport check_wall(const Graph& host, const Wall& w) {
    const auto& t = w.tmpl;
    if (static_cast<int>(w.branch.size()) != t.g.n()) return ValidationReport::structural("branch map size mismatch");
    if (w.edge_paths.size() != w.tmpl_edges.size()) return ValidationReport::structural("edge path count mismatch");
    for (Vertex v = 0; v < t.g.n(); ++v)
        if (t.g.degree(v) < 2 || t.g.degree(v) > 3) return ValidationReport::semantic("template vertex degree outside {2,3}");
    std::vector<int> use(static_cast<size_t>(host.n()), 0);
    for (Vertex x : w.branch) {
        if (!host.valid(x)) return ValidationReport::structural("branch vertex out of range");
        if (use[static_cast<size_t>(x)]) return ValidationReport::semantic("branch map is not injective");
        use[static_cast<size_t>(x)] = 1;
    }
    for (size_t k = 0; k < w.edge_paths.size(); ++k) {
        const Path& p = w.edge_paths[k];
        for (Vertex x : p)
            if (!host.valid(x)) return ValidationReport::structural("edge path vertex out of range");
        auto [u, v] = w.tmpl_edges[k];
        if (p.size() < 2 || !is_path(host, p)) return ValidationReport::semantic("edge path is not a host path");
        if (p.front() != w.branch[static_cast<size_t>(u)] || p.back() != w.branch[static_cast<size_t>(v)])
            return ValidationReport::semantic("edge path endpoints differ from branch images");
        for (size_t i = 1; i + 1 < p.size(); ++i) {
            if (use[static_cast<size_t>(p[i])]) return ValidationReport::semantic("edge paths are not internally disjoint");
            use[static_cast<size_t>(p[i])] = 2;
        }
    }
    Path z = t.boundary_cycle();
    VertexSet zs = z;
    std::sort(zs.begin(), zs.end());
    if (std::adjacent_find(zs.begin(), zs.end()) != zs.end() || zs != t.boundary)
        return ValidationReport::semantic("outer boundary is not a simple cycle");
    for (size_t i = 0; i < z.size(); ++i)
        if (!t.g.has_edge(z[i], z[(i + 1) % z.size()])) return ValidationReport::semantic("outer boundary is not a cycle");
    return ValidationReport::pass();
}

namespace {

// Literal sub-wall recipe on a template: rows i1..i2 induced, then columns
// outside j1..j2 deleted, then vertices of degree < 2 deleted repeatedly.
std::vector<char> subwall_template_mask(const ElementaryWall& t, int i1, int i2, int j1, int j2) {
    std::vector<char> keep(static_cast<size_t>(t.g.n()), 0);
    for (int i = i1; i <= i2; ++i)
        for (Vertex v : t.rows[static_cast<size_t>(i - 1)]) keep[static_cast<size_t>(v)] = 1;
    for (int j = 1; j <= t.r; ++j)
        if (j < j1 || j > j2)
            for (Vertex v : t.cols[static_cast<size_t>(j - 1)]) keep[static_cast<size_t>(v)] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (Vertex v = 0; v < t.g.n(); ++v) {
            if (!keep[static_cast<size_t>(v)]) continue;
            int deg = 0;
            for (Vertex u : t.g.neighbors(v)) deg += keep[static_cast<size_t>(u)];
            if (deg < 2) {
                keep[static_cast<size_t>(v)] = 0;
                changed = true;
            }
        }
    }
    return keep;
}

}  // namespace

Wall subwall(const Wall& w, int i1, int i2, int j1, int j2) {
    const auto& t = w.tmpl;
    if (i1 < 1 || i2 > t.h || i1 >= i2 || j1 < 1 || j2 > t.r || j1 >= j2)
        throw ParameterError("degenerate sub-wall range");
    auto mask = subwall_template_mask(t, i1, i2, j1, j2);
    std::vector<int> cp;
    for (int j = j1; j <= j2; ++j) cp.push_back((t.col_phase[static_cast<size_t>(j - 1)] + i1 - 1) % 2);
    ElementaryWall nt = build_wall_template(i2 - i1 + 1, std::move(cp));
    std::vector<Vertex> parent_of(static_cast<size_t>(nt.g.n()));
    size_t count = 0;
    for (Vertex v = 0; v < nt.g.n(); ++v) {
        auto [i, x] = nt.coord[static_cast<size_t>(v)];
        Vertex p = t.at(i + i1 - 1, x + 2 * (j1 - 1));
        if (p < 0 || !mask[static_cast<size_t>(p)]) throw std::logic_error("sub-wall recipe disagrees with template");
        parent_of[static_cast<size_t>(v)] = p;
    }
    for (char c : mask) count += c ? 1 : 0;
    if (count != parent_of.size()) throw std::logic_error("sub-wall recipe disagrees with template");

    std::vector<Vertex> branch;
    for (Vertex p : parent_of) branch.push_back(w.branch[static_cast<size_t>(p)]);
    std::vector<Path> paths;
    for (auto [u, v] : nt.g.edges()) paths.push_back(w.edge_path(parent_of[static_cast<size_t>(u)], parent_of[static_cast<size_t>(v)]));
    return make_wall(std::move(nt), std::move(branch), std::move(paths));
}

namespace {

bool contiguous_in(const std::vector<Path>& family, const Path& p) {
    std::unordered_map<Vertex, std::pair<int, int>> pos;
    for (size_t k = 0; k < family.size(); ++k)
        for (size_t i = 0; i < family[k].size(); ++i) pos[family[k][i]] = {static_cast<int>(k), static_cast<int>(i)};
    if (p.empty()) return false;
    auto it = pos.find(p[0]);
    if (it == pos.end()) return false;
    int fam = it->second.first, prev = it->second.second, dir = 0;
    for (size_t i = 1; i < p.size(); ++i) {
        auto jt = pos.find(p[i]);
        if (jt == pos.end() || jt->second.first != fam) return false;
        int step = jt->second.second - prev;
        if (step != 1 && step != -1) return false;
        if (dir != 0 && step != dir) return false;
        dir = step;
        prev = jt->second.second;
    }
    return true;
}

}  // namespace

bool is_subwall(const Wall& parent, const Wall& sub) {
    std::vector<Path> prow, pcol;
    for (int i = 1; i <= parent.h(); ++i) prow.push_back(parent.row(i));
    for (int j = 1; j <= parent.r(); ++j) pcol.push_back(parent.col(j));
    for (int i = 1; i <= sub.h(); ++i)
        if (!contiguous_in(prow, sub.row(i))) return false;
    for (int j = 1; j <= sub.r(); ++j)
        if (!contiguous_in(pcol, sub.col(j))) return false;
    return true;
}

namespace {

Graph wall_host_graph(const Wall& w) {
    Vertex mx = 0;
    for (Vertex v : w.vertices()) mx = std::max(mx, v);
    Graph g(mx + 1);
    for (auto [u, v] : w.host_edges()) g.add_edge(u, v);
    return g;
}

// Positions of the vertices of `sub` inside `p` (contiguous run).
std::pair<size_t, size_t> run_in(const Path& p, const std::vector<char>& mark) {
    size_t lo = p.size(), hi = 0;
    for (size_t i = 0; i < p.size(); ++i)
        if (mark[static_cast<size_t>(p[i])]) {
            lo = std::min(lo, i);
            hi = i;
        }
    if (lo == p.size()) throw std::logic_error("row and column do not meet");
    return {lo, hi};
}

}  // namespace

std::pair<GridGraph, MinorModel> contract_to_grid(const Wall& w) {
    const int h = w.h(), r = w.r();
    GridGraph grid = make_grid(h, r);
    Graph hg = wall_host_graph(w);
    std::vector<Path> rows, cols;
    for (int i = 1; i <= h; ++i) rows.push_back(w.row(i));
    for (int j = 1; j <= r; ++j) cols.push_back(w.col(j));
    std::vector<std::vector<char>> on_row, on_col;
    for (const auto& p : rows) on_row.push_back(make_mask(hg.n(), p));
    for (const auto& p : cols) on_col.push_back(make_mask(hg.n(), p));

    ValidEmbedding emb;
    emb.pattern = grid.g;
    emb.vertex_images.resize(static_cast<size_t>(h * r));
    std::vector<std::vector<std::pair<size_t, size_t>>> rr(static_cast<size_t>(h)), cc(static_cast<size_t>(r));
    for (int i = 1; i <= h; ++i)
        for (int j = 1; j <= r; ++j) {
            auto span = run_in(rows[static_cast<size_t>(i - 1)], on_col[static_cast<size_t>(j - 1)]);
            rr[static_cast<size_t>(i - 1)].push_back(span);
            const Path& row = rows[static_cast<size_t>(i - 1)];
            emb.vertex_images[static_cast<size_t>(grid.v(i, j))] =
                VertexSet(row.begin() + static_cast<long>(span.first), row.begin() + static_cast<long>(span.second) + 1);
            cc[static_cast<size_t>(j - 1)].push_back(run_in(cols[static_cast<size_t>(j - 1)], on_row[static_cast<size_t>(i - 1)]));
        }
    for (int i = 1; i <= h; ++i)
        for (int j = 1; j <= r; ++j) {
            if (j < r) {
                const Path& row = rows[static_cast<size_t>(i - 1)];
                size_t from = rr[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)].second;
                size_t to = rr[static_cast<size_t>(i - 1)][static_cast<size_t>(j)].first;
                emb.edge_images.push_back({{grid.v(i, j), grid.v(i, j + 1)},
                                           Path(row.begin() + static_cast<long>(from), row.begin() + static_cast<long>(to) + 1)});
            }
            if (i < h) {
                const Path& col = cols[static_cast<size_t>(j - 1)];
                size_t from = cc[static_cast<size_t>(j - 1)][static_cast<size_t>(i - 1)].second;
                size_t to = cc[static_cast<size_t>(j - 1)][static_cast<size_t>(i)].first;
                emb.edge_images.push_back({{grid.v(i, j), grid.v(i + 1, j)},
                                           Path(col.begin() + static_cast<long>(from), col.begin() + static_cast<long>(to) + 1)});
            }
        }
    return {grid, embedding_to_model(hg, emb)};
}

Linkage grid_linkage(const GridGraph& g, const VertexSet& x_sub, const VertexSet& y_sub) {
    if (x_sub.size() != y_sub.size()) throw ParameterError("linkage sides differ in size");
    if (x_sub.empty() || static_cast<int>(x_sub.size()) > std::min(g.h, g.r)) throw ParameterError("linkage size out of range");
    for (Vertex x : x_sub)
        if (!g.g.valid(x) || g.col_of(x) != 1) throw ParameterError("source not in the first column");
    for (Vertex y : y_sub)
        if (!g.g.valid(y) || g.col_of(y) != g.r) throw ParameterError("target not in the last column");
    auto res = vertex_disjoint_linkage(g.g, x_sub, y_sub, static_cast<int>(x_sub.size()));
    if (!res.linked) throw std::logic_error("grid columns are not linked");
    return res.linkage;
}

Linkage wall_linkage(const ElementaryWall& w, const VertexSet& x_sub, const VertexSet& y_sub) {
    if (x_sub.size() != y_sub.size()) throw ParameterError("linkage sides differ in size");
    if (x_sub.empty() || static_cast<int>(x_sub.size()) > std::min(w.h, w.r)) throw ParameterError("linkage size out of range");
    auto first = make_mask(w.g.n(), w.cols.front()), last = make_mask(w.g.n(), w.cols.back());
    auto per_row_once = [&](const VertexSet& s, const std::vector<char>& col) {
        std::vector<int> cnt(static_cast<size_t>(w.h + 1), 0);
        for (Vertex v : s) {
            if (!w.g.valid(v) || !col[static_cast<size_t>(v)]) return false;
            if (++cnt[static_cast<size_t>(w.coord[static_cast<size_t>(v)].first)] > 1) return false;
        }
        return true;
    };
    if (!per_row_once(x_sub, first)) throw ParameterError("sources must lie in the first column, one per row");
    if (!per_row_once(y_sub, last)) throw ParameterError("targets must lie in the last column, one per row");
    auto res = vertex_disjoint_linkage(w.g, x_sub, y_sub, static_cast<int>(x_sub.size()));
    if (!res.linked) throw std::logic_error("wall columns are not linked");
    return res.linkage;
}

Path walk_to_path(const Path& walk) {
    Path out;
    std::unordered_map<Vertex, size_t> at;
    for (Vertex v : walk) {
        auto it = at.find(v);
        if (it != at.end()) {
            for (size_t k = it->second + 1; k < out.size(); ++k) at.erase(out[k]);
            out.resize(it->second + 1);
            continue;
        }
        at[v] = out.size();
        out.push_back(v);
    }
    return out;
}

Path segment(const Path& p, Vertex x, Vertex y) {
    auto ix = std::find(p.begin(), p.end(), x), iy = std::find(p.begin(), p.end(), y);
    if (ix == p.end() || iy == p.end()) throw std::logic_error("segment endpoint not on path");
    if (ix <= iy) return Path(ix, iy + 1);
    Path s(iy, ix + 1);
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

// The wall seen through optional left-right and top-bottom reflections, so
// that one construction covers the symmetric cases. Positions are doubled:
// a vertex on row i has row position 2i, an inner vertex of a red path between
// rows i and i+1 has 2i+1; column positions likewise (-1 when undefined).
class WallView {
  public:
    WallView(const Wall& w, bool lr, bool tb) : w_(w), lr_(lr), tb_(tb), h_(w.h()), r_(w.r()) {
        for (int i = 1; i <= h_; ++i) {
            Path p = w.row(tb ? h_ + 1 - i : i);
            if (lr) std::reverse(p.begin(), p.end());
            rows_.push_back(std::move(p));
        }
        for (int j = 1; j <= r_; ++j) {
            Path p = w.col(lr ? r_ + 1 - j : j);
            if (tb) std::reverse(p.begin(), p.end());
            cols_.push_back(std::move(p));
        }
        tcol_.assign(static_cast<size_t>(w.tmpl.g.n()), 0);
        for (int j = 1; j <= r_; ++j)
            for (Vertex v : w.tmpl.cols[static_cast<size_t>(j - 1)]) tcol_[static_cast<size_t>(v)] = j;
        for (Vertex v = 0; v < w.tmpl.g.n(); ++v) tvert_[w.branch[static_cast<size_t>(v)]] = v;
        for (size_t k = 0; k < w.edge_paths.size(); ++k) {
            const Path& p = w.edge_paths[k];
            for (size_t i = 1; i + 1 < p.size(); ++i) inner_[p[i]] = static_cast<int>(k);
        }
    }

    const Path& row(int i) const { return rows_[static_cast<size_t>(i - 1)]; }
    const Path& col(int j) const { return cols_[static_cast<size_t>(j - 1)]; }
    Vertex a() const { return rows_.front().front(); }
    Vertex b() const { return rows_.front().back(); }
    Vertex c() const { return rows_.back().back(); }
    Vertex d() const { return rows_.back().front(); }

    int vrow(Vertex tv) const {
        int i = w_.tmpl.coord[static_cast<size_t>(tv)].first;
        return tb_ ? h_ + 1 - i : i;
    }
    int vcol(Vertex tv) const {
        int j = tcol_[static_cast<size_t>(tv)];
        if (j == 0) return 0;
        return lr_ ? r_ + 1 - j : j;
    }
    bool is_branch(Vertex x) const { return tvert_.count(x) > 0; }
    // Template edge whose path has x as an inner vertex, or -1.
    int inner_edge(Vertex x) const {
        auto it = inner_.find(x);
        return it == inner_.end() ? -1 : it->second;
    }
    bool on_wall(Vertex x) const { return is_branch(x) || inner_edge(x) >= 0; }

    int rowpos(Vertex x) const {
        if (is_branch(x)) return 2 * vrow(tvert_.at(x));
        auto [u, v] = w_.tmpl_edges[static_cast<size_t>(inner_edge(x))];
        return vrow(u) + vrow(v);
    }
    int colpos(Vertex x) const {
        if (is_branch(x)) {
            int j = vcol(tvert_.at(x));
            return j == 0 ? -1 : 2 * j;
        }
        auto [u, v] = w_.tmpl_edges[static_cast<size_t>(inner_edge(x))];
        int ju = vcol(u), jv = vcol(v);
        if (ju == 0 || jv == 0) return -1;
        return ju + jv;
    }

    // For an inner vertex x of a template edge path: the sub-path from x to
    // the endpoint selected by `pick_upper_or_left` (smaller row/column).
    std::pair<Vertex, Path> to_end(Vertex x, bool by_row, bool smaller) const {
        auto [u, v] = w_.tmpl_edges[static_cast<size_t>(inner_edge(x))];
        int ku = by_row ? vrow(u) : vcol(u), kv = by_row ? vrow(v) : vcol(v);
        Vertex pick = ((ku < kv) == smaller) ? u : v;
        Vertex hb = w_.branch[static_cast<size_t>(pick)];
        return {hb, segment(w_.edge_paths[static_cast<size_t>(inner_edge(x))], x, hb)};
    }

    bool lr() const { return lr_; }
    bool tb() const { return tb_; }
    int h() const { return h_; }
    int r() const { return r_; }

  private:
    const Wall& w_;
    bool lr_, tb_;
    int h_, r_;
    std::vector<Path> rows_, cols_;
    std::vector<int> tcol_;
    std::unordered_map<Vertex, Vertex> tvert_;
    std::unordered_map<Vertex, int> inner_;
};


Vertex first_on(const Path& p, const Path& other) {
    std::vector<Vertex> s = other;
    std::sort(s.begin(), s.end());
    for (Vertex v : p)
        if (std::binary_search(s.begin(), s.end(), v)) return v;
    throw std::logic_error("paths do not meet");
}

void append(Path& walk, const Path& seg) { walk.insert(walk.end(), seg.begin(), seg.end()); }

// Endpoint u' of the construction together with the sub-path u -> u'.
std::pair<Vertex, Path> attach(const WallView& V, Vertex x, bool by_row, bool smaller) {
    int pos = by_row ? V.rowpos(x) : V.colpos(x);
    if (pos % 2 == 0) return {x, Path{x}};
    return V.to_end(x, by_row, smaller);
}

Path reversed(Path p) {
    std::reverse(p.begin(), p.end());
    return p;
}

// u lies above row i and v below it.
WallCross row_cross(const WallView& V, Vertex u, Vertex v, int i) {
    auto [up, pu] = attach(V, u, true, true);
    auto [vp, pv] = attach(V, v, true, false);
    const Path& ri = V.row(i);
    const Path& ru = V.row(V.rowpos(up) / 2);
    const Path& rv = V.row(V.rowpos(vp) / 2);
    const Path& c1 = V.col(1);
    const Path& cr = V.col(V.r());
    WallCross x;
    Path w1, w2;
    Vertex x1 = first_on(c1, ri);
    append(w1, segment(c1, V.a(), x1));
    append(w1, segment(ri, x1, ri.back()));
    append(w1, segment(cr, ri.back(), V.c()));
    Vertex y1 = first_on(cr, ru);
    append(w2, segment(cr, V.b(), y1));
    append(w2, segment(ru, y1, up));
    append(w2, reversed(pu));
    append(w2, pv);
    append(w2, segment(rv, vp, rv.front()));
    append(w2, segment(c1, rv.front(), V.d()));
    x.p1 = walk_to_path(w1);
    x.p2 = walk_to_path(w2);
    return x;
}

// u lies left of column j and v right of it.
WallCross col_cross(const WallView& V, Vertex u, Vertex v, int j) {
    auto [up, pu] = attach(V, u, false, true);
    auto [vp, pv] = attach(V, v, false, false);
    const Path& cj = V.col(j);
    const Path& cu = V.col(V.colpos(up) / 2);
    const Path& cv = V.col(V.colpos(vp) / 2);
    const Path& r1 = V.row(1);
    const Path& rh = V.row(V.h());
    WallCross x;
    Path w1, w2;
    append(w1, segment(r1, V.a(), cj.front()));
    append(w1, cj);
    append(w1, segment(rh, cj.back(), V.c()));
    append(w2, segment(r1, V.b(), cv.front()));
    append(w2, segment(cv, cv.front(), vp));
    append(w2, reversed(pv));
    append(w2, pu);
    append(w2, segment(cu, up, cu.back()));
    append(w2, segment(rh, cu.back(), V.d()));
    x.p1 = walk_to_path(w1);
    x.p2 = walk_to_path(w2);
    return x;
}

// Boundary vertex u on the top row (u != a), v below row 2.
WallCross top_boundary_cross(const WallView& V, Vertex u, Vertex v) {
    auto [vp, pv] = attach(V, v, true, false);
    const Path& r2 = V.row(2);
    const Path& rv = V.row(V.rowpos(vp) / 2);
    const Path& c1 = V.col(1);
    const Path& cr = V.col(V.r());
    WallCross x;
    Path w1, w2;
    Vertex x1 = first_on(c1, r2);
    append(w1, segment(c1, V.a(), x1));
    append(w1, segment(r2, x1, r2.back()));
    append(w1, segment(cr, r2.back(), V.c()));
    append(w2, segment(V.row(1), V.b(), u));
    append(w2, pv);
    append(w2, segment(rv, vp, rv.front()));
    append(w2, segment(c1, rv.front(), V.d()));
    x.p1 = walk_to_path(w1);
    x.p2 = walk_to_path(w2);
    return x;
}

// Boundary vertex u on the first column strictly between the top and bottom
// rows, v right of column 2.
WallCross left_boundary_cross(const WallView& V, Vertex u, Vertex v) {
    auto [vp, pv] = attach(V, v, false, false);
    const Path& c2 = V.col(2);
    const Path& cv = V.col(V.colpos(vp) / 2);
    const Path& r1 = V.row(1);
    const Path& rh = V.row(V.h());
    WallCross x;
    Path w1, w2;
    append(w1, segment(r1, V.a(), c2.front()));
    append(w1, c2);
    append(w1, segment(rh, c2.back(), V.c()));
    append(w2, segment(r1, V.b(), cv.front()));
    append(w2, segment(cv, cv.front(), vp));
    append(w2, reversed(pv));
    append(w2, segment(V.col(1), u, V.d()));
    x.p1 = walk_to_path(w1);
    x.p2 = walk_to_path(w2);
    return x;
}

bool contains(const Path& p, Vertex v) { return std::find(p.begin(), p.end(), v) != p.end(); }

}  // namespace

WallCross wall_cross_from_chord(const Graph& host, const Wall& w, Vertex u, Vertex v) {
    if (w.h() < 5 || w.r() < 5) throw PreconditionError("wall-cross needs height and width at least 5");
    if (u == v) throw PreconditionError("chord endpoints coincide");
    WallView base(w, false, false);
    if (!base.on_wall(u) || !base.on_wall(v)) throw PreconditionError("chord endpoint not on the wall");
    std::vector<char> bd(static_cast<size_t>(host.n()), 0);
    for (Vertex x : w.boundary_cycle()) bd[static_cast<size_t>(x)] = 1;

    // Reflections that bring the construction back to the canonical picture
    // swap the roles of the two diagonals when exactly one of them is applied.
    auto finish = [&](const WallView& V, WallCross x) {
        if (V.lr() != V.tb()) std::swap(x.p1, x.p2);
        if (x.p1.front() != w.a()) x.p1 = reversed(x.p1);
        if (x.p2.front() != w.b()) x.p2 = reversed(x.p2);
        Graph g = host;
        if (!g.has_edge(u, v)) g.add_edge(u, v);
        if (!verify_wall_cross(g, w, x)) throw std::logic_error("wall-cross construction produced invalid paths");
        return x;
    };

    bool ub = bd[static_cast<size_t>(u)], vb = bd[static_cast<size_t>(v)];
    if (!ub && !vb) {
        Vertex lo = u, hi = v;
        if (base.rowpos(lo) > base.rowpos(hi)) std::swap(lo, hi);
        int i = base.rowpos(lo) / 2 + 1;
        if (2 * i < base.rowpos(hi)) return finish(base, row_cross(base, lo, hi, i));
        lo = u;
        hi = v;
        if (base.colpos(lo) > base.colpos(hi)) std::swap(lo, hi);
        int j = base.colpos(lo) / 2 + 1;
        if (base.colpos(lo) >= 0 && 2 * j < base.colpos(hi)) return finish(base, col_cross(base, lo, hi, j));
        throw PreconditionError("case 1 fails: interior chord endpoints are not separated by a row or a column");
    }
    if (vb && !ub) std::swap(u, v);
    if (vb && ub) throw PreconditionError("case 2 fails: both chord endpoints lie on the boundary");

    // v must lie in the sub-wall spanned by rows 3..h-2 and columns 3..r-2
    {
        auto mask = subwall_template_mask(w.tmpl, 3, w.h() - 2, 3, w.r() - 2);
        bool inside = false;
        for (Vertex t = 0; t < w.tmpl.g.n() && !inside; ++t)
            if (mask[static_cast<size_t>(t)] && w.branch[static_cast<size_t>(t)] == v) inside = true;
        for (size_t k = 0; k < w.tmpl_edges.size() && !inside; ++k) {
            auto [p, q] = w.tmpl_edges[k];
            if (mask[static_cast<size_t>(p)] && mask[static_cast<size_t>(q)] && contains(w.edge_paths[k], v)) inside = true;
        }
        if (!inside) throw PreconditionError("case 2 fails: inner endpoint outside rows 3..h-2 and columns 3..r-2");
    }
    const Path top = w.row(1), bottom = w.row(w.h());
    if (contains(top, u) || contains(bottom, u)) {
        bool tb = !contains(top, u);
        WallView V(w, false, tb);
        if (u == V.a()) {
            WallView V2(w, true, tb);
            return finish(V2, top_boundary_cross(V2, u, v));
        }
        return finish(V, top_boundary_cross(V, u, v));
    }
    bool lr = !contains(w.col(1), u);
    WallView V(w, lr, false);
    return finish(V, left_boundary_cross(V, u, v));
}

bool verify_wall_cross(const Graph& g, const Wall& w, const WallCross& x) {
    if (x.p1.empty() || x.p2.empty()) return false;
    if (!is_path(g, x.p1) || !is_path(g, x.p2)) return false;
    if (x.p1.front() != w.a() || x.p1.back() != w.c()) return false;
    if (x.p2.front() != w.b() || x.p2.back() != w.d()) return false;
    VertexSet s1 = x.p1, s2 = x.p2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    VertexSet common;
    std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(common));
    return common.empty();
}

nlohmann::json wall_to_json(const Wall& w) {
    nlohmann::json j;
    j["height"] = w.h();
    j["width"] = w.r();
    if (w.tmpl.uniform())
        j["phase"] = w.tmpl.phase;
    else
        j["col_phase"] = w.tmpl.col_phase;
    j["branch_map"] = w.branch;
    j["edge_paths"] = w.edge_paths;
    return j;
}

Wall wall_from_json(const nlohmann::json& j) {
    try {
        const int h = j.at("height").get<int>(), r = j.at("width").get<int>();
        std::vector<int> cp = j.contains("col_phase") ? j.at("col_phase").get<std::vector<int>>()
                                                      : std::vector<int>(static_cast<size_t>(std::max(r, 0)), j.value("phase", 0));
        if (static_cast<int>(cp.size()) != r) throw StructuralError("col_phase length differs from width");
        ElementaryWall t = build_wall_template(h, std::move(cp));
        return make_wall(std::move(t), j.at("branch_map").get<std::vector<Vertex>>(),
                         j.at("edge_paths").get<std::vector<Path>>());
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed wall document: ") + e.what());
    }
}

}  // namespace fw
