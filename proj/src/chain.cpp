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

#include "flatwall/chain.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "flatwall/linkage.hpp"

namespace fw {

namespace {

// Lays the templates of the basic walls side by side in one template of
// mixed parity and maps the grid vertices between two blocks onto the inner
// vertices of the connector of their row.
Wall build_union(const std::vector<Wall>& basic, const std::vector<std::vector<Path>>& conn, std::vector<int>& first_col) {
    const int z = basic.front().h();
    std::vector<int> cp;
    first_col.clear();
    for (const Wall& b : basic) {
        first_col.push_back(static_cast<int>(cp.size()) + 1);
        cp.insert(cp.end(), b.tmpl.col_phase.begin(), b.tmpl.col_phase.end());
    }
    ElementaryWall t = build_wall_template(z, cp);
    const size_t n = static_cast<size_t>(t.g.n());
    std::vector<Vertex> branch(n, -1), local(n, -1);
    std::vector<int> owner(n, -1);
    for (size_t k = 0; k < basic.size(); ++k) {
        const auto& bt = basic[k].tmpl;
        const int off = 2 * (first_col[k] - 1);
        for (Vertex v = 0; v < bt.g.n(); ++v) {
            auto [i, x] = bt.coord[static_cast<size_t>(v)];
            Vertex tv = t.at(i, x + off);
            if (tv < 0) throw std::logic_error("basic wall vertex missing from the joined template");
            branch[static_cast<size_t>(tv)] = basic[k].branch[static_cast<size_t>(v)];
            owner[static_cast<size_t>(tv)] = static_cast<int>(k);
            local[static_cast<size_t>(tv)] = v;
        }
        for (auto [u, v] : bt.g.edges()) {
            auto [iu, xu] = bt.coord[static_cast<size_t>(u)];
            auto [iv, xv] = bt.coord[static_cast<size_t>(v)];
            if (!t.g.has_edge(t.at(iu, xu + off), t.at(iv, xv + off)))
                throw std::logic_error("basic wall edge missing from the joined template");
        }
    }

    // Position of each junction vertex (and of the two block ends) on the
    // connector of its row; connector_of[tv] is (family, row).
    std::vector<int> pos(n, -1);
    std::vector<std::pair<int, int>> connector_of(n, {-1, -1});
    for (int i = 1; i <= z; ++i) {
        const Path& row = t.rows[static_cast<size_t>(i - 1)];
        for (size_t a = 0; a < row.size();) {
            if (owner[static_cast<size_t>(row[a])] >= 0) {
                ++a;
                continue;
            }
            size_t b = a;
            while (b < row.size() && owner[static_cast<size_t>(row[b])] < 0) ++b;
            if (a == 0 || b == row.size()) throw std::logic_error("junction vertex at the end of a row");
            const int k = owner[static_cast<size_t>(row[a - 1])];
            if (owner[static_cast<size_t>(row[b])] != k + 1) throw std::logic_error("junction between non-consecutive blocks");
            const Path& p = conn[static_cast<size_t>(k)][static_cast<size_t>(i - 1)];
            if (p.size() < b - a + 2)
                throw StructuralError("connector " + std::to_string(k + 1) + " row " + std::to_string(i) +
                                      " is too short to join the bricks of the two walls");
            for (size_t m = a; m < b; ++m) {
                branch[static_cast<size_t>(row[m])] = p[m - a + 1];
                pos[static_cast<size_t>(row[m])] = static_cast<int>(m - a + 1);
                connector_of[static_cast<size_t>(row[m])] = {k, i};
            }
            a = b;
        }
    }

    std::vector<Path> paths;
    for (auto [u, v] : t.g.edges()) {
        const int ou = owner[static_cast<size_t>(u)], ov = owner[static_cast<size_t>(v)];
        if (ou >= 0 && ou == ov) {
            const Wall& b = basic[static_cast<size_t>(ou)];
            Vertex lu = local[static_cast<size_t>(u)], lv = local[static_cast<size_t>(v)];
            if (!b.tmpl.g.has_edge(lu, lv)) throw std::logic_error("joined template edge not in its basic wall");
            paths.push_back(b.edge_path(lu, lv));
            continue;
        }
        if (!t.horizontal(u, v)) throw std::logic_error("vertical edge at a junction");
        int k = 0, i = t.coord[static_cast<size_t>(u)].first;
        if (ou >= 0 && ov >= 0) {
            // rows whose bricks line up across the junction: the connector is the edge
            k = std::min(ou, ov);
            if (std::max(ou, ov) != k + 1) throw std::logic_error("edge between non-consecutive blocks");
        } else {
            k = connector_of[static_cast<size_t>(ou < 0 ? u : v)].first;
        }
        const Path& p = conn[static_cast<size_t>(k)][static_cast<size_t>(i - 1)];
        auto at = [&](Vertex x) {
            const int o = owner[static_cast<size_t>(x)];
            if (o < 0) return pos[static_cast<size_t>(x)];
            return o == k ? 0 : static_cast<int>(p.size()) - 1;
        };
        int pu = at(u), pv = at(v);
        Path piece;
        if (pu <= pv)
            piece.assign(p.begin() + pu, p.begin() + pv + 1);
        else {
            piece.assign(p.begin() + pv, p.begin() + pu + 1);
            std::reverse(piece.begin(), piece.end());
        }
        paths.push_back(std::move(piece));
    }
    return make_wall(std::move(t), std::move(branch), std::move(paths));
}

// Clauses that must hold before W' can be laid out.
ValidationReport check_parts(const Graph& host, const std::vector<Wall>& basic, const std::vector<std::vector<Path>>& conn) {
    if (basic.empty()) return ValidationReport::structural("chain without basic walls");
    const int z = basic.front().h();
    if (z < 2) return ValidationReport::structural("basic wall height below 2");
    std::vector<int> use(static_cast<size_t>(host.n()), -1);
    for (size_t k = 0; k < basic.size(); ++k) {
        const Wall& b = basic[k];
        if (b.h() != z) return ValidationReport::semantic("basic walls differ in height");
        if (b.r() < z) return ValidationReport::semantic("basic wall narrower than its height");
        auto rep = check_wall(host, b);
        if (!rep.ok()) return {rep.kind, "basic wall " + std::to_string(k + 1) + ": " + rep.clause};
        for (Vertex x : b.vertices()) {
            if (use[static_cast<size_t>(x)] >= 0) return ValidationReport::semantic("basic walls are not disjoint");
            use[static_cast<size_t>(x)] = static_cast<int>(k);
        }
    }
    if (conn.size() + 1 != basic.size()) return ValidationReport::structural("connector family count differs from walls - 1");
    for (size_t k = 0; k < conn.size(); ++k) {
        const std::string fam = "connector family " + std::to_string(k + 1);
        if (static_cast<int>(conn[k].size()) != z) return ValidationReport::structural(fam + " does not hold z paths");
        for (int i = 1; i <= z; ++i) {
            const Path& p = conn[k][static_cast<size_t>(i - 1)];
            for (Vertex x : p)
                if (!host.valid(x)) return ValidationReport::structural(fam + " vertex out of range");
            if (p.size() < 2 || !is_path(host, p)) return ValidationReport::semantic(fam + " holds a non-path");
            if (p.front() != basic[k].row(i).back() || p.back() != basic[k + 1].row(i).front())
                return ValidationReport::semantic(fam + " does not join row " + std::to_string(i) + " to row " +
                                                  std::to_string(i));
            for (size_t a = 1; a + 1 < p.size(); ++a) {
                if (use[static_cast<size_t>(p[a])] >= 0 && use[static_cast<size_t>(p[a])] < static_cast<int>(basic.size()))
                    return ValidationReport::semantic(fam + " passes through a basic wall");
                if (use[static_cast<size_t>(p[a])] >= 0) return ValidationReport::semantic(fam + " meets another connector");
                use[static_cast<size_t>(p[a])] = static_cast<int>(basic.size());
            }
        }
    }
    return ValidationReport::pass();
}

Wall hosted_subwall(const Wall& sq, int i1, int i2, int j1, int j2, bool rotate) {
    Wall b = subwall(sq, i1, i2, j1, j2);
    return rotate ? rotate180(b) : b;
}

}  // namespace

VertexSet Chain::neighborhood(int k) const {
    VertexSet out;
    for (int q = std::max(0, k - 1); q <= std::min(size() - 1, k + 1); ++q) {
        VertexSet v = basic[static_cast<size_t>(q)].vertices();
        out.insert(out.end(), v.begin(), v.end());
    }
    for (int q = std::max(0, k - 1); q <= std::min(size() - 2, k); ++q)
        for (const Path& p : connectors[static_cast<size_t>(q)]) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Chain assemble_chain(const Graph& host, std::vector<Wall> basic, std::vector<std::vector<Path>> connectors) {
    auto rep = check_parts(host, basic, connectors);
    if (!rep.ok()) throw StructuralError("chain rejected: " + rep.clause);
    Chain c;
    c.z = basic.front().h();
    c.union_wall = build_union(basic, connectors, c.first_col);
    c.basic = std::move(basic);
    c.connectors = std::move(connectors);
    rep = check_chain(host, c);
    if (!rep.ok()) throw StructuralError("chain rejected: " + rep.clause);
    return c;
}

ValidationReport check_chain(const Graph& host, const Chain& c) {
    auto rep = check_parts(host, c.basic, c.connectors);
    if (!rep.ok()) return rep;
    if (c.z != c.basic.front().h()) return ValidationReport::structural("chain height differs from its walls");
    rep = check_wall(host, c.union_wall);
    if (!rep.ok()) return {rep.kind, "union wall: " + rep.clause};
    int width = 0;
    for (const Wall& b : c.basic) width += b.r();
    if (c.union_wall.h() != c.z || c.union_wall.r() != width)
        return ValidationReport::semantic("union wall dimensions differ from the basic walls");
    if (c.first_col.size() != c.basic.size()) return ValidationReport::structural("column offsets missing");
    for (size_t k = 0; k < c.basic.size(); ++k) {
        const Wall& b = c.basic[k];
        Wall s = subwall(c.union_wall, 1, c.z, c.first_col[k], c.first_col[k] + b.r() - 1);
        if (s.vertices() != b.vertices()) return ValidationReport::semantic("basic wall is not a block of the union wall");
    }
    return ValidationReport::pass();
}

bool union_is_elementary(const Chain& c) { return c.union_wall.tmpl.uniform(); }

Wall rotate180(const Wall& w) {
    const auto& t = w.tmpl;
    std::vector<int> cp;
    for (int j = t.r; j >= 1; --j) cp.push_back((t.col_phase[static_cast<size_t>(j - 1)] + t.h + 1) % 2);
    ElementaryWall nt = build_wall_template(t.h, std::move(cp));
    std::vector<Vertex> orig(static_cast<size_t>(nt.g.n()));
    for (Vertex v = 0; v < nt.g.n(); ++v) {
        auto [i, x] = nt.coord[static_cast<size_t>(v)];
        Vertex p = t.at(t.h + 1 - i, 2 * t.r + 1 - x);
        if (p < 0) throw std::logic_error("rotated template has no preimage");
        orig[static_cast<size_t>(v)] = p;
    }
    if (nt.g.n() != t.g.n() || nt.g.m() != t.g.m()) throw std::logic_error("rotated template differs in size");
    std::vector<Vertex> branch;
    for (Vertex p : orig) branch.push_back(w.branch[static_cast<size_t>(p)]);
    std::vector<Path> paths;
    for (auto [u, v] : nt.g.edges()) paths.push_back(w.edge_path(orig[static_cast<size_t>(u)], orig[static_cast<size_t>(v)]));
    return make_wall(std::move(nt), std::move(branch), std::move(paths));
}

Chain cut_wall_to_chain(const Graph& host, const Wall& w, int n, int z) {
    if (n < 3) throw ParameterError("a chain needs n >= 3 strips");
    if (z < 2) throw ParameterError("basic walls need height z >= 2");
    const int side = n * z;
    if (w.h() < side || w.r() < side) throw ParameterError("wall smaller than (nz x nz)");
    const Wall sq = (w.h() == side && w.r() == side) ? w : subwall(w, 1, side, 1, side);

    // Basic walls in chain order, with their strip and block index.
    std::vector<Wall> basic;
    std::vector<int> strip_of;
    for (int j = 1; j <= n; ++j) {
        const bool odd = j % 2 == 1;
        for (int q = 0; q < n - 2; ++q) {
            const int i = odd ? 2 + q : n - 1 - q;
            basic.push_back(hosted_subwall(sq, (j - 1) * z + 1, j * z, (i - 1) * z + 1, i * z, !odd));
            strip_of.push_back(j);
        }
    }
    std::vector<char> in_basic(static_cast<size_t>(host.n()), 0);
    for (const Wall& b : basic)
        for (Vertex x : b.vertices()) in_basic[static_cast<size_t>(x)] = 1;

    Graph wg(host.n());
    for (auto [u, v] : sq.host_edges()) wg.add_edge(u, v);
    const auto& t = sq.tmpl;

    std::vector<std::vector<Path>> conn;
    for (size_t k = 0; k + 1 < basic.size(); ++k) {
        const Wall &a = basic[k], &b = basic[k + 1];
        const int j = strip_of[k];
        std::vector<Path> fam(static_cast<size_t>(z));
        if (strip_of[k + 1] == j) {
            for (int i = 1; i <= z; ++i) {
                const int r = j % 2 == 1 ? (j - 1) * z + i : j * z + 1 - i;
                fam[static_cast<size_t>(i - 1)] = segment(sq.row(r), a.row(i).back(), b.row(i).front());
            }
            conn.push_back(std::move(fam));
            continue;
        }
        // Turn between strips j and j+1 through the gadget made of the end
        // blocks of both strips on the turning side.
        const bool right = j % 2 == 1;
        VertexSet xs, ys;
        std::vector<int> row_of(static_cast<size_t>(host.n()), 0);
        for (int i = 1; i <= z; ++i) {
            xs.push_back(a.row(i).back());
            ys.push_back(b.row(i).front());
            row_of[static_cast<size_t>(xs.back())] = i;
            row_of[static_cast<size_t>(ys.back())] = i;
        }
        std::vector<char> term = make_mask(host.n(), xs);
        for (Vertex y : ys) term[static_cast<size_t>(y)] = 1;
        std::vector<char> gadget(static_cast<size_t>(t.g.n()), 0);
        for (Vertex v = 0; v < t.g.n(); ++v) {
            auto [i, x] = t.coord[static_cast<size_t>(v)];
            if (i <= (j - 1) * z || i > (j + 1) * z) continue;
            if (right ? x < 2 * z * (n - 1) - 1 : x > 2 * z + 2) continue;
            Vertex hv = sq.branch[static_cast<size_t>(v)];
            if (term[static_cast<size_t>(hv)] || !in_basic[static_cast<size_t>(hv)]) gadget[static_cast<size_t>(v)] = 1;
        }
        LinkageOptions opt;
        opt.allowed.assign(static_cast<size_t>(host.n()), 0);
        opt.avoid_terminals_inside = true;
        for (auto [u, v] : t.g.edges()) {
            if (!gadget[static_cast<size_t>(u)] || !gadget[static_cast<size_t>(v)]) continue;
            if (term[static_cast<size_t>(sq.branch[static_cast<size_t>(u)])] &&
                term[static_cast<size_t>(sq.branch[static_cast<size_t>(v)])])
                continue;
            for (Vertex x : sq.edge_path(u, v)) opt.allowed[static_cast<size_t>(x)] = 1;
        }
        auto res = vertex_disjoint_linkage(wg, xs, ys, z, opt);
        if (!res.linked) throw std::logic_error("turn gadget is not z-linked");
        for (Path& p : res.linkage.paths) {
            const int i = row_of[static_cast<size_t>(p.front())];
            if (row_of[static_cast<size_t>(p.back())] != i) throw std::logic_error("turn linkage does not pair rows");
            fam[static_cast<size_t>(i - 1)] = std::move(p);
        }
        conn.push_back(std::move(fam));
    }
    return assemble_chain(host, std::move(basic), std::move(conn));
}

Chain truncate_chain(const Graph& host, const Chain& c, int m) {
    if (m < 1 || m > c.size()) throw ParameterError("chain length out of range");
    std::vector<Wall> basic(c.basic.begin(), c.basic.begin() + m);
    std::vector<std::vector<Path>> conn(c.connectors.begin(), c.connectors.begin() + (m - 1));
    return assemble_chain(host, std::move(basic), std::move(conn));
}

nlohmann::json chain_to_json(const Chain& c) {
    nlohmann::json j;
    j["height"] = c.z;
    j["basic_walls"] = nlohmann::json::array();
    for (const Wall& b : c.basic) j["basic_walls"].push_back(wall_to_json(b));
    j["connectors"] = c.connectors;
    return j;
}

Chain chain_from_json(const Graph& host, const nlohmann::json& j) {
    try {
        std::vector<Wall> basic;
        for (const auto& b : j.at("basic_walls")) basic.push_back(wall_from_json(b));
        return assemble_chain(host, std::move(basic), j.at("connectors").get<std::vector<std::vector<Path>>>());
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed chain document: ") + e.what());
    }
}

}  // namespace fw
