/*
 * Copyright 2026 The Rendezvous Solver Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>

#include "rendezvous/game.hpp"
#include "moves_internal.hpp"

namespace rdv {

DivPlacement::DivPlacement(std::vector<Vertex> v) : agents(std::move(v))
{
    std::sort(agents.begin(), agents.end());
}

bool DivPlacement::contains(Vertex v) const { return std::binary_search(agents.begin(), agents.end(), v); }

bool compatible(const FacPlacement &f, const DivPlacement &d) { return !d.contains(f.a) && !d.contains(f.b); }

bool multiset_adjacent(const Graph &g, std::vector<Vertex> x, std::vector<Vertex> y)
{
    if (x.size() != y.size()) return false;
    const int m = static_cast<int>(x.size());
    for (Vertex v : x)
        if (!g.contains(v)) return false;
    for (Vertex v : y)
        if (!g.contains(v)) return false;
    /* Kuhn's augmenting paths over pairs that are equal or adjacent */
    std::vector<int> match_y(m, -1);
    auto ok = [&](int i, int j) { return x[i] == y[j] || g.adjacent(x[i], y[j]); };
    std::vector<char> seen;
    auto augment = [&](auto &&self, int i) -> bool {
        for (int j = 0; j < m; j++) {
            if (seen[j] || !ok(i, j)) continue;
            seen[j] = 1;
            if (match_y[j] < 0 || self(self, match_y[j])) {
                match_y[j] = i;
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < m; i++) {
        seen.assign(m, 0);
        if (!augment(augment, i)) return false;
    }
    return true;
}

std::vector<FacPlacement> fac_moves(const Graph &g, const FacPlacement &f, const DivPlacement &d)
{
    if (!g.contains(f.a) || !g.contains(f.b)) throw Error(ErrorCode::contract, "Facilitator vertex out of range");
    if (!compatible(f, d)) throw Error(ErrorCode::contract, "Facilitator and Divider placements overlap");
    std::vector<FacPlacement> out;
    for (Vertex a : g.closed_neighbors(f.a)) {
        if (d.contains(a)) continue;
        for (Vertex b : g.closed_neighbors(f.b)) {
            if (d.contains(b)) continue;
            out.emplace_back(a, b);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace detail {

std::vector<std::vector<Vertex>> adjacent_multisets(const Graph &g, const std::vector<Vertex> &d)
{
    /* grow partial multisets one agent at a time, deduplicating at every level */
    std::vector<std::vector<Vertex>> layer{{}};
    for (Vertex v : d) {
        std::vector<std::vector<Vertex>> next;
        next.reserve(layer.size() * g.closed_neighbors(v).size());
        for (const auto &partial : layer) {
            for (Vertex w : g.closed_neighbors(v)) {
                auto grown = partial;
                grown.insert(std::upper_bound(grown.begin(), grown.end(), w), w);
                next.push_back(std::move(grown));
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        layer = std::move(next);
    }
    return layer;
}

} // namespace detail

std::vector<DivPlacement> div_moves(const Graph &g, const DivPlacement &d, const FacPlacement &f)
{
    for (Vertex v : d.agents)
        if (!g.contains(v)) throw Error(ErrorCode::contract, "Divider vertex out of range");
    if (!compatible(f, d)) throw Error(ErrorCode::contract, "Facilitator and Divider placements overlap");
    std::vector<DivPlacement> out;
    for (auto &m : detail::adjacent_multisets(g, d.agents)) {
        if (std::binary_search(m.begin(), m.end(), f.a) || std::binary_search(m.begin(), m.end(), f.b)) continue;
        DivPlacement p;
        p.agents = std::move(m);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<DivPlacement> initial_placements(const Graph &g, int k, const FacPlacement &f)
{
    std::vector<Vertex> free;
    for (Vertex v = 0; v < g.vertex_count(); v++)
        if (v != f.a && v != f.b) free.push_back(v);
    std::vector<DivPlacement> out;
    if (free.empty()) return out;
    std::vector<int> idx(k, 0);
    for (;;) {
        DivPlacement p;
        for (int i : idx) p.agents.push_back(free[i]);
        out.push_back(std::move(p));
        int i = k - 1;
        while (i >= 0 && idx[i] == static_cast<int>(free.size()) - 1) i--;
        if (i < 0) break;
        idx[i]++;
        for (int j = i + 1; j < k; j++) idx[j] = idx[i];
    }
    return out;
}

} // namespace rdv
