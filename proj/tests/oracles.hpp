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

#pragma once

/* Brute-force reference implementations, independent of the library algorithms. */

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "rendezvous/graph.hpp"

namespace oracle {

using rdv::Graph;
using rdv::Vertex;

using Pair = std::pair<Vertex, Vertex>;
using Multi = std::vector<Vertex>;
using State = std::pair<Pair, Multi>;

inline Pair make_pair_sorted(Vertex a, Vertex b) { return a < b ? Pair{a, b} : Pair{b, a}; }

inline std::vector<Vertex> closed(const Graph &g, Vertex v)
{
    std::vector<Vertex> out{v};
    for (Vertex u = 0; u < g.vertex_count(); u++)
        if (g.adjacent(u, v)) out.push_back(u);
    return out;
}

inline bool occupied(const Multi &d, Vertex v) { return std::find(d.begin(), d.end(), v) != d.end(); }

/* Facilitator moves: each agent stays or steps to a neighbour not holding a Divider agent */
inline std::vector<Pair> fac_moves(const Graph &g, Pair f, const Multi &d)
{
    std::set<Pair> out;
    for (Vertex a : closed(g, f.first))
        for (Vertex b : closed(g, f.second))
            if (!occupied(d, a) && !occupied(d, b)) out.insert(make_pair_sorted(a, b));
    return {out.begin(), out.end()};
}

/* Divider moves: the full product of per-agent choices, sorted into multisets */
inline std::vector<Multi> div_moves(const Graph &g, const Multi &d, Pair f)
{
    std::set<Multi> out;
    Multi cur(d.size());
    auto rec = [&](auto &&self, std::size_t i) -> void {
        if (i == d.size()) {
            Multi m = cur;
            std::sort(m.begin(), m.end());
            out.insert(m);
            return;
        }
        for (Vertex v : closed(g, d[i])) {
            if (v == f.first || v == f.second) continue;
            cur[i] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return {out.begin(), out.end()};
}

/* all k-multisets over V avoiding the given pair */
inline std::vector<Multi> placements(const Graph &g, int k, Pair f)
{
    std::vector<Multi> out;
    Multi cur;
    auto rec = [&](auto &&self, Vertex from) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (Vertex v = from; v < g.vertex_count(); v++) {
            if (v == f.first || v == f.second) continue;
            cur.push_back(v);
            self(self, v);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/* Facilitator-to-move winning levels by explicit fixpoint; absent means NotWinning */
inline std::map<State, int> levels(const Graph &g, int k)
{
    std::vector<State> all;
    for (Vertex a = 0; a < g.vertex_count(); a++)
        for (Vertex b = a + 1; b < g.vertex_count(); b++)
            for (auto &d : placements(g, k, {a, b})) all.push_back({{a, b}, d});
    std::map<State, int> level;
    for (int r = 1;; r++) {
        std::map<State, int> added;
        for (const auto &st : all) {
            if (level.count(st)) continue;
            for (Pair f2 : fac_moves(g, st.first, st.second)) {
                bool win = f2.first == f2.second;
                if (!win && r > 1) {
                    win = true;
                    for (const auto &d2 : div_moves(g, st.second, f2)) {
                        auto it = level.find({f2, d2});
                        if (it == level.end()) {
                            win = false;
                            break;
                        }
                    }
                }
                if (win) {
                    added[st] = r;
                    break;
                }
            }
        }
        if (added.empty()) break;
        level.insert(added.begin(), added.end());
    }
    return level;
}

/* Facilitator meets within r rounds from a Facilitator-to-move state */
inline bool wins_within(const Graph &g, Pair f, const Multi &d, int r, std::map<std::pair<State, int>, bool> &memo)
{
    if (r <= 0) return false;
    auto key = std::make_pair(State{f, d}, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool result = false;
    for (Pair f2 : fac_moves(g, f, d)) {
        if (f2.first == f2.second) {
            result = true;
            break;
        }
        bool all = true;
        for (const auto &d2 : div_moves(g, d, f2))
            if (!wins_within(g, f2, d2, r - 1, memo)) {
                all = false;
                break;
            }
        if (all) {
            result = true;
            break;
        }
    }
    memo[key] = result;
    return result;
}

inline bool facilitator_wins_in(const Graph &g, Vertex s, Vertex t, int k, int tau)
{
    if (s == t) return true;
    std::map<std::pair<State, int>, bool> memo;
    const Pair f = make_pair_sorted(s, t);
    for (const auto &d : placements(g, k, f))
        if (!wins_within(g, f, d, tau, memo)) return false;
    return true;
}

inline bool facilitator_wins(const Graph &g, Vertex s, Vertex t, int k)
{
    if (s == t) return true;
    const auto lv = levels(g, k);
    const Pair f = make_pair_sorted(s, t);
    for (const auto &d : placements(g, k, f))
        if (!lv.count({f, d})) return false;
    return true;
}

inline bool connected_without(const Graph &g, const std::vector<char> &removed, Vertex s, Vertex t)
{
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<Vertex> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        if (u == t) return true;
        for (Vertex v = 0; v < g.vertex_count(); v++)
            if (g.adjacent(u, v) && !seen[v] && !removed[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return false;
}

/* smallest separator size by subset enumeration; nullopt when s = t or adjacent */
inline std::optional<int> lambda(const Graph &g, Vertex s, Vertex t)
{
    if (s == t || g.adjacent(s, t)) return std::nullopt;
    const int n = g.vertex_count();
    int best = n;
    for (std::uint32_t mask = 0; mask < (1u << n); mask++) {
        if ((mask >> s & 1) || (mask >> t & 1)) continue;
        const int size = __builtin_popcount(mask);
        if (size >= best) continue;
        std::vector<char> removed(n);
        for (int v = 0; v < n; v++) removed[v] = mask >> v & 1;
        if (!connected_without(g, removed, s, t)) best = size;
    }
    return best;
}

/* does the induced subgraph on mask form a single cycle / a path? */
inline bool induced_shape(const Graph &g, std::uint32_t mask, bool cycle)
{
    std::vector<Vertex> vs;
    for (int v = 0; v < g.vertex_count(); v++)
        if (mask >> v & 1) vs.push_back(v);
    int edges = 0, ones = 0;
    for (Vertex u : vs) {
        int deg = 0;
        for (Vertex w : vs)
            if (g.adjacent(u, w)) deg++;
        if (deg > 2 || deg == 0) return false;
        if (deg == 1) ones++;
        edges += deg;
    }
    edges /= 2;
    const int n = static_cast<int>(vs.size());
    if (cycle ? (ones != 0 || edges != n) : (ones != 2 || edges != n - 1)) return false;
    std::vector<char> removed(g.vertex_count(), 1);
    for (Vertex v : vs) removed[v] = 0;
    for (Vertex v : vs)
        if (!connected_without(g, removed, vs.front(), v)) return false;
    return true;
}

inline bool chordal(const Graph &g)
{
    for (std::uint32_t mask = 0; mask < (1u << g.vertex_count()); mask++)
        if (__builtin_popcount(mask) >= 4 && induced_shape(g, mask, true)) return false;
    return true;
}

inline bool p5_free(const Graph &g)
{
    for (std::uint32_t mask = 0; mask < (1u << g.vertex_count()); mask++)
        if (__builtin_popcount(mask) == 5 && induced_shape(g, mask, false)) return false;
    return true;
}

/* smallest k for which Divider wins; nullopt when s = t or adjacent */
inline std::optional<int> divider_number(const Graph &g, Vertex s, Vertex t)
{
    if (s == t || g.adjacent(s, t)) return std::nullopt;
    for (int k = 1;; k++)
        if (!facilitator_wins(g, s, t, k)) return k;
}

} // namespace oracle
