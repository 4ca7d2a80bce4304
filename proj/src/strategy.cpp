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
#include <sstream>

#include "bounded_internal.hpp"

namespace rdv {

using json = nlohmann::json;

namespace {

std::string show(const std::vector<Vertex> &v)
{
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < v.size(); i++) out << (i ? "," : "") << v[i];
    out << '}';
    return out.str();
}

std::string show(const FacPlacement &f) { return show(std::vector<Vertex>{f.a, f.b}); }

StrategyNode grow(const Graph &g, detail::BoundedSearch &search, const FacPlacement &f, const DivPlacement &d,
                  int remaining)
{
    StrategyNode node{f, d, {}};
    if (remaining == 0) return node;
    for (const auto &f2 : fac_moves(g, f, d)) {
        bool found = false;
        for (const auto &d2 : div_moves(g, d, f2)) {
            if (!f2.meets() && !search.wins(f2, d2, remaining - 1)) {
                node.children.push_back(grow(g, search, f2, d2, remaining - 1));
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorCode::contract, "no surviving Divider reply; position is not a Divider win");
    }
    return node;
}

} // namespace

StrategyNode extract_divider_strategy(const Graph &g, Vertex s, Vertex t, int k, int tau, const SolveOptions &opts)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (k < 1 || tau < 1) throw Error(ErrorCode::invalid_argument, "k and tau must be at least 1");
    if (one_step_win(g, s, t, k)) throw Error(ErrorCode::contract, "Facilitator wins in one step");
    const FacPlacement start(s, t);
    detail::BoundedSearch search(g, k, tau, opts.budget);
    for (const auto &d0 : initial_placements(g, k, start))
        if (!search.wins(start, d0, tau)) return grow(g, search, start, d0, tau);
    throw Error(ErrorCode::contract, "Facilitator wins within tau; no Divider strategy exists");
}

VerifyResult verify_strategy_tree(const Graph &g, Vertex s, Vertex t, int k, int tau, const StrategyNode &tree)
{
    auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    if (!g.contains(s) || !g.contains(t)) return fail("s or t out of range");
    if (tree.f != FacPlacement(s, t)) return fail("root Facilitator placement is not {s,t}");

    auto check = [&](auto &&self, const StrategyNode &node, int depth, const std::string &path) -> VerifyResult {
        const std::string at = " at node " + path;
        if (!g.contains(node.f.a) || !g.contains(node.f.b)) return fail("vertex out of range" + at);
        if (node.f.meets()) return fail("Facilitator agents coincide" + at);
        if (node.d.size() != k) return fail("Divider placement has " + std::to_string(node.d.size()) +
                                            " agents, expected " + std::to_string(k) + at);
        for (Vertex v : node.d.agents)
            if (!g.contains(v)) return fail("vertex out of range" + at);
        if (!compatible(node.f, node.d)) return fail("Facilitator and Divider overlap" + at);
        if (depth == tau) {
            if (!node.children.empty()) return fail("tree deeper than tau" + at);
            return {true, ""};
        }
        auto expected = fac_moves(g, node.f, node.d);
        std::vector<FacPlacement> got;
        for (const auto &c : node.children) got.push_back(c.f);
        auto sorted = got;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return fail("duplicate Facilitator branch" + at);
        for (const auto &m : expected)
            if (!std::binary_search(sorted.begin(), sorted.end(), m))
                return fail("missing branch for Facilitator move " + show(m) + at);
        for (const auto &m : sorted)
            if (!std::binary_search(expected.begin(), expected.end(), m))
                return fail("branch " + show(m) + " is not a legal Facilitator move" + at);
        for (std::size_t i = 0; i < node.children.size(); i++) {
            const auto &c = node.children[i];
            const std::string cpath = path + "/" + std::to_string(i);
            if (!multiset_adjacent(g, node.d.agents, c.d.agents))
                return fail("Divider placement " + show(c.d.agents) + " not adjacent to parent at node " + cpath);
            auto r = self(self, c, depth + 1, cpath);
            if (!r.valid) return r;
        }
        return {true, ""};
    };
    return check(check, tree, 0, "root");
}

json strategy_to_json(const StrategyNode &tree)
{
    json children = json::array();
    for (const auto &c : tree.children) children.push_back(strategy_to_json(c));
    return json{{"f", {tree.f.a, tree.f.b}}, {"d", tree.d.agents}, {"children", std::move(children)}};
}

StrategyNode strategy_from_json(const json &j)
{
    if (!j.is_object()) throw Error(ErrorCode::parse, "strategy node must be an object");
    for (const char *key : {"f", "d", "children"})
        if (!j.contains(key) || !j[key].is_array())
            throw Error(ErrorCode::parse, std::string("strategy node needs array field \"") + key + "\"");
    const auto &f = j["f"];
    if (f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer())
        throw Error(ErrorCode::parse, "\"f\" must hold two vertex ids");
    StrategyNode node;
    node.f = FacPlacement(f[0].get<Vertex>(), f[1].get<Vertex>());
    std::vector<Vertex> d;
    for (const auto &v : j["d"]) {
        if (!v.is_number_integer()) throw Error(ErrorCode::parse, "\"d\" must hold vertex ids");
        d.push_back(v.get<Vertex>());
    }
    node.d = DivPlacement(std::move(d));
    for (const auto &c : j["children"]) node.children.push_back(strategy_from_json(c));
    return node;
}

VerifyResult verify_strategy_json(const Graph &g, Vertex s, Vertex t, int k, int tau, const json &tree)
{
    StrategyNode node;
    try {
        node = strategy_from_json(tree);
    } catch (const Error &e) {
        return {false, std::string("malformed tree: ") + e.what()};
    }
    return verify_strategy_tree(g, s, t, k, tau, node);
}

/* ---- hints ---- */

namespace {

/* NotWinning compares as larger than every level */
int level_key(std::optional<int> lv) { return lv ? *lv : INT32_MAX; }

} // namespace

std::vector<AnnotatedMove> best_moves(const WinTable &table, const Position &pos)
{
    const Graph &g = table.graph();
    std::vector<AnnotatedMove> out;
    if (pos.f.meets()) return out;
    if (pos.turn == Side::facilitator) {
        for (const auto &f2 : fac_moves(g, pos.f, pos.d)) {
            std::optional<int> worst = 0;
            if (!f2.meets()) {
                for (const auto &d2 : div_moves(g, pos.d, f2)) {
                    auto lv = table.level(f2, d2);
                    if (level_key(lv) > level_key(worst)) worst = lv;
                }
            }
            out.push_back({f2, worst});
        }
        std::stable_sort(out.begin(), out.end(), [](const AnnotatedMove &x, const AnnotatedMove &y) {
            return level_key(x.level) < level_key(y.level);
        });
    } else {
        for (const auto &d2 : div_moves(g, pos.d, pos.f)) out.push_back({d2, table.level(pos.f, d2)});
        std::stable_sort(out.begin(), out.end(), [](const AnnotatedMove &x, const AnnotatedMove &y) {
            return level_key(x.level) > level_key(y.level);
        });
    }
    return out;
}

std::vector<AnnotatedMove> best_placements(const WinTable &table, Vertex s, Vertex t)
{
    std::vector<AnnotatedMove> out;
    const FacPlacement start(s, t);
    if (start.meets()) return out;
    for (auto &d0 : initial_placements(table.graph(), table.agent_count(), start)) {
        auto lv = table.level(start, d0);
        out.push_back({std::move(d0), lv});
    }
    std::stable_sort(out.begin(), out.end(), [](const AnnotatedMove &x, const AnnotatedMove &y) {
        return level_key(x.level) > level_key(y.level);
    });
    return out;
}

} // namespace rdv
