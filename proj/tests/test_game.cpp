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

#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "rendezvous/forge.hpp"
#include "rendezvous/game.hpp"

using namespace rdv;

namespace {

std::vector<Graph> corpus(int max_n)
{
    std::vector<Graph> out;
    for (int n = 2; n <= max_n; n++)
        for (auto &g : all_connected_graphs(n)) out.push_back(std::move(g));
    return out;
}

int common_neighbours(const Graph &g, Vertex s, Vertex t)
{
    int c = 0;
    for (Vertex v = 0; v < g.vertex_count(); v++)
        if (v != s && v != t && g.adjacent(v, s) && g.adjacent(v, t)) c++;
    return c;
}

} // namespace

TEST_CASE("move generators match the product construction")
{
    for (const auto &g : corpus(5))
        for (int k = 1; k <= 2; k++)
            for (Vertex a = 0; a < g.vertex_count(); a++)
                for (Vertex b = a + 1; b < g.vertex_count(); b++)
                    for (const auto &d : oracle::placements(g, k, {a, b})) {
                        const FacPlacement f(a, b);
                        const DivPlacement dp(d);
                        std::vector<oracle::Pair> got;
                        for (const auto &m : fac_moves(g, f, dp)) got.push_back({m.a, m.b});
                        CHECK(got == oracle::fac_moves(g, {a, b}, d));
                        std::vector<oracle::Multi> dgot;
                        for (const auto &m : div_moves(g, dp, f)) dgot.push_back(m.agents);
                        CHECK(dgot == oracle::div_moves(g, d, {a, b}));
                    }
}

TEST_CASE("multiset adjacency agrees with permutation search")
{
    const Graph g = random_connected_graph(6, 0.4, 7);
    for (const auto &x : oracle::placements(g, 3, {-1, -1}))
        for (const auto &y : oracle::placements(g, 3, {-1, -1})) {
            auto perm = y;
            bool expect = false;
            do {
                bool ok = true;
                for (int i = 0; i < 3 && ok; i++) ok = x[i] == perm[i] || g.adjacent(x[i], perm[i]);
                expect = expect || ok;
            } while (!expect && std::next_permutation(perm.begin(), perm.end()));
            CHECK(multiset_adjacent(g, x, y) == expect);
        }
}

TEST_CASE("win table levels equal the explicit fixpoint")
{
    auto graphs = corpus(5);
    for (std::uint64_t seed = 0; seed < 6; seed++) graphs.push_back(random_connected_graph(6, 0.45, seed));
    for (const auto &g : graphs)
        for (int k = 1; k <= 2; k++) {
            const WinTable table(g, k);
            const auto expect = oracle::levels(g, k);
            int max_level = 0;
            for (Vertex a = 0; a < g.vertex_count(); a++)
                for (Vertex b = a + 1; b < g.vertex_count(); b++)
                    for (const auto &d : oracle::placements(g, k, {a, b})) {
                        const auto it = expect.find({{a, b}, d});
                        const auto got = table.level(FacPlacement(a, b), DivPlacement(d));
                        if (it == expect.end()) {
                            CHECK_FALSE(got.has_value());
                        } else {
                            REQUIRE(got.has_value());
                            CHECK(*got == it->second);
                            max_level = std::max(max_level, it->second);
                        }
                    }
            CHECK(table.ell_star() >= max_level);
            for (Vertex s = 0; s < g.vertex_count(); s++)
                for (Vertex t = s + 1; t < g.vertex_count(); t++)
                    CHECK(table.facilitator_wins(s, t) == oracle::facilitator_wins(g, s, t, k));
        }
}

TEST_CASE("bounded game matches the recursive definition")
{
    for (const auto &g : corpus(5))
        for (int k = 1; k <= 2; k++)
            for (Vertex s = 0; s < g.vertex_count(); s++)
                for (Vertex t = s + 1; t < g.vertex_count(); t++)
                    for (int tau = 1; tau <= 3; tau++) {
                        const bool expect = oracle::facilitator_wins_in(g, s, t, k, tau);
                        CHECK(facilitator_wins_in(g, s, t, k, tau) == expect);
                        SolveOptions full;
                        full.full_table = true;
                        CHECK(facilitator_wins_in(g, s, t, k, tau, full) == expect);
                    }
}

TEST_CASE("one-step criterion counts common neighbours")
{
    for (const auto &g : corpus(6))
        for (Vertex s = 0; s < g.vertex_count(); s++)
            for (Vertex t = s + 1; t < g.vertex_count(); t++)
                for (int k = 1; k <= 2; k++) {
                    const bool expect = g.adjacent(s, t) || common_neighbours(g, s, t) > k;
                    CHECK(one_step_win(g, s, t, k) == expect);
                }
}

TEST_CASE("Facilitator wins are antitone in k and monotone in tau")
{
    for (std::uint64_t seed = 0; seed < 25; seed++) {
        const int n = 5 + static_cast<int>(seed % 3);
        const Graph g = random_connected_graph(n, 0.4, 100 + seed);
        for (Vertex t = 1; t < n; t++) {
            bool prev = true;
            for (int k = 1; k <= 3; k++) {
                const bool w = facilitator_wins(g, 0, t, k);
                if (w) CHECK(prev);
                prev = w;
                bool before = false;
                for (int tau = 1; tau <= 3; tau++) {
                    const bool wt = facilitator_wins_in(g, 0, t, k, tau);
                    if (before) CHECK(wt);
                    if (wt) CHECK(w);
                    before = wt;
                }
            }
        }
    }
}

TEST_CASE("divider number on named graphs")
{
    const Graph p3(3, {{0, 1}, {1, 2}});
    CHECK(divider_number(p3, 0, 2) == ExtCount::finite(1));
    CHECK(divider_number(p3, 0, 1).is_infinite());
    CHECK(divider_number(p3, 1, 1).is_infinite());
    const Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(divider_number(c4, 0, 2) == ExtCount::finite(2));
    for (int p = 2; p <= 4; p++) CHECK(divider_number(gen_clique_spider(p).graph, 0, 1) == ExtCount::finite(2));
    for (int p = 2; p <= 3; p++) CHECK(divider_number(gen_path_spider(p).graph, 0, 1) == ExtCount::finite(2));
    CHECK(facilitator_wins(gen_clique_spider(3).graph, 0, 1, 1));
    CHECK_FALSE(facilitator_wins(gen_clique_spider(3).graph, 0, 1, 2));
}

TEST_CASE("divider number equals the brute-force minimum")
{
    for (const auto &g : corpus(5))
        for (Vertex s = 0; s < g.vertex_count(); s++)
            for (Vertex t = s + 1; t < g.vertex_count(); t++) {
                const auto expect = oracle::divider_number(g, s, t);
                const auto got = divider_number(g, s, t);
                if (!expect)
                    CHECK(got.is_infinite());
                else
                    CHECK(got == ExtCount::finite(*expect));
            }
}

TEST_CASE("budget exhaustion is reported, with a bracket for the divider number")
{
    const Graph g = gen_clique_spider(4).graph;
    SolveOptions tiny;
    tiny.budget = 10;
    CHECK_THROWS_AS(WinTable(g, 2, tiny), BudgetExceeded);
    try {
        divider_number(g, 0, 1, std::nullopt, tiny);
        FAIL("expected a bracket");
    } catch (const DividerNumberBracket &b) {
        CHECK(b.lower() >= 1);
        CHECK(b.upper() == ExtCount::finite(4));
        CHECK(b.code() == ErrorCode::budget_exceeded);
    }
    try {
        divider_number(g, 0, 1, 1);
        FAIL("expected a bracket");
    } catch (const DividerNumberBracket &b) {
        CHECK(b.lower() == 2);
        CHECK(b.upper() == ExtCount::finite(4));
    }
}

TEST_CASE("extracted strategies verify and tampering is caught")
{
    int checked = 0;
    for (const auto &g : corpus(5))
        for (Vertex s = 0; s < g.vertex_count(); s++)
            for (Vertex t = s + 1; t < g.vertex_count(); t++)
                for (int k = 1; k <= 2; k++)
                    for (int tau = 1; tau <= 3; tau++) {
                        if (facilitator_wins_in(g, s, t, k, tau)) {
                            CHECK_THROWS_AS(extract_divider_strategy(g, s, t, k, tau), Error);
                            continue;
                        }
                        const auto tree = extract_divider_strategy(g, s, t, k, tau);
                        const auto r = verify_strategy_tree(g, s, t, k, tau, tree);
                        CHECK_MESSAGE(r.valid, r.reason);
                        CHECK(verify_strategy_json(g, s, t, k, tau, strategy_to_json(tree)).valid);
                        checked++;
                        if (!tree.children.empty()) {
                            auto cut = tree;
                            cut.children.pop_back();
                            CHECK_FALSE(verify_strategy_tree(g, s, t, k, tau, cut).valid);
                            auto dup = tree;
                            dup.children.push_back(dup.children.front());
                            CHECK_FALSE(verify_strategy_tree(g, s, t, k, tau, dup).valid);
                        }
                        auto wrong_root = tree;
                        wrong_root.d.agents.front() = s;
                        CHECK_FALSE(verify_strategy_tree(g, s, t, k, tau, wrong_root).valid);
                    }
    CHECK(checked > 100);
}

TEST_CASE("verification reports specific reasons")
{
    const Graph g = gen_clique_spider(2).graph;
    const auto tree = extract_divider_strategy(g, 0, 1, 2, 2);
    CHECK(tree.d.agents == std::vector<Vertex>{2, 2});
    auto deep = tree;
    deep.children.front().children.front().children.push_back(deep.children.front());
    auto r = verify_strategy_tree(g, 0, 1, 2, 2, deep);
    CHECK_FALSE(r.valid);
    CHECK(r.reason.find("deeper than tau") != std::string::npos);
    CHECK_FALSE(verify_strategy_json(g, 0, 1, 2, 2, nlohmann::json{{"f", 1}}).valid);
    auto jump = tree;
    jump.children.front().d = DivPlacement({6, 7});
    r = verify_strategy_tree(g, 0, 1, 2, 2, jump);
    CHECK_FALSE(r.valid);
}

TEST_CASE("clique spider opening keeps both agents in the clique")
{
    const Graph g = gen_clique_spider(2).graph;
    const WinTable table(g, 2);
    const auto best = best_placements(table, 0, 1);
    REQUIRE_FALSE(best.empty());
    CHECK_FALSE(best.front().level.has_value());
    for (Vertex v : std::get<DivPlacement>(best.front().move).agents) CHECK((v == 2 || v == 3));
}

TEST_CASE("hint ordering is best-first")
{
    const Graph g = gen_clique_spider(3).graph;
    const WinTable table(g, 1);
    const auto opening = best_placements(table, 0, 1);
    REQUIRE_FALSE(opening.empty());
    for (std::size_t i = 1; i < opening.size(); i++) {
        const auto key = [](const AnnotatedMove &m) { return m.level ? *m.level : 1 << 30; };
        CHECK(key(opening[i - 1]) >= key(opening[i]));
    }
    const Position pos{FacPlacement(0, 1), std::get<DivPlacement>(opening.front().move), Side::facilitator};
    const auto moves = best_moves(table, pos);
    REQUIRE_FALSE(moves.empty());
    const auto lv = table.level(pos.f, pos.d);
    REQUIRE(lv.has_value());
    REQUIRE(moves.front().level.has_value());
    CHECK(*moves.front().level == *lv - 1);
    const auto again = best_moves(table, pos);
    CHECK(again.size() == moves.size());
}

TEST_CASE("table export lists every compatible position")
{
    const Graph p3(3, {{0, 1}, {1, 2}});
    const WinTable table(p3, 1);
    std::ostringstream out;
    table.export_csv(out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "f1,f2,d1,level");
    int rows = 0;
    bool saw_not_winning = false;
    while (std::getline(in, line)) {
        rows++;
        saw_not_winning = saw_not_winning || line == "0,2,1,NotWinning";
    }
    CHECK(saw_not_winning);
    CHECK(rows > 0);
}

TEST_CASE("table cache shares tables")
{
    WinTableCache cache;
    const Graph g = gen_clique_spider(2).graph;
    auto a = cache.get(g, 1, {});
    auto b = cache.get(g, 1, {});
    CHECK(a.get() == b.get());
    CHECK(cache.get(g, 2, {}).get() != a.get());
}

TEST_CASE("estimates are exact position counts")
{
    for (const auto &g : corpus(5))
        for (int k = 1; k <= 2; k++) {
            const WinTable table(g, k);
            std::uint64_t compatible_positions = 0;
            for (Vertex a = 0; a < g.vertex_count(); a++)
                for (Vertex b = a; b < g.vertex_count(); b++)
                    compatible_positions += oracle::placements(g, k, {a, b}).size();
            CHECK(table.position_count() == compatible_positions);
            CHECK(position_count_estimate(g.vertex_count(), k) == compatible_positions);
        }
}

TEST_CASE("parallel sweeps build the same table")
{
    /* 105 pairs times C(17,4) agent multisets is past the threshold for parallel sweeps */
    const Graph g = gen_clique_spider(4).graph;
    SolveOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const WinTable a = winning_sets(g, 4, one), b = winning_sets(g, 4, many);
    CHECK(a.ell_star() == b.ell_star());
    std::ostringstream ca, cb;
    a.export_csv(ca);
    b.export_csv(cb);
    CHECK(ca.str() == cb.str());
}
