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

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rendezvous/graph.hpp"

namespace rdv {

/* Facilitator's two agents, stored sorted. */
struct FacPlacement {
    Vertex a = 0;
    Vertex b = 0;

    FacPlacement() = default;
    FacPlacement(Vertex x, Vertex y) : a(x < y ? x : y), b(x < y ? y : x) {}
    bool meets() const { return a == b; }

    friend auto operator<=>(const FacPlacement &, const FacPlacement &) = default;
};

/* Divider's k agents as a sorted multiset. */
struct DivPlacement {
    std::vector<Vertex> agents;

    DivPlacement() = default;
    explicit DivPlacement(std::vector<Vertex> v);
    bool contains(Vertex v) const;
    int size() const { return static_cast<int>(agents.size()); }

    friend auto operator<=>(const DivPlacement &, const DivPlacement &) = default;
};

enum class Side { facilitator, divider };

struct Position {
    FacPlacement f;
    DivPlacement d;
    Side turn = Side::facilitator;
};

bool compatible(const FacPlacement &f, const DivPlacement &d);

bool multiset_adjacent(const Graph &g, std::vector<Vertex> x, std::vector<Vertex> y);

/* Moves include staying put. Both require f compatible with d. */
std::vector<FacPlacement> fac_moves(const Graph &g, const FacPlacement &f, const DivPlacement &d);
std::vector<DivPlacement> div_moves(const Graph &g, const DivPlacement &d, const FacPlacement &f);

/* All k-multisets over V avoiding f, in canonical order. */
std::vector<DivPlacement> initial_placements(const Graph &g, int k, const FacPlacement &f);

class WinTableCache;

struct SolveOptions {
    std::uint64_t budget = 5'000'000;
    /* 0 means hardware concurrency */
    int threads = 0;
    /* bounded games: build the full table instead of depth-limited search */
    bool full_table = false;
    WinTableCache *cache = nullptr;
};

/* n*C(n+k-2,k) + C(n,2)*C(n+k-3,k), saturating */
std::uint64_t position_count_estimate(int n, int k);

class WinTable {
  public:
    WinTable(const Graph &g, int k, const SolveOptions &opts = {});

    const Graph &graph() const;
    int agent_count() const;
    int ell_star() const;
    /* number of compatible Facilitator-to-move positions */
    std::uint64_t position_count() const;

    /* nullopt means NotWinning; throws contract error on incompatible input */
    std::optional<int> level(const FacPlacement &f, const DivPlacement &d) const;
    bool facilitator_wins(Vertex s, Vertex t) const;
    bool facilitator_wins_in(Vertex s, Vertex t, int tau) const;

    /* CSV "f1,f2,d...,level", NotWinning spelled out */
    void export_csv(std::ostream &out) const;

    struct Impl;

  private:
    std::shared_ptr<const Impl> impl_;
};

WinTable winning_sets(const Graph &g, int k, const SolveOptions &opts = {});

/* Thread-safe memo of tables keyed by (graph, k). */
class WinTableCache {
  public:
    std::shared_ptr<const WinTable> get(const Graph &g, int k, const SolveOptions &opts);
    void clear();

  private:
    std::mutex mu_;
    std::map<std::pair<std::string, int>, std::shared_ptr<const WinTable>> tables_;
};

bool facilitator_wins(const Graph &g, Vertex s, Vertex t, int k, const SolveOptions &opts = {});
bool facilitator_wins_in(const Graph &g, Vertex s, Vertex t, int k, int tau, const SolveOptions &opts = {});
bool one_step_win(const Graph &g, Vertex s, Vertex t, int k);

/* Thrown when divider_number cannot finish; the answer lies in [lower, upper]. */
class DividerNumberBracket : public BudgetExceeded {
  public:
    DividerNumberBracket(const BudgetExceeded &cause, int lower, ExtCount upper);
    int lower() const { return lower_; }
    ExtCount upper() const { return upper_; }

  private:
    int lower_;
    ExtCount upper_;
};

ExtCount divider_number(const Graph &g, Vertex s, Vertex t, std::optional<int> max_k = std::nullopt,
                        const SolveOptions &opts = {});

struct StrategyNode {
    FacPlacement f;
    DivPlacement d;
    std::vector<StrategyNode> children;
};

StrategyNode extract_divider_strategy(const Graph &g, Vertex s, Vertex t, int k, int tau,
                                      const SolveOptions &opts = {});

struct VerifyResult {
    bool valid = false;
    std::string reason;
};

VerifyResult verify_strategy_tree(const Graph &g, Vertex s, Vertex t, int k, int tau, const StrategyNode &tree);
/* accepts arbitrary JSON; malformed structure is reported as invalid */
VerifyResult verify_strategy_json(const Graph &g, Vertex s, Vertex t, int k, int tau, const nlohmann::json &tree);

nlohmann::json strategy_to_json(const StrategyNode &tree);
StrategyNode strategy_from_json(const nlohmann::json &j);

struct AnnotatedMove {
    std::variant<FacPlacement, DivPlacement> move;
    /* worst-case resulting level for Facilitator moves, resulting level for Divider replies;
       nullopt is NotWinning */
    std::optional<int> level;
};

/*
 * Facilitator turn: every legal move, best first. Divider turn: every legal reply to pos.f, best first.
 * Empty when pos.f already meets.
 */
std::vector<AnnotatedMove> best_moves(const WinTable &table, const Position &pos);

/* Divider's opening choices against {s,t}, best first. */
std::vector<AnnotatedMove> best_placements(const WinTable &table, Vertex s, Vertex t);

} // namespace rdv
