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

#include "bounded_internal.hpp"

namespace rdv {

namespace detail {

BoundedSearch::BoundedSearch(const Graph &g, int k, int max_remaining, std::uint64_t budget)
    : g_(g), k_(k), max_remaining_(max_remaining), budget_(budget), ranker_(g.vertex_count(), k)
{
    num_d_ = ranker_.count();
    const unsigned __int128 n = g.vertex_count();
    unsigned __int128 keys = n * n * num_d_ * static_cast<unsigned __int128>(max_remaining + 1);
    if (num_d_ == UINT64_MAX || keys > UINT64_MAX)
        throw BudgetExceeded("bounded-search", UINT64_MAX, budget);
}

bool BoundedSearch::one_step(const FacPlacement &f, const DivPlacement &d) const
{
    if (f.meets()) return true;
    for (Vertex x : g_.closed_neighbors(f.a))
        if ((x == f.b || g_.adjacent(x, f.b)) && !d.contains(x)) return true;
    return false;
}

bool BoundedSearch::wins(const FacPlacement &f, const DivPlacement &d, int remaining)
{
    if (f.meets()) return true;
    if (remaining <= 0) return false;
    if (one_step(f, d)) return true;
    if (remaining == 1) return false;

    const std::uint64_t n = g_.vertex_count();
    const std::uint64_t key =
        ((static_cast<std::uint64_t>(f.a) * n + f.b) * num_d_ + ranker_.rank(d.agents.begin())) *
            (max_remaining_ + 1) +
        remaining;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= budget_) throw BudgetExceeded("bounded-search", memo_.size() + 1, budget_);

    bool result = false;
    for (const auto &f2 : fac_moves(g_, f, d)) {
        bool all = true;
        for (const auto &d2 : div_moves(g_, d, f2)) {
            if (!wins(f2, d2, remaining - 1)) {
                all = false;
                break;
            }
        }
        if (all) {
            result = true;
            break;
        }
    }
    memo_.emplace(key, result);
    return result;
}

} // namespace detail

namespace {

void check_endpoints(const Graph &g, Vertex s, Vertex t, int k)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
    if (!g.is_connected()) throw Error(ErrorCode::disconnected, "graph is not connected");
}

std::shared_ptr<const WinTable> table_for(const Graph &g, int k, const SolveOptions &opts)
{
    if (opts.cache) return opts.cache->get(g, k, opts);
    return std::make_shared<const WinTable>(g, k, opts);
}

} // namespace

bool facilitator_wins(const Graph &g, Vertex s, Vertex t, int k, const SolveOptions &opts)
{
    check_endpoints(g, s, t, k);
    if (s == t || g.adjacent(s, t)) return true;
    return table_for(g, k, opts)->facilitator_wins(s, t);
}

bool facilitator_wins_in(const Graph &g, Vertex s, Vertex t, int k, int tau, const SolveOptions &opts)
{
    check_endpoints(g, s, t, k);
    if (tau < 1) throw Error(ErrorCode::invalid_argument, "tau must be at least 1");
    if (s == t || g.adjacent(s, t)) return true;
    if (opts.full_table) return table_for(g, k, opts)->facilitator_wins_in(s, t, tau);

    const FacPlacement start(s, t);
    const std::uint64_t openings = binomial(g.vertex_count() - 2 + k - 1, k);
    if (openings > opts.budget) throw BudgetExceeded("bounded-search", openings, opts.budget);
    detail::BoundedSearch search(g, k, tau, opts.budget);
    for (const auto &d0 : initial_placements(g, k, start))
        if (!search.wins(start, d0, tau)) return false;
    return true;
}

bool one_step_win(const Graph &g, Vertex s, Vertex t, int k)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (s == t || g.adjacent(s, t)) return true;
    int common = 0;
    for (Vertex x : g.neighbors(s))
        if (g.adjacent(x, t)) common++;
    return common > k;
}

DividerNumberBracket::DividerNumberBracket(const BudgetExceeded &cause, int lower, ExtCount upper)
    : BudgetExceeded(cause.stage(), cause.estimate(), cause.budget()), lower_(lower), upper_(upper)
{
}

ExtCount divider_number(const Graph &g, Vertex s, Vertex t, std::optional<int> max_k, const SolveOptions &opts)
{
    check_endpoints(g, s, t, 1);
    if (s == t || g.adjacent(s, t)) return ExtCount::infinity();
    const int lam = static_cast<int>(lambda(g, s, t).value.value());
    if (lam < 1) throw Error(ErrorCode::disconnected, "s and t are not connected");
    const int limit = max_k ? std::min(*max_k, lam) : lam;
    for (int k = 1; k <= limit; k++) {
        bool fac;
        try {
            fac = facilitator_wins(g, s, t, k, opts);
        } catch (const BudgetExceeded &e) {
            throw DividerNumberBracket(e, k, ExtCount::finite(lam));
        }
        if (!fac) return ExtCount::finite(k);
    }
    if (limit < lam)
        throw DividerNumberBracket(BudgetExceeded("divider-number-max-k", lam, limit), limit + 1,
                                   ExtCount::finite(lam));
    throw Error(ErrorCode::contract, "Facilitator wins against a separator-sized Divider; solver inconsistency");
}

} // namespace rdv
