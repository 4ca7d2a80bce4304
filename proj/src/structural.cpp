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

#include "rendezvous/structural.hpp"

#include <cassert>

#include "rendezvous/nd.hpp"

namespace rdv {

namespace {

std::optional<DividerNumberReport> same_module_rule(const Graph &g, Vertex s, Vertex t)
{
    const auto nd = neighborhood_decomposition(g);
    if (nd.id[s] != nd.id[t] || nd.kind[nd.id[s]] != ModuleKind::independent) return std::nullopt;
    int common = 0;
    for (Vertex x : g.neighbors(s))
        if (g.adjacent(x, t)) common++;
    return DividerNumberReport{ExtCount::finite(common), kReasonSameModule};
}

} // namespace

std::optional<DividerNumberReport> fast_divider_number(const Graph &g, Vertex s, Vertex t)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (!g.is_connected()) throw Error(ErrorCode::disconnected, "graph is not connected");
    if (s == t || g.adjacent(s, t)) return DividerNumberReport{ExtCount::infinity(), kReasonAdjacent};
    const ExtCount lam = lambda(g, s, t).value;
    std::optional<DividerNumberReport> found;
    if (lam == ExtCount::finite(1))
        found = DividerNumberReport{lam, kReasonLambdaOne};
    else if (is_chordal(g).chordal)
        found = DividerNumberReport{lam, kReasonChordal};
    else if (is_p5_free(g))
        found = DividerNumberReport{lam, kReasonP5Free};
    auto module = same_module_rule(g, s, t);
#ifndef NDEBUG
    if (found && module) assert(found->value == module->value);
#endif
    return found ? found : module;
}

DividerNumberReport divider_number_auto(const Graph &g, Vertex s, Vertex t, std::optional<int> max_k,
                                        const SolveOptions &opts)
{
    if (auto fast = fast_divider_number(g, s, t)) return *fast;
    return {divider_number(g, s, t, max_k, opts), kReasonGeneric};
}

} // namespace rdv
