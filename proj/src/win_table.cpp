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
#include <atomic>
#include <ostream>
#include <thread>

#include "rendezvous/game.hpp"
#include "moves_internal.hpp"

namespace rdv {

namespace {

constexpr std::int16_t kNotWinning = -1;
constexpr std::int16_t kIncompatible = -2;

template <class Fn> void parallel_for(std::size_t count, int threads, Fn fn)
{
    if (threads <= 1 || count < 64) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + threads - 1) / threads;
    for (int i = 0; i < threads; i++) {
        std::size_t lo = i * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(fn, lo, hi);
    }
    for (auto &th : pool) th.join();
}

} // namespace

std::uint64_t position_count_estimate(int n, int k)
{
    if (n < 1 || k < 0) return 0;
    auto sat_mul = [](std::uint64_t x, std::uint64_t y) -> std::uint64_t {
        unsigned __int128 r = static_cast<unsigned __int128>(x) * y;
        return r > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(r);
    };
    std::uint64_t a = sat_mul(n, binomial(n + k - 2 < 0 ? 0 : n + k - 2, k));
    std::uint64_t b = n + k - 3 < 0 ? 0 : sat_mul(binomial(n, 2), binomial(n + k - 3, k));
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

struct WinTable::Impl {
    Graph g;
    int n = 0;
    int k = 0;
    int ell_star = 0;
    std::uint64_t positions = 0;
    std::vector<int> pair_index; // n*n
    std::vector<Vertex> pair_a, pair_b;
    std::uint32_t num_d = 0;
    std::vector<Vertex> dverts; // num_d * k
    std::vector<unsigned char> occ; // num_d * n
    std::vector<std::uint64_t> adj_off;
    std::vector<std::uint32_t> adj;
    std::vector<std::int16_t> level; // pair * num_d + d

    detail::MultisetRanker ranker{1, 1};

    bool occupied(std::uint32_t d, Vertex v) const { return occ[static_cast<std::size_t>(d) * n + v] != 0; }
    std::size_t slot(int pair, std::uint32_t d) const { return static_cast<std::size_t>(pair) * num_d + d; }

    std::uint32_t rank_of(const std::vector<Vertex> &agents) const
    {
        return static_cast<std::uint32_t>(ranker.rank(agents.begin()));
    }

    void build(const SolveOptions &opts);
};

void WinTable::Impl::build(const SolveOptions &opts)
{
    n = g.vertex_count();
    const std::uint64_t estimate = position_count_estimate(n, k);
    if (estimate > opts.budget) throw BudgetExceeded("winning-sets", estimate, opts.budget);
    positions = estimate;

    ranker = detail::MultisetRanker(n, k);
    const std::uint64_t count = ranker.count();
    if (count > UINT32_MAX) throw BudgetExceeded("winning-sets", count, UINT32_MAX);
    num_d = static_cast<std::uint32_t>(count);

    pair_index.assign(static_cast<std::size_t>(n) * n, -1);
    for (Vertex a = 0; a < n; a++) {
        for (Vertex b = a; b < n; b++) {
            pair_index[a * n + b] = pair_index[b * n + a] = static_cast<int>(pair_a.size());
            pair_a.push_back(a);
            pair_b.push_back(b);
        }
    }
    const int num_pairs = static_cast<int>(pair_a.size());

    /* enumerate multisets; store them at their rank */
    dverts.assign(static_cast<std::size_t>(num_d) * k, 0);
    occ.assign(static_cast<std::size_t>(num_d) * n, 0);
    {
        std::vector<Vertex> cur(k, 0);
        for (;;) {
            std::uint32_t r = rank_of(cur);
            std::copy(cur.begin(), cur.end(), dverts.begin() + static_cast<std::size_t>(r) * k);
            for (Vertex v : cur) occ[static_cast<std::size_t>(r) * n + v] = 1;
            int i = k - 1;
            while (i >= 0 && cur[i] == n - 1) i--;
            if (i < 0) break;
            cur[i]++;
            for (int j = i + 1; j < k; j++) cur[j] = cur[i];
        }
    }

    adj_off.assign(num_d + 1, 0);
    for (std::uint32_t d = 0; d < num_d; d++) {
        std::vector<Vertex> agents(dverts.begin() + static_cast<std::size_t>(d) * k,
                                   dverts.begin() + static_cast<std::size_t>(d + 1) * k);
        for (const auto &m : detail::adjacent_multisets(g, agents)) adj.push_back(rank_of(m));
        std::sort(adj.begin() + adj_off[d], adj.end());
        adj_off[d + 1] = adj.size();
    }

    level.assign(static_cast<std::size_t>(num_pairs) * num_d, kIncompatible);
    /* resolved[p,d]: Divider to move at (pair p, d) cannot avoid a level <= current-1 position */
    std::vector<unsigned char> resolved(level.size(), 0);
    std::vector<std::uint32_t> watch(level.size(), 0); // offset into adj(d)
    for (int p = 0; p < num_pairs; p++) {
        for (std::uint32_t d = 0; d < num_d; d++) {
            if (occupied(d, pair_a[p]) || occupied(d, pair_b[p])) continue;
            std::size_t s = slot(p, d);
            if (pair_a[p] == pair_b[p]) {
                level[s] = 0;
                resolved[s] = 1;
            } else {
                level[s] = kNotWinning;
            }
        }
    }

    int threads = opts.threads > 0 ? opts.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (level.size() < 200000) threads = 1;

    for (int ell = 1;; ell++) {
        if (ell > INT16_MAX) throw Error(ErrorCode::size_limit, "level overflow");
        /* phase A: Divider-to-move nodes all of whose replies are already won */
        parallel_for(num_pairs, threads, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; p++) {
                const Vertex a = pair_a[p], b = pair_b[p];
                if (a == b) continue;
                for (std::uint32_t d = 0; d < num_d; d++) {
                    std::size_t s = slot(static_cast<int>(p), d);
                    if (level[s] == kIncompatible || resolved[s]) continue;
                    std::uint64_t i = adj_off[d] + watch[s], end = adj_off[d + 1];
                    for (; i < end; i++) {
                        std::uint32_t r = adj[i];
                        if (occupied(r, a) || occupied(r, b)) continue;
                        if (level[slot(static_cast<int>(p), r)] < 0) break;
                    }
                    watch[s] = static_cast<std::uint32_t>(i - adj_off[d]);
                    if (i == end) resolved[s] = 1;
                }
            }
        });
        /* phase B: Facilitator nodes with a move into a resolved node */
        std::atomic<bool> changed{false};
        parallel_for(num_pairs, threads, [&](std::size_t lo, std::size_t hi) {
            bool local = false;
            for (std::size_t p = lo; p < hi; p++) {
                const Vertex a = pair_a[p], b = pair_b[p];
                if (a == b) continue;
                for (std::uint32_t d = 0; d < num_d; d++) {
                    std::size_t s = slot(static_cast<int>(p), d);
                    if (level[s] != kNotWinning) continue;
                    bool win = false;
                    for (Vertex a2 : g.closed_neighbors(a)) {
                        if (occupied(d, a2)) continue;
                        for (Vertex b2 : g.closed_neighbors(b)) {
                            if (occupied(d, b2)) continue;
                            if (resolved[slot(pair_index[a2 * n + b2], d)]) {
                                win = true;
                                break;
                            }
                        }
                        if (win) break;
                    }
                    if (win) {
                        level[s] = static_cast<std::int16_t>(ell);
                        local = true;
                    }
                }
            }
            if (local) changed = true;
        });
        if (!changed) {
            ell_star = ell;
            break;
        }
    }
}

WinTable::WinTable(const Graph &g, int k, const SolveOptions &opts)
{
    if (k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
    if (g.vertex_count() < 1) throw Error(ErrorCode::invalid_graph, "empty graph");
    auto impl = std::make_shared<Impl>();
    impl->g = g;
    impl->k = k;
    impl->build(opts);
    impl_ = std::move(impl);
}

const Graph &WinTable::graph() const { return impl_->g; }
int WinTable::agent_count() const { return impl_->k; }
int WinTable::ell_star() const { return impl_->ell_star; }
std::uint64_t WinTable::position_count() const { return impl_->positions; }

std::optional<int> WinTable::level(const FacPlacement &f, const DivPlacement &d) const
{
    const Impl &m = *impl_;
    if (d.size() != m.k) throw Error(ErrorCode::contract, "Divider placement has wrong size");
    if (!m.g.contains(f.a) || !m.g.contains(f.b)) throw Error(ErrorCode::contract, "vertex out of range");
    for (Vertex v : d.agents)
        if (!m.g.contains(v)) throw Error(ErrorCode::contract, "vertex out of range");
    std::int16_t lv = m.level[m.slot(m.pair_index[f.a * m.n + f.b], m.rank_of(d.agents))];
    if (lv == kIncompatible) throw Error(ErrorCode::contract, "incompatible position");
    if (lv == kNotWinning) return std::nullopt;
    return lv;
}

bool WinTable::facilitator_wins_in(Vertex s, Vertex t, int tau) const
{
    const Impl &m = *impl_;
    if (!m.g.contains(s) || !m.g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (s == t) return true;
    const int p = m.pair_index[s * m.n + t];
    for (std::uint32_t d = 0; d < m.num_d; d++) {
        if (m.occupied(d, s) || m.occupied(d, t)) continue;
        std::int16_t lv = m.level[m.slot(p, d)];
        if (lv < 0 || lv > tau) return false;
    }
    return true;
}

bool WinTable::facilitator_wins(Vertex s, Vertex t) const { return facilitator_wins_in(s, t, INT16_MAX); }

void WinTable::export_csv(std::ostream &out) const
{
    const Impl &m = *impl_;
    out << "f1,f2";
    for (int i = 1; i <= m.k; i++) out << ",d" << i;
    out << ",level\n";
    for (std::size_t p = 0; p < m.pair_a.size(); p++) {
        for (std::uint32_t d = 0; d < m.num_d; d++) {
            std::int16_t lv = m.level[m.slot(static_cast<int>(p), d)];
            if (lv == kIncompatible) continue;
            out << m.pair_a[p] << ',' << m.pair_b[p];
            for (int i = 0; i < m.k; i++) out << ',' << m.dverts[static_cast<std::size_t>(d) * m.k + i];
            out << ',';
            if (lv == kNotWinning)
                out << "NotWinning";
            else
                out << lv;
            out << '\n';
        }
    }
}

WinTable winning_sets(const Graph &g, int k, const SolveOptions &opts) { return WinTable(g, k, opts); }

std::shared_ptr<const WinTable> WinTableCache::get(const Graph &g, int k, const SolveOptions &opts)
{
    std::string key = std::to_string(g.vertex_count()) + ":";
    for (auto [u, v] : g.edges()) key += std::to_string(u) + "-" + std::to_string(v) + ",";
    {
        std::lock_guard lock(mu_);
        auto it = tables_.find({key, k});
        if (it != tables_.end()) return it->second;
    }
    auto table = std::make_shared<const WinTable>(g, k, opts);
    std::lock_guard lock(mu_);
    auto [it, inserted] = tables_.emplace(std::make_pair(key, k), table);
    return it->second;
}

void WinTableCache::clear()
{
    std::lock_guard lock(mu_);
    tables_.clear();
}

} // namespace rdv
