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

#include "rendezvous/nd.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace rdv {

using json = nlohmann::json;

namespace {

constexpr int kMaxModules = 62;

bool twins(const Graph &g, Vertex u, Vertex v)
{
    /* N(u)\{v} == N(v)\{u} */
    auto nu = g.neighbors(u), nv = g.neighbors(v);
    std::size_t i = 0, j = 0;
    for (;;) {
        while (i < nu.size() && nu[i] == v) i++;
        while (j < nv.size() && nv[j] == u) j++;
        if (i == nu.size() || j == nv.size()) return i == nu.size() && j == nv.size();
        if (nu[i] != nv[j]) return false;
        i++;
        j++;
    }
}

std::uint64_t closed_mask(const Graph &quotient, int m)
{
    std::uint64_t mask = std::uint64_t{1} << m;
    for (Vertex w : quotient.neighbors(m)) mask |= std::uint64_t{1} << w;
    return mask;
}

} // namespace

NdDecomposition neighborhood_decomposition(const Graph &g)
{
    NdDecomposition nd;
    const int n = g.vertex_count();
    nd.id.assign(n, -1);
    for (Vertex v = 0; v < n; v++) {
        for (int m = 0; m < nd.module_count(); m++) {
            if (twins(g, nd.modules[m].front(), v)) {
                nd.id[v] = m;
                nd.modules[m].push_back(v);
                break;
            }
        }
        if (nd.id[v] < 0) {
            nd.id[v] = nd.module_count();
            nd.modules.push_back({v});
        }
    }
    for (const auto &mod : nd.modules) {
        bool clique = mod.size() == 1 || g.adjacent(mod[0], mod[1]);
        for (std::size_t i = 0; i < mod.size(); i++)
            for (std::size_t j = i + 1; j < mod.size(); j++)
                if (g.adjacent(mod[i], mod[j]) != clique)
                    throw Error(ErrorCode::contract, "twin class is neither a clique nor independent");
        nd.kind.push_back(clique ? ModuleKind::clique : ModuleKind::independent);
    }
    std::vector<Edge> qedges;
    for (int a = 0; a < nd.module_count(); a++)
        for (int b = a + 1; b < nd.module_count(); b++)
            if (g.adjacent(nd.modules[a][0], nd.modules[b][0])) qedges.emplace_back(a, b);
    nd.quotient = Graph(nd.module_count(), std::move(qedges));
    return nd;
}

MoveTree build_move_tree(const NdDecomposition &nd, Vertex s, Vertex t, int tau, std::uint64_t budget)
{
    if (tau < 1) throw Error(ErrorCode::invalid_argument, "tau must be at least 1");
    if (nd.id[s] == nd.id[t]) throw Error(ErrorCode::contract, "s and t lie in the same module");
    if (nd.module_count() > kMaxModules) throw BudgetExceeded("move-tree", nd.module_count(), kMaxModules);
    const Graph &q = nd.quotient;
    MoveTree tree;
    tree.tau = tau;
    tree.nodes.push_back({std::min(nd.id[s], nd.id[t]), std::max(nd.id[s], nd.id[t]), 0, -1, {}});
    for (std::size_t i = 0; i < tree.nodes.size(); i++) {
        const MoveTreeNode node = tree.nodes[i];
        if (node.depth == tau || node.p == node.q) continue;
        std::vector<std::pair<int, int>> labels;
        for (Vertex a : q.closed_neighbors(node.p))
            for (Vertex b : q.closed_neighbors(node.q)) labels.emplace_back(std::min(a, b), std::max(a, b));
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        for (auto [a, b] : labels) {
            if (tree.nodes.size() >= budget) throw BudgetExceeded("move-tree", tree.nodes.size() + 1, budget);
            tree.nodes[i].children.push_back(static_cast<int>(tree.nodes.size()));
            tree.nodes.push_back({a, b, node.depth + 1, static_cast<int>(i), {}});
        }
    }
    return tree;
}

/* ---- candidates ---- */

CandidateEnumerator::CandidateEnumerator(const MoveTree &tree, const NdDecomposition &nd, int k,
                                         std::uint64_t budget, int part_index, int part_count)
    : tree_(tree), nd_(nd), k_(k), budget_(budget), part_index_(part_index), part_count_(part_count)
{
    const int l = nd.module_count();
    if (l > kMaxModules) throw BudgetExceeded("candidates", l, kMaxModules);
    option_cache_.resize(static_cast<std::size_t>(l) * l);
    option_ready_.assign(static_cast<std::size_t>(l) * l, 0);
    if (part_count < 1 || part_index < 0 || part_index >= part_count)
        throw Error(ErrorCode::invalid_argument, "bad partition");
}

const std::vector<std::uint64_t> &CandidateEnumerator::options(int p, int q)
{
    const int l = nd_.module_count();
    const std::size_t key = static_cast<std::size_t>(p) * l + q;
    if (option_ready_[key]) return option_cache_[key];
    option_ready_[key] = 1;
    auto &out = option_cache_[key];
    const std::uint64_t np = closed_mask(nd_.quotient, p), nq = closed_mask(nd_.quotient, q);
    const std::uint64_t x = (std::uint64_t{1} << p) | (std::uint64_t{1} << q);
    /* blocked modules must cover every common closed neighbour, so no child is a meeting pair */
    const std::uint64_t forced = np & nq;
    if (forced & x) return out;
    /* blocking a module outside both neighbourhoods never removes a child, only adds constraints */
    const std::uint64_t free = (np | nq) & ~x & ~forced;
    auto weight = [&](std::uint64_t mask) {
        long total = 0;
        for (int i = 0; i < l; i++)
            if (mask >> i & 1) total += nd_.size(i);
        return total;
    };
    if (weight(forced) > k_) return out;
    std::vector<int> bits;
    for (int i = 0; i < l; i++)
        if (free >> i & 1) bits.push_back(i);
    if (bits.size() > 24) throw BudgetExceeded("candidates", std::uint64_t{1} << bits.size(), 1 << 24);
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << bits.size()); sub++) {
        std::uint64_t mask = forced;
        for (std::size_t b = 0; b < bits.size(); b++)
            if (sub >> b & 1) mask |= std::uint64_t{1} << bits[b];
        if (weight(mask) <= k_) out.push_back(mask);
    }
    return out;
}

void CandidateEnumerator::expand(std::size_t i)
{
    CandidateNode &node = nodes_[i];
    node.children.clear();
    node.blocked = 0;
    if (node.depth == tree_.tau) return;
    const std::uint64_t blocked = options(node.p, node.q)[choice_[i]];
    node.blocked = blocked;
    const std::uint64_t a = closed_mask(nd_.quotient, node.p) & ~blocked;
    const std::uint64_t b = closed_mask(nd_.quotient, node.q) & ~blocked;
    const int tree_node = node.tree_node;
    const int depth = node.depth;
    for (int c : tree_.nodes[tree_node].children) {
        const auto &tc = tree_.nodes[c];
        bool keep = ((a >> tc.p & 1) && (b >> tc.q & 1)) || ((a >> tc.q & 1) && (b >> tc.p & 1));
        if (!keep) continue;
        nodes_[i].children.push_back(static_cast<int>(nodes_.size()));
        nodes_.push_back({c, tc.p, tc.q, depth + 1, static_cast<int>(i), 0, {}});
        choice_.push_back(-1);
    }
}

bool CandidateEnumerator::fill(std::size_t from, bool back)
{
    for (;;) {
        if (back) {
            std::ptrdiff_t j = static_cast<std::ptrdiff_t>(from) - 1;
            while (j >= 0 && (nodes_[j].depth == tree_.tau ||
                              choice_[j] + 1 >= static_cast<int>(options(nodes_[j].p, nodes_[j].q).size())))
                j--;
            if (j < 0) return false;
            choice_[j]++;
            std::size_t cut = j + 1;
            while (cut < nodes_.size() && nodes_[cut].parent < j) cut++;
            nodes_.resize(cut);
            choice_.resize(cut);
            expand(j);
            from = j + 1;
            back = false;
        }
        std::size_t i = from;
        for (; i < nodes_.size(); i++) {
            if (nodes_[i].depth == tree_.tau) {
                choice_[i] = -1;
                nodes_[i].blocked = 0;
                nodes_[i].children.clear();
                continue;
            }
            if (options(nodes_[i].p, nodes_[i].q).empty()) break;
            choice_[i] = 0;
            expand(i);
        }
        if (i == nodes_.size()) return true;
        from = i;
        back = true;
    }
}

bool CandidateEnumerator::advance() { return fill(nodes_.size(), true); }

bool CandidateEnumerator::next(CandidateStrategy &out)
{
    while (!done_) {
        bool ok;
        if (!started_) {
            started_ = true;
            const auto &root = tree_.nodes[0];
            nodes_.push_back({0, root.p, root.q, 0, -1, 0, {}});
            choice_.push_back(-1);
            ok = fill(0, false);
        } else {
            ok = advance();
        }
        if (!ok) {
            done_ = true;
            break;
        }
        std::uint64_t ord = ordinal_++;
        if (ordinal_ > budget_) throw BudgetExceeded("candidates", ordinal_, budget_);
        if (static_cast<int>(ord % part_count_) == part_index_) {
            out.nodes = nodes_;
            return true;
        }
    }
    return false;
}

std::vector<CandidateStrategy> enumerate_candidates(const MoveTree &tree, const NdDecomposition &nd, int k,
                                                    std::uint64_t budget)
{
    CandidateEnumerator e(tree, nd, k, budget);
    std::vector<CandidateStrategy> out;
    CandidateStrategy c;
    while (e.next(c)) out.push_back(c);
    return out;
}

bool projection_consistent(const CandidateStrategy &cand, const MoveTree &tree, const NdDecomposition &nd)
{
    if (cand.nodes.empty() || cand.nodes[0].tree_node != 0) return false;
    for (std::size_t i = 0; i < cand.nodes.size(); i++) {
        const auto &v = cand.nodes[i];
        const auto &tv = tree.nodes[v.tree_node];
        if (v.p != tv.p || v.q != tv.q || v.depth != tv.depth) return false;
        if (v.p == v.q) return false;
        if (v.blocked & ((std::uint64_t{1} << v.p) | (std::uint64_t{1} << v.q))) return false;
        if (v.depth == tree.tau) {
            if (!v.children.empty() || v.blocked) return false;
            continue;
        }
        const std::uint64_t a = closed_mask(nd.quotient, v.p) & ~v.blocked;
        const std::uint64_t b = closed_mask(nd.quotient, v.q) & ~v.blocked;
        std::vector<int> want;
        for (int c : tv.children) {
            const auto &tc = tree.nodes[c];
            if (((a >> tc.p & 1) && (b >> tc.q & 1)) || ((a >> tc.q & 1) && (b >> tc.p & 1))) want.push_back(c);
        }
        std::vector<int> got;
        for (int c : v.children) {
            if (c <= static_cast<int>(i) || c >= static_cast<int>(cand.nodes.size())) return false;
            if (cand.nodes[c].parent != static_cast<int>(i)) return false;
            got.push_back(cand.nodes[c].tree_node);
        }
        std::sort(got.begin(), got.end());
        if (got != want) return false;
    }
    return true;
}

/* ---- integer program ---- */

IlpSystem build_ilp(const CandidateStrategy &cand, const NdDecomposition &nd, int k)
{
    const int l = nd.module_count();
    const Graph &q = nd.quotient;
    IlpSystem sys;
    const int nv = static_cast<int>(cand.nodes.size());
    auto tag = [](const char *base, int i, int v) {
        return std::string(base) + "[" + std::to_string(i) + "][" + std::to_string(v) + "]";
    };
    std::vector<int> x(static_cast<std::size_t>(nv) * l), y(static_cast<std::size_t>(nv) * l);
    for (int v = 0; v < nv; v++) {
        for (int i = 0; i < l; i++) {
            x[v * l + i] = sys.add_variable(tag("x", i, v), 0, k);
            y[v * l + i] = sys.add_variable(tag("y", i, v), 0, k);
        }
    }
    for (int v = 0; v < nv; v++) {
        const auto &node = cand.nodes[v];
        std::vector<LinearTerm> sum;
        for (int i = 0; i < l; i++) {
            sum.push_back({x[v * l + i], 1});
            sum.push_back({y[v * l + i], 1});
        }
        sys.add_constraint(std::move(sum), Relation::equal, k, "const-one");
        for (int i = 0; i < l; i++) {
            const bool in_x = i == node.p || i == node.q;
            if (!in_x)
                sys.add_constraint({{x[v * l + i], 1}}, Relation::less_equal, nd.size(i), "const-two");
            else
                sys.add_constraint({{x[v * l + i], 1}}, Relation::less_equal, nd.size(i) - 1, "const-three");
            if (in_x && nd.size(i) == 1) sys.add_constraint({{y[v * l + i], 1}}, Relation::equal, 0, "const-four");
            if (node.blocked >> i & 1)
                sys.add_constraint({{x[v * l + i], 1}}, Relation::equal, nd.size(i), "const-five");
        }
    }
    for (int u = 1; u < nv; u++) {
        const int v = cand.nodes[u].parent;
        const std::string e = std::to_string(v) + "," + std::to_string(u);
        /* flow variables per ordered adjacent module pair */
        std::vector<std::vector<int>> va(l, std::vector<int>(l, -1)), vb = va, vc = va, vd = va;
        for (int i = 0; i < l; i++) {
            for (Vertex j : q.neighbors(i)) {
                const std::string ij = std::to_string(i) + "," + std::to_string(j) + "][" + e + "]";
                va[i][j] = sys.add_variable("a[" + ij, 0, k);
                vb[i][j] = sys.add_variable("b[" + ij, 0, k);
                vc[i][j] = sys.add_variable("c[" + ij, 0, k);
                vd[i][j] = sys.add_variable("d[" + ij, 0, k);
            }
        }
        std::vector<int> z(l);
        for (int i = 0; i < l; i++) z[i] = sys.add_variable("z[" + std::to_string(i) + "][" + e + "]", 0, k);
        for (int i = 0; i < l; i++) {
            if (nd.kind[i] == ModuleKind::independent)
                sys.add_constraint({{z[i], 1}}, Relation::equal, 0, "const-seven");
            std::vector<LinearTerm> out_blockers{{x[v * l + i], -1}};
            std::vector<LinearTerm> out_dwellers{{y[v * l + i], -1}, {z[i], 1}};
            std::vector<LinearTerm> bal_x{{x[u * l + i], 1}, {x[v * l + i], -1}, {z[i], -1}};
            std::vector<LinearTerm> bal_y{{y[u * l + i], 1}, {y[v * l + i], -1}, {z[i], 1}};
            for (Vertex j : q.neighbors(i)) {
                out_blockers.push_back({va[i][j], 1});
                out_blockers.push_back({vb[i][j], 1});
                out_dwellers.push_back({vc[i][j], 1});
                out_dwellers.push_back({vd[i][j], 1});
                bal_x.push_back({va[i][j], 1});
                bal_x.push_back({vb[i][j], 1});
                bal_x.push_back({va[j][i], -1});
                bal_x.push_back({vc[j][i], -1});
                bal_y.push_back({vc[i][j], 1});
                bal_y.push_back({vd[i][j], 1});
                bal_y.push_back({vb[j][i], -1});
                bal_y.push_back({vd[j][i], -1});
            }
            sys.add_constraint(std::move(out_blockers), Relation::less_equal, 0, "const-eight");
            sys.add_constraint(std::move(out_dwellers), Relation::less_equal, 0, "const-eight");
            sys.add_constraint(std::move(bal_x), Relation::equal, 0, "const-nine");
            sys.add_constraint(std::move(bal_y), Relation::equal, 0, "const-ten");
        }
    }
    return sys;
}

/* ---- decision ---- */

NdResult solve_nd(const Graph &g, Vertex s, Vertex t, int k, int tau, const NdOptions &opts)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (k < 1 || tau < 1) throw Error(ErrorCode::invalid_argument, "k and tau must be at least 1");
    if (!g.is_connected()) throw Error(ErrorCode::disconnected, "graph is not connected");
    NdResult r;
    if (s == t || g.adjacent(s, t)) {
        r.path = "adjacent-or-equal";
        return r;
    }
    const NdDecomposition nd = neighborhood_decomposition(g);
    if (nd.id[s] == nd.id[t]) {
        int common = 0;
        for (Vertex x : g.neighbors(s))
            if (g.adjacent(x, t)) common++;
        r.path = "same-independent-module";
        r.divider_wins = k >= common;
        return r;
    }
    r.path = "ilp";
    const MoveTree tree = build_move_tree(nd, s, t, tau, opts.tree_budget);
    IlpOptions iopts;
    iopts.node_budget = opts.ilp_node_budget;

    const int threads = std::max(1, opts.threads);
    std::atomic<bool> found{false};
    std::atomic<std::uint64_t> examined{0};
    std::mutex mu;
    std::exception_ptr failure;
    auto worker = [&](int index) {
        try {
            CandidateEnumerator e(tree, nd, k, opts.candidate_budget, index, threads);
            CandidateStrategy cand;
            while (!found && e.next(cand)) {
                examined++;
                if (ilp_feasible(build_ilp(cand, nd, k), iopts)) {
                    std::lock_guard lock(mu);
                    if (!found) {
                        found = true;
                        r.witness = cand;
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!failure) failure = std::current_exception();
            found = true;
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; i++) pool.emplace_back(worker, i);
        for (auto &th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    r.divider_wins = r.witness.has_value();
    r.candidates_examined = examined;
    return r;
}

bool divider_wins_in_time_nd(const Graph &g, Vertex s, Vertex t, int k, int tau, const NdOptions &opts)
{
    return solve_nd(g, s, t, k, tau, opts).divider_wins;
}

json candidate_to_json(const CandidateStrategy &cand)
{
    json nodes = json::array();
    for (const auto &v : cand.nodes) {
        json blocked = json::array();
        for (int i = 0; i < 64; i++)
            if (v.blocked >> i & 1) blocked.push_back(i);
        nodes.push_back({{"label", {v.p, v.q}},
                         {"depth", v.depth},
                         {"parent", v.parent},
                         {"blocked", blocked},
                         {"children", v.children}});
    }
    return json{{"nodes", nodes}};
}

json nd_diagnostics(const NdResult &r)
{
    return json{{"divider_wins", r.divider_wins},
                {"path", r.path},
                {"candidates_examined", r.candidates_examined},
                {"first_feasible", r.witness ? candidate_to_json(*r.witness) : json(nullptr)}};
}

json decomposition_to_json(const NdDecomposition &nd)
{
    json mods = json::array();
    for (int m = 0; m < nd.module_count(); m++)
        mods.push_back({{"vertices", nd.modules[m]},
                        {"kind", nd.kind[m] == ModuleKind::clique ? "clique" : "independent"}});
    json qedges = json::array();
    for (auto [a, b] : nd.quotient.edges()) qedges.push_back({a, b});
    return json{{"nd", nd.module_count()}, {"modules", mods}, {"quotient_edges", qedges}};
}

} // namespace rdv
