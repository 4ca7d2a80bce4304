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

#include "rendezvous/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace rdv {

using json = nlohmann::ordered_json;

Graph::Graph(int n, std::vector<Edge> edges) : n_(n)
{
    if (n < 0) throw Error(ErrorCode::invalid_graph, "negative vertex count");
    adj_.assign(static_cast<std::size_t>(n) * n, 0);
    nbrs_.resize(n);
    closed_.resize(n);
    for (auto &[u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw Error(ErrorCode::invalid_graph,
                        "edge [" + std::to_string(u) + "," + std::to_string(v) + "] has vertex id out of range");
        if (u == v) throw Error(ErrorCode::invalid_graph, "self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        auto &cell = adj_[static_cast<std::size_t>(u) * n + v];
        if (cell)
            throw Error(ErrorCode::invalid_graph,
                        "duplicate edge [" + std::to_string(u) + "," + std::to_string(v) + "]");
        cell = 1;
        adj_[static_cast<std::size_t>(v) * n + u] = 1;
    }
    std::sort(edges.begin(), edges.end());
    edges_ = std::move(edges);
    for (auto [u, v] : edges_) {
        nbrs_[u].push_back(v);
        nbrs_[v].push_back(u);
    }
    for (int v = 0; v < n; v++) {
        std::sort(nbrs_[v].begin(), nbrs_[v].end());
        closed_[v] = nbrs_[v];
        closed_[v].insert(std::lower_bound(closed_[v].begin(), closed_[v].end(), v), v);
    }
}

bool Graph::is_connected() const
{
    if (n_ <= 1) return true;
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : nbrs_[u]) {
            if (!seen[w]) {
                seen[w] = 1;
                count++;
                stack.push_back(w);
            }
        }
    }
    return count == n_;
}

Graph Graph::induced(const std::vector<Vertex> &keep) const
{
    std::vector<int> pos(n_, -1);
    for (std::size_t i = 0; i < keep.size(); i++) pos[keep[i]] = static_cast<int>(i);
    std::vector<Edge> es;
    for (auto [u, v] : edges_)
        if (pos[u] >= 0 && pos[v] >= 0) es.emplace_back(pos[u], pos[v]);
    return Graph(static_cast<int>(keep.size()), std::move(es));
}

Graph Graph::permuted(const std::vector<Vertex> &perm) const
{
    std::vector<Edge> es;
    es.reserve(edges_.size());
    for (auto [u, v] : edges_) es.emplace_back(perm[u], perm[v]);
    return Graph(n_, std::move(es));
}

/* ---- JSON ---- */

namespace {

int get_int(const json &j, const char *key)
{
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::parse, std::string("missing field \"") + key + "\"");
    if (!it->is_number_integer()) throw Error(ErrorCode::parse, std::string("field \"") + key + "\" must be an integer");
    auto v = it->get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw Error(ErrorCode::parse, std::string("field \"") + key + "\" out of range");
    return static_cast<int>(v);
}

json parse_json_text(const std::string &text)
{
    try {
        return json::parse(text, nullptr, true, false);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::parse, std::string("malformed JSON: ") + e.what());
    }
}

} // namespace

Graph graph_from_json(const json &j, bool require_connected)
{
    if (!j.is_object()) throw Error(ErrorCode::parse, "document must be a JSON object");
    int n = get_int(j, "n");
    if (n < 1) throw Error(ErrorCode::invalid_graph, "n must be at least 1");
    auto it = j.find("edges");
    if (it == j.end() || !it->is_array()) throw Error(ErrorCode::parse, "field \"edges\" must be an array");
    std::vector<Edge> edges;
    for (const auto &e : *it) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw Error(ErrorCode::parse, "each edge must be a pair of integers");
        auto u = e[0].get<std::int64_t>(), v = e[1].get<std::int64_t>();
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw Error(ErrorCode::invalid_graph,
                        "edge [" + std::to_string(u) + "," + std::to_string(v) + "] has vertex id out of range");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    Graph g(n, std::move(edges));
    if (require_connected && !g.is_connected()) throw Error(ErrorCode::disconnected, "graph is not connected");
    return g;
}

Graph parse_graph(const std::string &text, bool require_connected)
{
    return graph_from_json(parse_json_text(text), require_connected);
}

Instance instance_from_json(const json &j)
{
    if (!j.is_object()) throw Error(ErrorCode::parse, "instance must be a JSON object");
    static const char *known[] = {"n", "edges", "s", "t", "k", "tau", "layout", "meta"};
    for (const auto &[key, _] : j.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char *k) { return key == k; }) ==
            std::end(known))
            throw Error(ErrorCode::parse, "unknown field \"" + key + "\"");
    }
    Instance inst;
    inst.graph = graph_from_json(j, false);
    int n = inst.graph.vertex_count();
    inst.s = get_int(j, "s");
    inst.t = get_int(j, "t");
    if (inst.s < 0 || inst.s >= n || inst.t < 0 || inst.t >= n)
        throw Error(ErrorCode::invalid_graph, "s or t out of range");
    inst.k = get_int(j, "k");
    if (inst.k < 1) throw Error(ErrorCode::invalid_argument, "k must be at least 1");
    if (j.contains("tau") && !j["tau"].is_null()) {
        int tau = get_int(j, "tau");
        if (tau < 1) throw Error(ErrorCode::invalid_argument, "tau must be at least 1");
        inst.tau = tau;
    }
    if (j.contains("layout")) inst.layout = j["layout"];
    if (j.contains("meta")) inst.meta = j["meta"];
    if (!inst.graph.is_connected()) throw Error(ErrorCode::disconnected, "graph is not connected");
    return inst;
}

Instance parse_instance(const std::string &text) { return instance_from_json(parse_json_text(text)); }

json instance_to_json(const Instance &inst)
{
    json j;
    j["n"] = inst.graph.vertex_count();
    json es = json::array();
    for (auto [u, v] : inst.graph.edges()) es.push_back({u, v});
    j["edges"] = std::move(es);
    j["s"] = inst.s;
    j["t"] = inst.t;
    j["k"] = inst.k;
    if (inst.tau) j["tau"] = *inst.tau;
    if (!inst.layout.is_null()) j["layout"] = inst.layout;
    if (!inst.meta.is_null()) j["meta"] = inst.meta;
    return j;
}

std::string serialize_instance(const Instance &inst) { return instance_to_json(inst).dump(); }

/* ---- separators ---- */

namespace {

/* Edmonds-Karp on a small adjacency-list network. */
class FlowNetwork {
  public:
    explicit FlowNetwork(int nodes) : head_(nodes, -1) {}

    void add_arc(int u, int v, int cap)
    {
        arcs_.push_back({v, cap, head_[u]});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, 0, head_[v]});
        head_[v] = static_cast<int>(arcs_.size()) - 1;
    }

    int max_flow(int src, int dst)
    {
        int flow = 0;
        for (;;) {
            std::vector<int> via(head_.size(), -1);
            std::deque<int> queue{src};
            std::vector<char> seen(head_.size(), 0);
            seen[src] = 1;
            while (!queue.empty() && !seen[dst]) {
                int u = queue.front();
                queue.pop_front();
                for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
                    if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
                        seen[arcs_[a].to] = 1;
                        via[arcs_[a].to] = a;
                        queue.push_back(arcs_[a].to);
                    }
                }
            }
            if (!seen[dst]) return flow;
            for (int v = dst; v != src; v = arcs_[via[v] ^ 1].to) {
                arcs_[via[v]].cap -= 1;
                arcs_[via[v] ^ 1].cap += 1;
            }
            flow++;
        }
    }

    std::vector<char> residual_reach(int src) const
    {
        std::vector<char> seen(head_.size(), 0);
        std::vector<int> stack{src};
        seen[src] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
                if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
                    seen[arcs_[a].to] = 1;
                    stack.push_back(arcs_[a].to);
                }
            }
        }
        return seen;
    }

  private:
    struct Arc {
        int to, cap, next;
    };
    std::vector<int> head_;
    std::vector<Arc> arcs_;
};

} // namespace

SeparatorResult lambda(const Graph &g, Vertex s, Vertex t)
{
    if (!g.contains(s) || !g.contains(t)) throw Error(ErrorCode::invalid_argument, "s or t out of range");
    if (s == t || g.adjacent(s, t)) return {ExtCount::infinity(), {}};
    const int n = g.vertex_count();
    const int big = n + 1;
    /* v_in = 2v, v_out = 2v+1 */
    FlowNetwork net(2 * n);
    for (int v = 0; v < n; v++) net.add_arc(2 * v, 2 * v + 1, (v == s || v == t) ? big : 1);
    for (auto [u, v] : g.edges()) {
        net.add_arc(2 * u + 1, 2 * v, big);
        net.add_arc(2 * v + 1, 2 * u, big);
    }
    int value = net.max_flow(2 * s + 1, 2 * t);
    auto reach = net.residual_reach(2 * s + 1);
    SeparatorResult r{ExtCount::finite(value), {}};
    for (int v = 0; v < n; v++)
        if (reach[2 * v] && !reach[2 * v + 1]) r.witness.push_back(v);
    return r;
}

ExtCount distance(const Graph &g, const std::vector<Vertex> &removed, Vertex u, Vertex v)
{
    const int n = g.vertex_count();
    std::vector<int> dist(n, -1);
    for (Vertex r : removed) dist[r] = -2;
    if (dist[u] == -2 || dist[v] == -2) throw Error(ErrorCode::contract, "distance endpoint is removed");
    std::deque<Vertex> queue{u};
    dist[u] = 0;
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        if (x == v) return ExtCount::finite(dist[x]);
        for (Vertex w : g.neighbors(x)) {
            if (dist[w] == -1) {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    return ExtCount::infinity();
}

/* ---- graph classes ---- */

namespace {

/* Lexicographic BFS by partition refinement; returns the visit order. */
std::vector<Vertex> lex_bfs(const Graph &g)
{
    const int n = g.vertex_count();
    std::vector<std::vector<Vertex>> parts;
    if (n > 0) {
        parts.emplace_back();
        for (int v = 0; v < n; v++) parts.back().push_back(v);
    }
    std::vector<Vertex> order;
    std::vector<char> done(n, 0);
    while (!parts.empty()) {
        Vertex v = parts.front().front();
        parts.front().erase(parts.front().begin());
        if (parts.front().empty()) parts.erase(parts.begin());
        order.push_back(v);
        done[v] = 1;
        std::vector<std::vector<Vertex>> next;
        for (auto &p : parts) {
            std::vector<Vertex> in, out;
            for (Vertex w : p) (g.adjacent(v, w) ? in : out).push_back(w);
            if (!in.empty()) next.push_back(std::move(in));
            if (!out.empty()) next.push_back(std::move(out));
        }
        parts = std::move(next);
    }
    return order;
}

} // namespace

bool is_perfect_elimination_ordering(const Graph &g, const std::vector<Vertex> &order)
{
    const int n = g.vertex_count();
    if (static_cast<int>(order.size()) != n) return false;
    std::vector<int> pos(n, -1);
    for (int i = 0; i < n; i++) {
        if (!g.contains(order[i]) || pos[order[i]] >= 0) return false;
        pos[order[i]] = i;
    }
    for (int i = 0; i < n; i++) {
        std::vector<Vertex> later;
        for (Vertex w : g.neighbors(order[i]))
            if (pos[w] > i) later.push_back(w);
        for (std::size_t a = 0; a < later.size(); a++)
            for (std::size_t b = a + 1; b < later.size(); b++)
                if (!g.adjacent(later[a], later[b])) return false;
    }
    return true;
}

ChordalityResult is_chordal(const Graph &g)
{
    auto order = lex_bfs(g);
    std::reverse(order.begin(), order.end());
    if (is_perfect_elimination_ordering(g, order)) return {true, std::move(order)};
    return {false, {}};
}

bool is_p5_free(const Graph &g)
{
    const int n = g.vertex_count();
    std::vector<Vertex> path;
    /* extend induced paths; each new vertex must be adjacent only to the current end */
    auto extend = [&](auto &&self) -> bool {
        if (path.size() == 5) return true;
        Vertex end = path.back();
        for (Vertex w : g.neighbors(end)) {
            bool ok = true;
            for (std::size_t i = 0; i + 1 < path.size() && ok; i++)
                if (path[i] == w || g.adjacent(path[i], w)) ok = false;
            if (!ok) continue;
            path.push_back(w);
            if (self(self)) return true;
            path.pop_back();
        }
        return false;
    };
    for (int v = 0; v < n; v++) {
        path.assign(1, v);
        if (extend(extend)) return false;
    }
    return true;
}

} // namespace rdv
