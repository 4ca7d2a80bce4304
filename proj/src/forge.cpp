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

#include "rendezvous/forge.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

namespace rdv {

using json = nlohmann::ordered_json;

namespace {

/* vertex-by-vertex graph assembly with names and recorded paths */
class Builder {
  public:
    int add(std::string name)
    {
        names_.push_back(std::move(name));
        return static_cast<int>(names_.size()) - 1;
    }

    void edge(int u, int v) { edges_.insert({std::min(u, v), std::max(u, v)}); }

    /* path of the given length from a to b; internal vertices named prefix.1, prefix.2, ... */
    void path(const std::string &label, int a, int b, int length)
    {
        if (length < 1) throw Error(ErrorCode::contract, "path length must be positive");
        std::vector<int> ids{a};
        for (int i = 1; i < length; i++) ids.push_back(add(label + "." + std::to_string(i)));
        ids.push_back(b);
        for (std::size_t i = 0; i + 1 < ids.size(); i++) edge(ids[i], ids[i + 1]);
        paths_[label] = ids;
    }

    int size() const { return static_cast<int>(names_.size()); }

    Instance finish(const std::string &family, json params, int k, std::optional<int> tau, json meta) const
    {
        Instance inst;
        inst.graph = Graph(size(), std::vector<Edge>(edges_.begin(), edges_.end()));
        inst.s = 0;
        inst.t = 1;
        inst.k = k;
        inst.tau = tau;
        inst.layout = json{{"family", family}, {"params", std::move(params)}, {"names", names_}};
        if (!paths_.empty()) inst.layout["paths"] = paths_;
        inst.meta = std::move(meta);
        return inst;
    }

  private:
    std::vector<std::string> names_;
    std::set<Edge> edges_;
    json paths_ = json::object();
};

std::string indexed(const char *base, int i) { return base + std::to_string(i); }

void require(bool ok, const std::string &message)
{
    if (!ok) throw Error(ErrorCode::invalid_argument, message);
}

} // namespace

/* ---- input formats ---- */

void validate(const SetCoverInstance &sc)
{
    require(sc.n >= 1, "set cover universe must be nonempty");
    require(sc.k >= 0, "set cover budget must be nonnegative");
    for (const auto &set : sc.sets) {
        require(!set.empty(), "sets must be nonempty");
        for (int e : set) require(e >= 0 && e < sc.n, "set element outside the universe");
    }
}

void validate(const QbfFormula &phi)
{
    require(phi.n >= 1, "formula needs n >= 1");
    require(!phi.clauses.empty(), "formula needs at least one clause");
    for (const auto &clause : phi.clauses) {
        require(!clause.empty(), "clauses must be nonempty");
        for (const auto &lit : clause) require(lit.var >= 1 && lit.var <= 2 * phi.n, "literal variable out of range");
    }
}

namespace {

void expect_keys(const json &j, std::initializer_list<const char *> keys, const char *what)
{
    if (!j.is_object()) throw Error(ErrorCode::parse, std::string(what) + " must be a JSON object");
    for (const auto &item : j.items())
        if (std::find_if(keys.begin(), keys.end(), [&](const char *k) { return item.key() == k; }) == keys.end())
            throw Error(ErrorCode::parse, std::string("unknown key \"") + item.key() + "\" in " + what);
    for (const char *k : keys)
        if (!j.contains(k)) throw Error(ErrorCode::parse, std::string(what) + " is missing \"" + k + "\"");
}

int get_int(const json &j, const char *what)
{
    if (!j.is_number_integer()) throw Error(ErrorCode::parse, std::string(what) + " must be an integer");
    return j.get<int>();
}

} // namespace

SetCoverInstance set_cover_from_json(const json &j)
{
    expect_keys(j, {"n", "sets", "k"}, "set cover instance");
    SetCoverInstance sc;
    sc.n = get_int(j["n"], "n");
    sc.k = get_int(j["k"], "k");
    if (!j["sets"].is_array()) throw Error(ErrorCode::parse, "sets must be an array");
    for (const auto &set : j["sets"]) {
        if (!set.is_array()) throw Error(ErrorCode::parse, "each set must be an array");
        std::vector<int> elems;
        for (const auto &e : set) elems.push_back(get_int(e, "set element"));
        sc.sets.push_back(std::move(elems));
    }
    validate(sc);
    return sc;
}

json set_cover_to_json(const SetCoverInstance &sc) { return json{{"n", sc.n}, {"sets", sc.sets}, {"k", sc.k}}; }

QbfFormula qbf_from_json(const json &j)
{
    expect_keys(j, {"n", "clauses"}, "formula");
    QbfFormula phi;
    phi.n = get_int(j["n"], "n");
    if (!j["clauses"].is_array()) throw Error(ErrorCode::parse, "clauses must be an array");
    for (const auto &clause : j["clauses"]) {
        if (!clause.is_array()) throw Error(ErrorCode::parse, "each clause must be an array");
        std::vector<Literal> lits;
        for (const auto &lit : clause) {
            expect_keys(lit, {"var", "neg"}, "literal");
            if (!lit["neg"].is_boolean()) throw Error(ErrorCode::parse, "neg must be a boolean");
            lits.push_back({get_int(lit["var"], "var"), lit["neg"].get<bool>()});
        }
        phi.clauses.push_back(std::move(lits));
    }
    validate(phi);
    return phi;
}

json qbf_to_json(const QbfFormula &phi)
{
    json clauses = json::array();
    for (const auto &clause : phi.clauses) {
        json c = json::array();
        for (const auto &lit : clause) c.push_back({{"var", lit.var}, {"neg", lit.neg}});
        clauses.push_back(std::move(c));
    }
    return json{{"n", phi.n}, {"clauses", std::move(clauses)}};
}

/* ---- spiders ---- */

Instance gen_clique_spider(int p, int k)
{
    require(p >= 2, "clique spider needs p >= 2");
    require(k >= 1, "k must be at least 1");
    Builder b;
    b.add("s");
    b.add("t");
    for (int i = 1; i <= p; i++) b.add(indexed("u", i));
    for (int i = 1; i <= p; i++) b.add(indexed("x", i));
    for (int i = 1; i <= p; i++) b.add(indexed("y", i));
    auto u = [](int i) { return 1 + i; };
    auto x = [p](int i) { return 1 + p + i; };
    auto y = [p](int i) { return 1 + 2 * p + i; };
    for (int i = 1; i <= p; i++) {
        for (int j = i + 1; j <= p; j++) b.edge(u(i), u(j));
        b.edge(0, x(i));
        b.edge(x(i), u(i));
        b.edge(1, y(i));
        b.edge(y(i), u(i));
    }
    return b.finish("clique-spider", json{{"p", p}}, k, std::nullopt, nullptr);
}

Instance gen_path_spider(int p, int k)
{
    require(p >= 2, "path spider needs p >= 2");
    require(k >= 1, "k must be at least 1");
    const int h = p / 2 + 1;
    Builder b;
    b.add("s");
    b.add("t");
    for (int i = 1; i <= p; i++) b.add(indexed("u", i));
    for (int i = 1; i < p; i++) b.edge(1 + i, 2 + i);
    for (int i = 1; i <= p; i++) {
        b.path(indexed("S", i), 0, 1 + i, h);
        b.path(indexed("T", i), 1 + i, 1, h);
    }
    return b.finish("path-spider", json{{"p", p}, {"h", h}}, k, std::nullopt, nullptr);
}

/* ---- reductions ---- */

Instance reduce_set_cover(const SetCoverInstance &sc)
{
    validate(sc);
    require(sc.k >= 1, "set cover reduction needs k >= 1");
    const int n = sc.n, m = static_cast<int>(sc.sets.size());
    Builder b;
    const int s = b.add("s"), t = b.add("t"), z = b.add("z");
    std::vector<int> u(n), x(n), xp(n);
    for (int h = 0; h < n; h++) u[h] = b.add(indexed("u", h + 1));
    for (int h = 0; h < n; h++) x[h] = b.add(indexed("x", h + 1));
    for (int h = 0; h < n; h++) xp[h] = b.add(indexed("xp", h + 1));
    b.edge(z, s);
    b.edge(z, t);
    for (int h = 0; h < n; h++) {
        b.edge(s, x[h]);
        b.edge(x[h], u[h]);
        b.edge(u[h], xp[h]);
        b.edge(xp[h], t);
    }
    for (int i = 1; i <= sc.k; i++) {
        const int w = b.add(indexed("w", i));
        const int y = b.add(indexed("y", i));
        const int yp = b.add(indexed("yp", i));
        b.edge(s, y);
        b.edge(y, w);
        b.edge(w, yp);
        b.edge(yp, t);
        for (int j = 0; j < m; j++) {
            const int sj = b.add("s" + std::to_string(j + 1) + "^" + std::to_string(i));
            b.edge(sj, w);
            for (int e : sc.sets[j]) b.edge(sj, u[e]);
        }
    }
    json meta{{"horizon", 2}, {"source", "set-cover"}, {"intent", "unbounded"}};
    return b.finish("set-cover", json{{"n", n}, {"m", m}, {"k", sc.k}}, sc.k + 1, std::nullopt, std::move(meta));
}

namespace {

struct QbfIds {
    int s, t, z, zp;
    std::vector<int> u, v, c, w, wp;
    std::vector<int> spine, spine_bar;        // index i = 1..n
    std::vector<int> x, xb, xpp, xbpp, y, yp; // index h = 1..2n
};

QbfIds build_qbf(Builder &b, const QbfFormula &phi)
{
    const int n = phi.n, m = static_cast<int>(phi.clauses.size());
    QbfIds id;
    id.s = b.add("s");
    id.t = b.add("t");
    id.z = b.add("z");
    id.zp = b.add("zp");
    for (int i = 0; i <= n; i++) id.u.push_back(b.add(indexed("u", i)));
    for (int i = 0; i <= 2 * n; i++) id.v.push_back(b.add(indexed("v", i)));
    id.c.push_back(-1);
    id.w.push_back(-1);
    id.wp.push_back(-1);
    for (int j = 1; j <= m; j++) {
        id.c.push_back(b.add(indexed("c", j)));
        id.w.push_back(b.add(indexed("w", j)));
        id.wp.push_back(b.add(indexed("wp", j)));
    }
    id.spine.push_back(-1);
    id.spine_bar.push_back(-1);
    for (int i = 1; i <= n; i++) {
        id.spine.push_back(b.add(indexed("xp", 2 * i - 1)));
        id.spine_bar.push_back(b.add(indexed("xbp", 2 * i - 1)));
    }
    for (auto *vec : {&id.x, &id.xb, &id.xpp, &id.xbpp, &id.y, &id.yp}) vec->push_back(-1);
    for (int h = 1; h <= 2 * n; h++) {
        id.x.push_back(b.add(indexed("x", h)));
        id.xb.push_back(b.add(indexed("xb", h)));
        id.xpp.push_back(b.add(indexed("xpp", h)));
        id.xbpp.push_back(b.add(indexed("xbpp", h)));
        id.y.push_back(b.add(indexed("y", h)));
        id.yp.push_back(b.add(indexed("yp", h)));
    }

    b.edge(id.s, id.u[0]);
    for (int i = 1; i <= n; i++) {
        for (int sv : {id.spine[i], id.spine_bar[i]}) {
            b.edge(sv, id.u[i - 1]);
            b.edge(sv, id.u[i]);
        }
        b.edge(id.spine[i], id.x[2 * i - 1]);
        b.edge(id.spine_bar[i], id.xb[2 * i - 1]);
    }
    b.edge(id.t, id.v[0]);
    for (int i = 0; i < 2 * n; i++) b.edge(id.v[i], id.v[i + 1]);
    for (int j = 1; j <= m; j++) {
        b.edge(id.u[n], id.w[j]);
        b.edge(id.w[j], id.c[j]);
        b.edge(id.v[2 * n], id.wp[j]);
        b.edge(id.wp[j], id.c[j]);
        for (const auto &lit : phi.clauses[j - 1]) b.edge(lit.neg ? id.xbpp[lit.var] : id.xpp[lit.var], id.c[j]);
    }
    for (int hub : {id.z, id.zp}) {
        b.edge(hub, id.s);
        b.edge(hub, id.t);
    }
    for (int h = 1; h <= 2 * n; h++) {
        b.edge(id.y[h], id.x[h]);
        b.edge(id.y[h], id.xb[h]);
        b.edge(id.yp[h], id.s);
        b.edge(id.yp[h], id.t);
        const int i = (h + 1) / 2;
        b.path(indexed("P", h), id.x[h], id.xpp[h], 2 * (n - i) + 1);
        b.path(indexed("Pb", h), id.xb[h], id.xbpp[h], 2 * (n - i) + 1);
        b.path(indexed("R", h), id.y[h], id.yp[h], 2 * i - 1);
        if (h % 2 == 1) {
            b.path(indexed("Q", h), id.x[h], id.v[h], 4 * (n - i) + 5);
            b.path(indexed("Qb", h), id.xb[h], id.v[h], 4 * (n - i) + 5);
        }
    }
    return id;
}

} // namespace

Instance reduce_qbf(const QbfFormula &phi)
{
    validate(phi);
    Builder b;
    build_qbf(b, phi);
    const int n = phi.n;
    json params{{"n", n}, {"m", phi.clauses.size()}};
    return b.finish("qbf", std::move(params), 2 * n + 2, 2 * n + 3, json{{"source", "qbf"}, {"intent", "bounded"}});
}

Instance reduce_qbf_unbounded(const QbfFormula &phi)
{
    validate(phi);
    Builder b;
    const QbfIds id = build_qbf(b, phi);
    const int n = phi.n, m = static_cast<int>(phi.clauses.size());
    int guards = 0;
    auto guard = [&](const std::string &name) {
        const int g = b.add(name);
        b.edge(g, id.s);
        b.edge(g, id.t);
        guards++;
        return g;
    };
    for (int i = 0; i <= n; i++) b.path(indexed("L", i), guard(indexed("uL", i)), id.u[i], 2 * i + 1);
    for (int i = 1; i <= n; i++) {
        b.path(indexed("S", i), guard(indexed("a", i)), id.x[2 * i - 1], 2 * i + 1);
        b.path(indexed("Sb", i), guard(indexed("ab", i)), id.xb[2 * i - 1], 2 * i + 1);
        b.path(indexed("Sp", i), guard(indexed("ap", i)), id.spine[i], 2 * i);
        b.path(indexed("Sbp", i), guard(indexed("abp", i)), id.spine_bar[i], 2 * i);
    }
    for (int i = 0; i <= 2 * n; i++) b.path(indexed("Lp", i), guard(indexed("vp", i)), id.v[i], i + 1);
    for (int j = 1; j <= m; j++) b.path(indexed("F", j), guard(indexed("cp", j)), id.c[j], 2 * n + 3);
    json params{{"n", n}, {"m", m}, {"guards", guards}};
    return b.finish("qbf-unbounded", std::move(params), 2 * n + 2 + guards, std::nullopt,
                    json{{"source", "qbf"}, {"intent", "unbounded"}});
}

/* ---- oracles ---- */

bool solve_set_cover_brute(const SetCoverInstance &sc)
{
    validate(sc);
    const int m = static_cast<int>(sc.sets.size());
    if (m > 20) throw Error(ErrorCode::size_limit, "brute-force set cover supports at most 20 sets");
    const std::uint32_t full = (sc.n >= 32) ? ~0u : ((1u << sc.n) - 1);
    if (sc.n > 32) throw Error(ErrorCode::size_limit, "brute-force set cover supports at most 32 elements");
    std::vector<std::uint32_t> masks;
    for (const auto &set : sc.sets) {
        std::uint32_t mask = 0;
        for (int e : set) mask |= 1u << e;
        masks.push_back(mask);
    }
    for (std::uint32_t pick = 0; pick < (1u << m); pick++) {
        if (std::popcount(pick) > sc.k) continue;
        std::uint32_t covered = 0;
        for (int j = 0; j < m; j++)
            if (pick >> j & 1) covered |= masks[j];
        if (covered == full) return true;
    }
    return false;
}

bool evaluate_qbf_brute(const QbfFormula &phi)
{
    validate(phi);
    const int vars = 2 * phi.n;
    if (vars > 16) throw Error(ErrorCode::size_limit, "brute-force QBF supports at most 16 variables");
    std::vector<bool> value(vars + 1, false);
    auto matrix = [&] {
        return std::all_of(phi.clauses.begin(), phi.clauses.end(), [&](const auto &clause) {
            return std::any_of(clause.begin(), clause.end(),
                               [&](const Literal &l) { return value[l.var] != l.neg; });
        });
    };
    auto eval = [&](auto &&self, int i) -> bool {
        if (i > vars) return matrix();
        value[i] = false;
        const bool lo = self(self, i + 1);
        if (i % 2 == 1 && !lo) return false;
        if (i % 2 == 0 && lo) return true;
        value[i] = true;
        return self(self, i + 1);
    };
    return eval(eval, 1);
}

/* ---- random corpora ---- */

Graph random_connected_graph(int n, double edge_prob, std::uint64_t seed)
{
    require(n >= 2, "random graph needs n >= 2");
    require(edge_prob > 0.0 && edge_prob <= 1.0, "edge probability must be in (0, 1]");
    constexpr std::uint64_t kCap = 10000;
    std::mt19937_64 rng(seed);
    for (std::uint64_t attempt = 0; attempt < kCap; attempt++) {
        std::vector<Edge> edges;
        for (int u = 0; u < n; u++)
            for (int v = u + 1; v < n; v++)
                if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < edge_prob) edges.push_back({u, v});
        Graph g(n, std::move(edges));
        if (g.is_connected()) return g;
    }
    throw BudgetExceeded("random-graph", kCap, kCap);
}

Graph random_chordal_graph(int n, std::uint64_t seed)
{
    require(n >= 1, "random chordal graph needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<Edge> edges;
    for (int v = 1; v < n; v++) {
        const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(v));
        std::vector<int> clique{a};
        for (int c = 0; c < v; c++) {
            if (c == a || !adj[a][c] || rng() % 2 == 0) continue;
            if (std::all_of(clique.begin(), clique.end(), [&](int q) { return adj[q][c] != 0; })) clique.push_back(c);
        }
        for (int q : clique) {
            adj[q][v] = adj[v][q] = 1;
            edges.push_back({q, v});
        }
    }
    return Graph(n, std::move(edges));
}

std::vector<Graph> all_connected_graphs(int n)
{
    require(n >= 1 && n <= 6, "exhaustive enumeration supports 1 <= n <= 6");
    std::vector<Edge> pairs;
    std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
    for (int u = 0; u < n; u++)
        for (int v = u + 1; v < n; v++) {
            index[u][v] = index[v][u] = static_cast<int>(pairs.size());
            pairs.push_back({u, v});
        }
    const int e = static_cast<int>(pairs.size());

    /* edge-index images under every vertex permutation */
    std::vector<std::vector<int>> images;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int> img(e);
        for (int i = 0; i < e; i++) img[i] = index[perm[pairs[i].first]][perm[pairs[i].second]];
        images.push_back(std::move(img));
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto connected = [&](std::uint32_t mask) {
        std::uint32_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint32_t next = 0;
            for (int i = 0; i < e; i++) {
                if (!(mask >> i & 1)) continue;
                auto [u, v] = pairs[i];
                if ((frontier >> u & 1) && !(seen >> v & 1)) next |= 1u << v;
                if ((frontier >> v & 1) && !(seen >> u & 1)) next |= 1u << u;
            }
            seen |= next;
            frontier = next;
        }
        return seen == (1u << n) - 1;
    };

    std::vector<Graph> out;
    for (std::uint32_t mask = 0; mask < (1u << e); mask++) {
        if (!connected(mask)) continue;
        bool canonical = true;
        for (const auto &img : images) {
            std::uint32_t mapped = 0;
            for (int i = 0; i < e; i++)
                if (mask >> i & 1) mapped |= 1u << img[i];
            if (mapped < mask) {
                canonical = false;
                break;
            }
        }
        if (!canonical) continue;
        std::vector<Edge> edges;
        for (int i = 0; i < e; i++)
            if (mask >> i & 1) edges.push_back(pairs[i]);
        out.emplace_back(n, std::move(edges));
    }
    return out;
}

} // namespace rdv
