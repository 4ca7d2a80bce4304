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

#include "rendezvous/rendezvous.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rendezvous/arena.hpp"
#include "rendezvous/forge.hpp"
#include "rendezvous/game.hpp"
#include "rendezvous/nd.hpp"
#include "rendezvous/structural.hpp"

struct rdv_instance {
    rdv::Instance inst;
};

namespace {

using json = nlohmann::ordered_json;
using ojson = nlohmann::ordered_json;

/* core helpers that build unordered documents */
json ordered(const nlohmann::json &j) { return json::parse(j.dump()); }

thread_local std::string last_error;

rdv_status status_of(rdv::ErrorCode code)
{
    switch (code) {
    case rdv::ErrorCode::parse: return RDV_ERR_PARSE;
    case rdv::ErrorCode::invalid_graph: return RDV_ERR_INVALID_GRAPH;
    case rdv::ErrorCode::disconnected: return RDV_ERR_DISCONNECTED;
    case rdv::ErrorCode::invalid_argument: return RDV_ERR_INVALID_ARGUMENT;
    case rdv::ErrorCode::contract: return RDV_ERR_CONTRACT;
    case rdv::ErrorCode::budget_exceeded: return RDV_ERR_BUDGET;
    case rdv::ErrorCode::size_limit: return RDV_ERR_SIZE_LIMIT;
    case rdv::ErrorCode::io: return RDV_ERR_IO;
    }
    return RDV_ERR_INTERNAL;
}

char *dup(const std::string &s)
{
    char *p = static_cast<char *>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

/* runs fn, mapping exceptions to status codes and the thread-local message */
template <typename Fn> rdv_status guarded(Fn &&fn)
{
    last_error.clear();
    try {
        return fn();
    } catch (const rdv::Error &e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const nlohmann::json::exception &e) {
        last_error = std::string("malformed JSON: ") + e.what();
        return RDV_ERR_PARSE;
    } catch (const std::exception &e) {
        last_error = e.what();
        return RDV_ERR_INTERNAL;
    }
}

json parse_options(const char *text)
{
    if (!text || !*text) return json::object();
    json j = json::parse(text);
    if (!j.is_object()) throw rdv::Error(rdv::ErrorCode::parse, "options must be a JSON object");
    return j;
}

template <typename T> T opt(const json &o, const char *key, T fallback)
{
    if (!o.contains(key) || o[key].is_null()) return fallback;
    try {
        return o[key].get<T>();
    } catch (const nlohmann::json::exception &) {
        throw rdv::Error(rdv::ErrorCode::parse, std::string("option \"") + key + "\" has the wrong type");
    }
}

json count_json(const rdv::ExtCount &c) { return c.is_finite() ? json(c.value()) : json("inf"); }

rdv::SolveOptions solve_options(const json &o)
{
    rdv::SolveOptions so;
    so.budget = opt<std::uint64_t>(o, "budget", so.budget);
    so.threads = opt<int>(o, "threads", 0);
    return so;
}

json budget_report(const rdv::BudgetExceeded &e)
{
    return json{{"error", "budget-exceeded"}, {"stage", e.stage()}, {"estimate", e.estimate()}, {"budget", e.budget()},
                {"message", e.what()}};
}

void require_handle(const void *p)
{
    if (!p) throw rdv::Error(rdv::ErrorCode::invalid_argument, "null argument");
}

} // namespace

extern "C" {

const char *rdv_version(void) { return "1.0.0"; }

const char *rdv_status_name(rdv_status status)
{
    switch (status) {
    case RDV_OK: return "ok";
    case RDV_ERR_PARSE: return "parse-error";
    case RDV_ERR_INVALID_GRAPH: return "invalid-graph";
    case RDV_ERR_DISCONNECTED: return "disconnected-graph";
    case RDV_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case RDV_ERR_CONTRACT: return "contract-violation";
    case RDV_ERR_BUDGET: return "budget-exceeded";
    case RDV_ERR_SIZE_LIMIT: return "size-limit";
    case RDV_ERR_IO: return "io-error";
    case RDV_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char *rdv_last_error(void) { return last_error.c_str(); }

void rdv_string_free(char *s) { std::free(s); }

rdv_status rdv_instance_parse(const char *text, rdv_instance **out)
{
    return guarded([&] {
        require_handle(text);
        require_handle(out);
        *out = nullptr;
        auto h = std::make_unique<rdv_instance>();
        h->inst = rdv::parse_instance(text);
        *out = h.release();
        return RDV_OK;
    });
}

rdv_status rdv_instance_load(const char *path, rdv_instance **out)
{
    return guarded([&] {
        require_handle(path);
        std::ifstream in(path);
        if (!in) throw rdv::Error(rdv::ErrorCode::io, std::string("cannot read ") + path);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        return rdv_instance_parse(text.c_str(), out);
    });
}

void rdv_instance_free(rdv_instance *inst) { delete inst; }

rdv_status rdv_instance_to_json(const rdv_instance *inst, char **out)
{
    return guarded([&] {
        require_handle(inst);
        require_handle(out);
        *out = dup(rdv::serialize_instance(inst->inst));
        return RDV_OK;
    });
}

rdv_status rdv_solve(const rdv_instance *h, const char *options, char **out)
{
    return guarded([&] {
        require_handle(h);
        require_handle(out);
        *out = nullptr;
        const json o = parse_options(options);
        const rdv::Instance &inst = h->inst;
        const rdv::Graph &g = inst.graph;
        const rdv::Vertex s = inst.s, t = inst.t;
        const int k = inst.k;
        const std::optional<int> tau = o.contains("tau") && !o["tau"].is_null() ? opt<int>(o, "tau", 0) : inst.tau;
        const std::string mode = opt<std::string>(o, "mode", "auto");
        if (mode != "auto" && mode != "generic" && mode != "nd-fpt")
            throw rdv::Error(rdv::ErrorCode::invalid_argument, "mode must be auto, generic or nd-fpt");
        if (tau && *tau < 1) throw rdv::Error(rdv::ErrorCode::invalid_argument, "tau must be at least 1");
        const bool want_diag = opt<bool>(o, "diagnostics", false);
        const std::string table_path = opt<std::string>(o, "export_table", "");
        rdv::SolveOptions so = solve_options(o);

        const auto start = std::chrono::steady_clock::now();
        json report{{"facilitator_wins", false}, {"method", ""}, {"ell_star", nullptr}, {"elapsed_ms", 0}};
        json diag = json::object();
        try {
            if (!g.contains(s) || !g.contains(t))
                throw rdv::Error(rdv::ErrorCode::invalid_argument, "s or t out of range");
            if (s == t || g.adjacent(s, t)) {
                report["facilitator_wins"] = true;
                report["method"] = rdv::kReasonAdjacent;
            } else if (mode == "nd-fpt") {
                if (!tau) throw rdv::Error(rdv::ErrorCode::invalid_argument, "nd-fpt mode needs a step bound tau");
                rdv::NdOptions nd;
                nd.tree_budget = so.budget;
                nd.candidate_budget = so.budget;
                nd.threads = std::max(1, so.threads);
                const auto r = rdv::solve_nd(g, s, t, k, *tau, nd);
                report["facilitator_wins"] = !r.divider_wins;
                report["method"] = "nd-fpt";
                diag["nd"] = ordered(rdv::nd_diagnostics(r));
                diag["decomposition"] = ordered(rdv::decomposition_to_json(rdv::neighborhood_decomposition(g)));
            } else if (tau) {
                report["facilitator_wins"] = rdv::facilitator_wins_in(g, s, t, k, *tau, so);
                report["method"] = "generic";
            } else {
                std::optional<rdv::DividerNumberReport> fast;
                if (mode == "auto") fast = rdv::fast_divider_number(g, s, t);
                if (fast) {
                    report["facilitator_wins"] = fast->value.is_infinite() || k < fast->value.value();
                    report["method"] = fast->reason;
                    diag["divider_number"] = count_json(fast->value);
                } else {
                    const rdv::WinTable table = rdv::winning_sets(g, k, so);
                    report["facilitator_wins"] = table.facilitator_wins(s, t);
                    report["method"] = rdv::kReasonGeneric;
                    report["ell_star"] = table.ell_star();
                    diag["positions"] = table.position_count();
                }
            }
            if (!table_path.empty()) {
                const rdv::WinTable table = rdv::winning_sets(g, k, so);
                std::ofstream file(table_path);
                if (!file) throw rdv::Error(rdv::ErrorCode::io, "cannot write " + table_path);
                table.export_csv(file);
            }
        } catch (const rdv::BudgetExceeded &e) {
            last_error = e.what();
            *out = dup(budget_report(e).dump());
            return RDV_ERR_BUDGET;
        }
        diag["position_estimate"] = rdv::position_count_estimate(g.vertex_count(), k);
        report["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
        if (want_diag) report["diagnostics"] = diag;
        *out = dup(report.dump());
        return RDV_OK;
    });
}

rdv_status rdv_dnumber(const rdv_instance *h, const char *options, char **out)
{
    return guarded([&] {
        require_handle(h);
        require_handle(out);
        *out = nullptr;
        const json o = parse_options(options);
        const rdv::Instance &inst = h->inst;
        std::optional<int> max_k;
        if (o.contains("max_k") && !o["max_k"].is_null()) max_k = opt<int>(o, "max_k", 0);
        const auto lam = rdv::lambda(inst.graph, inst.s, inst.t).value;
        try {
            const auto r = rdv::divider_number_auto(inst.graph, inst.s, inst.t, max_k, solve_options(o));
            *out = dup(json{{"d", count_json(r.value)}, {"lambda", count_json(lam)}, {"reason", r.reason}}.dump());
            return RDV_OK;
        } catch (const rdv::DividerNumberBracket &e) {
            last_error = e.what();
            json d{{"lower", e.lower()}, {"upper", count_json(e.upper())}};
            *out = dup(json{{"d", d}, {"lambda", count_json(lam)}, {"reason", rdv::kReasonGeneric},
                            {"error", budget_report(e)}}
                           .dump());
            return RDV_ERR_BUDGET;
        }
    });
}

rdv_status rdv_lambda(const rdv_instance *h, char **out)
{
    return guarded([&] {
        require_handle(h);
        require_handle(out);
        const auto r = rdv::lambda(h->inst.graph, h->inst.s, h->inst.t);
        *out = dup(json{{"lambda", count_json(r.value)}, {"separator", r.witness}}.dump());
        return RDV_OK;
    });
}

rdv_status rdv_classify(const rdv_instance *h, char **out)
{
    return guarded([&] {
        require_handle(h);
        require_handle(out);
        const rdv::Instance &inst = h->inst;
        const rdv::Graph &g = inst.graph;
        const auto chordal = rdv::is_chordal(g);
        const auto fast = rdv::fast_divider_number(g, inst.s, inst.t);
        json j{{"n", g.vertex_count()},
               {"m", g.edge_count()},
               {"adjacent_or_equal", inst.s == inst.t || g.adjacent(inst.s, inst.t)},
               {"chordal", chordal.chordal},
               {"p5_free", rdv::is_p5_free(g)},
               {"lambda", count_json(rdv::lambda(g, inst.s, inst.t).value)},
               {"one_step_win", rdv::one_step_win(g, inst.s, inst.t, inst.k)},
               {"fast_path", fast ? json(fast->reason) : json(nullptr)},
               {"fast_divider_number", fast ? count_json(fast->value) : json(nullptr)},
               {"decomposition", ordered(rdv::decomposition_to_json(rdv::neighborhood_decomposition(g)))}};
        *out = dup(j.dump());
        return RDV_OK;
    });
}

rdv_status rdv_generate(const char *family, const char *params, char **out)
{
    return guarded([&] {
        require_handle(family);
        require_handle(out);
        const json o = parse_options(params);
        const int p = opt<int>(o, "p", 2), k = opt<int>(o, "k", 1);
        const std::string fam = family;
        rdv::Instance inst;
        if (fam == "clique-spider")
            inst = rdv::gen_clique_spider(p, k);
        else if (fam == "path-spider")
            inst = rdv::gen_path_spider(p, k);
        else
            throw rdv::Error(rdv::ErrorCode::invalid_argument, "unknown family " + fam);
        *out = dup(rdv::serialize_instance(inst));
        return RDV_OK;
    });
}

rdv_status rdv_reduce(const char *source, const char *input, char **out)
{
    return guarded([&] {
        require_handle(source);
        require_handle(input);
        require_handle(out);
        const ojson j = ojson::parse(input);
        const std::string src = source;
        rdv::Instance inst;
        if (src == "set-cover")
            inst = rdv::reduce_set_cover(rdv::set_cover_from_json(j));
        else if (src == "qbf")
            inst = rdv::reduce_qbf(rdv::qbf_from_json(j));
        else if (src == "qbf-unbounded")
            inst = rdv::reduce_qbf_unbounded(rdv::qbf_from_json(j));
        else
            throw rdv::Error(rdv::ErrorCode::invalid_argument, "unknown reduction source " + src);
        *out = dup(rdv::serialize_instance(inst));
        return RDV_OK;
    });
}

rdv_status rdv_extract_strategy(const rdv_instance *h, const char *options, char **out)
{
    return guarded([&] {
        require_handle(h);
        require_handle(out);
        *out = nullptr;
        const json o = parse_options(options);
        const int tau = opt<int>(o, "tau", h->inst.tau.value_or(0));
        if (tau < 1) throw rdv::Error(rdv::ErrorCode::invalid_argument, "strategy extraction needs tau >= 1");
        const auto tree =
            rdv::extract_divider_strategy(h->inst.graph, h->inst.s, h->inst.t, h->inst.k, tau, solve_options(o));
        *out = dup(rdv::strategy_to_json(tree).dump());
        return RDV_OK;
    });
}

rdv_status rdv_verify_strategy(const rdv_instance *h, const char *strategy, int tau, int *valid, char **reason)
{
    return guarded([&] {
        require_handle(h);
        require_handle(strategy);
        require_handle(valid);
        require_handle(reason);
        const int bound = tau > 0 ? tau : h->inst.tau.value_or(0);
        if (bound < 1) throw rdv::Error(rdv::ErrorCode::invalid_argument, "verification needs tau >= 1");
        rdv::VerifyResult r;
        nlohmann::json tree = nlohmann::json::parse(strategy, nullptr, false);
        if (tree.is_discarded())
            r = {false, "malformed tree: not valid JSON"};
        else
            r = rdv::verify_strategy_json(h->inst.graph, h->inst.s, h->inst.t, h->inst.k, bound, tree);
        *valid = r.valid ? 1 : 0;
        *reason = dup(r.reason);
        return RDV_OK;
    });
}

rdv_status rdv_serve(const char *host, int port, const char *options)
{
    return guarded([&] {
        const json o = parse_options(options);
        rdv::ArenaOptions ao;
        ao.budget = opt<std::uint64_t>(o, "budget", ao.budget);
        ao.threads = opt<int>(o, "threads", ao.threads);
        ao.log_dir = opt<std::string>(o, "log_dir", "");
        rdv::GameService service(ao);
        rdv::ArenaServer server(service);
        const std::string where = host ? host : "127.0.0.1";
        const int bound = server.bind(where, port);
        if (bound < 0) throw rdv::Error(rdv::ErrorCode::io, "cannot bind " + where + ":" + std::to_string(port));
        std::cerr << "arena listening on http://" << where << ":" << bound << std::endl;
        if (!server.listen()) throw rdv::Error(rdv::ErrorCode::io, "server stopped unexpectedly");
        return RDV_OK;
    });
}

} // extern "C"
