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

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "rendezvous/rendezvous.h"

namespace {

using json = nlohmann::ordered_json;

/* exit codes: 0 decided, 1 bad input or failure, 2 budget exceeded */
int exit_code(rdv_status st) { return st == RDV_OK ? 0 : st == RDV_ERR_BUDGET ? 2 : 1; }

/* set by failures detected in the CLI itself, before any library call */
std::string local_error;

rdv_status fail_local(rdv_status st, std::string message)
{
    local_error = std::move(message);
    return st;
}

int report_failure(rdv_status st)
{
    const std::string message = local_error.empty() ? rdv_last_error() : local_error;
    std::cerr << "error (" << rdv_status_name(st) << "): " << message << "\n";
    return exit_code(st);
}

struct Owned {
    char *p = nullptr;
    ~Owned() { rdv_string_free(p); }
};

struct Handle {
    rdv_instance *p = nullptr;
    ~Handle() { rdv_instance_free(p); }
};

std::optional<std::string> read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    if (!out) return false;
    out << text << '\n';
    return static_cast<bool>(out);
}

/* emit to --out or standard output */
int emit(const std::string &text, const std::string &out)
{
    if (out.empty()) {
        std::cout << text << '\n';
        return 0;
    }
    if (!write_file(out, text)) {
        return report_failure(fail_local(RDV_ERR_IO, "cannot write " + out));
    }
    return 0;
}

/* instance from --instance, or from --graph with --s/--t */
struct Source {
    std::string instance, graph;
    int s = -1, t = -1;
};

rdv_status load(const Source &src, Handle &h)
{
    if (!src.instance.empty()) return rdv_instance_load(src.instance.c_str(), &h.p);
    if (src.graph.empty() || src.s < 0 || src.t < 0) {
        return fail_local(RDV_ERR_INVALID_ARGUMENT, "give --instance, or --graph with --s and --t");
    }
    auto text = read_file(src.graph);
    if (!text) {
        return fail_local(RDV_ERR_IO, "cannot read " + src.graph);
    }
    json g = json::parse(*text, nullptr, false);
    if (g.is_discarded() || !g.is_object() || !g.contains("n") || !g.contains("edges")) {
        return fail_local(RDV_ERR_PARSE, "graph file needs \"n\" and \"edges\"");
    }
    json inst{{"n", g["n"]}, {"edges", g["edges"]}, {"s", src.s}, {"t", src.t}, {"k", 1}};
    return rdv_instance_parse(inst.dump().c_str(), &h.p);
}

void add_source(CLI::App *cmd, Source &src, bool graph_form)
{
    cmd->add_option("--instance", src.instance, "instance JSON file");
    if (graph_form) {
        cmd->add_option("--graph", src.graph, "graph JSON file with n and edges");
        cmd->add_option("--s", src.s, "first Facilitator vertex");
        cmd->add_option("--t", src.t, "second Facilitator vertex");
    }
}

int default_threads()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Rendezvous game solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rdv_version()));

    /* solve */
    Source solve_src;
    std::optional<int> solve_tau;
    std::string mode = "auto", strategy_out, table_out;
    std::uint64_t budget = 5'000'000;
    int threads = default_threads();
    bool diagnostics = false;
    auto *solve = app.add_subcommand("solve", "decide whether Facilitator wins");
    add_source(solve, solve_src, false);
    solve->add_option("--tau", solve_tau, "step bound, overrides the instance");
    solve->add_option("--mode", mode, "auto, generic or nd-fpt")->check(CLI::IsMember({"auto", "generic", "nd-fpt"}));
    solve->add_option("--budget", budget, "cap on positions and candidates");
    solve->add_option("--threads", threads, "worker threads");
    solve->add_option("--strategy-out", strategy_out, "write a Divider strategy tree when Divider wins within tau");
    solve->add_option("--export-table", table_out, "write the win table as CSV");
    solve->add_flag("--diagnostics", diagnostics, "include solver diagnostics");

    /* dnumber */
    Source dn_src;
    std::optional<int> max_k;
    auto *dnumber = app.add_subcommand("dnumber", "divider number and separator number");
    add_source(dnumber, dn_src, true);
    dnumber->add_option("--max-k", max_k, "largest k to try");
    dnumber->add_option("--budget", budget, "cap on positions");
    dnumber->add_option("--threads", threads, "worker threads");

    /* lambda */
    Source lam_src;
    auto *lam = app.add_subcommand("lambda", "minimum s-t vertex separator");
    add_source(lam, lam_src, true);

    /* classify */
    Source cls_src;
    auto *classify = app.add_subcommand("classify", "structural recognizers and decomposition");
    add_source(classify, cls_src, true);

    /* gen */
    std::string family, out;
    int p = 2, gen_k = 1;
    auto *gen = app.add_subcommand("gen", "generate an instance family");
    gen->add_option("family", family, "clique-spider or path-spider")
        ->required()
        ->check(CLI::IsMember({"clique-spider", "path-spider"}));
    gen->add_option("--p", p, "family parameter")->required();
    gen->add_option("--k", gen_k, "Divider agents");
    gen->add_option("--out", out, "output file");

    /* reduce */
    std::string source, input;
    auto *reduce = app.add_subcommand("reduce", "build a reduction instance");
    reduce->add_option("source", source, "set-cover, qbf or qbf-unbounded")
        ->required()
        ->check(CLI::IsMember({"set-cover", "qbf", "qbf-unbounded"}));
    reduce->add_option("--file", input, "input JSON file")->required();
    reduce->add_option("--out", out, "output file");

    /* verify */
    Source ver_src;
    std::string strategy;
    int ver_tau = 0;
    auto *verify = app.add_subcommand("verify", "check a Divider strategy tree");
    add_source(verify, ver_src, false);
    verify->add_option("--strategy", strategy, "strategy JSON file")->required();
    verify->add_option("--tau", ver_tau, "step bound, defaults to the instance");

    /* serve */
    std::string host = "127.0.0.1", log_dir;
    int port = 8080;
    auto *serve = app.add_subcommand("serve", "run the arena HTTP service");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--budget", budget, "cap on positions per session");
    serve->add_option("--log-dir", log_dir, "directory for session event logs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*solve) {
        Handle h;
        if (auto st = load(solve_src, h); st != RDV_OK) return report_failure(st);
        json opts{{"mode", mode}, {"budget", budget}, {"threads", threads}, {"diagnostics", diagnostics}};
        if (solve_tau) opts["tau"] = *solve_tau;
        if (!table_out.empty()) opts["export_table"] = table_out;
        Owned r;
        const rdv_status st = rdv_solve(h.p, opts.dump().c_str(), &r.p);
        if (st != RDV_OK) {
            if (r.p) std::cout << r.p << '\n';
            return report_failure(st);
        }
        std::cout << r.p << '\n';
        if (!strategy_out.empty()) {
            const json report = json::parse(r.p);
            if (report["facilitator_wins"].get<bool>()) {
                std::cerr << "no strategy written: Facilitator wins\n";
            } else {
                json eopts{{"budget", budget}};
                if (solve_tau) eopts["tau"] = *solve_tau;
                Owned tree;
                if (auto est = rdv_extract_strategy(h.p, eopts.dump().c_str(), &tree.p); est != RDV_OK)
                    return report_failure(est);
                if (!write_file(strategy_out, tree.p)) {
                    return report_failure(fail_local(RDV_ERR_IO, "cannot write " + strategy_out));
                }
            }
        }
        return 0;
    }
    if (*dnumber) {
        Handle h;
        if (auto st = load(dn_src, h); st != RDV_OK) return report_failure(st);
        json opts{{"budget", budget}, {"threads", threads}};
        if (max_k) opts["max_k"] = *max_k;
        Owned r;
        const rdv_status st = rdv_dnumber(h.p, opts.dump().c_str(), &r.p);
        if (r.p) std::cout << r.p << '\n';
        return st == RDV_OK ? 0 : report_failure(st);
    }
    if (*lam || *classify) {
        Handle h;
        if (auto st = load(*lam ? lam_src : cls_src, h); st != RDV_OK) return report_failure(st);
        Owned r;
        const rdv_status st = *lam ? rdv_lambda(h.p, &r.p) : rdv_classify(h.p, &r.p);
        if (st != RDV_OK) return report_failure(st);
        std::cout << r.p << '\n';
        return 0;
    }
    if (*gen) {
        Owned r;
        const json params{{"p", p}, {"k", gen_k}};
        if (auto st = rdv_generate(family.c_str(), params.dump().c_str(), &r.p); st != RDV_OK)
            return report_failure(st);
        return emit(r.p, out);
    }
    if (*reduce) {
        auto text = read_file(input);
        if (!text) {
            return report_failure(fail_local(RDV_ERR_IO, "cannot read " + input));
        }
        Owned r;
        if (auto st = rdv_reduce(source.c_str(), text->c_str(), &r.p); st != RDV_OK) return report_failure(st);
        return emit(r.p, out);
    }
    if (*verify) {
        Handle h;
        if (auto st = load(ver_src, h); st != RDV_OK) return report_failure(st);
        auto text = read_file(strategy);
        if (!text) {
            return report_failure(fail_local(RDV_ERR_IO, "cannot read " + strategy));
        }
        int valid = 0;
        Owned reason;
        if (auto st = rdv_verify_strategy(h.p, text->c_str(), ver_tau, &valid, &reason.p); st != RDV_OK)
            return report_failure(st);
        if (valid) {
            std::cout << "valid\n";
            return 0;
        }
        std::cout << "invalid: " << reason.p << '\n';
        return 1;
    }
    if (*serve) {
        const json opts{{"budget", budget}, {"log_dir", log_dir}};
        const rdv_status st = rdv_serve(host.c_str(), port, opts.dump().c_str());
        return st == RDV_OK ? 0 : report_failure(st);
    }
    return 1;
}
