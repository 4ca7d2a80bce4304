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

#include "rendezvous/arena.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

namespace rdv {

using json = nlohmann::json;

json ArenaError::body() const
{
    json j{{"code", error_code_name(code())}, {"message", what()}};
    if (!legal_.is_null()) j["legalMoves"] = legal_;
    return j;
}

const char *to_string(Role r) { return r == Role::facilitator ? "Facilitator" : "Divider"; }

const char *to_string(GameStatus s)
{
    switch (s) {
    case GameStatus::in_progress: return "InProgress";
    case GameStatus::facilitator_won: return "FacilitatorWon";
    case GameStatus::divider_survived: return "DividerSurvived";
    }
    return "InProgress";
}

const char *to_string(Turn t)
{
    switch (t) {
    case Turn::placement: return "placement";
    case Turn::facilitator: return "facilitator";
    case Turn::divider: return "divider";
    case Turn::none: return "none";
    }
    return "none";
}

class GameSession {
  public:
    std::mutex mu;
    std::string id;
    Instance inst;
    std::shared_ptr<const WinTable> table;
    Role human = Role::facilitator;
    Turn turn = Turn::placement;
    GameStatus status = GameStatus::in_progress;
    FacPlacement f;
    DivPlacement d;
    int steps = 0;
    std::vector<json> events;
    std::string log_path;
};

namespace {

json level_json(std::optional<int> lv) { return lv ? json(*lv) : json("NotWinning"); }

json move_json(const AnnotatedMove &m, Turn turn)
{
    json j;
    if (const auto *f = std::get_if<FacPlacement>(&m.move))
        j["pair"] = {f->a, f->b};
    else if (turn == Turn::placement)
        j["vertices"] = std::get<DivPlacement>(m.move).agents;
    else
        j["agents"] = std::get<DivPlacement>(m.move).agents;
    j["level"] = level_json(m.level);
    return j;
}

std::vector<AnnotatedMove> ranked(const GameSession &s)
{
    if (s.status != GameStatus::in_progress || !s.table) return {};
    switch (s.turn) {
    case Turn::placement: return best_placements(*s.table, s.inst.s, s.inst.t);
    case Turn::facilitator: return best_moves(*s.table, Position{s.f, s.d, Side::facilitator});
    case Turn::divider: return best_moves(*s.table, Position{s.f, s.d, Side::divider});
    case Turn::none: break;
    }
    return {};
}

json legal_json(const GameSession &s)
{
    json out = json::array();
    const Graph &g = s.inst.graph;
    if (s.status != GameStatus::in_progress) return out;
    if (s.turn == Turn::placement)
        for (const auto &p : initial_placements(g, s.inst.k, FacPlacement(s.inst.s, s.inst.t)))
            out.push_back(json{{"vertices", p.agents}});
    else if (s.turn == Turn::facilitator)
        for (const auto &m : fac_moves(g, s.f, s.d)) out.push_back(json{{"pair", {m.a, m.b}}});
    else if (s.turn == Turn::divider)
        for (const auto &m : div_moves(g, s.d, s.f)) out.push_back(json{{"agents", m.agents}});
    return out;
}

json state_json(const GameSession &s)
{
    json j;
    j["id"] = s.id;
    j["humanRole"] = to_string(s.human);
    j["turn"] = to_string(s.turn);
    j["f"] = {s.f.a, s.f.b};
    j["d"] = s.d.agents;
    j["stepsUsed"] = s.steps;
    j["tau"] = s.inst.tau ? json(*s.inst.tau) : json(nullptr);
    j["status"] = to_string(s.status);
    json level = nullptr, annotation = nullptr;
    if (s.status == GameStatus::in_progress && s.table) {
        std::optional<int> lv;
        if (s.turn == Turn::facilitator) {
            lv = s.table->level(s.f, s.d);
        } else {
            auto moves = ranked(s);
            if (!moves.empty()) lv = moves.front().level;
        }
        level = level_json(lv);
        if (!lv && !s.inst.tau) annotation = "DividerWinsForever";
    }
    j["level"] = level;
    j["annotation"] = annotation;
    return j;
}

std::vector<Vertex> vertex_list(const json &v, const char *field)
{
    if (!v.is_array()) throw ArenaError(400, ErrorCode::parse, std::string("\"") + field + "\" must be an array");
    std::vector<Vertex> out;
    for (const auto &x : v) {
        if (!x.is_number_integer())
            throw ArenaError(400, ErrorCode::parse, std::string("\"") + field + "\" must hold vertex ids");
        out.push_back(x.get<Vertex>());
    }
    return out;
}

void record(GameSession &s, json event)
{
    if (!s.log_path.empty()) {
        std::ofstream out(s.log_path, std::ios::app);
        out << event.dump() << '\n';
    }
    s.events.push_back(std::move(event));
}

void finish_fac_move(GameSession &s)
{
    s.steps++;
    if (s.f.meets()) {
        s.status = GameStatus::facilitator_won;
        s.turn = Turn::none;
    } else if (s.inst.tau && s.steps >= *s.inst.tau) {
        s.status = GameStatus::divider_survived;
        s.turn = Turn::none;
    } else {
        s.turn = Turn::divider;
    }
}

void apply_placement(GameSession &s, const std::vector<Vertex> &vertices, const char *by)
{
    if (s.status != GameStatus::in_progress || s.turn != Turn::placement)
        throw ArenaError(409, ErrorCode::contract, "no placement expected now", legal_json(s));
    DivPlacement p(vertices);
    const auto legal = initial_placements(s.inst.graph, s.inst.k, FacPlacement(s.inst.s, s.inst.t));
    if (!std::binary_search(legal.begin(), legal.end(), p))
        throw ArenaError(409, ErrorCode::contract, "illegal placement", legal_json(s));
    s.d = std::move(p);
    s.turn = Turn::facilitator;
    record(s, json{{"type", "placement"}, {"by", by}, {"vertices", s.d.agents}});
}

void apply_fac(GameSession &s, const FacPlacement &m, const char *by)
{
    if (s.status != GameStatus::in_progress || s.turn != Turn::facilitator)
        throw ArenaError(409, ErrorCode::contract, "not Facilitator's turn", legal_json(s));
    const auto legal = fac_moves(s.inst.graph, s.f, s.d);
    if (!std::binary_search(legal.begin(), legal.end(), m))
        throw ArenaError(409, ErrorCode::contract, "illegal Facilitator move", legal_json(s));
    s.f = m;
    record(s, json{{"type", "move"}, {"by", by}, {"pair", {m.a, m.b}}});
    finish_fac_move(s);
}

void apply_div(GameSession &s, const DivPlacement &m, const char *by)
{
    if (s.status != GameStatus::in_progress || s.turn != Turn::divider)
        throw ArenaError(409, ErrorCode::contract, "not Divider's turn", legal_json(s));
    const auto legal = div_moves(s.inst.graph, s.d, s.f);
    if (!std::binary_search(legal.begin(), legal.end(), m))
        throw ArenaError(409, ErrorCode::contract, "illegal Divider move", legal_json(s));
    s.d = m;
    s.turn = Turn::facilitator;
    record(s, json{{"type", "move"}, {"by", by}, {"agents", m.agents}});
}

bool human_to_move(const GameSession &s)
{
    if (s.turn == Turn::facilitator) return s.human == Role::facilitator;
    if (s.turn == Turn::placement || s.turn == Turn::divider) return s.human == Role::divider;
    return true;
}

/* engine plays its top-ranked option until the human is to move or the game ends */
void engine_play(GameSession &s)
{
    while (s.status == GameStatus::in_progress && !human_to_move(s)) {
        auto moves = ranked(s);
        if (moves.empty()) throw Error(ErrorCode::contract, "engine has no legal move");
        const auto &top = moves.front().move;
        if (s.turn == Turn::facilitator)
            apply_fac(s, std::get<FacPlacement>(top), "engine");
        else if (s.turn == Turn::placement)
            apply_placement(s, std::get<DivPlacement>(top).agents, "engine");
        else
            apply_div(s, std::get<DivPlacement>(top), "engine");
    }
}

Role parse_role(const json &v)
{
    if (v.is_string()) {
        std::string r = v.get<std::string>();
        std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::tolower(c); });
        if (r == "facilitator") return Role::facilitator;
        if (r == "divider") return Role::divider;
    }
    throw ArenaError(400, ErrorCode::parse, "humanRole must be \"Facilitator\" or \"Divider\"");
}

/* build an unstarted session: instance, role, table */
std::shared_ptr<GameSession> open_session(const json &body, const ArenaOptions &opts, WinTableCache &cache)
{
    if (!body.is_object() || !body.contains("instance"))
        throw ArenaError(400, ErrorCode::parse, "request needs an \"instance\" object");
    if (!body.contains("humanRole")) throw ArenaError(400, ErrorCode::parse, "request needs \"humanRole\"");
    auto s = std::make_shared<GameSession>();
    try {
        s->inst = instance_from_json(nlohmann::ordered_json::parse(body["instance"].dump()));
    } catch (const Error &e) {
        throw ArenaError(400, e.code(), e.what());
    }
    s->human = parse_role(body["humanRole"]);
    s->f = FacPlacement(s->inst.s, s->inst.t);
    if (s->f.meets()) {
        s->status = GameStatus::facilitator_won;
        s->turn = Turn::none;
        return s;
    }
    const int n = s->inst.graph.vertex_count();
    const std::uint64_t estimate = position_count_estimate(n, s->inst.k);
    if (estimate > opts.budget) {
        std::ostringstream msg;
        msg << "position space estimate " << estimate << " exceeds budget " << opts.budget;
        throw ArenaError(422, ErrorCode::budget_exceeded, msg.str());
    }
    SolveOptions so;
    so.budget = opts.budget;
    so.threads = opts.threads;
    try {
        s->table = cache.get(s->inst.graph, s->inst.k, so);
    } catch (const BudgetExceeded &e) {
        throw ArenaError(422, ErrorCode::budget_exceeded, e.what());
    }
    return s;
}

} // namespace

GameService::GameService(ArenaOptions opts) : opts_(std::move(opts)) {}
GameService::~GameService() = default;

std::string GameService::next_id()
{
    std::unique_lock lock(mu_);
    counter_++;
    if (opts_.sequential_ids) return "g" + std::to_string(counter_);
    static thread_local std::mt19937_64 rng(std::random_device{}());
    std::ostringstream out;
    out << std::hex << rng();
    return out.str();
}

json GameService::create(const json &body)
{
    auto s = open_session(body, opts_, cache_);
    s->id = next_id();
    if (!opts_.log_dir.empty()) s->log_path = opts_.log_dir + "/" + s->id + ".jsonl";
    std::lock_guard lock(s->mu);
    record(*s, json{{"type", "create"}, {"instance", body["instance"]}, {"humanRole", to_string(s->human)}});
    engine_play(*s);
    {
        std::unique_lock map_lock(mu_);
        sessions_[s->id] = s;
    }
    return json{{"id", s->id}, {"state", state_json(*s)}};
}

std::shared_ptr<GameSession> GameService::find(const std::string &id) const
{
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ArenaError(404, ErrorCode::invalid_argument, "no session " + id);
    return it->second;
}

json GameService::state(const std::string &id)
{
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return state_json(*s);
}

json GameService::placement(const std::string &id, const json &body)
{
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (!body.is_object() || !body.contains("vertices"))
        throw ArenaError(400, ErrorCode::parse, "placement needs \"vertices\"");
    auto vertices = vertex_list(body["vertices"], "vertices");
    if (s->human != Role::divider) throw ArenaError(409, ErrorCode::contract, "the engine places Divider's agents");
    apply_placement(*s, vertices, "human");
    engine_play(*s);
    return state_json(*s);
}

json GameService::move(const std::string &id, const json &body)
{
    auto s = find(id);
    std::lock_guard lock(s->mu);
    if (!body.is_object()) throw ArenaError(400, ErrorCode::parse, "move must be a JSON object");
    if (s->status != GameStatus::in_progress) throw ArenaError(409, ErrorCode::contract, "game is over", json::array());
    if (!human_to_move(*s)) throw ArenaError(409, ErrorCode::contract, "not the human's turn", legal_json(*s));
    if (s->turn == Turn::placement)
        throw ArenaError(409, ErrorCode::contract, "submit the opening placement first", legal_json(*s));
    if (s->turn == Turn::facilitator) {
        if (!body.contains("pair")) throw ArenaError(400, ErrorCode::parse, "Facilitator move needs \"pair\"");
        auto pair = vertex_list(body["pair"], "pair");
        if (pair.size() != 2) throw ArenaError(400, ErrorCode::parse, "\"pair\" must hold two vertex ids");
        apply_fac(*s, FacPlacement(pair[0], pair[1]), "human");
    } else {
        if (!body.contains("agents")) throw ArenaError(400, ErrorCode::parse, "Divider move needs \"agents\"");
        apply_div(*s, DivPlacement(vertex_list(body["agents"], "agents")), "human");
    }
    engine_play(*s);
    return state_json(*s);
}

json GameService::hints(const std::string &id)
{
    auto s = find(id);
    std::lock_guard lock(s->mu);
    json moves = json::array();
    for (const auto &m : ranked(*s)) moves.push_back(move_json(m, s->turn));
    return json{{"turn", to_string(s->turn)}, {"moves", std::move(moves)}};
}

void GameService::remove(const std::string &id)
{
    std::unique_lock lock(mu_);
    if (sessions_.erase(id) == 0) throw ArenaError(404, ErrorCode::invalid_argument, "no session " + id);
}

std::vector<json> GameService::events(const std::string &id)
{
    auto s = find(id);
    std::lock_guard lock(s->mu);
    return s->events;
}

json GameService::replay(const std::vector<json> &events)
{
    if (events.empty() || events.front().value("type", "") != "create")
        throw ArenaError(400, ErrorCode::parse, "event log must start with a create event");
    auto s = open_session(events.front(), opts_, cache_);
    s->id = "replay";
    for (std::size_t i = 1; i < events.size(); i++) {
        const json &e = events[i];
        const std::string by = e.value("by", "human");
        const char *who = by == "engine" ? "engine" : "human";
        const std::string type = e.value("type", "");
        if (type == "placement")
            apply_placement(*s, vertex_list(e.at("vertices"), "vertices"), who);
        else if (type == "move" && e.contains("pair")) {
            auto p = vertex_list(e["pair"], "pair");
            if (p.size() != 2) throw ArenaError(400, ErrorCode::parse, "\"pair\" must hold two vertex ids");
            apply_fac(*s, FacPlacement(p[0], p[1]), who);
        } else if (type == "move" && e.contains("agents"))
            apply_div(*s, DivPlacement(vertex_list(e["agents"], "agents")), who);
        else
            throw ArenaError(400, ErrorCode::parse, "unknown event at index " + std::to_string(i));
    }
    return state_json(*s);
}

std::size_t GameService::session_count() const
{
    std::shared_lock lock(mu_);
    return sessions_.size();
}

} // namespace rdv
