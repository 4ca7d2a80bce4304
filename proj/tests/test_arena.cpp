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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "rendezvous/arena.hpp"
#include "rendezvous/forge.hpp"
#include "rendezvous/structural.hpp"

using namespace rdv;
using json = nlohmann::json;

namespace {

json instance_json(const Instance &inst) { return json::parse(serialize_instance(inst)); }

json p3_json(int k = 1)
{
    return json{{"n", 3}, {"edges", {{0, 1}, {1, 2}}}, {"s", 0}, {"t", 2}, {"k", k}};
}

json create(GameService &svc, const json &inst, const char *role)
{
    return svc.create(json{{"instance", inst}, {"humanRole", role}});
}

int status_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const ArenaError &e) {
        return e.status();
    }
    return 200;
}

FacPlacement fac_of(const json &state) { return FacPlacement(state["f"][0], state["f"][1]); }
DivPlacement div_of(const json &state) { return DivPlacement(state["d"].get<std::vector<Vertex>>()); }

json strip_id(json state)
{
    state.erase("id");
    return state;
}

} // namespace

TEST_CASE("P3 with a human Divider awaits the only legal placement")
{
    GameService svc({.sequential_ids = true});
    const auto created = create(svc, p3_json(), "Divider");
    CHECK(created["id"] == "g1");
    CHECK(created["state"]["turn"] == "placement");
    CHECK(created["state"]["status"] == "InProgress");
    try {
        svc.placement("g1", json{{"vertices", {0}}});
        FAIL("placement on s accepted");
    } catch (const ArenaError &e) {
        CHECK(e.status() == 409);
        CHECK(e.legal_moves() == json::array({json{{"vertices", {1}}}}));
    }
    const auto st = svc.placement("g1", json{{"vertices", {1}}});
    CHECK(st["turn"] == "divider");
    CHECK(st["status"] == "InProgress");
    CHECK(st["level"] == "NotWinning");
    CHECK(st["annotation"] == "DividerWinsForever");
}

TEST_CASE("P3 with a human Facilitator never reaches a winning level")
{
    GameService svc;
    auto st = create(svc, p3_json(), "Facilitator")["state"];
    const std::string id = st["id"];
    const Graph g(3, {{0, 1}, {1, 2}});
    std::mt19937_64 rng(3);
    for (int turn = 0; turn < 30; turn++) {
        CHECK(st["turn"] == "facilitator");
        CHECK(st["level"] == "NotWinning");
        CHECK(st["annotation"] == "DividerWinsForever");
        const auto moves = fac_moves(g, fac_of(st), div_of(st));
        REQUIRE_FALSE(moves.empty());
        const auto m = moves[rng() % moves.size()];
        st = svc.move(id, json{{"pair", {m.a, m.b}}});
        CHECK(st["status"] == "InProgress");
    }
}

TEST_CASE("sessions starting with s equal to t are already won")
{
    GameService svc;
    auto inst = p3_json();
    inst["t"] = 0;
    const auto st = create(svc, inst, "Facilitator")["state"];
    CHECK(st["status"] == "FacilitatorWon");
    CHECK(st["turn"] == "none");
    CHECK(st["level"].is_null());
    CHECK(svc.hints(st["id"])["moves"].empty());
    CHECK(status_of([&] { svc.move(st["id"], json{{"pair", {0, 0}}}); }) == 409);
}

TEST_CASE("clique spider with two agents: engine Divider survives scripted play")
{
    const auto inst = gen_clique_spider(3, 2);
    const Graph &g = inst.graph;
    GameService svc;
    auto st = create(svc, instance_json(inst), "Facilitator")["state"];
    const std::string id = st["id"];
    /* both agents go to the clique */
    for (Vertex v : div_of(st).agents) CHECK(inst.layout["names"][v].get<std::string>()[0] == 'u');
    std::mt19937_64 rng(11);
    for (int turn = 0; turn < 20; turn++) {
        REQUIRE(st["status"] == "InProgress");
        const auto moves = fac_moves(g, fac_of(st), div_of(st));
        const auto m = moves[rng() % moves.size()];
        st = svc.move(id, json{{"pair", {m.a, m.b}}});
    }
    CHECK(st["status"] == "InProgress");
    /* hint-following Facilitator also fails */
    for (int turn = 0; turn < 20; turn++) {
        const auto h = svc.hints(id);
        st = svc.move(id, json{{"pair", h["moves"][0]["pair"]}});
    }
    CHECK(st["status"] == "InProgress");
}

TEST_CASE("clique spider with one agent: hint-following Facilitator wins")
{
    const auto inst = gen_clique_spider(3, 1);
    GameService svc;
    auto st = create(svc, instance_json(inst), "Facilitator")["state"];
    const std::string id = st["id"];
    REQUIRE(st["level"].is_number_integer());
    int previous = st["level"];
    for (int turn = 0; turn < 20 && st["status"] == "InProgress"; turn++) {
        const auto h = svc.hints(id);
        CHECK(h["turn"] == "facilitator");
        /* a level-l position has a move of worst-case level l-1 */
        CHECK(h["moves"][0]["level"] == previous - 1);
        st = svc.move(id, json{{"pair", h["moves"][0]["pair"]}});
        if (st["status"] == "InProgress") {
            CHECK(st["level"].get<int>() <= previous - 1);
            previous = st["level"];
        }
    }
    CHECK(st["status"] == "FacilitatorWon");
    CHECK(svc.hints(id)["moves"].empty());
}

TEST_CASE("Divider hints on the clique spider open in the clique")
{
    const auto inst = gen_clique_spider(3, 2);
    GameService svc;
    const std::string id = create(svc, instance_json(inst), "Divider")["id"];
    const auto h = svc.hints(id);
    CHECK(h["turn"] == "placement");
    REQUIRE_FALSE(h["moves"].empty());
    CHECK(h["moves"][0]["level"] == "NotWinning");
    for (int v : h["moves"][0]["vertices"]) CHECK(inst.layout["names"][v].get<std::string>()[0] == 'u');
}

TEST_CASE("moving onto a Divider agent is rejected with the legal moves")
{
    GameService svc;
    const auto st = create(svc, p3_json(), "Facilitator")["state"];
    const std::string id = st["id"];
    try {
        svc.move(id, json{{"pair", {1, 2}}});
        FAIL("illegal move accepted");
    } catch (const ArenaError &e) {
        CHECK(e.status() == 409);
        CHECK(e.body()["code"].is_string());
        CHECK(e.body()["legalMoves"] == json::array({json{{"pair", {0, 2}}}}));
    }
    CHECK(svc.state(id) == st);
    CHECK(status_of([&] { svc.move(id, json{{"agents", {1}}}); }) == 400);
    CHECK(status_of([&] { svc.move(id, json{{"pair", {0}}}); }) == 400);
    CHECK(status_of([&] { svc.move(id, json{{"pair", {0, 99}}}); }) == 409);
    CHECK(status_of([&] { svc.placement(id, json{{"vertices", {1}}}); }) == 409);
    CHECK(status_of([&] { svc.state("nope"); }) == 404);
    CHECK(status_of([&] { svc.move("nope", json{{"pair", {0, 2}}}); }) == 404);
    CHECK(status_of([&] { svc.hints("nope"); }) == 404);
    CHECK(status_of([&] { create(svc, json{{"n", 2}}, "Divider"); }) == 400);
    CHECK(status_of([&] { create(svc, p3_json(), "Referee"); }) == 400);
    CHECK(status_of([&] { svc.create(json{{"humanRole", "Divider"}}); }) == 400);
    svc.remove(id);
    CHECK(status_of([&] { svc.remove(id); }) == 404);
    CHECK(svc.session_count() == 0);
}

TEST_CASE("budget exhaustion is reported as 422")
{
    GameService svc({.budget = 10});
    CHECK(status_of([&] { create(svc, instance_json(gen_clique_spider(3, 2)), "Facilitator"); }) == 422);
}

TEST_CASE("bounded sessions end when the horizon runs out")
{
    auto inst = instance_json(gen_clique_spider(3, 2));
    inst["tau"] = 2;
    GameService svc;
    auto st = create(svc, inst, "Facilitator")["state"];
    CHECK(st["tau"] == 2);
    CHECK(st["annotation"].is_null());
    const std::string id = st["id"];
    for (int turn = 0; turn < 2; turn++) st = svc.move(id, json{{"pair", st["f"]}});
    CHECK(st["status"] == "DividerSurvived");
    CHECK(st["stepsUsed"] == 2);
    CHECK(status_of([&] { svc.move(id, json{{"pair", st["f"]}}); }) == 409);
}

TEST_CASE("event replay reproduces the live state")
{
    const auto log_dir = std::filesystem::temp_directory_path() / "rdv_arena_test_logs";
    std::filesystem::remove_all(log_dir);
    std::filesystem::create_directories(log_dir);
    GameService svc({.log_dir = log_dir.string()});
    std::mt19937_64 rng(8);
    for (const char *role : {"Facilitator", "Divider"}) {
        const auto inst = gen_clique_spider(2, 1);
        auto st = create(svc, instance_json(inst), role)["state"];
        const std::string id = st["id"];
        if (st["turn"] == "placement") st = svc.placement(id, svc.hints(id)["moves"].back());
        for (int turn = 0; turn < 12 && st["status"] == "InProgress"; turn++) {
            if (st["turn"] == "facilitator") {
                const auto moves = fac_moves(inst.graph, fac_of(st), div_of(st));
                const auto m = moves[rng() % moves.size()];
                st = svc.move(id, json{{"pair", {m.a, m.b}}});
            } else {
                const auto moves = div_moves(inst.graph, div_of(st), fac_of(st));
                st = svc.move(id, json{{"agents", moves[rng() % moves.size()].agents}});
            }
            CHECK(strip_id(svc.replay(svc.events(id))) == strip_id(st));
        }
        std::vector<json> from_disk;
        std::ifstream in(log_dir / (id + ".jsonl"));
        for (std::string line; std::getline(in, line);) from_disk.push_back(json::parse(line));
        CHECK(from_disk == svc.events(id));
        CHECK(strip_id(svc.replay(from_disk)) == strip_id(svc.state(id)));
    }
    std::filesystem::remove_all(log_dir);
}

TEST_CASE("fuzzed submissions are rejected or legal")
{
    const auto inst = gen_clique_spider(3, 2);
    const Graph &g = inst.graph;
    const int n = g.vertex_count();
    GameService svc;
    std::mt19937_64 rng(99);
    int accepted = 0, rejected = 0;
    for (const char *role : {"Facilitator", "Divider"}) {
        std::string id = create(svc, instance_json(inst), role)["id"];
        for (int step = 0; step < 500; step++) {
            const auto before = svc.state(id);
            if (before["status"] != "InProgress") break;
            const Vertex a = rng() % (n + 1), b = rng() % (n + 1);
            json body;
            bool legal = false;
            try {
                if (before["turn"] == "placement") {
                    body = json{{"vertices", {a, b}}};
                    const auto opts = initial_placements(g, 2, FacPlacement(inst.s, inst.t));
                    legal = a < n && b < n &&
                            std::binary_search(opts.begin(), opts.end(), DivPlacement(std::vector<Vertex>{a, b}));
                    svc.placement(id, body);
                } else if (before["turn"] == "facilitator") {
                    body = json{{"pair", {a, b}}};
                    const auto opts = fac_moves(g, fac_of(before), div_of(before));
                    legal = a < n && b < n && std::binary_search(opts.begin(), opts.end(), FacPlacement(a, b));
                    svc.move(id, body);
                } else {
                    body = json{{"agents", {a, b}}};
                    const auto opts = div_moves(g, div_of(before), fac_of(before));
                    legal = a < n && b < n &&
                            std::binary_search(opts.begin(), opts.end(), DivPlacement(std::vector<Vertex>{a, b}));
                    svc.move(id, body);
                }
                CHECK(legal);
                accepted++;
            } catch (const ArenaError &e) {
                CHECK_FALSE(legal);
                CHECK((e.status() == 409 || e.status() == 400));
                CHECK(svc.state(id) == before);
                rejected++;
            }
        }
    }
    CHECK(accepted > 0);
    CHECK(rejected > 0);
}

TEST_CASE("engine Divider is never beaten when it has enough agents")
{
    GameService svc;
    std::mt19937_64 rng(2026);
    int games = 0;
    for (std::uint64_t seed = 0; seed < 40; seed++) {
        const int n = 6 + static_cast<int>(seed % 5);
        const Graph g = random_connected_graph(n, 0.35, seed);
        if (g.adjacent(0, n - 1)) continue;
        const auto d = divider_number_auto(g, 0, n - 1).value;
        if (d.is_infinite() || d.value() > 2) continue;
        const int k = static_cast<int>(d.value());
        const Instance inst{g, 0, static_cast<Vertex>(n - 1), k, {}, nullptr, nullptr};
        auto st = create(svc, instance_json(inst), "Facilitator")["state"];
        const std::string id = st["id"];
        for (int turn = 0; turn < 25; turn++) {
            REQUIRE(st["status"] == "InProgress");
            CHECK(st["level"] == "NotWinning");
            const auto moves = fac_moves(g, fac_of(st), div_of(st));
            const auto m = moves[rng() % moves.size()];
            st = svc.move(id, json{{"pair", {m.a, m.b}}});
        }
        svc.remove(id);
        games++;
    }
    CHECK(games >= 10);
}

TEST_CASE("concurrent sessions do not interfere")
{
    GameService svc;
    const auto inst = gen_clique_spider(2, 1);
    const int threads = 4, per_thread = 6;
    std::vector<std::vector<json>> finals(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; w++)
        pool.emplace_back([&, w] {
            for (int i = 0; i < per_thread; i++) {
                auto st = create(svc, instance_json(inst), "Facilitator")["state"];
                const std::string id = st["id"];
                for (int turn = 0; turn < 10 && st["status"] == "InProgress"; turn++)
                    st = svc.move(id, json{{"pair", svc.hints(id)["moves"][0]["pair"]}});
                finals[w].push_back(strip_id(st));
            }
        });
    for (auto &t : pool) t.join();
    CHECK(svc.session_count() == static_cast<std::size_t>(threads * per_thread));
    for (const auto &list : finals)
        for (const auto &st : list) {
            CHECK(st == finals[0][0]);
            CHECK(st["status"] == "FacilitatorWon");
        }
}

TEST_CASE("HTTP round trip")
{
    GameService svc({.sequential_ids = true});
    ArenaServer server(svc);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });
    httplib::Client cli("127.0.0.1", port);

    auto res = cli.Post("/v1/games", json{{"instance", p3_json()}, {"humanRole", "Facilitator"}}.dump(),
                        "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto created = json::parse(res->body);
    const std::string id = created["id"];

    res = cli.Get("/v1/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body) == created["state"]);

    res = cli.Get("/v1/games/" + id + "/hints");
    REQUIRE(res);
    CHECK(json::parse(res->body)["moves"].size() == 1);

    res = cli.Post("/v1/games/" + id + "/move", R"({"pair":[1,2]})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 409);
    CHECK(json::parse(res->body)["legalMoves"].size() == 1);

    res = cli.Post("/v1/games/" + id + "/move", R"({"pair":[0,2]})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["turn"] == "facilitator");

    res = cli.Post("/v1/games/" + id + "/move", "{not json", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    res = cli.Post("/v1/games", json{{"instance", instance_json(gen_clique_spider(4, 3))}, {"humanRole", "Divider"}}.dump(),
                   "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);

    res = cli.Options("/v1/games");
    REQUIRE(res);
    CHECK(res->status == 204);

    res = cli.Delete("/v1/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 200);
    res = cli.Get("/v1/games/" + id);
    REQUIRE(res);
    CHECK(res->status == 404);
    CHECK(json::parse(res->body)["code"].is_string());

    server.stop();
    loop.join();
}
