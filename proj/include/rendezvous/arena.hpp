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

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "rendezvous/game.hpp"

namespace rdv {

struct ArenaOptions {
    std::uint64_t budget = 5'000'000;
    int threads = 1;
    /* directory for per-session JSON-lines event logs; empty disables logging */
    std::string log_dir;
    /* test hook: fixed session ids g1, g2, ... instead of random tokens */
    bool sequential_ids = false;
};

/* Error with an HTTP status and optional list of legal moves. */
class ArenaError : public Error {
  public:
    ArenaError(int status, ErrorCode code, const std::string &message, nlohmann::json legal = nullptr)
        : Error(code, message), status_(status), legal_(std::move(legal))
    {
    }
    int status() const { return status_; }
    const nlohmann::json &legal_moves() const { return legal_; }
    nlohmann::json body() const;

  private:
    int status_;
    nlohmann::json legal_;
};

enum class Role { facilitator, divider };
enum class GameStatus { in_progress, facilitator_won, divider_survived };
enum class Turn { placement, facilitator, divider, none };

const char *to_string(Role r);
const char *to_string(GameStatus s);
const char *to_string(Turn t);

class GameSession;

/*
 * In-memory game sessions. Each session is serialized by its own mutex;
 * win tables are shared through a cache.
 */
class GameService {
  public:
    explicit GameService(ArenaOptions opts = {});
    ~GameService();

    /* body: {instance, humanRole}; returns {id, state} */
    nlohmann::json create(const nlohmann::json &body);
    nlohmann::json state(const std::string &id);
    /* body: {vertices:[...]} */
    nlohmann::json placement(const std::string &id, const nlohmann::json &body);
    /* body: {pair:[a,b]} or {agents:[...]} */
    nlohmann::json move(const std::string &id, const nlohmann::json &body);
    nlohmann::json hints(const std::string &id);
    void remove(const std::string &id);

    std::vector<nlohmann::json> events(const std::string &id);
    /* rebuild a session from its event log without engine play; returns its state */
    nlohmann::json replay(const std::vector<nlohmann::json> &events);

    std::size_t session_count() const;

  private:
    std::shared_ptr<GameSession> find(const std::string &id) const;
    std::string next_id();

    ArenaOptions opts_;
    WinTableCache cache_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<GameSession>> sessions_;
    std::uint64_t counter_ = 0;
};

/* HTTP front end over a GameService. */
class ArenaServer {
  public:
    explicit ArenaServer(GameService &service);
    ~ArenaServer();
    /* binds host:port (port 0 picks a free port) and returns the bound port, or -1 */
    int bind(const std::string &host, int port);
    /* blocks until stop() */
    bool listen();
    void stop();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace rdv
