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

#include <httplib.h>

#include "rendezvous/arena.hpp"

namespace rdv {

using json = nlohmann::json;

struct ArenaServer::Impl {
    GameService &service;
    httplib::Server server;

    explicit Impl(GameService &svc) : service(svc) {}

    template <typename Fn> void handle(const httplib::Request &req, httplib::Response &res, Fn &&fn, int ok = 200)
    {
        auto send = [&](int status, const json &body) {
            res.status = status;
            res.set_content(body.dump(), "application/json");
        };
        try {
            json body;
            if (!req.body.empty()) {
                try {
                    body = json::parse(req.body);
                } catch (const json::exception &) {
                    throw ArenaError(400, ErrorCode::parse, "request body is not valid JSON");
                }
            }
            send(ok, fn(body));
        } catch (const ArenaError &e) {
            send(e.status(), e.body());
        } catch (const BudgetExceeded &e) {
            send(422, json{{"code", error_code_name(e.code())}, {"message", e.what()}});
        } catch (const Error &e) {
            send(400, json{{"code", error_code_name(e.code())}, {"message", e.what()}});
        } catch (const std::exception &e) {
            send(500, json{{"code", "internal"}, {"message", e.what()}});
        }
    }

    void mount()
    {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
        server.Options(R"(/v1/.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });
        server.Post("/v1/games", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &body) { return service.create(body); }, 201);
        });
        server.Get("/v1/games/:id", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &) { return service.state(req.path_params.at("id")); });
        });
        server.Delete("/v1/games/:id", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &) {
                service.remove(req.path_params.at("id"));
                return json{{"deleted", req.path_params.at("id")}};
            });
        });
        server.Post("/v1/games/:id/placement", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &body) { return service.placement(req.path_params.at("id"), body); });
        });
        server.Post("/v1/games/:id/move", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &body) { return service.move(req.path_params.at("id"), body); });
        });
        server.Get("/v1/games/:id/hints", [this](const httplib::Request &req, httplib::Response &res) {
            handle(req, res, [&](const json &) { return service.hints(req.path_params.at("id")); });
        });
    }
};

ArenaServer::ArenaServer(GameService &service) : impl_(std::make_unique<Impl>(service)) { impl_->mount(); }
ArenaServer::~ArenaServer() = default;

int ArenaServer::bind(const std::string &host, int port)
{
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ArenaServer::listen() { return impl_->server.listen_after_bind(); }

void ArenaServer::stop() { impl_->server.stop(); }

} // namespace rdv
