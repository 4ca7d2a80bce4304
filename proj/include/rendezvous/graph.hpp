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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rendezvous/common.hpp"

namespace rdv {

using Edge = std::pair<Vertex, Vertex>;

/*
 * Immutable simple undirected graph on 0..n-1.
 * Keeps an adjacency matrix and sorted adjacency lists.
 */
class Graph {
  public:
    Graph() = default;
    /* throws Error(invalid_graph) on self-loops, duplicates, out-of-range ids */
    Graph(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge> &edges() const { return edges_; }

    bool adjacent(Vertex u, Vertex v) const { return adj_[static_cast<std::size_t>(u) * n_ + v] != 0; }
    std::span<const Vertex> neighbors(Vertex v) const { return nbrs_[v]; }
    std::span<const Vertex> closed_neighbors(Vertex v) const { return closed_[v]; }
    int degree(Vertex v) const { return static_cast<int>(nbrs_[v].size()); }

    bool is_connected() const;
    bool contains(Vertex v) const { return v >= 0 && v < n_; }

    Graph induced(const std::vector<Vertex> &keep) const;
    /* relabel: vertex v becomes perm[v] */
    Graph permuted(const std::vector<Vertex> &perm) const;

    friend bool operator==(const Graph &a, const Graph &b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<unsigned char> adj_;
    std::vector<std::vector<Vertex>> nbrs_;
    std::vector<std::vector<Vertex>> closed_;
};

struct Instance {
    Graph graph;
    Vertex s = 0;
    Vertex t = 0;
    int k = 1;
    std::optional<int> tau;
    /* generator metadata, carried through serialization untouched */
    nlohmann::ordered_json layout;
    nlohmann::ordered_json meta;
};

/* Strict parse of the instance JSON format. Rejects disconnected graphs with ErrorCode::disconnected. */
Instance parse_instance(const std::string &text);
Instance instance_from_json(const nlohmann::ordered_json &j);
nlohmann::ordered_json instance_to_json(const Instance &inst);
std::string serialize_instance(const Instance &inst);

/* Parses only the "n"/"edges" part of a document; other keys are ignored. */
Graph parse_graph(const std::string &text, bool require_connected = true);
Graph graph_from_json(const nlohmann::ordered_json &j, bool require_connected = true);

struct SeparatorResult {
    ExtCount value;
    std::vector<Vertex> witness;
};

SeparatorResult lambda(const Graph &g, Vertex s, Vertex t);

/* BFS distance in g minus `removed`. */
ExtCount distance(const Graph &g, const std::vector<Vertex> &removed, Vertex u, Vertex v);

struct ChordalityResult {
    bool chordal = false;
    /* perfect elimination ordering, first vertex eliminated first */
    std::vector<Vertex> peo;
};

ChordalityResult is_chordal(const Graph &g);
bool is_perfect_elimination_ordering(const Graph &g, const std::vector<Vertex> &order);
bool is_p5_free(const Graph &g);

} // namespace rdv
