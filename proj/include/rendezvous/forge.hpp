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
#include <string>
#include <vector>

#include <json.hpp>

#include "rendezvous/graph.hpp"

namespace rdv {

struct SetCoverInstance {
    int n = 0;                           // universe {0..n-1}
    std::vector<std::vector<int>> sets; // each nonempty, within the universe
    int k = 0;
};

struct Literal {
    int var = 1; // 1..2n
    bool neg = false;
};

/* forall x1 exists x2 ... exists x_{2n} [C_1 and ... and C_m] */
struct QbfFormula {
    int n = 1;
    std::vector<std::vector<Literal>> clauses;
};

/* throw Error(invalid_argument) on malformed input */
void validate(const SetCoverInstance &sc);
void validate(const QbfFormula &phi);

SetCoverInstance set_cover_from_json(const nlohmann::ordered_json &j);
nlohmann::ordered_json set_cover_to_json(const SetCoverInstance &sc);
QbfFormula qbf_from_json(const nlohmann::ordered_json &j);
nlohmann::ordered_json qbf_to_json(const QbfFormula &phi);

/*
 * Layouts: s=0, t=1, then u_1..u_p, x_1..x_p, y_1..y_p.
 * Edges: clique on u, s-x_i-u_i and t-y_i-u_i.
 */
Instance gen_clique_spider(int p, int k = 1);

/*
 * s=0, t=1, path u_1..u_p at 2..p+1, then per i the internal vertices of the
 * s-u_i path followed by those of the u_i-t path, each path of length floor(p/2)+1.
 */
Instance gen_path_spider(int p, int k = 1);

/*
 * s=0, t=1, z=2, u_1..u_n, x_1..x_n, x'_1..x'_n, then per copy i:
 * w_i, y_i, y'_i, s_1^(i)..s_m^(i). k' = k+1; meta carries horizon 2.
 */
Instance reduce_set_cover(const SetCoverInstance &sc);

/* k = 2n+2, tau = 2n+3; vertex names and path id sequences in layout */
Instance reduce_qbf(const QbfFormula &phi);

/* guard vertices and paths added to reduce_qbf; k' = 9n+m+4, no tau */
Instance reduce_qbf_unbounded(const QbfFormula &phi);

/* exhaustive over subfamilies; size_limit when more than 20 sets */
bool solve_set_cover_brute(const SetCoverInstance &sc);

/* minimax over assignments; size_limit when 2n > 16 */
bool evaluate_qbf_brute(const QbfFormula &phi);

/* G(n,p) conditioned on connectivity by rejection; deterministic per seed */
Graph random_connected_graph(int n, double edge_prob, std::uint64_t seed);

/* each new vertex attaches to a random clique of the current graph */
Graph random_chordal_graph(int n, std::uint64_t seed);

/* connected graphs on n <= 6 vertices up to isomorphism, canonical labelling */
std::vector<Graph> all_connected_graphs(int n);

} // namespace rdv
