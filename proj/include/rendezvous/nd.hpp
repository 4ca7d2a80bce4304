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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rendezvous/graph.hpp"
#include "rendezvous/ilp.hpp"

namespace rdv {

enum class ModuleKind { clique, independent };

/* Twin classes of the graph; singleton modules are reported as cliques. */
struct NdDecomposition {
    std::vector<std::vector<Vertex>> modules;
    std::vector<ModuleKind> kind;
    std::vector<int> id; // vertex -> module
    Graph quotient;

    int module_count() const { return static_cast<int>(modules.size()); }
    int size(int m) const { return static_cast<int>(modules[m].size()); }
};

NdDecomposition neighborhood_decomposition(const Graph &g);

struct MoveTreeNode {
    int p = 0, q = 0; // module pair, p <= q
    int depth = 0;
    int parent = -1;
    std::vector<int> children;
};

/*
 * Module-level Facilitator trajectories. Node 0 is the root. Nodes with p == q
 * are kept as terminal children and never expanded.
 */
struct MoveTree {
    int tau = 0;
    std::vector<MoveTreeNode> nodes;
};

MoveTree build_move_tree(const NdDecomposition &nd, Vertex s, Vertex t, int tau,
                         std::uint64_t budget = 2'000'000);

struct CandidateNode {
    int tree_node = 0;
    int p = 0, q = 0;
    int depth = 0;
    int parent = -1;
    /* I_v as a module bitmask; empty at leaves */
    std::uint64_t blocked = 0;
    std::vector<int> children;
};

struct CandidateStrategy {
    std::vector<CandidateNode> nodes; // nodes[0] is the root; parents precede children
};

/*
 * Depth-first enumeration of projection-consistent subtrees with blocked sets.
 * A partition (index, count) restricts output to ordinals congruent to index mod count.
 */
class CandidateEnumerator {
  public:
    CandidateEnumerator(const MoveTree &tree, const NdDecomposition &nd, int k, std::uint64_t budget = 10'000'000,
                        int part_index = 0, int part_count = 1);
    bool next(CandidateStrategy &out);
    std::uint64_t produced() const { return ordinal_; }

    /* blocked-set choices for a non-leaf node label, in enumeration order */
    const std::vector<std::uint64_t> &options(int p, int q);

  private:
    bool advance();
    bool fill(std::size_t from, bool back);
    void expand(std::size_t i);

    const MoveTree &tree_;
    const NdDecomposition &nd_;
    int k_;
    std::uint64_t budget_;
    int part_index_, part_count_;
    std::uint64_t ordinal_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::vector<CandidateNode> nodes_;
    std::vector<int> choice_;
    std::vector<std::vector<std::uint64_t>> option_cache_;
    std::vector<char> option_ready_;
};

/* all candidates as a vector (tests and small trees) */
std::vector<CandidateStrategy> enumerate_candidates(const MoveTree &tree, const NdDecomposition &nd, int k,
                                                    std::uint64_t budget = 10'000'000);

bool projection_consistent(const CandidateStrategy &cand, const MoveTree &tree, const NdDecomposition &nd);

IlpSystem build_ilp(const CandidateStrategy &cand, const NdDecomposition &nd, int k);

struct NdOptions {
    std::uint64_t tree_budget = 2'000'000;
    std::uint64_t candidate_budget = 10'000'000;
    std::uint64_t ilp_node_budget = 1'000'000;
    int threads = 1;
};

struct NdResult {
    bool divider_wins = false;
    /* "adjacent-or-equal", "same-independent-module" or "ilp" */
    std::string path;
    std::uint64_t candidates_examined = 0;
    std::optional<CandidateStrategy> witness;
};

NdResult solve_nd(const Graph &g, Vertex s, Vertex t, int k, int tau, const NdOptions &opts = {});
bool divider_wins_in_time_nd(const Graph &g, Vertex s, Vertex t, int k, int tau, const NdOptions &opts = {});

nlohmann::json candidate_to_json(const CandidateStrategy &cand);
nlohmann::json nd_diagnostics(const NdResult &r);
nlohmann::json decomposition_to_json(const NdDecomposition &nd);

} // namespace rdv
