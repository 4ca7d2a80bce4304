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

#include <unordered_map>

#include "rendezvous/game.hpp"
#include "moves_internal.hpp"

namespace rdv::detail {

/*
 * Depth-limited minimax from Facilitator-to-move positions, memoized on
 * (position, remaining steps).
 */
class BoundedSearch {
  public:
    BoundedSearch(const Graph &g, int k, int max_remaining, std::uint64_t budget);

    /* Facilitator to move at (f,d) meets within `remaining` moves against every reply sequence */
    bool wins(const FacPlacement &f, const DivPlacement &d, int remaining);

    std::uint64_t memo_size() const { return memo_.size(); }

  private:
    bool one_step(const FacPlacement &f, const DivPlacement &d) const;

    const Graph &g_;
    int k_;
    int max_remaining_;
    std::uint64_t budget_;
    MultisetRanker ranker_;
    std::uint64_t num_d_;
    std::unordered_map<std::uint64_t, bool> memo_;
};

} // namespace rdv::detail
