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
#include <vector>

#include "rendezvous/graph.hpp"

namespace rdv::detail {

/* every sorted multiset adjacent to d (d included) */
std::vector<std::vector<Vertex>> adjacent_multisets(const Graph &g, const std::vector<Vertex> &d);

/*
 * Colex ranking of sorted k-multisets over n symbols: c_i = d_i + i is a k-subset of
 * {0..n+k-2}, rank = sum C(c_i, i+1).
 */
class MultisetRanker {
  public:
    MultisetRanker(int n, int k) : n_(n), k_(k), binom_(n + k + 1, std::vector<std::uint64_t>(k + 2, 0))
    {
        for (int a = 0; a <= n + k; a++) {
            binom_[a][0] = 1;
            for (int b = 1; b <= k + 1 && b <= a; b++) {
                std::uint64_t x = binom_[a - 1][b - 1], y = binom_[a - 1][b];
                binom_[a][b] = (x > UINT64_MAX - y) ? UINT64_MAX : x + y;
            }
        }
    }

    std::uint64_t count() const { return binom_[n_ + k_ - 1][k_]; }

    template <class It> std::uint64_t rank(It first) const
    {
        std::uint64_t r = 0;
        for (int i = 0; i < k_; i++, ++first) r += binom_[*first + i][i + 1];
        return r;
    }

  private:
    int n_, k_;
    std::vector<std::vector<std::uint64_t>> binom_;
};

} // namespace rdv::detail
