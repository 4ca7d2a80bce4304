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

#include "rendezvous/common.hpp"

#include <limits>

namespace rdv {

const char *error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::parse: return "parse-error";
    case ErrorCode::invalid_graph: return "invalid-graph";
    case ErrorCode::disconnected: return "disconnected-graph";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::contract: return "contract-violation";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::size_limit: return "size-limit";
    case ErrorCode::io: return "io-error";
    }
    return "unknown";
}

BudgetExceeded::BudgetExceeded(std::string stage, std::uint64_t estimate, std::uint64_t budget)
    : Error(ErrorCode::budget_exceeded,
            stage + ": estimate " + std::to_string(estimate) + " exceeds budget " + std::to_string(budget)),
      stage_(std::move(stage)), estimate_(estimate), budget_(budget)
{
}

std::int64_t ExtCount::value() const
{
    if (!value_) throw Error(ErrorCode::contract, "value() on infinite count");
    return *value_;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    constexpr auto top = std::numeric_limits<std::uint64_t>::max();
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
        if (r > top) return top;
    }
    return static_cast<std::uint64_t>(r);
}

} // namespace rdv
