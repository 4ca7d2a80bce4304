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

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rdv {

using Vertex = int;

enum class ErrorCode {
    parse,
    invalid_graph,
    disconnected,
    invalid_argument,
    contract,
    budget_exceeded,
    size_limit,
    io,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

/* Raised when a position space, tree, candidate set or search exceeds its cap. */
class BudgetExceeded : public Error {
  public:
    BudgetExceeded(std::string stage, std::uint64_t estimate, std::uint64_t budget);
    const std::string &stage() const { return stage_; }
    std::uint64_t estimate() const { return estimate_; }
    std::uint64_t budget() const { return budget_; }

  private:
    std::string stage_;
    std::uint64_t estimate_;
    std::uint64_t budget_;
};

/*
 * A nonnegative count or +infinity. Infinity is a state, not a big number.
 */
class ExtCount {
  public:
    ExtCount() = default;
    static ExtCount finite(std::int64_t v) { return ExtCount(v); }
    static ExtCount infinity() { return ExtCount(); }

    bool is_finite() const { return value_.has_value(); }
    bool is_infinite() const { return !value_.has_value(); }
    std::int64_t value() const;

    std::string to_string() const { return is_finite() ? std::to_string(*value_) : "inf"; }

    friend bool operator==(const ExtCount &, const ExtCount &) = default;
    friend std::strong_ordering operator<=>(const ExtCount &a, const ExtCount &b)
    {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() <=> b.is_infinite();
        return *a.value_ <=> *b.value_;
    }

  private:
    explicit ExtCount(std::int64_t v) : value_(v) {}
    std::optional<std::int64_t> value_;
};

/* Binomial coefficient, saturating at UINT64_MAX. */
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace rdv
