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
#include <string>

#include "rendezvous/game.hpp"

namespace rdv {

/* reason tags */
inline constexpr const char *kReasonAdjacent = "adjacent-or-equal";
inline constexpr const char *kReasonLambdaOne = "lambda-1";
inline constexpr const char *kReasonChordal = "chordal";
inline constexpr const char *kReasonP5Free = "p5-free";
inline constexpr const char *kReasonSameModule = "same-independent-module";
inline constexpr const char *kReasonGeneric = "generic";

struct DividerNumberReport {
    ExtCount value;
    std::string reason;
};

/* Polynomial shortcuts, tried in a fixed priority order; nullopt when none applies. */
std::optional<DividerNumberReport> fast_divider_number(const Graph &g, Vertex s, Vertex t);

/* Fast path when available, otherwise the exhaustive search. */
DividerNumberReport divider_number_auto(const Graph &g, Vertex s, Vertex t, std::optional<int> max_k = std::nullopt,
                                        const SolveOptions &opts = {});

} // namespace rdv
