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

#include "rendezvous/common.hpp"

namespace rdv {

enum class Relation { less_equal, equal, greater_equal };

struct LinearTerm {
    int var;
    std::int64_t coef;
};

struct LinearConstraint {
    std::vector<LinearTerm> terms;
    Relation rel = Relation::less_equal;
    std::int64_t rhs = 0;
    std::string label;
};

/* Integer variable with a finite box [lower, upper]. */
struct IlpVariable {
    std::string name;
    std::int64_t lower = 0;
    std::int64_t upper = 0;
};

struct IlpSystem {
    std::vector<IlpVariable> variables;
    std::vector<LinearConstraint> constraints;

    int add_variable(std::string name, std::int64_t lower, std::int64_t upper);
    void add_constraint(std::vector<LinearTerm> terms, Relation rel, std::int64_t rhs, std::string label);
    bool satisfied_by(const std::vector<std::int64_t> &values) const;
};

struct IlpOptions {
    std::uint64_t node_budget = 5'000'000;
};

struct IlpResult {
    bool feasible = false;
    std::vector<std::int64_t> solution;
    std::uint64_t nodes = 0;
};

/*
 * Exact branch and bound with bounds propagation and splitting into
 * independent components. Throws BudgetExceeded("ilp", ...) past the node budget.
 */
IlpResult solve_ilp(const IlpSystem &sys, const IlpOptions &opts = {});
bool ilp_feasible(const IlpSystem &sys, const IlpOptions &opts = {});

} // namespace rdv
