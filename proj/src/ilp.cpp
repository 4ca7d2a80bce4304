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

#include "rendezvous/ilp.hpp"

#include <algorithm>
#include <numeric>

namespace rdv {

int IlpSystem::add_variable(std::string name, std::int64_t lower, std::int64_t upper)
{
    variables.push_back({std::move(name), lower, upper});
    return static_cast<int>(variables.size()) - 1;
}

void IlpSystem::add_constraint(std::vector<LinearTerm> terms, Relation rel, std::int64_t rhs, std::string label)
{
    constraints.push_back({std::move(terms), rel, rhs, std::move(label)});
}

bool IlpSystem::satisfied_by(const std::vector<std::int64_t> &values) const
{
    if (values.size() != variables.size()) return false;
    for (std::size_t v = 0; v < variables.size(); v++)
        if (values[v] < variables[v].lower || values[v] > variables[v].upper) return false;
    for (const auto &c : constraints) {
        std::int64_t act = 0;
        for (const auto &t : c.terms) act += t.coef * values[t.var];
        if (c.rel == Relation::less_equal && act > c.rhs) return false;
        if (c.rel == Relation::equal && act != c.rhs) return false;
        if (c.rel == Relation::greater_equal && act < c.rhs) return false;
    }
    return true;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q--;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

struct Box {
    std::vector<std::int64_t> lo, hi;
};

class BranchAndBound {
  public:
    BranchAndBound(const IlpSystem &sys, const IlpOptions &opts) : sys_(sys), opts_(opts)
    {
        var_cons_.resize(sys.variables.size());
        for (std::size_t c = 0; c < sys.constraints.size(); c++)
            for (const auto &t : sys.constraints[c].terms) var_cons_[t.var].push_back(static_cast<int>(c));
        for (auto &list : var_cons_) {
            std::sort(list.begin(), list.end());
            list.erase(std::unique(list.begin(), list.end()), list.end());
        }
    }

    IlpResult run()
    {
        Box box;
        for (const auto &v : sys_.variables) {
            box.lo.push_back(v.lower);
            box.hi.push_back(v.upper);
        }
        IlpResult r;
        std::vector<int> all(sys_.constraints.size());
        std::iota(all.begin(), all.end(), 0);
        std::vector<int> vars(sys_.variables.size());
        std::iota(vars.begin(), vars.end(), 0);
        if (propagate(box, all) && search(box, vars)) {
            r.feasible = true;
            r.solution = box.lo;
        }
        r.nodes = nodes_;
        return r;
    }

  private:
    /* bounds propagation to a fixpoint; false on an empty domain or violated constraint */
    bool propagate(Box &box, std::vector<int> queue) const
    {
        std::vector<char> queued(sys_.constraints.size(), 0);
        for (int c : queue) queued[c] = 1;
        while (!queue.empty()) {
            int ci = queue.back();
            queue.pop_back();
            queued[ci] = 0;
            const auto &c = sys_.constraints[ci];
            std::int64_t min_act = 0, max_act = 0;
            for (const auto &t : c.terms) {
                std::int64_t a = t.coef * box.lo[t.var], b = t.coef * box.hi[t.var];
                min_act += std::min(a, b);
                max_act += std::max(a, b);
            }
            const bool upper = c.rel != Relation::greater_equal;
            const bool lower = c.rel != Relation::less_equal;
            if (upper && min_act > c.rhs) return false;
            if (lower && max_act < c.rhs) return false;
            for (const auto &t : c.terms) {
                if (t.coef == 0) continue;
                std::int64_t a = t.coef * box.lo[t.var], b = t.coef * box.hi[t.var];
                std::int64_t nlo = box.lo[t.var], nhi = box.hi[t.var];
                if (upper) {
                    std::int64_t slack = c.rhs - (min_act - std::min(a, b));
                    if (t.coef > 0)
                        nhi = std::min(nhi, floor_div(slack, t.coef));
                    else
                        nlo = std::max(nlo, ceil_div(slack, t.coef));
                }
                if (lower) {
                    std::int64_t need = c.rhs - (max_act - std::max(a, b));
                    if (t.coef > 0)
                        nlo = std::max(nlo, ceil_div(need, t.coef));
                    else
                        nhi = std::min(nhi, floor_div(need, t.coef));
                }
                if (nlo > nhi) return false;
                if (nlo != box.lo[t.var] || nhi != box.hi[t.var]) {
                    box.lo[t.var] = nlo;
                    box.hi[t.var] = nhi;
                    for (int other : var_cons_[t.var]) {
                        if (!queued[other]) {
                            queued[other] = 1;
                            queue.push_back(other);
                        }
                    }
                }
            }
        }
        return true;
    }

    /* split unfixed vars into groups that share no constraint */
    std::vector<std::vector<int>> components(const Box &box, const std::vector<int> &vars) const
    {
        std::vector<int> unfixed;
        for (int v : vars)
            if (box.lo[v] < box.hi[v]) unfixed.push_back(v);
        std::vector<int> parent(sys_.variables.size());
        for (int v : unfixed) parent[v] = v;
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        std::vector<char> seen(sys_.constraints.size(), 0);
        for (int v : unfixed) {
            for (int ci : var_cons_[v]) {
                if (seen[ci]) continue;
                seen[ci] = 1;
                int first = -1;
                for (const auto &t : sys_.constraints[ci].terms) {
                    if (box.lo[t.var] == box.hi[t.var]) continue;
                    if (first < 0)
                        first = find(t.var);
                    else
                        parent[find(t.var)] = first;
                }
            }
        }
        std::vector<std::vector<int>> groups;
        std::vector<int> slot(sys_.variables.size(), -1);
        for (int v : unfixed) {
            int r = find(v);
            if (slot[r] < 0) {
                slot[r] = static_cast<int>(groups.size());
                groups.emplace_back();
            }
            groups[slot[r]].push_back(v);
        }
        return groups;
    }

    bool search(Box &box, const std::vector<int> &vars)
    {
        if (++nodes_ > opts_.node_budget) throw BudgetExceeded("ilp", nodes_, opts_.node_budget);
        auto groups = components(box, vars);
        if (groups.empty()) return true;
        if (groups.size() > 1) {
            for (const auto &grp : groups)
                if (!search(box, grp)) return false;
            return true;
        }
        const auto &grp = groups.front();
        int pick = grp.front();
        for (int v : grp)
            if (box.hi[v] - box.lo[v] < box.hi[pick] - box.lo[pick]) pick = v;
        for (std::int64_t val = box.lo[pick]; val <= box.hi[pick]; val++) {
            Box trial = box;
            trial.lo[pick] = trial.hi[pick] = val;
            if (propagate(trial, var_cons_[pick]) && search(trial, grp)) {
                box = std::move(trial);
                return true;
            }
        }
        return false;
    }

    const IlpSystem &sys_;
    const IlpOptions &opts_;
    std::vector<std::vector<int>> var_cons_;
    std::uint64_t nodes_ = 0;
};

} // namespace

IlpResult solve_ilp(const IlpSystem &sys, const IlpOptions &opts)
{
    for (const auto &t : sys.constraints)
        for (const auto &term : t.terms)
            if (term.var < 0 || term.var >= static_cast<int>(sys.variables.size()))
                throw Error(ErrorCode::invalid_argument, "constraint references unknown variable");
    for (const auto &v : sys.variables)
        if (v.lower > v.upper) return IlpResult{};
    return BranchAndBound(sys, opts).run();
}

bool ilp_feasible(const IlpSystem &sys, const IlpOptions &opts) { return solve_ilp(sys, opts).feasible; }

} // namespace rdv
