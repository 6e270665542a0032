// Copyright 2026 The prbac Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "prbac/policy.hpp"

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/// Policy Decision Point over an immutable PolicyStore.
namespace prbac::pdp {

/// Immutable, id-indexed snapshot of PolicySets. Only the roots are entry
/// points; everything else is reachable through references.
class PolicyStore {
public:
    PolicyStore() = default;

    /// Throws Error("duplicate-id") if any PolicySet or Policy id (including
    /// inline children) repeats, Error("dangling-ref") if a root is unknown.
    PolicyStore(std::vector<policy::PolicySet> sets, std::vector<std::string> roots);

    [[nodiscard]] const policy::PolicySet *find(std::string_view id) const;
    [[nodiscard]] const policy::Policy *find_policy(std::string_view id) const;

    [[nodiscard]] const std::vector<std::string> &roots() const noexcept { return roots_; }
    /// Sets as given to the constructor (not including nested ones).
    [[nodiscard]] const std::vector<std::shared_ptr<const policy::PolicySet>> &top_level() const noexcept {
        return top_level_;
    }
    [[nodiscard]] size_t size() const noexcept { return top_level_.size(); }
    [[nodiscard]] bool empty() const noexcept { return top_level_.empty(); }

    /// well_formed over every top-level set, with the store's ids as known.
    [[nodiscard]] std::vector<Violation> check() const;

private:
    void index(const std::shared_ptr<const policy::PolicySet> &ps);

    std::vector<std::shared_ptr<const policy::PolicySet>> top_level_;
    std::map<std::string, std::shared_ptr<const policy::PolicySet>, std::less<>> by_id_;
    std::map<std::string, const policy::Policy *, std::less<>> policies_;
    std::vector<std::string> roots_;
};

struct EvalStep {
    std::string node;
    policy::Decision decision;
};

struct EvalTrace {
    std::vector<std::string_view> visited; // PolicySet ids on the current path
    std::vector<EvalStep> steps;
    bool record_steps = true;
};

enum class TargetMatch { Match, NoMatch };

[[nodiscard]] bool match_applies(const policy::MatchClause &clause, const policy::AttributeBag &bag);
[[nodiscard]] bool section_applies(const policy::MatchGroups &groups, const policy::AttributeBag &bag);
[[nodiscard]] TargetMatch target_applies(const policy::Target &t, const policy::RequestCtx &req);

[[nodiscard]] policy::Decision combine(policy::CombiningAlg alg, std::span<const policy::Decision> decisions);
/// Throws Error("unsupported-combining") for an unknown algorithm id.
[[nodiscard]] policy::Decision combine(std::string_view alg_uri, std::span<const policy::Decision> decisions);

using Node = std::variant<const policy::Rule *, const policy::Policy *, const policy::PolicySet *, policy::PolicySetRef>;

/// Evaluates one node. Failures (cycles, dangling references) surface as
/// Indeterminate with a status; evaluation never throws.
[[nodiscard]] policy::ResponseCtx evaluate_node(const PolicyStore &store, const Node &node,
                                                const policy::RequestCtx &req, EvalTrace &trace);

/// Evaluates every root and combines them with permit-overrides.
[[nodiscard]] policy::ResponseCtx decide(const PolicyStore &store, const policy::RequestCtx &req,
                                         EvalTrace *trace = nullptr);

inline constexpr std::string_view kActivateRole = "activate-role";
inline constexpr std::string_view kRoleAssignmentPrefix = "RAS:";

/// Role-value URIs granted by role-assignment sets whose subject and action
/// sections match `subject_attrs` plus action-id "activate-role", in
/// PolicySet id order.
[[nodiscard]] std::vector<std::string> enabled_roles_query(const PolicyStore &store,
                                                           const policy::AttributeBag &subject_attrs);

} // namespace prbac::pdp
