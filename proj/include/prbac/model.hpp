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

#include "prbac/error.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

/// The abstract service-oriented RBAC model with parameterized roles and
/// privileges, and a brute-force decision oracle over it. Nothing here knows
/// about XACML; the compiler and PDP are checked against these functions.
namespace prbac::model {

inline constexpr std::string_view kWildcard = "*";
/// Access mode that grants nothing, e.g. (customerData, null).
inline constexpr std::string_view kNullAction = "null";

/// Parameter name -> value. Ordered by name, which is the canonical order.
/// A value of "*" is a wildcard and is only legal in privilege assignments.
using ParamBindings = std::map<std::string, std::string>;

[[nodiscard]] inline bool is_wildcard(std::string_view v) noexcept { return v == kWildcard; }

/// Identifiers (role names, parameter names, action names) are
/// [A-Za-z_][A-Za-z0-9_.]*. No '-' so that "<name>-<value>" splits uniquely.
[[nodiscard]] bool is_identifier(std::string_view s) noexcept;

/// Ids and parameter values: non-empty, no whitespace or control
/// characters, and none of ':' '|' '/' '\\' (they delimit policy ids,
/// token fields and file names).
[[nodiscard]] bool is_token(std::string_view s) noexcept;

struct RoleDecl {
    std::string name;
    std::vector<std::string> param_names;
    std::set<std::string> juniors; // senior -> junior edges

    friend bool operator==(const RoleDecl &, const RoleDecl &) = default;
};

struct RoleInstance {
    std::string role;
    ParamBindings bindings;

    friend auto operator<=>(const RoleInstance &, const RoleInstance &) = default;
};

struct User {
    std::string id;
    std::map<std::string, std::string> attributes;

    friend bool operator==(const User &, const User &) = default;
};

struct Service {
    std::string id;
    std::set<std::string> actions;

    friend bool operator==(const Service &, const Service &) = default;
};

struct Privilege {
    std::string service;
    std::string action;
    ParamBindings aparams;

    friend auto operator<=>(const Privilege &, const Privilege &) = default;
};

struct PrivAssignment {
    std::string role;
    ParamBindings role_param_pattern;
    Privilege privilege;

    friend bool operator==(const PrivAssignment &, const PrivAssignment &) = default;
};

struct UserAssignment {
    std::string user;
    RoleInstance role_instance;

    friend bool operator==(const UserAssignment &, const UserAssignment &) = default;
};

struct ModelDocument {
    std::vector<User> users;
    std::vector<RoleDecl> roles;
    std::vector<Service> services;
    std::vector<UserAssignment> ua;
    std::vector<PrivAssignment> pa;

    [[nodiscard]] const User *find_user(std::string_view id) const;
    [[nodiscard]] const RoleDecl *find_role(std::string_view name) const;
    [[nodiscard]] const Service *find_service(std::string_view id) const;

    friend bool operator==(const ModelDocument &, const ModelDocument &) = default;
};

enum class OracleDecision { Permit, NotApplicable };

/// Every broken invariant, one record each. Empty means valid.
[[nodiscard]] std::vector<Violation> validate_model(const ModelDocument &doc);

/// Throws ValidationError("invalid-model") unless validate_model is empty.
void require_valid(const ModelDocument &doc);

/// The role instances explicitly assigned to a user. No hierarchy expansion.
[[nodiscard]] std::set<RoleInstance> enabled_role_instances(const ModelDocument &doc, std::string_view user_id);

/// True iff every literal in pattern equals the binding of the same name.
/// Wildcards match anything, including an absent binding.
[[nodiscard]] bool pattern_matches(const ParamBindings &pattern, const ParamBindings &bindings);

/// Senior role itself plus all transitive juniors, in name order.
[[nodiscard]] std::set<std::string> role_closure(const ModelDocument &doc, std::string_view role);

/// ri restricted to the parameters of role `junior`.
[[nodiscard]] RoleInstance restrict_to(const RoleInstance &ri, const RoleDecl &junior);

/// Privileges assigned directly to ri's role whose pattern matches ri
/// (no inheritance). "null" privileges are dropped.
[[nodiscard]] std::set<Privilege> own_privileges(const ModelDocument &doc, const RoleInstance &ri);

/// Privileges held by ri including everything inherited from juniors.
[[nodiscard]] std::set<Privilege> authorized_privileges(const ModelDocument &doc, const RoleInstance &ri);

/// Does a privilege cover a concrete request? Every non-wildcard aparam of
/// the privilege must appear with the same value in `aparams`; extra request
/// parameters are ignored.
[[nodiscard]] bool privilege_covers(const Privilege &p, std::string_view service, std::string_view action,
                                    const ParamBindings &aparams);

/// Ground-truth decision. Never yields Deny.
[[nodiscard]] OracleDecision oracle_decide(const ModelDocument &doc, std::string_view user_id, const RoleInstance &ri,
                                           std::string_view service, std::string_view action,
                                           const ParamBindings &aparams);

/// The SR relation: services reachable from a role (directly or via juniors).
[[nodiscard]] std::set<std::string> related_services(const ModelDocument &doc, std::string_view role);

} // namespace prbac::model
