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

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/// In-memory form of the XACML 1.x subset: PolicySets, Policies, Rules,
/// Targets built from match clauses, and request/response contexts.
namespace prbac::policy {

namespace uri {
inline constexpr std::string_view kPolicyNs = "urn:oasis:names:tc:xacml:1.0:policy";
inline constexpr std::string_view kContextNs = "urn:oasis:names:tc:xacml:1.0:context";

inline constexpr std::string_view kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kAnyUri = "http://www.w3.org/2001/XMLSchema#anyURI";

inline constexpr std::string_view kStringEqual = "urn:oasis:names:tc:xacml:1.0:function:string-equal";
inline constexpr std::string_view kAnyUriEqual = "urn:oasis:names:tc:xacml:1.0:function:anyURI-equal";

inline constexpr std::string_view kPolicyPermitOverrides =
    "urn:oasis:names:tc:xacml:1.0:policy-combining-algorithm:permit-overrides";
inline constexpr std::string_view kPolicyDenyOverrides =
    "urn:oasis:names:tc:xacml:1.0:policy-combining-algorithm:deny-overrides";
inline constexpr std::string_view kPolicyFirstApplicable =
    "urn:oasis:names:tc:xacml:1.0:policy-combining-algorithm:first-applicable";
inline constexpr std::string_view kRulePermitOverrides =
    "urn:oasis:names:tc:xacml:1.0:rule-combining-algorithm:permit-overrides";
inline constexpr std::string_view kRuleDenyOverrides =
    "urn:oasis:names:tc:xacml:1.0:rule-combining-algorithm:deny-overrides";
inline constexpr std::string_view kRuleFirstApplicable =
    "urn:oasis:names:tc:xacml:1.0:rule-combining-algorithm:first-applicable";

inline constexpr std::string_view kSubjectId = "urn:oasis:names:tc:xacml:1.0:subject:subject-id";
inline constexpr std::string_view kSubjectRole = "urn:oasis:names:tc:xacml:1.0:subject:role";
inline constexpr std::string_view kResourceId = "urn:oasis:names:tc:xacml:1.0:resource:resource-id";
inline constexpr std::string_view kActionId = "urn:oasis:names:tc:xacml:1.0:action:action-id";
inline constexpr std::string_view kRParams = "RParams";
inline constexpr std::string_view kAParams = "AParams";
} // namespace uri

enum class Decision { Permit, Deny, NotApplicable, Indeterminate };

[[nodiscard]] std::string_view to_string(Decision d) noexcept;
/// Throws Error("unsupported-id") for anything but the four names.
[[nodiscard]] Decision decision_from_string(std::string_view s);

enum class MatchFunction { StringEqual, AnyUriEqual };

[[nodiscard]] std::string_view to_uri(MatchFunction f) noexcept;
/// Throws Error("unsupported-id").
[[nodiscard]] MatchFunction match_function_from_uri(std::string_view uri);
/// The designator data type a function operates on.
[[nodiscard]] std::string_view operand_type(MatchFunction f) noexcept;

enum class CombiningAlg { PermitOverrides, DenyOverrides, FirstApplicable };

enum class CombiningScope { Policy, Rule };

[[nodiscard]] std::string_view to_uri(CombiningAlg alg, CombiningScope scope) noexcept;
/// Throws Error("unsupported-combining") for unknown ids or a rule-combining
/// id used where a policy-combining id is expected (and vice versa).
[[nodiscard]] CombiningAlg combining_from_uri(std::string_view uri, CombiningScope scope);

struct AttributeRef {
    std::string attribute_id;
    std::string data_type;

    friend auto operator<=>(const AttributeRef &, const AttributeRef &) = default;
};

struct MatchClause {
    MatchFunction function = MatchFunction::StringEqual;
    std::string literal;
    AttributeRef designator;

    friend bool operator==(const MatchClause &, const MatchClause &) = default;
};

/// Outer list is a disjunction of groups, each group a conjunction.
using MatchGroups = std::vector<std::vector<MatchClause>>;

/// An empty section matches anything.
struct Target {
    MatchGroups subjects;
    MatchGroups resources;
    MatchGroups actions;

    [[nodiscard]] bool empty() const noexcept { return subjects.empty() && resources.empty() && actions.empty(); }

    friend bool operator==(const Target &, const Target &) = default;
};

enum class Effect { Permit, Deny };

struct Rule {
    std::string id;
    Effect effect = Effect::Permit;
    std::optional<Target> target;

    friend bool operator==(const Rule &, const Rule &) = default;
};

struct Policy {
    std::string id;
    CombiningAlg combining = CombiningAlg::PermitOverrides;
    Target target;
    std::vector<Rule> rules;

    friend bool operator==(const Policy &, const Policy &) = default;
};

struct PolicySet;

/// `<PolicySetIdReference>` to a set resolved through the store.
struct PolicySetRef {
    std::string id;

    friend bool operator==(const PolicySetRef &, const PolicySetRef &) = default;
};

/// Inline child PolicySet. Shared and immutable; compares by value.
struct NestedPolicySet {
    std::shared_ptr<const PolicySet> set;

    friend bool operator==(const NestedPolicySet &a, const NestedPolicySet &b);
};

using PolicySetChild = std::variant<Policy, NestedPolicySet, PolicySetRef>;

struct PolicySet {
    std::string id;
    CombiningAlg combining = CombiningAlg::PermitOverrides;
    Target target;
    std::vector<PolicySetChild> children;

    friend bool operator==(const PolicySet &, const PolicySet &) = default;
};

struct Attribute {
    AttributeRef ref;
    std::string value;

    friend bool operator==(const Attribute &, const Attribute &) = default;
};

/// Multiset of attributes in insertion order.
using AttributeBag = std::vector<Attribute>;

struct RequestCtx {
    AttributeBag subject;
    AttributeBag resource;
    AttributeBag action;

    friend bool operator==(const RequestCtx &, const RequestCtx &) = default;
};

inline constexpr std::string_view kStatusOk = "ok";

/// Status is "ok" or an error code such as "cycle" or "dangling-ref".
struct ResponseCtx {
    Decision decision = Decision::NotApplicable;
    std::string status{kStatusOk};

    friend bool operator==(const ResponseCtx &, const ResponseCtx &) = default;
};

/// All values whose id and data type equal ref's, in insertion order.
[[nodiscard]] std::vector<std::string> bag_lookup(const AttributeBag &bag, const AttributeRef &ref);

/// Structural check of one PolicySet (and everything nested inline in it).
/// References not in known_ids are reported as "dangling-ref".
[[nodiscard]] std::vector<Violation> well_formed(const PolicySet &ps, const std::set<std::string> &known_ids);

/// Convenience constructors used by the compiler and tests.
[[nodiscard]] MatchClause string_match(std::string_view attribute_id, std::string literal);
[[nodiscard]] MatchClause any_uri_match(std::string_view attribute_id, std::string literal);
[[nodiscard]] Attribute string_attr(std::string_view attribute_id, std::string value);
[[nodiscard]] Attribute any_uri_attr(std::string_view attribute_id, std::string value);

} // namespace prbac::policy
