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

#include "prbac/policy.hpp"

namespace prbac::policy {

std::string_view to_string(Decision d) noexcept {
    switch (d) {
    case Decision::Permit: return "Permit";
    case Decision::Deny: return "Deny";
    case Decision::NotApplicable: return "NotApplicable";
    case Decision::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

Decision decision_from_string(std::string_view s) {
    for (auto d : {Decision::Permit, Decision::Deny, Decision::NotApplicable, Decision::Indeterminate})
        if (to_string(d) == s) return d;
    throw Error("unsupported-id", "decision '" + std::string(s) + "'");
}

std::string_view to_uri(MatchFunction f) noexcept {
    return f == MatchFunction::StringEqual ? uri::kStringEqual : uri::kAnyUriEqual;
}

MatchFunction match_function_from_uri(std::string_view u) {
    if (u == uri::kStringEqual) return MatchFunction::StringEqual;
    if (u == uri::kAnyUriEqual) return MatchFunction::AnyUriEqual;
    throw Error("unsupported-id", "MatchId '" + std::string(u) + "'");
}

std::string_view operand_type(MatchFunction f) noexcept {
    return f == MatchFunction::StringEqual ? uri::kString : uri::kAnyUri;
}

std::string_view to_uri(CombiningAlg alg, CombiningScope scope) noexcept {
    const bool policy = scope == CombiningScope::Policy;
    switch (alg) {
    case CombiningAlg::PermitOverrides: return policy ? uri::kPolicyPermitOverrides : uri::kRulePermitOverrides;
    case CombiningAlg::DenyOverrides: return policy ? uri::kPolicyDenyOverrides : uri::kRuleDenyOverrides;
    case CombiningAlg::FirstApplicable: return policy ? uri::kPolicyFirstApplicable : uri::kRuleFirstApplicable;
    }
    return {};
}

CombiningAlg combining_from_uri(std::string_view u, CombiningScope scope) {
    for (auto alg : {CombiningAlg::PermitOverrides, CombiningAlg::DenyOverrides, CombiningAlg::FirstApplicable})
        if (to_uri(alg, scope) == u) return alg;
    throw Error("unsupported-combining", std::string(u));
}

bool operator==(const NestedPolicySet &a, const NestedPolicySet &b) {
    if (a.set == b.set) return true;
    if (!a.set || !b.set) return false;
    return *a.set == *b.set;
}

std::vector<std::string> bag_lookup(const AttributeBag &bag, const AttributeRef &ref) {
    std::vector<std::string> out;
    for (const auto &a : bag)
        if (a.ref == ref) out.push_back(a.value);
    return out;
}

namespace {

bool padded(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    return !s.empty() && (ws(s.front()) || ws(s.back()));
}

void check_target(std::vector<Violation> &out, const std::string &owner, const Target &t) {
    for (const MatchGroups *groups : {&t.subjects, &t.resources, &t.actions}) {
        for (const auto &group : *groups) {
            for (const auto &c : group) {
                if (c.designator.attribute_id.empty() || c.designator.data_type.empty())
                    out.push_back({"empty-attribute-ref", owner, ""});
                if (padded(c.literal)) out.push_back({"padded-literal", owner, c.literal});
                if (c.designator.data_type != operand_type(c.function))
                    out.push_back({"type-mismatch", owner,
                                   std::string(to_uri(c.function)) + " on " + c.designator.data_type});
            }
        }
    }
}

struct Checker {
    std::vector<Violation> out;
    std::set<std::string> ids;
    std::vector<std::string> refs;

    void claim(const std::string &id, const char *what) {
        if (id.empty()) out.push_back({"empty-id", what, ""});
        else if (padded(id)) out.push_back({"padded-id", id, ""});
        else if (!ids.insert(id).second) out.push_back({"duplicate-id", id, ""});
    }

    void policy(const Policy &p) {
        claim(p.id, "Policy");
        check_target(out, p.id, p.target);
        std::set<std::string> rule_ids;
        for (const auto &r : p.rules) {
            if (r.id.empty()) out.push_back({"empty-id", p.id, "Rule"});
            else if (!rule_ids.insert(r.id).second) out.push_back({"duplicate-rule-id", p.id, r.id});
            if (r.target) check_target(out, p.id + "/" + r.id, *r.target);
        }
    }

    void set(const PolicySet &ps) {
        claim(ps.id, "PolicySet");
        check_target(out, ps.id, ps.target);
        for (const auto &child : ps.children) {
            if (const auto *p = std::get_if<Policy>(&child)) {
                policy(*p);
            } else if (const auto *n = std::get_if<NestedPolicySet>(&child)) {
                if (n->set) set(*n->set);
                else out.push_back({"empty-child", ps.id, ""});
            } else {
                const auto &ref = std::get<PolicySetRef>(child).id;
                if (padded(ref)) out.push_back({"padded-id", ref, ""});
                refs.push_back(ref);
            }
        }
    }
};

} // namespace

std::vector<Violation> well_formed(const PolicySet &ps, const std::set<std::string> &known_ids) {
    Checker c;
    c.set(ps);
    // Resolved after the walk so child order cannot matter.
    for (const auto &ref : c.refs)
        if (!known_ids.contains(ref) && !c.ids.contains(ref)) c.out.push_back({"dangling-ref", ref, ""});
    return std::move(c.out);
}

MatchClause string_match(std::string_view attribute_id, std::string literal) {
    return {MatchFunction::StringEqual, std::move(literal), {std::string(attribute_id), std::string(uri::kString)}};
}

MatchClause any_uri_match(std::string_view attribute_id, std::string literal) {
    return {MatchFunction::AnyUriEqual, std::move(literal), {std::string(attribute_id), std::string(uri::kAnyUri)}};
}

Attribute string_attr(std::string_view attribute_id, std::string value) {
    return {{std::string(attribute_id), std::string(uri::kString)}, std::move(value)};
}

Attribute any_uri_attr(std::string_view attribute_id, std::string value) {
    return {{std::string(attribute_id), std::string(uri::kAnyUri)}, std::move(value)};
}

} // namespace prbac::policy
