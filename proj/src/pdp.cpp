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

#include "prbac/pdp.hpp"

#include <algorithm>
#include <set>

namespace prbac::pdp {

using namespace prbac::policy;

PolicyStore::PolicyStore(std::vector<PolicySet> sets, std::vector<std::string> roots) : roots_(std::move(roots)) {
    top_level_.reserve(sets.size());
    for (auto &ps : sets) {
        auto shared = std::make_shared<const PolicySet>(std::move(ps));
        index(shared);
        top_level_.push_back(std::move(shared));
    }
    for (const auto &r : roots_)
        if (!by_id_.contains(r)) throw Error("dangling-ref", "root '" + r + "'");
}

void PolicyStore::index(const std::shared_ptr<const PolicySet> &ps) {
    if (by_id_.contains(ps->id) || policies_.contains(ps->id)) throw Error("duplicate-id", ps->id);
    by_id_.emplace(ps->id, ps);
    for (const auto &child : ps->children) {
        if (const auto *p = std::get_if<Policy>(&child)) {
            if (by_id_.contains(p->id) || !policies_.emplace(p->id, p).second) throw Error("duplicate-id", p->id);
        } else if (const auto *n = std::get_if<NestedPolicySet>(&child)) {
            index(n->set);
        }
    }
}

const PolicySet *PolicyStore::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second.get();
}

const Policy *PolicyStore::find_policy(std::string_view id) const {
    auto it = policies_.find(id);
    return it == policies_.end() ? nullptr : it->second;
}

std::vector<Violation> PolicyStore::check() const {
    std::set<std::string> known;
    for (const auto &[id, ps] : by_id_) known.insert(id);
    std::vector<Violation> out;
    for (const auto &ps : top_level_)
        for (auto &v : well_formed(*ps, known)) out.push_back(std::move(v));
    return out;
}

bool match_applies(const MatchClause &clause, const AttributeBag &bag) {
    if (clause.function == MatchFunction::AnyUriEqual && clause.designator.data_type != uri::kAnyUri) return false;
    return std::any_of(bag.begin(), bag.end(),
                       [&](const Attribute &a) { return a.ref == clause.designator && a.value == clause.literal; });
}

bool section_applies(const MatchGroups &groups, const AttributeBag &bag) {
    if (groups.empty()) return true;
    return std::any_of(groups.begin(), groups.end(), [&](const std::vector<MatchClause> &group) {
        return std::all_of(group.begin(), group.end(), [&](const MatchClause &c) { return match_applies(c, bag); });
    });
}

TargetMatch target_applies(const Target &t, const RequestCtx &req) {
    const bool ok = section_applies(t.subjects, req.subject) && section_applies(t.resources, req.resource) &&
                    section_applies(t.actions, req.action);
    return ok ? TargetMatch::Match : TargetMatch::NoMatch;
}

Decision combine(CombiningAlg alg, std::span<const Decision> decisions) {
    auto any = [&](Decision d) { return std::find(decisions.begin(), decisions.end(), d) != decisions.end(); };
    switch (alg) {
    case CombiningAlg::PermitOverrides:
        if (any(Decision::Permit)) return Decision::Permit;
        if (any(Decision::Deny)) return Decision::Deny;
        if (any(Decision::Indeterminate)) return Decision::Indeterminate;
        return Decision::NotApplicable;
    case CombiningAlg::DenyOverrides:
        // An Indeterminate child might have been a Deny.
        if (any(Decision::Deny) || any(Decision::Indeterminate)) return Decision::Deny;
        if (any(Decision::Permit)) return Decision::Permit;
        return Decision::NotApplicable;
    case CombiningAlg::FirstApplicable:
        for (auto d : decisions)
            if (d != Decision::NotApplicable) return d;
        return Decision::NotApplicable;
    }
    return Decision::Indeterminate;
}

Decision combine(std::string_view alg_uri, std::span<const Decision> decisions) {
    CombiningAlg alg;
    try {
        alg = combining_from_uri(alg_uri, CombiningScope::Policy);
    } catch (const Error &) {
        alg = combining_from_uri(alg_uri, CombiningScope::Rule);
    }
    return combine(alg, decisions);
}

namespace {

ResponseCtx combine_results(CombiningAlg alg, const std::vector<ResponseCtx> &results) {
    std::vector<Decision> decisions;
    decisions.reserve(results.size());
    for (const auto &r : results) decisions.push_back(r.decision);
    ResponseCtx out{combine(alg, decisions), std::string(kStatusOk)};
    if (out.decision == Decision::Indeterminate) {
        for (const auto &r : results) {
            if (r.decision == Decision::Indeterminate) {
                out.status = r.status;
                break;
            }
        }
    }
    return out;
}

ResponseCtx record(EvalTrace &trace, std::string_view node, ResponseCtx r) {
    if (trace.record_steps) trace.steps.push_back({std::string(node), r.decision});
    return r;
}

ResponseCtx eval_rule(const Rule &rule, const RequestCtx &req, EvalTrace &trace) {
    if (rule.target && target_applies(*rule.target, req) == TargetMatch::NoMatch)
        return record(trace, rule.id, {Decision::NotApplicable, std::string(kStatusOk)});
    return record(trace, rule.id,
                  {rule.effect == Effect::Permit ? Decision::Permit : Decision::Deny, std::string(kStatusOk)});
}

ResponseCtx eval_policy(const Policy &p, const RequestCtx &req, EvalTrace &trace) {
    if (target_applies(p.target, req) == TargetMatch::NoMatch)
        return record(trace, p.id, {Decision::NotApplicable, std::string(kStatusOk)});
    std::vector<ResponseCtx> results;
    results.reserve(p.rules.size());
    for (const auto &r : p.rules) results.push_back(eval_rule(r, req, trace));
    return record(trace, p.id, combine_results(p.combining, results));
}

ResponseCtx eval_set(const PolicyStore &store, const PolicySet &ps, const RequestCtx &req, EvalTrace &trace);

ResponseCtx eval_ref(const PolicyStore &store, const PolicySetRef &ref, const RequestCtx &req, EvalTrace &trace) {
    const PolicySet *target = store.find(ref.id);
    if (target == nullptr) return record(trace, ref.id, {Decision::Indeterminate, "dangling-ref"});
    return eval_set(store, *target, req, trace);
}

ResponseCtx eval_set(const PolicyStore &store, const PolicySet &ps, const RequestCtx &req, EvalTrace &trace) {
    if (target_applies(ps.target, req) == TargetMatch::NoMatch)
        return record(trace, ps.id, {Decision::NotApplicable, std::string(kStatusOk)});
    if (std::find(trace.visited.begin(), trace.visited.end(), ps.id) != trace.visited.end())
        return record(trace, ps.id, {Decision::Indeterminate, "cycle"});
    trace.visited.push_back(ps.id);
    std::vector<ResponseCtx> results;
    results.reserve(ps.children.size());
    for (const auto &child : ps.children) {
        if (const auto *p = std::get_if<Policy>(&child)) results.push_back(eval_policy(*p, req, trace));
        else if (const auto *n = std::get_if<NestedPolicySet>(&child)) results.push_back(eval_set(store, *n->set, req, trace));
        else results.push_back(eval_ref(store, std::get<PolicySetRef>(child), req, trace));
    }
    trace.visited.pop_back();
    return record(trace, ps.id, combine_results(ps.combining, results));
}

} // namespace

ResponseCtx evaluate_node(const PolicyStore &store, const Node &node, const RequestCtx &req, EvalTrace &trace) {
    if (const auto *r = std::get_if<const Rule *>(&node)) return eval_rule(**r, req, trace);
    if (const auto *p = std::get_if<const Policy *>(&node)) return eval_policy(**p, req, trace);
    if (const auto *s = std::get_if<const PolicySet *>(&node)) return eval_set(store, **s, req, trace);
    return eval_ref(store, std::get<PolicySetRef>(node), req, trace);
}

ResponseCtx decide(const PolicyStore &store, const RequestCtx &req, EvalTrace *trace) {
    EvalTrace local;
    local.record_steps = false;
    EvalTrace &t = trace != nullptr ? *trace : local;
    std::vector<ResponseCtx> results;
    results.reserve(store.roots().size());
    for (const auto &root : store.roots()) results.push_back(eval_ref(store, PolicySetRef{root}, req, t));
    return combine_results(CombiningAlg::PermitOverrides, results);
}

std::vector<std::string> enabled_roles_query(const PolicyStore &store, const AttributeBag &subject_attrs) {
    std::vector<const PolicySet *> ras;
    for (const auto &ps : store.top_level())
        if (ps->id.starts_with(kRoleAssignmentPrefix)) ras.push_back(ps.get());
    std::sort(ras.begin(), ras.end(), [](const PolicySet *a, const PolicySet *b) { return a->id < b->id; });

    RequestCtx probe;
    probe.subject = subject_attrs;
    probe.action.push_back(string_attr(uri::kActionId, std::string(kActivateRole)));

    std::vector<std::string> out;
    for (const PolicySet *ps : ras) {
        if (!section_applies(ps->target.subjects, probe.subject) || !section_applies(ps->target.actions, probe.action))
            continue;
        for (const auto &group : ps->target.resources) {
            for (const auto &c : group) {
                if (c.designator.attribute_id != uri::kResourceId || c.function != MatchFunction::AnyUriEqual) continue;
                RequestCtx req = probe;
                req.resource.push_back(any_uri_attr(uri::kResourceId, c.literal));
                EvalTrace trace;
                trace.record_steps = false;
                if (evaluate_node(store, ps, req, trace).decision == Decision::Permit &&
                    std::find(out.begin(), out.end(), c.literal) == out.end())
                    out.push_back(c.literal);
            }
        }
    }
    return out;
}

} // namespace prbac::pdp
