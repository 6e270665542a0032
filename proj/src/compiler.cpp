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

#include "prbac/compiler.hpp"

#include "prbac/xml_io.hpp"

#include <algorithm>
#include <fstream>

namespace prbac::compiler {

using namespace prbac::policy;
using model::RoleInstance;

const std::string &NamingScheme::prefix(SetKind kind) const {
    switch (kind) {
    case SetKind::RoleAssignment: return ras_prefix;
    case SetKind::Role: return rps_prefix;
    case SetKind::Permission: return pps_prefix;
    }
    return rps_prefix;
}

std::string param_value(std::string_view name, std::string_view value) {
    std::string s(name);
    s += '-';
    s += value;
    return s;
}

namespace {

std::string instance_suffix(const RoleInstance &ri) {
    std::string s;
    for (const auto &[name, value] : ri.bindings) {
        s += ':';
        s += param_value(name, value);
    }
    return s;
}

} // namespace

std::string policy_set_id(SetKind kind, const RoleInstance &ri, const NamingScheme &names) {
    return names.prefix(kind) + ":" + ri.role + ":role" + instance_suffix(ri);
}

std::string role_value_uri(const RoleInstance &ri, const NamingScheme &names) {
    std::string uri = names.role_value_base + ":" + ri.role;
    if (!ri.bindings.empty()) uri += ":rparams" + instance_suffix(ri);
    return uri;
}

PolicySet compile_rps(const RoleInstance &ri, const NamingScheme &names) {
    PolicySet ps;
    ps.id = policy_set_id(SetKind::Role, ri, names);
    ps.combining = CombiningAlg::PermitOverrides;
    std::vector<MatchClause> group;
    group.push_back(any_uri_match(uri::kSubjectRole, role_value_uri(ri, names)));
    for (const auto &[name, value] : ri.bindings) group.push_back(string_match(uri::kRParams, param_value(name, value)));
    ps.target.subjects.push_back(std::move(group));
    ps.children.emplace_back(PolicySetRef{policy_set_id(SetKind::Permission, ri, names)});
    return ps;
}

PolicySet compile_pps(const RoleInstance &ri, const std::set<model::Privilege> &privileges,
                      const std::vector<RoleInstance> &junior_instances, const NamingScheme &names) {
    PolicySet ps;
    ps.id = policy_set_id(SetKind::Permission, ri, names);
    ps.combining = CombiningAlg::PermitOverrides;
    size_t n = 0;
    for (const auto &priv : privileges) {
        if (priv.action == model::kNullAction) continue;
        Target t;
        t.resources.push_back({string_match(uri::kResourceId, priv.service)});
        std::vector<MatchClause> action{string_match(uri::kActionId, priv.action)};
        for (const auto &[name, value] : priv.aparams)
            if (!model::is_wildcard(value)) action.push_back(string_match(uri::kAParams, param_value(name, value)));
        t.actions.push_back(std::move(action));

        Policy p;
        p.id = ps.id + ":priv-" + std::to_string(n++);
        p.combining = CombiningAlg::PermitOverrides;
        p.rules.push_back(Rule{"permit", Effect::Permit, std::move(t)});
        ps.children.emplace_back(std::move(p));
    }
    for (const auto &j : junior_instances)
        ps.children.emplace_back(PolicySetRef{policy_set_id(SetKind::Permission, j, names)});
    return ps;
}

std::vector<PolicySet> compile_role_assignment(const model::ModelDocument &doc, const NamingScheme &names) {
    std::vector<PolicySet> out;
    for (const auto &ua : doc.ua) {
        const std::string rps = policy_set_id(SetKind::Role, ua.role_instance, names);
        PolicySet ps;
        ps.id = names.ras_prefix + ":" + ua.user + rps.substr(names.rps_prefix.size());
        ps.combining = CombiningAlg::PermitOverrides;
        ps.target.subjects.push_back({string_match(uri::kSubjectId, ua.user)});
        ps.target.resources.push_back({any_uri_match(uri::kResourceId, role_value_uri(ua.role_instance, names))});
        ps.target.actions.push_back({string_match(uri::kActionId, std::string(pdp::kActivateRole))});
        Policy p;
        p.id = ps.id + ":activate";
        p.combining = CombiningAlg::PermitOverrides;
        p.rules.push_back(Rule{"permit", Effect::Permit, std::nullopt});
        ps.children.emplace_back(std::move(p));
        out.push_back(std::move(ps));
    }
    return out;
}

std::set<RoleInstance> instance_closure(const model::ModelDocument &doc) {
    std::set<RoleInstance> out;
    std::vector<RoleInstance> todo;
    for (const auto &ua : doc.ua) todo.push_back(ua.role_instance);
    while (!todo.empty()) {
        RoleInstance ri = std::move(todo.back());
        todo.pop_back();
        const model::RoleDecl *role = doc.find_role(ri.role);
        if (!out.insert(ri).second || role == nullptr) continue;
        for (const auto &j : role->juniors)
            if (const model::RoleDecl *jr = doc.find_role(j)) todo.push_back(model::restrict_to(ri, *jr));
    }
    return out;
}

pdp::PolicyStore compile_model(const model::ModelDocument &doc, const NamingScheme &names) {
    model::require_valid(doc);

    std::vector<PolicySet> ras = compile_role_assignment(doc, names);
    std::sort(ras.begin(), ras.end(), [](const PolicySet &a, const PolicySet &b) { return a.id < b.id; });

    std::vector<PolicySet> sets;
    std::vector<std::string> roots;
    for (auto &ps : ras) {
        roots.push_back(ps.id);
        sets.push_back(std::move(ps));
    }

    const auto instances = instance_closure(doc);
    std::vector<PolicySet> rps, pps;
    for (const auto &ri : instances) {
        rps.push_back(compile_rps(ri, names));
        const model::RoleDecl &role = *doc.find_role(ri.role);
        std::vector<RoleInstance> juniors;
        for (const auto &j : role.juniors) juniors.push_back(model::restrict_to(ri, *doc.find_role(j)));
        pps.push_back(compile_pps(ri, model::own_privileges(doc, ri), juniors, names));
    }
    std::sort(rps.begin(), rps.end(), [](const PolicySet &a, const PolicySet &b) { return a.id < b.id; });
    std::sort(pps.begin(), pps.end(), [](const PolicySet &a, const PolicySet &b) { return a.id < b.id; });
    for (auto &ps : rps) {
        roots.push_back(ps.id);
        sets.push_back(std::move(ps));
    }
    for (auto &ps : pps) sets.push_back(std::move(ps));

    return pdp::PolicyStore(std::move(sets), std::move(roots));
}

std::string policy_file_name(std::string_view id) {
    std::string name(id);
    std::replace(name.begin(), name.end(), ':', '_');
    return name + ".xml";
}

void write_policy_dir(const pdp::PolicyStore &store, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    auto write = [](const std::filesystem::path &file, const std::string &content) {
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw Error("io", "cannot write " + file.string());
    };
    for (const auto &ps : store.top_level()) {
        if (ps->id.find('/') != std::string::npos || ps->id.empty())
            throw Error("io", "PolicySet id '" + ps->id + "' is not usable as a file name");
        write(dir / policy_file_name(ps->id), xml::serialize_policy_set(*ps));
    }
    std::string roots;
    for (const auto &r : store.roots()) roots += r + "\n";
    write(dir / "roots.txt", roots);
}

RequestCtx access_request(const RoleInstance &ri, std::string_view service, std::string_view action,
                          const model::ParamBindings &aparams, const NamingScheme &names) {
    RequestCtx req;
    req.subject.push_back(any_uri_attr(uri::kSubjectRole, role_value_uri(ri, names)));
    for (const auto &[name, value] : ri.bindings) req.subject.push_back(string_attr(uri::kRParams, param_value(name, value)));
    req.resource.push_back(string_attr(uri::kResourceId, std::string(service)));
    req.action.push_back(string_attr(uri::kActionId, std::string(action)));
    for (const auto &[name, value] : aparams) req.action.push_back(string_attr(uri::kAParams, param_value(name, value)));
    return req;
}

RequestCtx activation_request(std::string_view user, std::string_view role_uri) {
    RequestCtx req;
    req.subject.push_back(string_attr(uri::kSubjectId, std::string(user)));
    req.resource.push_back(any_uri_attr(uri::kResourceId, std::string(role_uri)));
    req.action.push_back(string_attr(uri::kActionId, std::string(pdp::kActivateRole)));
    return req;
}

} // namespace prbac::compiler
