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

#include "prbac/model.hpp"

#include <algorithm>
#include <functional>

namespace prbac::model {

namespace {

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '.'; }

std::string describe(const RoleInstance &ri) {
    std::string s = ri.role + "[";
    bool first = true;
    for (const auto &[name, value] : ri.bindings) {
        if (!first) s += ",";
        first = false;
        s += name + "=" + value;
    }
    return s + "]";
}

void check_bindings(std::vector<Violation> &out, const std::string &entity, const ParamBindings &bindings,
                    bool allow_wildcard) {
    for (const auto &[name, value] : bindings) {
        if (!is_identifier(name)) out.push_back({"bad-identifier", entity, "parameter name '" + name + "'"});
        if (is_wildcard(value)) {
            if (!allow_wildcard) out.push_back({"wildcard-in-activation", entity, name});
        } else if (!is_token(value)) {
            out.push_back({"bad-value", entity, name + "='" + value + "'"});
        }
    }
}

// Tarjan's SCC over the junior edges; one violation per cyclic component.
void check_hierarchy(std::vector<Violation> &out, const ModelDocument &doc) {
    std::map<std::string, int> index, low;
    std::vector<std::string> stack;
    std::set<std::string> on_stack;
    int counter = 0;

    std::function<void(const RoleDecl &)> connect = [&](const RoleDecl &r) {
        index[r.name] = low[r.name] = counter++;
        stack.push_back(r.name);
        on_stack.insert(r.name);
        for (const auto &j : r.juniors) {
            const RoleDecl *jr = doc.find_role(j);
            if (jr == nullptr) continue;
            if (!index.contains(j)) {
                connect(*jr);
                low[r.name] = std::min(low[r.name], low[j]);
            } else if (on_stack.contains(j)) {
                low[r.name] = std::min(low[r.name], index[j]);
            }
        }
        if (low[r.name] != index[r.name]) return;
        std::vector<std::string> component;
        std::string top;
        do {
            top = stack.back();
            stack.pop_back();
            on_stack.erase(top);
            component.push_back(top);
        } while (top != r.name);
        if (component.size() > 1 || r.juniors.contains(r.name)) {
            std::sort(component.begin(), component.end());
            std::string members;
            for (const auto &m : component) members += (members.empty() ? "" : ",") + m;
            out.push_back({"hierarchy-cycle", component.front(), members});
        }
    };

    for (const auto &r : doc.roles)
        if (!index.contains(r.name)) connect(r);
}

} // namespace

bool is_identifier(std::string_view s) noexcept {
    if (s.empty() || !is_ident_start(s.front())) return false;
    return std::all_of(s.begin(), s.end(), is_ident_char);
}

bool is_token(std::string_view s) noexcept {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u <= 0x20 || u == 0x7f || c == ':' || c == '|' || c == '/' || c == '\\';
    });
}

const User *ModelDocument::find_user(std::string_view id) const {
    auto it = std::find_if(users.begin(), users.end(), [&](const User &u) { return u.id == id; });
    return it == users.end() ? nullptr : &*it;
}

const RoleDecl *ModelDocument::find_role(std::string_view name) const {
    auto it = std::find_if(roles.begin(), roles.end(), [&](const RoleDecl &r) { return r.name == name; });
    return it == roles.end() ? nullptr : &*it;
}

const Service *ModelDocument::find_service(std::string_view id) const {
    auto it = std::find_if(services.begin(), services.end(), [&](const Service &s) { return s.id == id; });
    return it == services.end() ? nullptr : &*it;
}

std::vector<Violation> validate_model(const ModelDocument &doc) {
    std::vector<Violation> out;

    std::set<std::string> seen;
    for (const auto &u : doc.users) {
        if (!is_token(u.id)) out.push_back({"bad-id", u.id, "user id"});
        if (!seen.insert(u.id).second) out.push_back({"duplicate-user", u.id, ""});
        for (const auto &[k, v] : u.attributes)
            if (!is_identifier(k)) out.push_back({"bad-identifier", u.id, "attribute '" + k + "'"});
    }

    seen.clear();
    for (const auto &r : doc.roles) {
        if (!is_identifier(r.name)) out.push_back({"bad-identifier", r.name, "role name"});
        if (!seen.insert(r.name).second) out.push_back({"duplicate-role", r.name, ""});
        std::set<std::string> params;
        for (const auto &p : r.param_names) {
            if (!is_identifier(p)) out.push_back({"bad-identifier", r.name, "parameter name '" + p + "'"});
            if (!params.insert(p).second) out.push_back({"duplicate-param", r.name, p});
        }
        for (const auto &j : r.juniors) {
            const RoleDecl *jr = doc.find_role(j);
            if (jr == nullptr) {
                out.push_back({"unknown-role", r.name, "junior '" + j + "'"});
                continue;
            }
            // A senior instance must determine its junior instance.
            for (const auto &jp : jr->param_names)
                if (!params.contains(jp)) out.push_back({"junior-params", r.name, j + "." + jp});
        }
    }
    check_hierarchy(out, doc);

    seen.clear();
    for (const auto &s : doc.services) {
        if (!is_token(s.id)) out.push_back({"bad-id", s.id, "service id"});
        if (!seen.insert(s.id).second) out.push_back({"duplicate-service", s.id, ""});
        if (s.actions.empty()) out.push_back({"no-actions", s.id, ""});
        for (const auto &a : s.actions)
            if (!is_identifier(a)) out.push_back({"bad-identifier", s.id, "action '" + a + "'"});
    }

    std::set<std::pair<std::string, RoleInstance>> ua_seen;
    for (const auto &ua : doc.ua) {
        const std::string entity = ua.user + ":" + describe(ua.role_instance);
        if (doc.find_user(ua.user) == nullptr) out.push_back({"unknown-user", entity, ua.user});
        check_bindings(out, entity, ua.role_instance.bindings, false);
        const RoleDecl *r = doc.find_role(ua.role_instance.role);
        if (r == nullptr) {
            out.push_back({"unknown-role", entity, ua.role_instance.role});
        } else {
            std::set<std::string> want(r->param_names.begin(), r->param_names.end());
            std::set<std::string> have;
            for (const auto &[k, v] : ua.role_instance.bindings) have.insert(k);
            if (want != have) out.push_back({"binding-mismatch", entity, "bindings must name exactly the role's parameters"});
        }
        if (!ua_seen.insert({ua.user, ua.role_instance}).second) out.push_back({"duplicate-assignment", entity, ""});
    }

    for (const auto &pa : doc.pa) {
        const std::string entity = pa.role + "->" + pa.privilege.service + "." + pa.privilege.action;
        const RoleDecl *r = doc.find_role(pa.role);
        if (r == nullptr) {
            out.push_back({"unknown-role", entity, pa.role});
        } else {
            for (const auto &[k, v] : pa.role_param_pattern)
                if (std::find(r->param_names.begin(), r->param_names.end(), k) == r->param_names.end())
                    out.push_back({"pattern-param", entity, k});
        }
        check_bindings(out, entity, pa.role_param_pattern, true);
        check_bindings(out, entity, pa.privilege.aparams, true);
        const Service *s = doc.find_service(pa.privilege.service);
        if (s == nullptr) {
            out.push_back({"unknown-service", entity, pa.privilege.service});
        } else if (pa.privilege.action != kNullAction && !s->actions.contains(pa.privilege.action)) {
            out.push_back({"unknown-action", entity, pa.privilege.action});
        }
    }
    return out;
}

void require_valid(const ModelDocument &doc) {
    auto violations = validate_model(doc);
    if (!violations.empty()) throw ValidationError("invalid-model", std::move(violations));
}

std::set<RoleInstance> enabled_role_instances(const ModelDocument &doc, std::string_view user_id) {
    if (doc.find_user(user_id) == nullptr) throw Error("unknown-user", std::string(user_id));
    std::set<RoleInstance> out;
    for (const auto &ua : doc.ua)
        if (ua.user == user_id) out.insert(ua.role_instance);
    return out;
}

bool pattern_matches(const ParamBindings &pattern, const ParamBindings &bindings) {
    for (const auto &[name, value] : pattern) {
        if (is_wildcard(value)) continue;
        auto it = bindings.find(name);
        if (it == bindings.end() || it->second != value) return false;
    }
    return true;
}

std::set<std::string> role_closure(const ModelDocument &doc, std::string_view role) {
    std::set<std::string> out;
    std::vector<std::string> todo{std::string(role)};
    while (!todo.empty()) {
        std::string name = std::move(todo.back());
        todo.pop_back();
        if (!out.insert(name).second) continue;
        if (const RoleDecl *r = doc.find_role(name))
            for (const auto &j : r->juniors) todo.push_back(j);
    }
    return out;
}

RoleInstance restrict_to(const RoleInstance &ri, const RoleDecl &junior) {
    RoleInstance out{junior.name, {}};
    for (const auto &p : junior.param_names)
        if (auto it = ri.bindings.find(p); it != ri.bindings.end()) out.bindings.insert(*it);
    return out;
}

std::set<Privilege> own_privileges(const ModelDocument &doc, const RoleInstance &ri) {
    std::set<Privilege> out;
    for (const auto &pa : doc.pa)
        if (pa.role == ri.role && pa.privilege.action != kNullAction && pattern_matches(pa.role_param_pattern, ri.bindings))
            out.insert(pa.privilege);
    return out;
}

std::set<Privilege> authorized_privileges(const ModelDocument &doc, const RoleInstance &ri) {
    if (doc.find_role(ri.role) == nullptr) throw Error("unknown-role", ri.role);
    std::set<Privilege> out;
    for (const auto &name : role_closure(doc, ri.role)) {
        for (const auto &pa : doc.pa) {
            if (pa.role != name || pa.privilege.action == kNullAction) continue;
            if (pattern_matches(pa.role_param_pattern, ri.bindings)) out.insert(pa.privilege);
        }
    }
    return out;
}

bool privilege_covers(const Privilege &p, std::string_view service, std::string_view action,
                      const ParamBindings &aparams) {
    return p.service == service && p.action == action && pattern_matches(p.aparams, aparams);
}

OracleDecision oracle_decide(const ModelDocument &doc, std::string_view user_id, const RoleInstance &ri,
                             std::string_view service, std::string_view action, const ParamBindings &aparams) {
    auto enabled = enabled_role_instances(doc, user_id);
    if (doc.find_role(ri.role) == nullptr) throw Error("unknown-role", ri.role);
    if (doc.find_service(service) == nullptr) throw Error("unknown-service", std::string(service));
    if (!enabled.contains(ri)) return OracleDecision::NotApplicable;
    for (const auto &p : authorized_privileges(doc, ri))
        if (privilege_covers(p, service, action, aparams)) return OracleDecision::Permit;
    return OracleDecision::NotApplicable;
}

std::set<std::string> related_services(const ModelDocument &doc, std::string_view role) {
    std::set<std::string> out;
    auto closure = role_closure(doc, role);
    for (const auto &pa : doc.pa)
        if (closure.contains(pa.role) && pa.privilege.action != kNullAction) out.insert(pa.privilege.service);
    return out;
}

} // namespace prbac::model
