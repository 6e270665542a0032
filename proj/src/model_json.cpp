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

#include "prbac/model_json.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace prbac::model {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &where, const std::string &what) { throw Error("model-json", where + ": " + what); }

const json &expect_object(const json &j, const std::string &where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto &[k, v] : j.items()) {
        bool known = false;
        for (auto key : keys) known = known || k == key;
        if (!known) fail(where, "unknown key '" + k + "'");
    }
    return j;
}

std::string get_string(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing '") + key + "'");
    if (!it->is_string()) fail(where, std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> get_string_list(const json &obj, const char *key, const std::string &where) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (!it->is_array()) fail(where, std::string("'") + key + "' must be an array");
    for (const auto &e : *it) {
        if (!e.is_string()) fail(where, std::string("'") + key + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

ParamBindings get_bindings(const json &obj, const char *key, const std::string &where) {
    ParamBindings out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (!it->is_object()) fail(where, std::string("'") + key + "' must be an object");
    for (const auto &[k, v] : it->items()) {
        if (!v.is_string()) fail(where, std::string("'") + key + "." + k + "' must be a string");
        out.emplace(k, v.get<std::string>());
    }
    return out;
}

const json *get_array(const json &root, const char *key) {
    auto it = root.find(key);
    if (it == root.end()) return nullptr;
    if (!it->is_array()) fail(key, "must be an array");
    return &*it;
}

json bindings_json(const ParamBindings &b) {
    json j = json::object();
    for (const auto &[k, v] : b) j[k] = v;
    return j;
}

} // namespace

ModelDocument parse_model(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw Error("model-json", e.what());
    }
    expect_object(root, "model", {"users", "roles", "services", "ua", "pa"});

    ModelDocument doc;
    if (const json *users = get_array(root, "users")) {
        for (const auto &u : *users) {
            expect_object(u, "users[]", {"id", "attributes"});
            User user{get_string(u, "id", "users[]"), {}};
            for (const auto &[k, v] : get_bindings(u, "attributes", "users[]")) user.attributes.emplace(k, v);
            doc.users.push_back(std::move(user));
        }
    }
    if (const json *roles = get_array(root, "roles")) {
        for (const auto &r : *roles) {
            expect_object(r, "roles[]", {"name", "param_names", "juniors"});
            RoleDecl role;
            role.name = get_string(r, "name", "roles[]");
            role.param_names = get_string_list(r, "param_names", "roles[" + role.name + "]");
            for (auto &j : get_string_list(r, "juniors", "roles[" + role.name + "]")) role.juniors.insert(std::move(j));
            doc.roles.push_back(std::move(role));
        }
    }
    if (const json *services = get_array(root, "services")) {
        for (const auto &s : *services) {
            expect_object(s, "services[]", {"id", "actions"});
            Service svc;
            svc.id = get_string(s, "id", "services[]");
            for (auto &a : get_string_list(s, "actions", "services[" + svc.id + "]")) svc.actions.insert(std::move(a));
            doc.services.push_back(std::move(svc));
        }
    }
    if (const json *ua = get_array(root, "ua")) {
        for (const auto &a : *ua) {
            expect_object(a, "ua[]", {"user", "role_instance"});
            UserAssignment entry;
            entry.user = get_string(a, "user", "ua[]");
            auto ri = a.find("role_instance");
            if (ri == a.end()) fail("ua[]", "missing 'role_instance'");
            expect_object(*ri, "ua[].role_instance", {"role", "bindings"});
            entry.role_instance.role = get_string(*ri, "role", "ua[].role_instance");
            entry.role_instance.bindings = get_bindings(*ri, "bindings", "ua[].role_instance");
            doc.ua.push_back(std::move(entry));
        }
    }
    if (const json *pa = get_array(root, "pa")) {
        for (const auto &a : *pa) {
            expect_object(a, "pa[]", {"role", "role_param_pattern", "privilege"});
            PrivAssignment entry;
            entry.role = get_string(a, "role", "pa[]");
            entry.role_param_pattern = get_bindings(a, "role_param_pattern", "pa[]");
            auto p = a.find("privilege");
            if (p == a.end()) fail("pa[]", "missing 'privilege'");
            expect_object(*p, "pa[].privilege", {"service", "action", "aparams"});
            entry.privilege.service = get_string(*p, "service", "pa[].privilege");
            entry.privilege.action = get_string(*p, "action", "pa[].privilege");
            entry.privilege.aparams = get_bindings(*p, "aparams", "pa[].privilege");
            doc.pa.push_back(std::move(entry));
        }
    }
    return doc;
}

ModelDocument load_model(const std::filesystem::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string serialize_model(const ModelDocument &doc) {
    json root = json::object();
    root["users"] = json::array();
    for (const auto &u : doc.users) {
        json attrs = json::object();
        for (const auto &[k, v] : u.attributes) attrs[k] = v;
        root["users"].push_back({{"id", u.id}, {"attributes", attrs}});
    }
    root["roles"] = json::array();
    for (const auto &r : doc.roles)
        root["roles"].push_back({{"name", r.name}, {"param_names", r.param_names}, {"juniors", r.juniors}});
    root["services"] = json::array();
    for (const auto &s : doc.services) root["services"].push_back({{"id", s.id}, {"actions", s.actions}});
    root["ua"] = json::array();
    for (const auto &a : doc.ua)
        root["ua"].push_back({{"user", a.user},
                              {"role_instance",
                               {{"role", a.role_instance.role}, {"bindings", bindings_json(a.role_instance.bindings)}}}});
    root["pa"] = json::array();
    for (const auto &a : doc.pa)
        root["pa"].push_back({{"role", a.role},
                              {"role_param_pattern", bindings_json(a.role_param_pattern)},
                              {"privilege",
                               {{"service", a.privilege.service},
                                {"action", a.privilege.action},
                                {"aparams", bindings_json(a.privilege.aparams)}}}});
    return root.dump(2) + "\n";
}

} // namespace prbac::model
