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

#include "prbac/service.hpp"

#include "prbac/actor.hpp"
#include "prbac/xml_io.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace prbac::service {

namespace fs = std::filesystem;
using policy::Decision;

namespace {

constexpr std::string_view kXml = "application/xml";
constexpr std::string_view kText = "text/plain";

std::string read_file(const fs::path &file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string_view trim_line_end(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

HttpResult text(int status, std::string body) { return {status, std::string(kText), std::move(body)}; }
HttpResult xml_body(std::string body) { return {200, std::string(kXml), std::move(body)}; }

} // namespace

pdp::PolicyStore load_policy_dir(const fs::path &dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error("io", dir.string() + " is not a directory");
    const fs::path roots_file = dir / "roots.txt";
    if (!fs::exists(roots_file)) throw Error("no-roots", roots_file.string());

    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<policy::PolicySet> sets;
    for (const auto &f : files) {
        try {
            sets.push_back(xml::parse_policy_set(read_file(f)).policy_set);
        } catch (const xml::ParseError &e) {
            throw Error("parse", f.filename().string() + ": " + e.what());
        }
    }

    std::vector<std::string> roots;
    std::istringstream in(read_file(roots_file));
    for (std::string line; std::getline(in, line);) {
        auto id = trim_line_end(line);
        if (!id.empty()) roots.emplace_back(id);
    }

    std::set<std::string> ids;
    for (const auto &ps : sets)
        if (!ids.insert(ps.id).second) throw Error("duplicate-id", ps.id);
    for (const auto &r : roots)
        if (!ids.contains(r)) throw Error("dangling-ref", r);

    pdp::PolicyStore store(std::move(sets), std::move(roots));
    auto violations = store.check();
    for (const auto &v : violations)
        if (v.rule == "dangling-ref") throw Error("dangling-ref", v.entity);
    if (!violations.empty()) throw ValidationError("invalid-policy", std::move(violations));
    return store;
}

std::pair<std::string, int> split_listen_address(std::string_view addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string_view::npos || colon == 0) throw Error("bad-listen-address", std::string(addr));
    int port = 0;
    auto digits = addr.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 || port > 65535)
        throw Error("bad-listen-address", std::string(addr));
    auto host = addr.substr(0, colon);
    if (host.size() > 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    return {std::string(host), port};
}

std::int64_t system_clock_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

std::optional<std::string> process_env(const std::string &name) {
    const char *v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
}

DecisionService::DecisionService(ServiceConfig config, Clock clock, EnvLookup env)
    : DecisionService(config, load_policy_dir(config.policy_dir), std::move(clock), std::move(env)) {}

DecisionService::DecisionService(ServiceConfig config, pdp::PolicyStore initial, Clock clock, EnvLookup env)
    : config_(std::move(config)), clock_(std::move(clock)) {
    if (config_.actor_window_secs <= 0) throw Error("bad-window", std::to_string(config_.actor_window_secs));
    if (config_.actor_mode) {
        auto secret = env(config_.actor_secret_source);
        if (!secret || secret->empty()) throw Error("no-secret", "environment variable " + config_.actor_secret_source);
        secret_ = std::move(*secret);
    }
    current_ = std::make_shared<const Snapshot>(Snapshot{next_id_++, std::make_shared<const pdp::PolicyStore>(std::move(initial))});
}

Snapshot DecisionService::snapshot() const {
    std::lock_guard lock(snapshot_mu_);
    return *current_;
}

std::uint64_t DecisionService::swap_store(pdp::PolicyStore new_store) {
    auto store = std::make_shared<const pdp::PolicyStore>(std::move(new_store));
    std::lock_guard lock(snapshot_mu_);
    const std::uint64_t previous = current_->id;
    current_ = std::make_shared<const Snapshot>(Snapshot{next_id_++, std::move(store)});
    return previous;
}

std::uint64_t DecisionService::reload() {
    std::lock_guard lock(reload_mu_);
    return swap_store(load_policy_dir(config_.policy_dir));
}

HttpResult DecisionService::handle(std::string_view method, std::string_view path, std::string_view body) {
    struct Route {
        std::string_view method, path;
    };
    static constexpr Route kRoutes[] = {{"POST", "/v1/evaluate"},       {"POST", "/v1/roles"},
                                        {"POST", "/v1/actor/activate"}, {"POST", "/v1/actor/evaluate"},
                                        {"PUT", "/v1/policies"},         {"GET", "/v1/health"}};
    const auto *route = std::find_if(std::begin(kRoutes), std::end(kRoutes), [&](const Route &r) { return r.path == path; });
    if (route == std::end(kRoutes)) return text(404, "not-found");
    if (route->method != method) return text(405, "method-not-allowed");

    if (path == "/v1/evaluate") return evaluate(body);
    if (path == "/v1/roles") return roles(body);
    if (path == "/v1/actor/activate") return actor_activate(body);
    if (path == "/v1/actor/evaluate") return actor_evaluate(body);
    if (path == "/v1/policies") return reload_route();
    return text(200, "ok");
}

HttpResult DecisionService::evaluate(std::string_view body) const {
    policy::RequestCtx req;
    try {
        req = xml::parse_request(body);
    } catch (const Error &e) {
        return text(400, e.what());
    }
    const Snapshot snap = snapshot();
    return xml_body(xml::serialize_response(pdp::decide(*snap.store, req)));
}

HttpResult DecisionService::roles(std::string_view body) const {
    policy::RequestCtx req;
    try {
        req = xml::parse_request(body);
    } catch (const Error &e) {
        return text(400, e.what());
    }
    const Snapshot snap = snapshot();
    std::string out;
    for (const auto &uri : pdp::enabled_roles_query(*snap.store, req.subject)) out += uri + "\n";
    return text(200, std::move(out));
}

HttpResult DecisionService::actor_activate(std::string_view body) const {
    if (!config_.actor_mode) return text(404, "not-found");
    const auto line = trim_line_end(body);
    const auto bar = line.find('|');
    if (bar == std::string_view::npos || line.find('|', bar + 1) != std::string_view::npos)
        return text(400, "body must be 'user|role_uri'");
    const auto user = line.substr(0, bar);
    const auto role_uri = line.substr(bar + 1);
    if (user.empty() || role_uri.empty()) return text(400, "body must be 'user|role_uri'");

    const Snapshot snap = snapshot();
    try {
        auto outcome = actor::activate(*snap.store, secret_, user, role_uri, clock_());
        if (std::holds_alternative<policy::ResponseCtx>(outcome)) return text(403, std::string(actor::kActivationDenied));
        return text(200, actor::to_wire(std::get<actor::ActorToken>(outcome)));
    } catch (const Error &e) {
        return text(400, e.code());
    }
}

HttpResult DecisionService::actor_evaluate(std::string_view body) const {
    if (!config_.actor_mode) return text(404, "not-found");
    size_t split = body.find("\n\n");
    size_t skip = 2;
    if (const size_t crlf = body.find("\r\n\r\n"); crlf != std::string_view::npos && crlf < split) {
        split = crlf;
        skip = 4;
    }
    if (split == std::string_view::npos) return text(400, "body must be a token line, a blank line, then a Request");

    actor::ActorToken token;
    try {
        token = actor::parse_wire(body.substr(0, split));
    } catch (const Error &e) {
        return text(401, e.code());
    }
    policy::RequestCtx req;
    try {
        req = xml::parse_request(body.substr(split + skip));
    } catch (const Error &e) {
        return text(400, e.what());
    }

    // The token vouches for one user and one role; the request may not claim others.
    const auto roles = policy::bag_lookup(req.subject, {std::string(policy::uri::kSubjectRole), std::string(policy::uri::kAnyUri)});
    const auto users = policy::bag_lookup(req.subject, {std::string(policy::uri::kSubjectId), std::string(policy::uri::kString)});
    const bool roles_ok = !roles.empty() && std::all_of(roles.begin(), roles.end(), [&](const std::string &r) { return r == token.role_uri; });
    const bool users_ok = std::all_of(users.begin(), users.end(), [&](const std::string &u) { return u == token.user; });

    const auto status = actor::verify_token(secret_, token, clock_(), config_.actor_window_secs);
    if (status != actor::TokenStatus::Ok) return text(401, std::string(actor::to_string(status)));
    if (!roles_ok || !users_ok) return text(401, "token-mismatch");

    const Snapshot snap = snapshot();
    return xml_body(xml::serialize_response(pdp::decide(*snap.store, req)));
}

HttpResult DecisionService::reload_route() {
    try {
        const auto previous = reload();
        return text(200, "reloaded " + std::to_string(previous) + " -> " + std::to_string(snapshot().id) + "\n");
    } catch (const Error &e) {
        return text(409, e.what());
    } catch (const std::exception &e) {
        return text(409, e.what());
    }
}

struct HttpFrontend::Impl {
    DecisionService &service;
    httplib::Server server;

    explicit Impl(DecisionService &s) : service(s) {
        auto bridge = [this](const httplib::Request &req, httplib::Response &res) {
            HttpResult r = service.handle(req.method, req.path, req.body);
            res.status = r.status;
            res.set_content(r.body, r.content_type);
        };
        for (const char *path : {"/v1/evaluate", "/v1/roles", "/v1/actor/activate", "/v1/actor/evaluate", "/v1/policies",
                                 "/v1/health"}) {
            server.Get(path, bridge);
            server.Post(path, bridge);
            server.Put(path, bridge);
        }
    }
};

HttpFrontend::HttpFrontend(DecisionService &service) : impl_(std::make_unique<Impl>(service)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string &host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw Error("bind", host + ":0");
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) throw Error("bind", host + ":" + std::to_string(port));
    return port;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
    if (impl_) impl_->server.stop();
}

bool HttpFrontend::running() const { return impl_->server.is_running(); }

} // namespace prbac::service
