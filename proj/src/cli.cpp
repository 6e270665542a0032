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

#include "prbac/cli.hpp"

#include "prbac/actor.hpp"
#include "prbac/compiler.hpp"
#include "prbac/model_json.hpp"
#include "prbac/xml_io.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace prbac::cli {

namespace {

constexpr const char *kExitCodes = "Exit codes:\n"
                                   "  0  success\n"
                                   "  1  eval --expect-permit and the decision was not Permit\n"
                                   "  2  usage error\n"
                                   "  3  validation, parse or token verification failure";

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

service::HttpFrontend *g_frontend = nullptr;

extern "C" void on_signal(int) {
    if (g_frontend != nullptr) g_frontend->stop();
}

struct Options {
    std::string model_file;
    std::string out_dir;
    std::string policy_dir;
    std::string request_file;
    bool expect_permit = false;
    std::string listen = "127.0.0.1:8181";
    bool actor = false;
    std::int64_t window = 300;
    std::string secret_env{service::kDefaultSecretEnv};
    std::string user;
    std::string role_uri;
    std::optional<std::int64_t> time;
    std::string constraints;
    std::string token_file;
    std::optional<std::int64_t> now;
};

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Environment &environment) {
    CLI::App app{"Parameterized RBAC policy compiler and decision point", args.empty() ? "prbac" : args.front()};
    app.footer(kExitCodes);
    app.require_subcommand(1);
    Options o;

    auto *validate = app.add_subcommand("validate", "Check a model file and print its violations");
    validate->add_option("model", o.model_file, "Model JSON file")->required();

    auto *compile = app.add_subcommand("compile", "Compile a model into PolicySet files and roots.txt");
    compile->add_option("model", o.model_file, "Model JSON file")->required();
    compile->add_option("-o,--output", o.out_dir, "Output directory")->required();

    auto *eval = app.add_subcommand("eval", "Decide one request offline and print the Response");
    eval->add_option("--policies", o.policy_dir, "Policy directory")->required();
    eval->add_option("--request", o.request_file, "Request XML file")->required();
    eval->add_flag("--expect-permit", o.expect_permit, "Exit 1 unless the decision is Permit");

    auto *roles = app.add_subcommand("roles", "Print the role-value URIs a subject may activate");
    roles->add_option("--policies", o.policy_dir, "Policy directory")->required();
    roles->add_option("--subject", o.request_file, "Request XML file carrying subject attributes")->required();

    auto *serve = app.add_subcommand("serve", "Run the HTTP decision service");
    serve->add_option("--policies", o.policy_dir, "Policy directory")->required();
    serve->add_option("--listen", o.listen, "host:port (PRBAC_LISTEN overrides)");
    serve->add_flag("--actor", o.actor, "Enable the two-phase actor endpoints");
    serve->add_option("--window", o.window, "Actor token lifetime in seconds");
    serve->add_option("--secret-env", o.secret_env, "Environment variable holding the actor secret");

    auto *token = app.add_subcommand("token", "Issue or verify actor tokens (secret from PRBAC_ACTOR_SECRET)");
    token->require_subcommand(1);
    auto *issue = token->add_subcommand("issue", "Print a token line");
    issue->add_option("--user", o.user)->required();
    issue->add_option("--role-uri", o.role_uri)->required();
    issue->add_option("--time", o.time, "Unix seconds (default: now)");
    issue->add_option("--constraints", o.constraints);
    auto *verify = token->add_subcommand("verify", "Verify a token file");
    verify->add_option("--token-file", o.token_file)->required();
    verify->add_option("--window", o.window, "Allowed age in seconds");
    verify->add_option("--now", o.now, "Unix seconds (default: now)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n" << app.help();
        return kUsage;
    }

    auto secret = [&]() -> std::optional<std::string> {
        auto s = environment.env(std::string(service::kDefaultSecretEnv));
        if (!s || s->empty()) {
            err << "no-secret: set " << service::kDefaultSecretEnv << "\n";
            return std::nullopt;
        }
        return s;
    };

    try {
        if (*validate) {
            const auto violations = model::validate_model(model::load_model(o.model_file));
            for (const auto &v : violations) out << v.to_string() << "\n";
            err << violations.size() << " violation(s)\n";
            return violations.empty() ? kSuccess : kFailure;
        }
        if (*compile) {
            const auto store = compiler::compile_model(model::load_model(o.model_file));
            compiler::write_policy_dir(store, o.out_dir);
            err << "wrote " << store.size() << " policy sets (" << store.roots().size() << " roots) to " << o.out_dir
                << "\n";
            return kSuccess;
        }
        if (*eval) {
            const auto store = service::load_policy_dir(o.policy_dir);
            const auto resp = pdp::decide(store, xml::parse_request(read_file(o.request_file)));
            out << xml::serialize_response(resp);
            return o.expect_permit && resp.decision != policy::Decision::Permit ? kNotPermitted : kSuccess;
        }
        if (*roles) {
            const auto store = service::load_policy_dir(o.policy_dir);
            for (const auto &uri : pdp::enabled_roles_query(store, xml::parse_request(read_file(o.request_file)).subject))
                out << uri << "\n";
            return kSuccess;
        }
        if (*serve) {
            service::ServiceConfig config;
            config.policy_dir = o.policy_dir;
            config.listen_address = environment.env(std::string(service::kListenEnv)).value_or(o.listen);
            config.actor_mode = o.actor;
            config.actor_window_secs = o.window;
            config.actor_secret_source = o.secret_env;
            const auto [host, port] = service::split_listen_address(config.listen_address);
            service::DecisionService svc(config, environment.clock, environment.env);
            service::HttpFrontend frontend(svc);
            const int bound = frontend.bind(host, port);
            err << "listening on " << host << ":" << bound << (o.actor ? " (actor mode)" : "") << "\n";
            g_frontend = &frontend;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            frontend.run();
            g_frontend = nullptr;
            return kSuccess;
        }
        if (*issue) {
            auto s = secret();
            if (!s) return kUsage;
            const auto t = actor::issue_token(*s, o.user, o.role_uri, o.time.value_or(environment.clock()), o.constraints);
            out << actor::to_wire(t) << "\n";
            return kSuccess;
        }
        if (*verify) {
            auto s = secret();
            if (!s) return kUsage;
            if (o.window <= 0) {
                err << "bad-window: --window must be positive\n";
                return kUsage;
            }
            const auto t = actor::parse_wire(read_file(o.token_file));
            const auto status = actor::verify_token(*s, t, o.now.value_or(environment.clock()), o.window);
            if (status != actor::TokenStatus::Ok) {
                err << actor::to_string(status) << "\n";
                return kFailure;
            }
            out << "ok\n";
            return kSuccess;
        }
    } catch (const Error &e) {
        err << e.what() << "\n";
        return e.code() == "field-separator" || e.code() == "bad-listen-address" || e.code() == "no-secret" ? kUsage
                                                                                                          : kFailure;
    } catch (const std::exception &e) {
        err << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

} // namespace prbac::cli
