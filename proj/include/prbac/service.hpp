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

#include "prbac/pdp.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace prbac::service {

inline constexpr std::string_view kDefaultSecretEnv = "PRBAC_ACTOR_SECRET";
inline constexpr std::string_view kListenEnv = "PRBAC_LISTEN";

struct ServiceConfig {
    std::string listen_address = "127.0.0.1:8181";
    std::filesystem::path policy_dir;
    std::string actor_secret_source{kDefaultSecretEnv}; // env var name, never the secret itself
    std::int64_t actor_window_secs = 300;
    bool actor_mode = false;
};

/// Reads every `*.xml` PolicySet plus `roots.txt` (one root id per line).
/// Error codes: "parse" (file and line in the message), "dangling-ref",
/// "duplicate-id", "no-roots", "invalid-policy", "io".
[[nodiscard]] pdp::PolicyStore load_policy_dir(const std::filesystem::path &dir);

/// "host:port" -> (host, port). Throws Error("bad-listen-address").
[[nodiscard]] std::pair<std::string, int> split_listen_address(std::string_view addr);

struct Snapshot {
    std::uint64_t id = 0;
    std::shared_ptr<const pdp::PolicyStore> store;
};

struct HttpResult {
    int status = 200;
    std::string content_type = "text/plain";
    std::string body;

    friend bool operator==(const HttpResult &, const HttpResult &) = default;
};

using Clock = std::function<std::int64_t()>;
using EnvLookup = std::function<std::optional<std::string>(const std::string &)>;

[[nodiscard]] std::int64_t system_clock_seconds();
[[nodiscard]] std::optional<std::string> process_env(const std::string &name);

/// Policy administration plus the decision endpoints, independent of the
/// transport. Each request evaluates against the snapshot current when it
/// started; swapping replaces the snapshot pointer atomically and never
/// blocks on evaluation.
class DecisionService {
public:
    /// Loads the initial store from config.policy_dir. Throws Error on load
    /// failure, Error("no-secret") if actor mode is on without a secret and
    /// Error("bad-window") for a non-positive window.
    explicit DecisionService(ServiceConfig config, Clock clock = system_clock_seconds, EnvLookup env = process_env);

    /// Starts from an already built store instead of reading policy_dir.
    DecisionService(ServiceConfig config, pdp::PolicyStore initial, Clock clock = system_clock_seconds,
                    EnvLookup env = process_env);

    [[nodiscard]] Snapshot snapshot() const;

    /// Returns the id of the snapshot that was replaced.
    std::uint64_t swap_store(pdp::PolicyStore new_store);

    /// Re-reads policy_dir and swaps on success. On failure the serving
    /// snapshot is untouched and the error propagates.
    std::uint64_t reload();

    /// Routes one request. Only PUT /v1/policies changes state.
    HttpResult handle(std::string_view method, std::string_view path, std::string_view body);

    [[nodiscard]] const ServiceConfig &config() const noexcept { return config_; }

private:
    [[nodiscard]] HttpResult evaluate(std::string_view body) const;
    [[nodiscard]] HttpResult roles(std::string_view body) const;
    [[nodiscard]] HttpResult actor_activate(std::string_view body) const;
    [[nodiscard]] HttpResult actor_evaluate(std::string_view body) const;
    HttpResult reload_route();

    ServiceConfig config_;
    Clock clock_;
    std::string secret_;

    mutable std::mutex snapshot_mu_; // guards the pointer copy only
    std::shared_ptr<const Snapshot> current_;
    std::uint64_t next_id_ = 1;
    std::mutex reload_mu_;
};

/// HTTP/1.1 transport for a DecisionService.
class HttpFrontend {
public:
    explicit HttpFrontend(DecisionService &service);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend &) = delete;
    HttpFrontend &operator=(const HttpFrontend &) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws
    /// Error("bind") on failure.
    int bind(const std::string &host, int port);
    /// Blocks until stop().
    void run();
    void stop();
    [[nodiscard]] bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace prbac::service
