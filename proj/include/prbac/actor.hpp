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

#include "prbac/model.hpp"
#include "prbac/pdp.hpp"
#include "prbac/policy.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

/// Optional two-request Actor flow. Phase one checks that a user may
/// activate a role instance and issues an HMAC-SHA-256 token bound to
/// (user, role, time, constraints); phase two verifies the token before the
/// access request reaches the PDP.
///
/// Callers always pass `now` explicitly.
namespace prbac::actor {

/// Hex digits in a default (HMAC-SHA-256) mac.
inline constexpr size_t kMacHexLength = 64;

struct ActorToken {
    std::string user;
    std::string role_uri;
    std::int64_t time = 0; // Unix seconds
    std::string constraints;
    std::string mac; // lowercase hex

    friend bool operator==(const ActorToken &, const ActorToken &) = default;
};

enum class TokenStatus { Ok, Tampered, Expired, Future };

[[nodiscard]] std::string_view to_string(TokenStatus s) noexcept;

/// "user|role_uri|time|constraints"
[[nodiscard]] std::string canonical_message(std::string_view user, std::string_view role_uri, std::int64_t time,
                                            std::string_view constraints);

/// Lowercase hex HMAC-SHA-256.
[[nodiscard]] std::string hmac_sha256_hex(std::string_view key, std::string_view message);

/// Throws Error("no-secret"), Error("field-separator") when a field holds
/// '|' or a line break, Error("bad-time") for negative times.
[[nodiscard]] ActorToken issue_token(std::string_view secret, std::string_view user, std::string_view role_uri,
                                     std::int64_t time, std::string_view constraints = {});

/// Ok iff the mac matches (compared in constant time) and
/// 0 <= now - time <= window_secs. Throws Error("no-secret") or
/// Error("bad-window") on bad arguments.
[[nodiscard]] TokenStatus verify_token(std::string_view secret, const ActorToken &token, std::int64_t now,
                                       std::int64_t window_secs);

/// Single line "user|role_uri|time|constraints|mac".
[[nodiscard]] std::string to_wire(const ActorToken &token);
/// Throws Error("malformed-token").
[[nodiscard]] ActorToken parse_wire(std::string_view line);

inline constexpr std::string_view kActivationDenied = "activation-denied";

/// Phase one: asks the store whether `user` may activate `role_uri`. Returns
/// the token, or a NotApplicable response with status "activation-denied".
[[nodiscard]] std::variant<ActorToken, policy::ResponseCtx> activate(const pdp::PolicyStore &store,
                                                                     std::string_view secret, std::string_view user,
                                                                     std::string_view role_uri, std::int64_t now,
                                                                     std::string_view constraints = {});

/// Phase two: verifies the token, then decides `req`. A failed verification
/// yields Indeterminate with the verification error as status.
[[nodiscard]] policy::ResponseCtx evaluate_with_token(const pdp::PolicyStore &store, std::string_view secret,
                                                      const ActorToken &token, const policy::RequestCtx &req,
                                                      std::int64_t now, std::int64_t window_secs);

/// Both phases back to back for an activation of `ri` by `user`.
[[nodiscard]] policy::ResponseCtx two_phase_decide(const pdp::PolicyStore &store, std::string_view secret,
                                                   std::string_view user, const model::RoleInstance &ri,
                                                   std::string_view service, std::string_view action,
                                                   const model::ParamBindings &aparams, std::int64_t now,
                                                   std::int64_t window_secs);

} // namespace prbac::actor
