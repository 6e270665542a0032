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

#include "prbac/actor.hpp"

#include "prbac/compiler.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <charconv>
#include <vector>

namespace prbac::actor {

using policy::Decision;
using policy::ResponseCtx;

std::string_view to_string(TokenStatus s) noexcept {
    switch (s) {
    case TokenStatus::Ok: return "ok";
    case TokenStatus::Tampered: return "tampered";
    case TokenStatus::Expired: return "expired";
    case TokenStatus::Future: return "future";
    }
    return "tampered";
}

std::string canonical_message(std::string_view user, std::string_view role_uri, std::int64_t time,
                              std::string_view constraints) {
    std::string msg;
    msg.reserve(user.size() + role_uri.size() + constraints.size() + 24);
    msg += user;
    msg += '|';
    msg += role_uri;
    msg += '|';
    msg += std::to_string(time);
    msg += '|';
    msg += constraints;
    return msg;
}

std::string hmac_sha256_hex(std::string_view key, std::string_view message) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
             reinterpret_cast<const unsigned char *>(message.data()), message.size(), digest.data(), &len) == nullptr)
        throw Error("hmac", "HMAC-SHA-256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0x0f];
    }
    return hex;
}

namespace {

void check_field(std::string_view name, std::string_view value) {
    if (value.find_first_of("|\r\n") != std::string_view::npos)
        throw Error("field-separator", std::string(name) + " must not contain '|' or line breaks");
}

} // namespace

ActorToken issue_token(std::string_view secret, std::string_view user, std::string_view role_uri, std::int64_t time,
                       std::string_view constraints) {
    if (secret.empty()) throw Error("no-secret", "");
    check_field("user", user);
    check_field("role_uri", role_uri);
    check_field("constraints", constraints);
    if (time < 0) throw Error("bad-time", std::to_string(time));
    ActorToken t{std::string(user), std::string(role_uri), time, std::string(constraints), {}};
    t.mac = hmac_sha256_hex(secret, canonical_message(user, role_uri, time, constraints));
    return t;
}

TokenStatus verify_token(std::string_view secret, const ActorToken &token, std::int64_t now, std::int64_t window_secs) {
    if (secret.empty()) throw Error("no-secret", "");
    if (window_secs <= 0) throw Error("bad-window", std::to_string(window_secs));
    const std::string expected =
        hmac_sha256_hex(secret, canonical_message(token.user, token.role_uri, token.time, token.constraints));
    if (token.mac.size() != expected.size() ||
        CRYPTO_memcmp(token.mac.data(), expected.data(), expected.size()) != 0)
        return TokenStatus::Tampered;
    if (token.time > now) return TokenStatus::Future;
    if (now - token.time > window_secs) return TokenStatus::Expired;
    return TokenStatus::Ok;
}

std::string to_wire(const ActorToken &token) {
    return canonical_message(token.user, token.role_uri, token.time, token.constraints) + "|" + token.mac;
}

ActorToken parse_wire(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        size_t bar = line.find('|', start);
        fields.push_back(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    if (fields.size() != 5) throw Error("malformed-token", "expected 5 '|'-separated fields");

    ActorToken t;
    t.user = fields[0];
    t.role_uri = fields[1];
    const auto time = fields[2];
    auto [ptr, ec] = std::from_chars(time.data(), time.data() + time.size(), t.time);
    if (time.empty() || ec != std::errc{} || ptr != time.data() + time.size() || t.time < 0)
        throw Error("malformed-token", "bad time field");
    t.constraints = fields[3];
    t.mac = fields[4];
    if (t.mac.size() != kMacHexLength ||
        t.mac.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw Error("malformed-token", "mac must be 64 lowercase hex digits");
    return t;
}

std::variant<ActorToken, ResponseCtx> activate(const pdp::PolicyStore &store, std::string_view secret,
                                               std::string_view user, std::string_view role_uri, std::int64_t now,
                                               std::string_view constraints) {
    const auto resp = pdp::decide(store, compiler::activation_request(user, role_uri));
    if (resp.decision != Decision::Permit) return ResponseCtx{Decision::NotApplicable, std::string(kActivationDenied)};
    return issue_token(secret, user, role_uri, now, constraints);
}

ResponseCtx evaluate_with_token(const pdp::PolicyStore &store, std::string_view secret, const ActorToken &token,
                                const policy::RequestCtx &req, std::int64_t now, std::int64_t window_secs) {
    const TokenStatus status = verify_token(secret, token, now, window_secs);
    if (status != TokenStatus::Ok) return ResponseCtx{Decision::Indeterminate, std::string(to_string(status))};
    return pdp::decide(store, req);
}

ResponseCtx two_phase_decide(const pdp::PolicyStore &store, std::string_view secret, std::string_view user,
                             const model::RoleInstance &ri, std::string_view service, std::string_view action,
                             const model::ParamBindings &aparams, std::int64_t now, std::int64_t window_secs) {
    auto phase1 = activate(store, secret, user, compiler::role_value_uri(ri), now);
    if (auto *denied = std::get_if<ResponseCtx>(&phase1)) return *denied;
    const auto &token = std::get<ActorToken>(phase1);
    return evaluate_with_token(store, secret, token, compiler::access_request(ri, service, action, aparams), now,
                               window_secs);
}

} // namespace prbac::actor
