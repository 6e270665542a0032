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


#include "fixtures.hpp"
#include "hmac_oracle.hpp"
#include "prbac/actor.hpp"
#include "prbac/compiler.hpp"
#include "prbac/error.hpp"

#include <doctest.h>

#include <cctype>

using namespace prbac;
using namespace prbac::actor;
using prbac::policy::Decision;
using prbac::testing::kStudentRoleUri;
using prbac::testing::student_instance;

namespace {

template <typename F> std::string error_code(F &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    return "";
}

const model::ParamBindings kStudentAParams{{"studentid", "02123781"}};

} // namespace

TEST_CASE("the test oracle reproduces published SHA-256 and HMAC vectors") {
    using prbac::testing::hmac_sha256_hex;
    using prbac::testing::sha256_hex;
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    CHECK(hmac_sha256_hex(std::string(20, '\x0b'), "Hi There") ==
          "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    CHECK(hmac_sha256_hex("Jefe", "what do ya want for nothing?") ==
          "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    CHECK(hmac_sha256_hex(std::string(131, '\xaa'), "Test Using Larger Than Block-Size Key - Hash Key First") ==
          "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
}

TEST_CASE("known vector against the independent HMAC") {
    const std::string message = "u1|" + kStudentRoleUri + "|1700000000|";
    CHECK(canonical_message("u1", kStudentRoleUri, 1700000000, "") == message);
    auto token = issue_token("key", "u1", kStudentRoleUri, 1700000000);
    CHECK(token.mac == prbac::testing::hmac_sha256_hex("key", message));
    CHECK(token.mac.size() == kMacHexLength);
}

TEST_CASE("issue then verify") {
    auto token = issue_token("s3cret", "u1", kStudentRoleUri, 1000, "campus");
    CHECK(verify_token("s3cret", token, 1000, 300) == TokenStatus::Ok);
    CHECK(verify_token("s3cret", token, 1010, 300) == TokenStatus::Ok);
    CHECK(verify_token("s3cret", token, 1300, 300) == TokenStatus::Ok);
    CHECK(verify_token("s3cret", token, 1301, 300) == TokenStatus::Expired);
    CHECK(verify_token("s3cret", token, 999, 300) == TokenStatus::Future);
    CHECK(verify_token("other", token, 1000, 300) == TokenStatus::Tampered);
}

TEST_CASE("every field is covered by the mac") {
    const auto token = issue_token("k", "u1", kStudentRoleUri, 1000, "c");
    auto flip = token;
    flip.mac[0] = flip.mac[0] == '0' ? '1' : '0';
    CHECK(verify_token("k", flip, 1000, 300) == TokenStatus::Tampered);
    auto user = token;
    user.user = "u2";
    CHECK(verify_token("k", user, 1000, 300) == TokenStatus::Tampered);
    auto role = token;
    role.role_uri += "x";
    CHECK(verify_token("k", role, 1000, 300) == TokenStatus::Tampered);
    auto time = token;
    time.time = 1001;
    CHECK(verify_token("k", time, 1001, 300) == TokenStatus::Tampered);
    auto constraints = token;
    constraints.constraints = "d";
    CHECK(verify_token("k", constraints, 1000, 300) == TokenStatus::Tampered);
}

TEST_CASE("issue and verify errors") {
    CHECK(error_code([] { (void)issue_token("k", "a|b", kStudentRoleUri, 1); }) == "field-separator");
    CHECK(error_code([] { (void)issue_token("k", "u", kStudentRoleUri, 1, "x\ny"); }) == "field-separator");
    CHECK(error_code([] { (void)issue_token("", "u", kStudentRoleUri, 1); }) == "no-secret");
    CHECK(error_code([] { (void)issue_token("k", "u", kStudentRoleUri, -1); }) == "bad-time");
    const auto token = issue_token("k", "u", kStudentRoleUri, 1);
    CHECK(error_code([&] { (void)verify_token("k", token, 1, 0); }) == "bad-window");
    CHECK(error_code([&] { (void)verify_token("", token, 1, 10); }) == "no-secret");
}

TEST_CASE("wire form") {
    const auto token = issue_token("k", "u1", kStudentRoleUri, 1700000000, "");
    const auto wire = to_wire(token);
    CHECK(wire == "u1|" + kStudentRoleUri + "|1700000000||" + token.mac);
    CHECK(parse_wire(wire) == token);
    CHECK(parse_wire(wire + "\n") == token);
    const auto secretive = to_wire(issue_token("zz-server-secret-zz", "u1", kStudentRoleUri, 1));
    CHECK(secretive.find("zz-server-secret-zz") == std::string::npos);

    CHECK(error_code([] { (void)parse_wire("a|b|c"); }) == "malformed-token");
    CHECK(error_code([&] { (void)parse_wire("u|r|x||" + token.mac); }) == "malformed-token");
    CHECK(error_code([&] { (void)parse_wire("u|r|1||" + token.mac.substr(1)); }) == "malformed-token");
    std::string upper = token.mac;
    for (auto &c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper != token.mac) CHECK(error_code([&] { (void)parse_wire("u|r|1||" + upper); }) == "malformed-token");
}

TEST_CASE("two_phase_decide") {
    const auto store = compiler::compile_model(prbac::testing::student_model());
    const auto plain = pdp::decide(
        store, compiler::access_request(student_instance(), "registrationService", "register", kStudentAParams));
    auto both = two_phase_decide(store, "k", "u1", student_instance(), "registrationService", "register", kStudentAParams,
                                 5000, 300);
    CHECK(both == plain);
    CHECK(both.decision == Decision::Permit);

    auto denied = two_phase_decide(store, "k", "u2", student_instance(), "registrationService", "register",
                                   kStudentAParams, 5000, 300);
    CHECK(denied == policy::ResponseCtx{Decision::NotApplicable, "activation-denied"});
}

TEST_CASE("replayed token after the window is expired") {
    const auto store = compiler::compile_model(prbac::testing::student_model());
    auto phase1 = activate(store, "k", "u1", kStudentRoleUri, 5000);
    REQUIRE(std::holds_alternative<ActorToken>(phase1));
    const auto &token = std::get<ActorToken>(phase1);
    const auto req = compiler::access_request(student_instance(), "registrationService", "register", kStudentAParams);
    CHECK(evaluate_with_token(store, "k", token, req, 5300, 300).decision == Decision::Permit);
    CHECK(evaluate_with_token(store, "k", token, req, 5301, 300) ==
          policy::ResponseCtx{Decision::Indeterminate, "expired"});
    auto forged = token;
    forged.mac.back() = forged.mac.back() == 'a' ? 'b' : 'a';
    CHECK(evaluate_with_token(store, "k", forged, req, 5000, 300) ==
          policy::ResponseCtx{Decision::Indeterminate, "tampered"});
}
