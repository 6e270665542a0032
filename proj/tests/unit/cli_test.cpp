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
#include "prbac/actor.hpp"
#include "prbac/cli.hpp"
#include "prbac/compiler.hpp"
#include "prbac/xml_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace prbac;
using prbac::testing::data_dir;
using prbac::testing::kStudentRoleUri;
using prbac::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

cli::Environment env_with(std::optional<std::string> secret, std::int64_t now = 1700000000) {
    cli::Environment e;
    e.clock = [now] { return now; };
    e.env = [secret](const std::string &name) -> std::optional<std::string> {
        if (name == "PRBAC_ACTOR_SECRET") return secret;
        return std::nullopt;
    };
    return e;
}

Result run(std::vector<std::string> args, const cli::Environment &env = env_with(std::nullopt)) {
    args.insert(args.begin(), "prbac");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err, env);
    return {code, out.str(), err.str()};
}

std::string data(const char *name) { return (data_dir() / name).string(); }

} // namespace

TEST_CASE("validate") {
    auto r = run({"validate", data("student_model.json")});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.empty());

    TempDir dir;
    prbac::testing::write_file(dir.path() / "bad.json",
                               R"({"roles": [{"name": "a", "juniors": ["b"]}, {"name": "b", "juniors": ["a"]}]})");
    r = run({"validate", (dir.path() / "bad.json").string()});
    CHECK(r.code == cli::kFailure);
    CHECK(r.out.find("hierarchy-cycle") != std::string::npos);

    prbac::testing::write_file(dir.path() / "syntax.json", "{");
    CHECK(run({"validate", (dir.path() / "syntax.json").string()}).code == cli::kFailure);
}

TEST_CASE("compile then eval permits the student request") {
    TempDir dir;
    auto r = run({"compile", data("student_model.json"), "-o", dir.path().string()});
    REQUIRE(r.code == cli::kSuccess);

    r = run({"eval", "--policies", dir.path().string(), "--request", data("student_request.xml")});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("<Decision>Permit</Decision>") != std::string::npos);

    // Byte-identical to the library route.
    const auto store = compiler::compile_model(prbac::testing::student_model());
    const auto req = xml::parse_request(prbac::testing::read_data("student_request.xml"));
    CHECK(r.out == xml::serialize_response(pdp::decide(store, req)));

    r = run({"roles", "--policies", dir.path().string(), "--subject", data("student_subject.xml")});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out == kStudentRoleUri + "\n");
}

TEST_CASE("eval against an empty policy directory") {
    TempDir dir;
    prbac::testing::write_file(dir.path() / "roots.txt", "");
    auto r = run({"eval", "--policies", dir.path().string(), "--request", data("student_request.xml")});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("<Decision>NotApplicable</Decision>") != std::string::npos);

    r = run({"eval", "--policies", dir.path().string(), "--request", data("student_request.xml"), "--expect-permit"});
    CHECK(r.code == cli::kNotPermitted);
}

TEST_CASE("usage errors") {
    CHECK(run({"eval", "--bogus"}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({}).code == cli::kUsage);
    auto r = run({"--help"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("Exit codes") != std::string::npos);
}

TEST_CASE("parse failures exit 3") {
    TempDir dir;
    prbac::testing::write_file(dir.path() / "roots.txt", "");
    prbac::testing::write_file(dir.path() / "bad.xml", "<PolicySet");
    auto r = run({"eval", "--policies", dir.path().string(), "--request", data("student_request.xml")});
    CHECK(r.code == cli::kFailure);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("token issue and verify") {
    const auto env = env_with("k");
    auto r = run({"token", "issue", "--user", "u1", "--role-uri", kStudentRoleUri, "--time", "1700000000"}, env);
    REQUIRE(r.code == cli::kSuccess);
    CHECK(r.out == actor::to_wire(actor::issue_token("k", "u1", kStudentRoleUri, 1700000000)) + "\n");

    TempDir dir;
    const auto file = (dir.path() / "token.txt").string();
    prbac::testing::write_file(file, r.out);
    r = run({"token", "verify", "--token-file", file, "--now", "1700000300"}, env);
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out == "ok\n");

    r = run({"token", "verify", "--token-file", file, "--now", "1700000301"}, env);
    CHECK(r.code == cli::kFailure);
    CHECK(r.err == "expired\n");

    auto tampered = prbac::testing::read_file(file);
    tampered[tampered.size() - 2] = tampered[tampered.size() - 2] == 'a' ? 'b' : 'a';
    prbac::testing::write_file(file, tampered);
    r = run({"token", "verify", "--token-file", file}, env);
    CHECK(r.code == cli::kFailure);
    CHECK(r.err == "tampered\n");

    // Default time comes from the clock.
    r = run({"token", "issue", "--user", "u1", "--role-uri", kStudentRoleUri}, env);
    CHECK(actor::parse_wire(r.out).time == 1700000000);
}

TEST_CASE("token commands without a secret or with bad fields") {
    auto r = run({"token", "issue", "--user", "u1", "--role-uri", kStudentRoleUri});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("no-secret") != std::string::npos);

    r = run({"token", "issue", "--user", "a|b", "--role-uri", kStudentRoleUri}, env_with("k"));
    CHECK(r.code == cli::kUsage);
}
