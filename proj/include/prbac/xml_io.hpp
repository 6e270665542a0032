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

#include "prbac/policy.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// XML reading and writing for the XACML 1.0 subset.
///
/// Input is UTF-8; DOCTYPE declarations are refused. Output is canonical:
/// two-space indentation, fixed attribute order, one (AttributeValue,
/// Designator) pair per match element, and an XML declaration.
namespace prbac::xml {

struct ParseDiagnostics {
    std::vector<std::pair<int, std::string>> warnings; // (line, message)
    std::vector<std::string> normalizations;
};

/// Parse failure. Codes: "xml-syntax", "bad-namespace", "unsupported-id",
/// "unexpected-element", "missing-attribute", "type-mismatch".
class ParseError : public Error {
public:
    ParseError(std::string code, int line, const std::string &message)
        : Error(std::move(code), "line " + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

struct ParsedPolicySet {
    policy::PolicySet policy_set;
    ParseDiagnostics diagnostics;
};

/// Reads a `PolicySet` document. A match element holding several
/// (value, designator) pairs is split into one clause per pair, and
/// whitespace inside URI-valued attributes is removed; both are recorded as
/// normalizations.
[[nodiscard]] ParsedPolicySet parse_policy_set(std::string_view xml);
[[nodiscard]] std::string serialize_policy_set(const policy::PolicySet &ps);

[[nodiscard]] policy::RequestCtx parse_request(std::string_view xml);
[[nodiscard]] std::string serialize_request(const policy::RequestCtx &req);

[[nodiscard]] policy::ResponseCtx parse_response(std::string_view xml);
[[nodiscard]] std::string serialize_response(const policy::ResponseCtx &resp);

} // namespace prbac::xml
