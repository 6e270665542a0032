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

#include <stdexcept>
#include <string>
#include <vector>

namespace prbac {

/// Failure carrying a stable, machine-readable code ("unknown-user",
/// "xml-syntax", ...) alongside a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string &message)
        : std::runtime_error(message.empty() ? code : code + ": " + message), code_(std::move(code)) {}

    [[nodiscard]] const std::string &code() const noexcept { return code_; }

private:
    std::string code_;
};

/// A broken invariant reported as data rather than as a failure.
struct Violation {
    std::string rule;   // e.g. "hierarchy-cycle", "dangling-ref"
    std::string entity; // the offending id
    std::string detail;

    [[nodiscard]] std::string to_string() const {
        std::string s = rule + ": " + entity;
        if (!detail.empty()) s += " (" + detail + ")";
        return s;
    }

    friend bool operator==(const Violation &, const Violation &) = default;
};

/// Thrown when an operation requires a valid input and validation fails.
class ValidationError : public Error {
public:
    ValidationError(std::string code, std::vector<Violation> violations)
        : Error(std::move(code), summarize(violations)), violations_(std::move(violations)) {}

    [[nodiscard]] const std::vector<Violation> &violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation> &vs) {
        std::string s;
        for (const auto &v : vs) {
            if (!s.empty()) s += "; ";
            s += v.to_string();
        }
        return s;
    }

    std::vector<Violation> violations_;
};

} // namespace prbac
