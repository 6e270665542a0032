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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <unistd.h>

namespace prbac::testing {

inline std::filesystem::path data_dir() { return PRBAC_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string read_data(const std::string &name) { return read_file(data_dir() / name); }

inline void write_file(const std::filesystem::path &p, std::string_view text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("prbac-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    [[nodiscard]] const std::filesystem::path &path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline model::RoleInstance student_instance() { return {"student", {{"studentid", "02123781"}}}; }

inline const std::string kStudentRoleUri = "urn:example:role-values:student:rparams:studentid-02123781";

/// One user, one student instance, one register privilege.
inline model::ModelDocument student_model() {
    model::ModelDocument doc;
    doc.users = {{"u1", {}}};
    doc.roles = {{"student", {"studentid"}, {}}};
    doc.services = {{"registrationService", {"register"}}};
    doc.ua = {{"u1", student_instance()}};
    doc.pa = {{"student", {{"studentid", "02123781"}}, {"registrationService", "register", {{"studentid", "02123781"}}}}};
    return doc;
}

/// director -> manager -> clerk, all parameterized by branch. Each level
/// holds one privilege of its own; u1 is a director, u2 a clerk.
inline model::ModelDocument chain_model() {
    model::ModelDocument doc;
    doc.users = {{"u1", {}}, {"u2", {}}};
    doc.roles = {
        {"director", {"branch"}, {"manager"}},
        {"manager", {"branch"}, {"clerk"}},
        {"clerk", {"branch"}, {}},
    };
    doc.services = {{"customerData", {"read", "update"}}, {"reports", {"approve"}}};
    doc.ua = {{"u1", {"director", {{"branch", "b1"}}}}, {"u2", {"clerk", {{"branch", "b1"}}}}};
    doc.pa = {
        {"clerk", {{"branch", "*"}}, {"customerData", "read", {}}},
        {"manager", {{"branch", "b1"}}, {"customerData", "update", {}}},
        {"director", {}, {"reports", "approve", {}}},
    };
    return doc;
}

} // namespace prbac::testing
