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

#include <filesystem>
#include <string>
#include <string_view>

namespace prbac::model {

// Model file schema (UTF-8 JSON, unknown keys are rejected at every level):
//
//   {
//     "users":    [ { "id": "u1", "attributes": { "dept": "cs" } } ],
//     "roles":    [ { "name": "student", "param_names": ["studentid"], "juniors": ["guest"] } ],
//     "services": [ { "id": "registrationService", "actions": ["register"] } ],
//     "ua": [ { "user": "u1",
//               "role_instance": { "role": "student", "bindings": { "studentid": "02123781" } } } ],
//     "pa": [ { "role": "student",
//               "role_param_pattern": { "studentid": "*" },
//               "privilege": { "service": "registrationService", "action": "register",
//                              "aparams": { "studentid": "02123781" } } } ]
//   }
//
// Every top-level key is optional and defaults to empty, as are
// "attributes", "param_names", "juniors", "bindings", "role_param_pattern"
// and "aparams".

/// Throws Error("model-json") on malformed text or schema mismatch.
[[nodiscard]] ModelDocument parse_model(std::string_view json_text);
[[nodiscard]] ModelDocument load_model(const std::filesystem::path &file);
[[nodiscard]] std::string serialize_model(const ModelDocument &doc);

} // namespace prbac::model
