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

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

/// Compiles a model into layered PolicySets:
///
///   RAS  role-assignment sets: who may activate which role instance (roots)
///   RPS  role sets: subject-targeted, one per role instance, each
///        referencing the matching PPS (roots)
///   PPS  permission sets: one Permit policy per privilege, plus references
///        to the PPS of each direct junior (never roots)
///
/// Instances are compiled one by one; there is no symbolic parameter
/// evaluation.
namespace prbac::compiler {

enum class SetKind { RoleAssignment, Role, Permission };

struct NamingScheme {
    std::string rps_prefix = "RPS";
    std::string pps_prefix = "PPS";
    std::string ras_prefix = "RAS";
    std::string role_value_base = "urn:example:role-values";

    [[nodiscard]] const std::string &prefix(SetKind kind) const;
};

/// "<KIND>:<role>:role[:<p1>-<v1>[:<p2>-<v2>...]]", bindings in name order.
[[nodiscard]] std::string policy_set_id(SetKind kind, const model::RoleInstance &ri, const NamingScheme &names = {});

/// "<base>:<role>:rparams:<p1>-<v1>[:...]", or "<base>:<role>" without
/// parameters.
[[nodiscard]] std::string role_value_uri(const model::RoleInstance &ri, const NamingScheme &names = {});

/// The "<name>-<value>" form carried in RParams/AParams attributes.
[[nodiscard]] std::string param_value(std::string_view name, std::string_view value);

[[nodiscard]] policy::PolicySet compile_rps(const model::RoleInstance &ri, const NamingScheme &names = {});

[[nodiscard]] policy::PolicySet compile_pps(const model::RoleInstance &ri, const std::set<model::Privilege> &privileges,
                                            const std::vector<model::RoleInstance> &junior_instances,
                                            const NamingScheme &names = {});

/// One set per UA entry, id "RAS:<user>:<rps id without its prefix>".
[[nodiscard]] std::vector<policy::PolicySet> compile_role_assignment(const model::ModelDocument &doc,
                                                                     const NamingScheme &names = {});

/// Every RoleInstance needing an RPS/PPS pair: the UA instances plus the
/// instances they induce on juniors, transitively.
[[nodiscard]] std::set<model::RoleInstance> instance_closure(const model::ModelDocument &doc);

/// Throws ValidationError("invalid-model") for an invalid document.
[[nodiscard]] pdp::PolicyStore compile_model(const model::ModelDocument &doc, const NamingScheme &names = {});

/// "<id with ':' replaced by '_'>.xml"
[[nodiscard]] std::string policy_file_name(std::string_view id);

/// Writes one file per top-level PolicySet plus roots.txt. Creates `dir`
/// if needed; does not remove unrelated files.
void write_policy_dir(const pdp::PolicyStore &store, const std::filesystem::path &dir);

/// The access request a PEP sends for an activated role instance: subject
/// role URI and RParams, resource-id, action-id and AParams.
[[nodiscard]] policy::RequestCtx access_request(const model::RoleInstance &ri, std::string_view service,
                                                std::string_view action, const model::ParamBindings &aparams,
                                                const NamingScheme &names = {});

/// Phase-one request asking whether `user` may activate `role_uri`.
[[nodiscard]] policy::RequestCtx activation_request(std::string_view user, std::string_view role_uri);

} // namespace prbac::compiler
