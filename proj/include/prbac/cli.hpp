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

#include "prbac/service.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace prbac::cli {

enum ExitCode : int {
    kSuccess = 0,
    kNotPermitted = 1, // eval --expect-permit only
    kUsage = 2,
    kFailure = 3, // validation, parse or verification failure
};

struct Environment {
    service::Clock clock = service::system_clock_seconds;
    service::EnvLookup env = service::process_env;
};

/// Runs the `prbac` command line. args[0] is the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Environment &environment = {});

} // namespace prbac::cli
