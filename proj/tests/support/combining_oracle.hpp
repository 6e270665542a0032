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

#include <vector>

// XACML 1.0 combining semantics written as left folds over a precedence
// ranking, deliberately shaped differently from the engine's any-of scans.
namespace prbac::testing {

using policy::CombiningAlg;
using policy::Decision;

inline int permit_overrides_rank(Decision d) {
    switch (d) {
    case Decision::Permit: return 3;
    case Decision::Deny: return 2;
    case Decision::Indeterminate: return 1;
    case Decision::NotApplicable: return 0;
    }
    return -1;
}

inline Decision oracle_combine(CombiningAlg alg, const std::vector<Decision> &ds) {
    Decision acc = Decision::NotApplicable;
    for (Decision d : ds) {
        switch (alg) {
        case CombiningAlg::PermitOverrides:
            if (permit_overrides_rank(d) > permit_overrides_rank(acc)) acc = d;
            break;
        case CombiningAlg::DenyOverrides: {
            // 1.0: an error where a Deny could have been counts as Deny.
            const Decision eff = d == Decision::Indeterminate ? Decision::Deny : d;
            if (acc == Decision::Deny) break;
            if (eff == Decision::Deny || eff == Decision::Permit) acc = eff;
            break;
        }
        case CombiningAlg::FirstApplicable:
            if (acc == Decision::NotApplicable) acc = d;
            break;
        }
    }
    return acc;
}

} // namespace prbac::testing
